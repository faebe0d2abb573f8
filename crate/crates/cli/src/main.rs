use clap::Parser;
use clockshift_cli::{execute, Cli, RunConfig};

fn main() {
    let cli = Cli::parse();
    let code = match RunConfig::resolve(cli) {
        Ok(config) => execute(&config),
        Err(e) => {
            eprintln!("{e}");
            eprintln!("run `clockshift --help` for usage");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
