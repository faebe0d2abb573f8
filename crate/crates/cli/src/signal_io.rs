use std::path::Path;

use clockshift::{Complex64, IndexRange, PeriodicSignal};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
struct Row {
    j: i64,
    re: f64,
    im: f64,
}

fn bad_input(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{}: {msg}", path.display()))
}

/// Reads a signal; `.json` files hold `[[re, im], ...]` in ascending `j`,
/// anything else is CSV with a `j,re,im` header.
pub fn read_signal(path: &Path) -> Result<PeriodicSignal, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad_input(path, e))?;
    let samples = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        parse_json(&text).map_err(|e| bad_input(path, e))?
    } else {
        parse_csv(&text).map_err(|e| bad_input(path, e))?
    };
    PeriodicSignal::new(samples).map_err(|e| bad_input(path, e))
}

pub fn parse_json(text: &str) -> Result<Vec<Complex64>, String> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    Ok(pairs
        .into_iter()
        .map(|[re, im]| Complex64::new(re, im))
        .collect())
}

/// Rows may come in any order but must cover the centered range exactly once.
pub fn parse_csv(text: &str) -> Result<Vec<Complex64>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let rows: Vec<Row> = reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let range = IndexRange::new(rows.len()).map_err(|e| e.to_string())?;
    let mut samples: Vec<Option<Complex64>> = vec![None; rows.len()];
    for row in rows {
        let p = range.position(row.j).map_err(|e| e.to_string())?;
        if samples[p].replace(Complex64::new(row.re, row.im)).is_some() {
            return Err(format!("index j={} appears twice", row.j));
        }
    }
    Ok(samples
        .into_iter()
        .map(|s| s.expect("every position filled"))
        .collect())
}
