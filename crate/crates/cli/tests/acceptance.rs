//! One PASS/FAIL line per acceptance criterion.
//!
//! Failures are reported without failing the target so the rest of
//! `cargo test` still runs; set `CLOCKSHIFT_ACCEPTANCE_STRICT=1` to exit
//! nonzero when any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use clockshift::asymptotics::{
    commutator_spectrum, expansion_residual, lemma_a1_check, make_gaussian,
    v_translation_set_property,
};
use clockshift::linalg::hermitian_eigendecomposition;
use clockshift::linalg::rng::{random_hermitian, SeededRng};
use clockshift::minstates::figure1_row;
use clockshift::operators::{analytic_uv_commutator_entry, build_generators, build_operator_set};
use clockshift::signal::{
    autocorrelation, feasibility_audit, intensity_ft, intensity_ft_check, spectral_identity_check,
    Verdict,
};
use clockshift::uncertainty::{lemma_b1_residual, saturation_probes, verify_random_states};
use clockshift::{Complex64, ComplexMatrix, IndexRange, PeriodicSignal, StateVector};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn audit() -> Outcome {
    let start = Instant::now();
    let mut worst_margin = f64::INFINITY;
    let mut worst_probe: f64 = 0.0;
    for d in [2, 3, 4, 5, 8, 16, 32, 64] {
        let report = verify_random_states(d, 10_000, 20_240 + d as u64).expect("audit runs");
        worst_margin = worst_margin.min(report.min_margin);
        let ops = build_operator_set(d).expect("operators build");
        for m in saturation_probes(&ops).expect("probes run") {
            worst_probe = worst_probe.max(m.abs());
        }
    }
    let elapsed = start.elapsed();
    let ok = worst_margin >= -1e-10 && worst_probe <= 1e-12 && elapsed <= Duration::from_secs(60);
    (
        ok,
        format!(
            "min margin {worst_margin:.3e}, saturation |margin| {worst_probe:.1e}, {elapsed:.1?}"
        ),
    )
}

fn figure1() -> Outcome {
    let row = |d| figure1_row(d).expect("figure row");
    let mut problems = Vec::new();
    for d in [2, 4] {
        let r = row(d);
        if (r.exact_bound - 0.5).abs() > 1e-9 {
            problems.push(format!("d={d} exact {}", r.exact_bound));
        }
    }
    let r3 = row(3);
    if r3.exact_bound <= 0.5 + 1e-3 {
        problems.push(format!("d=3 exact {}", r3.exact_bound));
    }
    for d in 3..=64 {
        let r = row(d);
        if r.exact_bound <= r.theorem1_bound {
            problems.push(format!(
                "d={d} exact {} <= relaxed {}",
                r.exact_bound, r.theorem1_bound
            ));
        }
    }
    let ratios: Vec<(f64, f64)> = [64, 128, 256]
        .into_iter()
        .map(|d| {
            let r = row(d);
            let scale = PI / d as f64;
            (r.exact_bound / scale, r.theorem1_bound / scale)
        })
        .collect();
    let (exact256, relaxed256) = ratios[2];
    if (exact256 - 1.0).abs() > 0.2 || (relaxed256 - 1.0).abs() > 0.2 {
        problems.push(format!("d=256 ratios {exact256:.4}, {relaxed256:.4}"));
    }
    let trending = |pick: fn(&(f64, f64)) -> f64| {
        ratios
            .windows(2)
            .all(|w| (pick(&w[1]) - 1.0).abs() <= (pick(&w[0]) - 1.0).abs())
    };
    if !trending(|r| r.0) || !trending(|r| r.1) {
        problems.push(format!("ratios not approaching 1: {ratios:.4?}"));
    }
    let detail = if problems.is_empty() {
        format!(
            "d=3 exact {:.6}, d=256 ratios to pi/d {exact256:.4} (exact) {relaxed256:.4} (relaxed)",
            r3.exact_bound
        )
    } else {
        problems.join("; ")
    };
    (problems.is_empty(), detail)
}

fn commutator() -> Outcome {
    let start = Instant::now();
    let report = commutator_spectrum(801, 1e-10).expect("spectrum");
    let elapsed = start.elapsed();
    let in_window = (0.55..=0.70).contains(&report.near_one_fraction);
    let ok = in_window && report.trace_within_bound() && elapsed <= Duration::from_secs(600);
    (
        ok,
        format!(
            "near-one fraction {:.4} (window [0.55, 0.70]), opposite orientation {:.4}, trace {:.1e}, {elapsed:.1?}",
            report.near_one_fraction, report.opposite_orientation_fraction, report.trace_residual
        ),
    )
}

fn identities() -> Outcome {
    let mut rng = SeededRng::new(4);
    let mut commutation: f64 = 0.0;
    for _ in 0..200 {
        let d = rng.int_in(2, 32) as usize;
        let (n, m) = (rng.int_in(-40, 40), rng.int_in(-40, 40));
        let ops = build_operator_set(d).expect("operators build");
        let un = ops.clock.unitary_pow(n);
        let vm = ops.shift.unitary_pow(m);
        let phase = Complex64::from_polar(1.0, TAU * (n * m) as f64 / d as f64);
        commutation = commutation.max((&un * &vm).max_abs_diff(&(&vm * &un).scale(phase)));
    }
    let mut b1: f64 = 0.0;
    let mut trig: f64 = 0.0;
    let mut parity: f64 = 0.0;
    let mut harper: f64 = 0.0;
    for d in 2..=32 {
        let ops = build_operator_set(d).expect("operators build");
        if d >= 3 {
            b1 = b1.max(lemma_b1_residual(&ops).expect("b1"));
        }
        let id = ComplexMatrix::identity(d);
        for (c, s) in [
            (&ops.cos_clock, &ops.sin_clock),
            (&ops.cos_shift, &ops.sin_shift),
        ] {
            trig = trig.max((&(c * c) + &(s * s)).max_abs_diff(&id));
        }
        let p = &ops.parity;
        parity = parity.max((&(p * &ops.clock) * p).max_abs_diff(&ops.clock.adjoint()));
        parity = parity.max((&(p * &ops.shift) * p).max_abs_diff(&ops.shift.adjoint()));
        for k in 0..=8 {
            let h = ops.harper(FRAC_PI_2 * k as f64 / 8.0).expect("harper");
            harper = harper.max(h.matrix.commutator(p).max_abs());
        }
    }
    let ok =
        commutation <= 1e-11 && b1 <= 1e-12 && trig <= 1e-12 && parity <= 1e-12 && harper <= 1e-12;
    (
        ok,
        format!(
            "commutation {commutation:.1e}, B1 {b1:.1e}, C^2+S^2 {trig:.1e}, parity {parity:.1e}, [H,P] {harper:.1e}"
        ),
    )
}

fn appendix() -> Outcome {
    let mut stated = Vec::new();
    let mut worst_a3 = f64::INFINITY;
    let mut worst_rigorous = f64::INFINITY;
    let mut translation_failures = 0;
    for d in [64, 128, 256, 512] {
        let ops = build_operator_set(d).expect("operators build");
        for sigma in [0.5, 1.0, 2.0] {
            let g = make_gaussian(d, sigma).expect("gaussian");
            for delta in [0.3, 0.5] {
                let a1 = lemma_a1_check(&g.state, &ops, delta).expect("a1");
                if a1.stated.slack < 0.0 {
                    stated.push(format!(
                        "(d={d}, sigma={sigma}, delta={delta}, slack {:.4})",
                        a1.stated.slack
                    ));
                }
                worst_rigorous = worst_rigorous.min(a1.rigorous.slack);
                worst_a3 =
                    worst_a3.min(expansion_residual(&g.state, &ops, delta).expect("a3").slack);
                for n in 1..=4 {
                    let t =
                        v_translation_set_property(&g.state, n, delta, &ops).expect("translation");
                    if !t.holds {
                        translation_failures += 1;
                    }
                }
            }
        }
    }
    let ok = stated.is_empty() && worst_a3 >= 0.0 && translation_failures == 0;
    let a1 = if stated.is_empty() {
        "A1 holds everywhere".to_owned()
    } else {
        format!("A1 violated at {}", stated.join(", "))
    };
    (
        ok,
        format!(
            "{a1}; rigorous A1 min slack {worst_rigorous:.3e}; A3 min slack {worst_a3:.3e}; translation failures {translation_failures}"
        ),
    )
}

fn analytic_commutator() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [5, 6, 7, 8] {
        let g = build_generators(d).expect("generators");
        let direct = g.u.commutator(&g.v);
        let range = IndexRange::new(d).expect("range");
        for r in 0..d {
            for c in (0..d).filter(|&c| c != r) {
                let e = analytic_uv_commutator_entry(range.index_at(r), range.index_at(c), d)
                    .expect("entry");
                worst = worst.max((e - direct[(r, c)]).norm());
            }
        }
    }
    (
        worst <= 1e-10,
        format!("max off-diagonal deviation {worst:.1e}"),
    )
}

fn signals() -> Outcome {
    let mut rng = SeededRng::new(7);
    let mut worst: f64 = 0.0;
    for d in 2..=64 {
        for _ in 0..1000 {
            let s = PeriodicSignal::from_state(&StateVector::haar_random(d, &mut rng));
            worst = worst.max(spectral_identity_check(&s).expect("X"));
            worst = worst.max(intensity_ft_check(&s).expect("Y"));
        }
    }
    let mut flagged = 0;
    for i in 0..10_000 {
        let d = 2 + i % 63;
        let s = PeriodicSignal::from_state(&StateVector::haar_random(d, &mut rng));
        let r1 = autocorrelation(&s, 1).expect("R").norm().min(1.0);
        let t1 = intensity_ft(&s, 1).expect("T").norm().min(1.0);
        if feasibility_audit(r1, t1, d).expect("audit").verdict == Verdict::Infeasible {
            flagged += 1;
        }
    }
    (
        worst <= 1e-12 && flagged == 0,
        format!("identity residual {worst:.1e}, infeasible verdicts {flagged}/10000"),
    )
}

fn eigensolver() -> Outcome {
    let mut rng = SeededRng::new(801);
    let mut worst_residual: f64 = 0.0;
    let mut worst_unitarity: f64 = 0.0;
    for n in [2, 17, 64, 200, 400, 801] {
        let m = random_hermitian(&mut rng, n);
        let eig = hermitian_eigendecomposition(&m).expect("eigen");
        worst_residual = worst_residual.max(eig.reconstruction_residual(&m) / m.frobenius_norm());
        worst_unitarity = worst_unitarity.max(eig.eigenvectors.unitarity_defect().expect("square"));
    }
    (
        worst_residual <= 1e-9 && worst_unitarity <= 1e-10,
        format!("relative residual {worst_residual:.1e}, unitarity {worst_unitarity:.1e}"),
    )
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 8] = [
        &["verify", "--d", "16", "--count", "500", "--seed", "9"],
        &["bound", "--d", "5"],
        &["minstate", "--d", "10", "--theta", "0.3"],
        &["figure1", "--d-min", "2", "--d-max", "24", "--jobs", "3"],
        &["frontier", "--d", "7", "--points", "17"],
        &["commutator-stats", "--d", "40"],
        &["signal-check", "--d", "12", "--seed", "5"],
        &["gaussian", "--d", "128", "--sigma", "0.5"],
    ];
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("artifact");
    let mut differing = Vec::new();
    for args in runs {
        let artifact = || {
            Command::new(env!("CARGO_BIN_EXE_clockshift"))
                .args(args)
                .arg("-o")
                .arg(&path)
                .status()
                .expect("binary runs");
            std::fs::read(&path).expect("artifact written")
        };
        if artifact() != artifact() {
            differing.push(args[0]);
        }
    }
    let detail = if differing.is_empty() {
        format!("{} commands byte-identical across repeats", runs.len())
    } else {
        format!("differing artifacts: {}", differing.join(", "))
    };
    (differing.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("random-state audit", audit),
        ("symmetric bound table", figure1),
        ("commutator spectrum", commutator),
        ("operator identities", identities),
        ("localization lemmas", appendix),
        ("analytic commutator entries", analytic_commutator),
        ("signal identities", signals),
        ("eigensolver quality", eigensolver),
        ("cli determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name}: {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    let strict = std::env::var_os("CLOCKSHIFT_ACCEPTANCE_STRICT").is_some_and(|v| v == "1");
    if failed == 0 || !strict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
