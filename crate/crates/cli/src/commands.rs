use clockshift::asymptotics::{
    commutator_spectrum, dispersion_vs_variance, dual_membership_epsilon, expansion_residual,
    lemma_a1_check, lemma_a2_recenter, make_gaussian, membership_epsilon, HISTOGRAM_BINS,
};
use clockshift::linalg::rng::SeededRng;
use clockshift::minstates::{
    default_theta_grid, figure1_row, frontier, harper_ground_with, phase_fix, realness_check,
};
use clockshift::operators::{build_operator_set, clock_shift_pair, OperatorSet};
use clockshift::signal::{
    feasibility_audit, intensity_ft_check, signal_stats, spectral_identity_check, PeriodicSignal,
    Verdict,
};
use clockshift::uncertainty::{
    audit_pair, lemma_b1_residual, saturation_probes, symmetric_bound, theorem1_margin,
    BoundParams, MARGIN_FLOOR,
};
use clockshift::{Complex64, StateVector};
use serde_json::{json, Value};

use crate::artifact::{Assertion, Body, Report};
use crate::config::{Command, RunConfig};
use crate::signal_io::read_signal;
use crate::CliError;

pub fn dispatch(config: &RunConfig) -> Result<Report, CliError> {
    match config.command {
        Command::Verify => verify(config),
        Command::Bound => bound(config),
        Command::Minstate => minstate(config),
        Command::Figure1 => figure1(config),
        Command::Frontier => frontier_table(config),
        Command::CommutatorStats => commutator_stats(config),
        Command::SignalCheck => signal_check(config),
        Command::Gaussian => gaussian(config),
    }
}

fn pairs(z: &[Complex64]) -> Vec<[f64; 2]> {
    z.iter().map(|c| [c.re, c.im]).collect()
}

fn verify(config: &RunConfig) -> Result<Report, CliError> {
    let ops = if config.m == 1 {
        build_operator_set(config.d)?
    } else {
        clock_shift_pair(config.d, config.m)?
    };
    let audit = audit_pair(&ops, config.count, config.seed)?;
    let [position, dual] = saturation_probes(&ops)?;
    let commutation = ops.commutation_residual();
    let b1 = if BoundParams::new(ops.phi)?.is_pauli_limit() {
        None
    } else {
        Some(lemma_b1_residual(&ops)?)
    };

    let mut assertions = vec![
        Assertion::new(
            "min_margin_nonnegative",
            audit.passes(),
            format!("{:e} >= {MARGIN_FLOOR:e}", audit.min_margin),
        ),
        Assertion::at_most("position_state_saturates", position.abs(), 1e-12),
        Assertion::at_most("dual_state_saturates", dual.abs(), 1e-12),
        Assertion::at_most("commutation_residual", commutation, 1e-11),
    ];
    if let Some(r) = b1 {
        assertions.push(Assertion::at_most("sine_commutator_identity", r, 1e-12));
    }
    Ok(Report {
        body: Body::Json(json!({
            "d": audit.d,
            "m": config.m,
            "phi": audit.phi,
            "count": audit.count,
            "seed": audit.seed,
            "min_margin": audit.min_margin,
            "argmin_state": audit.argmin_state,
            "saturation_margins": [position, dual],
            "commutation_residual": commutation,
            "sine_commutator_residual": b1,
        })),
        assertions,
    })
}

fn bound(config: &RunConfig) -> Result<Report, CliError> {
    let params = BoundParams::nondegenerate(config.phi)?;
    let s = symmetric_bound(config.phi)?;
    let at_symmetric = theorem1_margin(s, s, config.phi)?;
    let margin = match (config.du2, config.dv2) {
        (Some(u), Some(v)) => Some(theorem1_margin(u, v, config.phi)?),
        _ => None,
    };
    Ok(Report {
        body: Body::Json(json!({
            "phi": config.phi,
            "a": if params.is_pauli_limit() { Value::Null } else { json!(params.a()) },
            "pauli_limit": params.is_pauli_limit(),
            "symmetric_bound": s,
            "du2": config.du2,
            "dv2": config.dv2,
            "margin": margin,
            "satisfies_relation": margin.map(|m| m >= MARGIN_FLOOR),
        })),
        assertions: vec![Assertion::at_most(
            "symmetric_point_saturates",
            at_symmetric.abs(),
            1e-12,
        )],
    })
}

fn minstate(config: &RunConfig) -> Result<Report, CliError> {
    let ops = build_operator_set(config.d)?;
    let ground = harper_ground_with(&ops, config.theta)?;
    let h = ops.harper(config.theta)?.matrix;
    let (c, s) = (config.theta.cos(), config.theta.sin());

    let mut assertions = vec![Assertion::new(
        "max_value_in_range",
        ground.max_value >= -1e-12 && ground.max_value <= c + s + 1e-12,
        format!("0 <= {} <= {}", ground.max_value, c + s),
    )];
    let mut states = Vec::new();
    for (k, (psi, &label)) in ground
        .ground_states
        .iter()
        .zip(&ground.parity_labels)
        .enumerate()
    {
        let hx = h.matvec(psi.amplitudes())?;
        let residual = hx
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b * ground.h_min).norm())
            .fold(0.0, f64::max);
        assertions.push(Assertion::at_most(
            &format!("eigen_residual_{k}"),
            residual,
            1e-9,
        ));

        let fixed = phase_fix(psi, &ops)?;
        let (eu, ev) = ops.expectations(&fixed.state);
        let imag = eu.im.abs().max(ev.im.abs());
        assertions.push(Assertion::new(
            &format!("phase_fixed_expectations_real_{k}"),
            imag <= 1e-10 && eu.re >= -1e-10 && ev.re >= -1e-10,
            format!("<U> = {eu}, <V> = {ev}"),
        ));
        let realness = realness_check(&fixed.state);
        if !ground.degenerate {
            assertions.push(Assertion::at_most(&format!("realness_{k}"), realness, 1e-8));
        }
        states.push(json!({
            "parity": label,
            "abs_u": eu.norm(),
            "abs_v": ev.norm(),
            "du2": 1.0 - eu.norm_sqr(),
            "dv2": 1.0 - ev.norm_sqr(),
            "realness": realness,
            "translation": [fixed.a, fixed.b],
            "amplitudes": pairs(fixed.state.amplitudes()),
        }));
    }
    Ok(Report {
        body: Body::Json(json!({
            "d": config.d,
            "theta": config.theta,
            "h_min": ground.h_min,
            "max_value": ground.max_value,
            "degenerate": ground.degenerate,
            "ground_states": states,
        })),
        assertions,
    })
}

/// Applies `f` to each item on `jobs` scoped threads; output order matches
/// input order regardless of scheduling.
fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                scope.spawn(move || {
                    (w..items.len())
                        .step_by(jobs)
                        .map(|i| (i, f(&items[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every slot filled"))
        .collect()
}

fn figure1(config: &RunConfig) -> Result<Report, CliError> {
    let dims: Vec<usize> = (config.d_min..=config.d_max).collect();
    let rows = parallel_map(&dims, config.jobs, |&d| figure1_row(d))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let below: Vec<String> = rows
        .iter()
        .filter(|r| r.exact_bound < r.theorem1_bound - 1e-12)
        .map(|r| r.d.to_string())
        .collect();
    let detail = if below.is_empty() {
        "exact >= relaxed for every d".to_owned()
    } else {
        format!("exact below relaxed at d = {}", below.join(" "))
    };
    Ok(Report {
        body: Body::Table {
            columns: vec!["d", "exact_bound", "theorem1_bound"],
            rows: rows
                .iter()
                .map(|r| vec![r.d as f64, r.exact_bound, r.theorem1_bound])
                .collect(),
            notes: Vec::new(),
        },
        assertions: vec![Assertion::new(
            "exact_dominates_theorem1",
            below.is_empty(),
            detail,
        )],
    })
}

fn frontier_table(config: &RunConfig) -> Result<Report, CliError> {
    let curve = frontier(config.d, &default_theta_grid(config.points))?;
    let monotone = curve
        .samples
        .windows(2)
        .all(|w| w[1].abs_u <= w[0].abs_u + 1e-12 && w[1].abs_v >= w[0].abs_v - 1e-12);
    let degenerate: Vec<String> = curve
        .samples
        .iter()
        .filter(|s| s.degenerate)
        .map(|s| s.theta.to_string())
        .collect();
    let notes = vec![
        (
            "boundary".to_owned(),
            "convex hull of the accessible region".to_owned(),
        ),
        ("degenerate_count".to_owned(), degenerate.len().to_string()),
        (
            "degenerate_thetas".to_owned(),
            if degenerate.is_empty() {
                "none".to_owned()
            } else {
                degenerate.join(" ")
            },
        ),
    ];
    Ok(Report {
        body: Body::Table {
            columns: vec!["theta", "absU", "absV", "dU2", "dV2"],
            rows: curve
                .samples
                .iter()
                .map(|s| vec![s.theta, s.abs_u, s.abs_v, s.du2, s.dv2])
                .collect(),
            notes,
        },
        assertions: vec![Assertion::new(
            "monotone_tradeoff",
            monotone,
            "|<U>| nonincreasing and |<V>| nondecreasing in theta",
        )],
    })
}

fn commutator_stats(config: &RunConfig) -> Result<Report, CliError> {
    let report = commutator_spectrum(config.d, config.tolerance)?;
    let histogram = report.histogram();
    Ok(Report {
        body: Body::Json(json!({
            "d": report.d,
            "tolerance": report.tolerance,
            "operator": "-i[u,v]",
            "near_one_fraction": report.near_one_fraction,
            "opposite_orientation_fraction": report.opposite_orientation_fraction,
            "trace_residual": report.trace_residual,
            "eigenvalue_histogram": {
                "bins": HISTOGRAM_BINS,
                "lo": histogram.lo,
                "hi": histogram.hi,
                "counts": histogram.counts,
            },
        })),
        assertions: vec![
            Assertion::new(
                "eigenvalue_count",
                report.eigenvalues.len() == report.d,
                format!("{} eigenvalues", report.eigenvalues.len()),
            ),
            Assertion::at_most(
                "trace_residual",
                report.trace_residual,
                1e-6 * report.d as f64,
            ),
        ],
    })
}

fn signal_check(config: &RunConfig) -> Result<Report, CliError> {
    if let (Some(r1), Some(t1)) = (config.r1, config.t1) {
        let audit = feasibility_audit(r1, t1, config.d)?;
        return Ok(Report {
            body: Body::Json(json!({
                "d": config.d,
                "r1": r1,
                "t1": t1,
                "du2": audit.du2,
                "dv2": audit.dv2,
                "margin": audit.margin,
                "verdict": audit.verdict,
            })),
            assertions: Vec::new(),
        });
    }

    let (source, raw) = match &config.input {
        Some(path) => (path.display().to_string(), read_signal(path)?),
        None => {
            let mut rng = SeededRng::new(config.seed);
            let psi = StateVector::haar_random(config.d, &mut rng);
            ("haar-random".to_owned(), PeriodicSignal::from_state(&psi))
        }
    };
    let input_norm_sqr: f64 = raw.samples.iter().map(|c| c.norm_sqr()).sum();
    let signal = raw.normalize()?;
    let stats = signal_stats(&signal)?;
    let spectral = spectral_identity_check(&signal)?;
    let intensity = intensity_ft_check(&signal)?;
    let half = signal.d / 2;
    let r1 = stats.correlation[(half + 1) % signal.d].norm().min(1.0);
    let t1 = stats.intensity_ft[(half + 1) % signal.d].norm().min(1.0);
    let audit = feasibility_audit(r1, t1, signal.d)?;

    Ok(Report {
        body: Body::Json(json!({
            "source": source,
            "d": signal.d,
            "input_norm_sqr": input_norm_sqr,
            "R": pairs(&stats.correlation),
            "T": pairs(&stats.intensity_ft),
            "lags": format!("{}..={}", -(half as i64), (signal.d - 1 - half)),
            "spectral_identity_deviation": spectral,
            "intensity_identity_deviation": intensity,
            "r1": r1,
            "t1": t1,
            "margin": audit.margin,
            "verdict": audit.verdict,
        })),
        assertions: vec![
            Assertion::at_most("correlation_is_spectral_transform", spectral, 1e-12),
            Assertion::at_most("intensity_transform_is_dual_correlation", intensity, 1e-12),
            Assertion::new(
                "realized_signal_not_infeasible",
                audit.verdict != Verdict::Infeasible,
                audit.verdict.to_string(),
            ),
        ],
    })
}

fn gaussian(config: &RunConfig) -> Result<Report, CliError> {
    let ops: OperatorSet = build_operator_set(config.d)?;
    let g = make_gaussian(config.d, config.sigma)?;
    let psi = &g.state;
    let eps_u = membership_epsilon(psi, config.delta)?;
    let eps_v = dual_membership_epsilon(psi, &ops, config.delta)?;
    let image = StateVector::normalized(ops.dft.matvec(psi.amplitudes())?)?;
    let self_duality = image.fidelity(psi);
    let a1 = lemma_a1_check(psi, &ops, config.delta)?;
    let a3 = expansion_residual(psi, &ops, config.delta)?;
    let cmp = dispersion_vs_variance(psi, &ops)?;
    let recenter = lemma_a2_recenter(psi, &ops, config.delta)?;

    Ok(Report {
        body: Body::Json(json!({
            "d": g.d,
            "sigma": g.sigma,
            "delta": config.delta,
            "norm_constant_sqr": g.norm_constant * g.norm_constant,
            "predicted_norm_sqr": g.predicted_norm_sqr(),
            "epsilon_position": eps_u,
            "epsilon_dual": eps_v,
            "dft_fidelity": self_duality,
            "dispersion_bound": a1,
            "expansion": a3,
            "dispersion_vs_variance": cmp,
            "recenter_shift": recenter.k,
            "recenter_bound": recenter.upper_bound,
        })),
        assertions: vec![
            Assertion::new(
                "dispersion_bound_stated",
                a1.stated.holds,
                format!(
                    "dU2 = {:e} <= delta^2/2 + 2 eps = {:e}",
                    a1.stated.lhs, a1.stated.rhs
                ),
            ),
            Assertion::new(
                "dispersion_bound_rigorous",
                a1.rigorous.holds,
                format!("dU2 = {:e} <= {:e}", a1.rigorous.lhs, a1.rigorous.rhs),
            ),
            Assertion::new(
                "expansion_bound",
                a3.holds,
                format!("residual = {:e} <= {:e}", a3.lhs, a3.rhs),
            ),
        ],
    })
}
