use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use clockshift::linalg::rng::SeededRng;
use clockshift::minstates::{
    default_theta_grid, figure1_data, figure1_row, frontier, harper_ground, harper_ground_with,
    phase_fix, realness_check,
};
use clockshift::operators::{build_operator_set, translate};
use clockshift::uncertainty::symmetric_bound;
use clockshift::StateVector;

#[test]
fn figure1_small_dimensions() {
    let rows = figure1_data(2, 4).unwrap();
    assert!((rows[0].exact_bound - 0.5).abs() <= 1e-9);
    assert!((rows[0].theorem1_bound - 0.5).abs() <= 1e-15);
    assert!(rows[1].exact_bound > 0.5 + 1e-3);
    assert!((rows[2].exact_bound - 0.5).abs() <= 1e-9);
}

#[test]
fn exact_frontier_dominates_theorem1() {
    for row in figure1_data(3, 64).unwrap() {
        assert!(row.exact_bound > row.theorem1_bound, "d={}", row.d);
        let expected = {
            let a = (PI / row.d as f64).tan();
            a / (1.0 + 2.0 * a)
        };
        assert!((row.theorem1_bound - expected).abs() <= 1e-14);
    }
    let d3 = figure1_row(3).unwrap();
    assert!(d3.exact_bound - d3.theorem1_bound > 1e-6);
}

#[test]
fn both_curves_approach_pi_over_d() {
    let ratios: Vec<(f64, f64)> = [64, 128, 256]
        .iter()
        .map(|&d| {
            let row = figure1_row(d).unwrap();
            let target = PI / d as f64;
            (row.exact_bound / target, row.theorem1_bound / target)
        })
        .collect();
    let (exact, relaxed) = ratios[2];
    assert!((exact - 1.0).abs() <= 0.2 && (relaxed - 1.0).abs() <= 0.2);
    for w in ratios.windows(2) {
        assert!((w[1].0 - 1.0).abs() <= (w[0].0 - 1.0).abs());
        assert!((w[1].1 - 1.0).abs() <= (w[0].1 - 1.0).abs());
    }
}

#[test]
fn ground_states_are_eigenvectors() {
    for d in [2, 5, 8, 13] {
        let ops = build_operator_set(d).unwrap();
        for theta in [0.0, 0.2, FRAC_PI_4, 1.1, FRAC_PI_2] {
            let r = harper_ground_with(&ops, theta).unwrap();
            let h = ops.harper(theta).unwrap().matrix;
            for psi in &r.ground_states {
                let hx = h.matvec(psi.amplitudes()).unwrap();
                let worst = hx
                    .iter()
                    .zip(psi.amplitudes())
                    .map(|(a, b)| (a - b * r.h_min).norm())
                    .fold(0.0, f64::max);
                assert!(worst <= 1e-9);
            }
            assert!(r.max_value >= 0.0 && r.max_value <= theta.cos() + theta.sin() + 1e-12);
        }
    }
}

#[test]
fn ground_state_maximizes_over_random_states() {
    let mut rng = SeededRng::new(5);
    for d in [3, 6, 11] {
        let ops = build_operator_set(d).unwrap();
        for theta in default_theta_grid(9) {
            let r = harper_ground_with(&ops, theta).unwrap();
            for _ in 0..300 {
                let psi = StateVector::haar_random(d, &mut rng);
                let (eu, ev) = ops.expectations(&psi);
                let value = theta.cos() * eu.norm() + theta.sin() * ev.norm();
                assert!(value <= r.max_value + 1e-9);
            }
        }
    }
}

#[test]
fn translates_share_expectation_moduli() {
    let d = 7;
    let ops = build_operator_set(d).unwrap();
    let psi = &harper_ground_with(&ops, 0.6).unwrap().ground_states[0];
    let (eu, ev) = ops.expectations(psi);
    for a in 0..d as i64 {
        for b in 0..d as i64 {
            let (eu2, ev2) = ops.expectations(&translate(psi, a, b, &ops).unwrap());
            assert!((eu2.norm() - eu.norm()).abs() <= 1e-12);
            assert!((ev2.norm() - ev.norm()).abs() <= 1e-12);
        }
    }
}

#[test]
fn quarter_angle_is_swap_symmetric() {
    for d in 2..=40 {
        // figure1_row fails with an Inconsistent error if ΔU² ≠ ΔV².
        figure1_row(d).unwrap();
    }
}

#[test]
fn d2_frontier_lies_on_the_quarter_circle() {
    let curve = frontier(2, &default_theta_grid(9)).unwrap();
    for s in &curve.samples {
        assert!(
            (s.abs_u.powi(2) + s.abs_v.powi(2) - 1.0).abs() <= 1e-12,
            "{s:?}"
        );
    }
}

#[test]
fn frontier_endpoints_and_monotonicity() {
    for d in [3, 8, 15] {
        let curve = frontier(d, &default_theta_grid(33)).unwrap();
        let first = curve.samples.first().unwrap();
        let last = curve.samples.last().unwrap();
        assert!((first.abs_u - 1.0).abs() <= 1e-12);
        assert!((last.abs_v - 1.0).abs() <= 1e-12);
        for w in curve.samples.windows(2) {
            assert!(w[1].abs_u <= w[0].abs_u + 1e-12, "d={d}");
            assert!(w[1].abs_v >= w[0].abs_v - 1e-12, "d={d}");
        }
    }
}

#[test]
fn frontier_samples_satisfy_theorem1() {
    let curve = frontier(10, &default_theta_grid(17)).unwrap();
    let s = symmetric_bound(2.0 * PI / 10.0).unwrap();
    let mid = &curve.samples[8];
    assert!(mid.du2 >= s);
}

#[test]
fn ground_states_are_real() {
    let r = harper_ground(FRAC_PI_4, 12).unwrap();
    for psi in &r.ground_states {
        assert!(realness_check(psi) <= 1e-8);
    }
}

#[test]
fn phase_fix_preserves_moduli_on_random_states() {
    let mut rng = SeededRng::new(8);
    for d in [4, 9, 16] {
        let ops = build_operator_set(d).unwrap();
        for _ in 0..50 {
            let psi = StateVector::haar_random(d, &mut rng);
            let fixed = phase_fix(&psi, &ops).unwrap();
            let (eu, ev) = ops.expectations(&psi);
            let (eu2, ev2) = ops.expectations(&fixed.state);
            assert!((eu.norm() - eu2.norm()).abs() <= 1e-12);
            assert!((ev.norm() - ev2.norm()).abs() <= 1e-12);
            // Residual phases are at most half a lattice step.
            assert!(fixed.residual_clock_phase.abs() <= PI / d as f64 + 1e-12);
            assert!(fixed.residual_shift_phase.abs() <= PI / d as f64 + 1e-12);
        }
    }
}

#[test]
fn harper_rejects_out_of_range_angles() {
    assert!(harper_ground(-0.1, 4).is_err());
    assert!(harper_ground(1.6, 4).is_err());
    assert!(harper_ground(0.3, 1).is_err());
}
