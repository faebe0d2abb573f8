//! Naive reference constructions used as oracles, written without the
//! crate's builders.
#![allow(dead_code)]

use std::f64::consts::TAU;

use clockshift::{Complex64, ComplexMatrix};

/// Centered index stored at position `p`.
pub fn index_at(d: usize, p: usize) -> i64 {
    p as i64 - (d / 2) as i64
}

pub fn oracle_clock(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |r, c| {
        if r == c {
            Complex64::from_polar(1.0, TAU * index_at(d, r) as f64 / d as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `|j⟩ → |j+1⟩`; positions and indices differ by a constant so the
/// cyclic wrap is plain modular arithmetic on positions.
pub fn oracle_shift(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |r, c| {
        if r == (c + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn matrix_power(m: &ComplexMatrix, n: u32) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(m.rows());
    for _ in 0..n {
        out = &out * m;
    }
    out
}

pub fn max_abs_diff_vec(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
