//! Seeded randomness.
//!
//! Every random matrix or state in the crate is drawn from [`SeededRng`]:
//! ChaCha8 keyed by `ChaCha8Rng::seed_from_u64(seed)`, with Gaussian variates
//! from the ziggurat sampler of `rand_distr::StandardNormal`. A complex
//! Gaussian is `re + i·im` with `re`, `im` independent N(0, 1), drawn in that
//! order. The stream is stable for a given seed across platforms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;

pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        Complex64::new(re, im)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.inner.random_range(lo..=hi)
    }
}

pub fn random_matrix(rng: &mut SeededRng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.complex_normal())
}

/// `(G + G^H)/2` for a complex Gaussian `G`; exactly Hermitian.
pub fn random_hermitian(rng: &mut SeededRng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, n);
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(g[(i, i)].re, 0.0);
        for j in i + 1..n {
            let z = (g[(i, j)] + g[(j, i)].conj()) * 0.5;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}
