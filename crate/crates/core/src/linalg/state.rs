use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rng::SeededRng;
use crate::error::{Error, Result};
use crate::operators::IndexRange;

/// Tolerance on `Σ|c_j|² = 1` accepted by [`StateVector::new`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// A normalized amplitude vector `c_j` over the centered index range,
/// stored in ascending `j` order starting at `−⌊d/2⌋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_finite(&amplitudes)?;
        let norm_sqr = norm_sqr(&amplitudes);
        if amplitudes.is_empty() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_finite(&amplitudes)?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if amplitudes.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Ok(Self { amplitudes })
    }

    /// The position basis state `|j⟩`.
    pub fn basis(d: usize, j: i64) -> Result<Self> {
        let range = IndexRange::new(d)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[range.position(j)?] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: amps })
    }

    /// The dual basis state `|k̃⟩ = Σ_j e^{+i2πjk/d}/√d |j⟩`.
    pub fn dual_basis(d: usize, k: i64) -> Result<Self> {
        let range = IndexRange::new(d)?;
        range.position(k)?;
        let scale = 1.0 / (d as f64).sqrt();
        let amps = range
            .iter()
            .map(|j| Complex64::from_polar(scale, crate::operators::phase(j * k, d)))
            .collect();
        Ok(Self { amplitudes: amps })
    }

    /// Haar-uniform pure state: normalized vector of complex Gaussians.
    pub fn haar_random(d: usize, rng: &mut SeededRng) -> Self {
        loop {
            let amps: Vec<Complex64> = (0..d).map(|_| rng.complex_normal()).collect();
            if let Ok(s) = Self::normalized(amps) {
                return s;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn with_global_phase(&self, gamma: f64) -> StateVector {
        let w = Complex64::from_polar(1.0, gamma);
        StateVector {
            amplitudes: self.amplitudes.iter().map(|&z| z * w).collect(),
        }
    }

    /// Rotates the global phase so the largest-modulus amplitude is real
    /// positive. Ties resolve to the lowest index.
    pub fn canonical_phase(&self) -> StateVector {
        let mut best = 0;
        for (i, z) in self.amplitudes.iter().enumerate() {
            if z.norm() > self.amplitudes[best].norm() * (1.0 + 1e-12) {
                best = i;
            }
        }
        self.with_global_phase(-self.amplitudes[best].arg())
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum()
}

fn check_finite(amps: &[Complex64]) -> Result<()> {
    match amps.iter().position(|z| !z.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}
