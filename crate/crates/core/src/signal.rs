//! Periodic signals viewed as states.
//!
//! For a normalized signal `c_j` of period `d` the cyclic autocorrelation
//! `R(m) = Σ_j c*_{j+m} c_j` is `⟨V^m⟩` and the Fourier transform of the
//! intensity `T(n) = Σ_j |c_j|² e^{i2πjn/d}` is `⟨U^n⟩`. Each is also the
//! Fourier transform of the intensity in the other basis, and the
//! uncertainty relation for `(U, V)` limits which pairs `(|R(1)|, |T(1)|)`
//! can occur.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::linalg::{StateVector, NORM_TOLERANCE};
use crate::operators::IndexRange;
use crate::uncertainty::{theorem1_margin, MARGIN_FLOOR};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSignal {
    pub d: usize,
    /// Samples in ascending centered index order.
    pub samples: Vec<Complex64>,
    pub normalized: bool,
}

impl PeriodicSignal {
    /// Accepts any finite, not identically zero samples; `normalized` is set
    /// when `Σ|c_j|² = 1` already holds.
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        let d = samples.len();
        if d < 2 {
            return out_of_range("period", d as f64, "d >= 2");
        }
        if let Some(index) = samples
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        let norm_sqr: f64 = samples.iter().map(|c| c.norm_sqr()).sum();
        if norm_sqr == 0.0 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            d,
            normalized: (norm_sqr - 1.0).abs() <= NORM_TOLERANCE,
            samples,
        })
    }

    pub fn from_state(psi: &StateVector) -> Self {
        Self {
            d: psi.dim(),
            samples: psi.amplitudes().to_vec(),
            normalized: true,
        }
    }

    pub fn normalize(&self) -> Result<Self> {
        let state = StateVector::normalized(self.samples.clone())?;
        Ok(Self::from_state(&state))
    }

    pub fn to_state(&self) -> Result<StateVector> {
        StateVector::new(self.samples.clone())
    }

    fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                norm_sqr: self.samples.iter().map(|c| c.norm_sqr()).sum(),
            })
        }
    }

    fn range(&self) -> IndexRange {
        IndexRange::new(self.d).expect("d >= 2 checked on construction")
    }

    /// `c̃_k = (1/√d) Σ_j e^{−i2πjk/d} c_j`, computed directly.
    pub fn dual_samples(&self) -> Vec<Complex64> {
        let range = self.range();
        let scale = 1.0 / (self.d as f64).sqrt();
        range
            .iter()
            .map(|k| {
                range
                    .iter()
                    .zip(&self.samples)
                    .map(|(j, c)| c * cyclic_phase(-j * k, self.d))
                    .sum::<Complex64>()
                    * scale
            })
            .collect()
    }
}

/// `e^{i2πn/d}` with `n` reduced mod `d` first to keep the argument small.
fn cyclic_phase(n: i64, d: usize) -> Complex64 {
    let r = n.rem_euclid(d as i64);
    Complex64::from_polar(1.0, TAU * r as f64 / d as f64)
}

/// `Σ_j c*_{j+m} c_j` with cyclic `j + m`.
fn correlation_of(samples: &[Complex64], range: IndexRange, m: i64) -> Complex64 {
    range
        .iter()
        .zip(samples)
        .map(|(j, c)| samples[range.wrapped_position(j + m)].conj() * c)
        .sum()
}

/// `Σ_j |c_j|² e^{i2πjn/d}`.
fn intensity_transform_of(samples: &[Complex64], range: IndexRange, n: i64) -> Complex64 {
    range
        .iter()
        .zip(samples)
        .map(|(j, c)| cyclic_phase(j * n, range.dim()) * c.norm_sqr())
        .sum()
}

pub fn autocorrelation(c: &PeriodicSignal, m: i64) -> Result<Complex64> {
    c.require_normalized()?;
    Ok(correlation_of(&c.samples, c.range(), m))
}

pub fn intensity_ft(c: &PeriodicSignal, n: i64) -> Result<Complex64> {
    c.require_normalized()?;
    Ok(intensity_transform_of(&c.samples, c.range(), n))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalStats {
    pub d: usize,
    /// `R(m)` for `m` over the centered range, ascending.
    pub correlation: Vec<Complex64>,
    /// `T(n)` for `n` over the centered range, ascending.
    pub intensity_ft: Vec<Complex64>,
}

pub fn signal_stats(c: &PeriodicSignal) -> Result<SignalStats> {
    c.require_normalized()?;
    let range = c.range();
    Ok(SignalStats {
        d: c.d,
        correlation: range
            .iter()
            .map(|m| correlation_of(&c.samples, range, m))
            .collect(),
        intensity_ft: range
            .iter()
            .map(|n| intensity_transform_of(&c.samples, range, n))
            .collect(),
    })
}

/// Largest `|R(m) − Σ_k e^{−i2πkm/d}|c̃_k|²|` over all lags.
pub fn spectral_identity_check(c: &PeriodicSignal) -> Result<f64> {
    c.require_normalized()?;
    let range = c.range();
    let dual = c.dual_samples();
    Ok(range
        .iter()
        .map(|m| {
            let spectral: Complex64 = range
                .iter()
                .zip(&dual)
                .map(|(k, ck)| cyclic_phase(-k * m, c.d) * ck.norm_sqr())
                .sum();
            (correlation_of(&c.samples, range, m) - spectral).norm()
        })
        .fold(0.0, f64::max))
}

/// Largest `|T(n) − Σ_k c̃*_{k+n} c̃_k|` over all shifts.
pub fn intensity_ft_check(c: &PeriodicSignal) -> Result<f64> {
    c.require_normalized()?;
    let range = c.range();
    let dual = c.dual_samples();
    Ok(range
        .iter()
        .map(|n| {
            (intensity_transform_of(&c.samples, range, n) - correlation_of(&dual, range, n)).norm()
        })
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "INFEASIBLE")]
    Infeasible,
    #[serde(rename = "OTHERWISE-UNDECIDED")]
    OtherwiseUndecided,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Infeasible => "INFEASIBLE",
            Verdict::OtherwiseUndecided => "OTHERWISE-UNDECIDED",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub du2: f64,
    pub dv2: f64,
    pub phi: f64,
    /// `None` when the two operators commute and nothing is excluded.
    pub margin: Option<f64>,
    pub verdict: Verdict,
}

fn check_magnitude(what: &'static str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return out_of_range(what, x, "[0, 1]");
    }
    Ok(())
}

/// Tests claimed `|R(1)|` and `|T(1)|` against the uncertainty relation.
/// Passing proves nothing for `d > 2`, hence the undecided verdict.
pub fn feasibility_audit(r1_mag: f64, t1_mag: f64, d: usize) -> Result<FeasibilityReport> {
    feasibility_audit_lags(r1_mag, t1_mag, d, 1, 1)
}

/// Same audit for `|R(m)|` and `|T(n)|`, using `U^n V^m = e^{i2πnm/d} V^m U^n`.
pub fn feasibility_audit_lags(
    rm_mag: f64,
    tn_mag: f64,
    d: usize,
    m: i64,
    n: i64,
) -> Result<FeasibilityReport> {
    check_magnitude("|R(m)|", rm_mag)?;
    check_magnitude("|T(n)|", tn_mag)?;
    if d < 2 {
        return out_of_range("d", d as f64, "d >= 2");
    }
    let du2 = (1.0 - tn_mag * tn_mag).clamp(0.0, 1.0);
    let dv2 = (1.0 - rm_mag * rm_mag).clamp(0.0, 1.0);
    let di = d as i64;
    let p = (n.rem_euclid(di) * m.rem_euclid(di)).rem_euclid(di);
    let folded = p.min(di - p);
    if folded == 0 {
        return Ok(FeasibilityReport {
            du2,
            dv2,
            phi: 0.0,
            margin: None,
            verdict: Verdict::OtherwiseUndecided,
        });
    }
    let phi = if 2 * folded == di {
        PI
    } else {
        TAU * folded as f64 / d as f64
    };
    let margin = theorem1_margin(du2, dv2, phi)?;
    Ok(FeasibilityReport {
        du2,
        dv2,
        phi,
        margin: Some(margin),
        verdict: if margin < MARGIN_FLOOR {
            Verdict::Infeasible
        } else {
            Verdict::OtherwiseUndecided
        },
    })
}
