//! Large-`d` behaviour: localization sets, the lemmas that lead from the
//! clock/shift relation to the canonical commutator, the spectrum of
//! `[u, v]`, and discretized Gaussian states.
//!
//! A state lies in `𝒰_δ(ε)` when at least `1 − ε` of its weight sits on the
//! indices `|j| ≤ (2/π)⌊d/2⌋δ`; `𝒱_δ(ε)` is the same set in the dual basis.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, StateVector};
use crate::operators::{build_generators, translate, IndexRange, OperatorSet};
use crate::uncertainty::{dispersion_of, residual_dispersion};

/// Slack added to lemma inequalities before declaring a violation.
pub const LEMMA_SLACK: f64 = 1e-12;

/// Relative widening of the projector cutoff so that indices sitting
/// exactly on the boundary are not lost to rounding.
const CUTOFF_SLACK: f64 = 1e-12;

pub const HISTOGRAM_BINS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizationParams {
    pub delta: f64,
    pub epsilon: f64,
}

impl LocalizationParams {
    pub fn new(delta: f64, epsilon: f64) -> Result<Self> {
        check_delta(delta)?;
        if !(0.0..=1.0).contains(&epsilon) {
            return out_of_range("epsilon", epsilon, "[0, 1]");
        }
        Ok(Self { delta, epsilon })
    }

    /// Whether `psi` belongs to `𝒰_δ(ε)`.
    pub fn contains(&self, psi: &StateVector) -> Result<bool> {
        Ok(membership_epsilon(psi, self.delta)? <= self.epsilon)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= FRAC_PI_2) {
        return out_of_range("delta", delta, "(0, pi/2]");
    }
    Ok(())
}

fn check_dim(psi: &StateVector, ops: &OperatorSet) -> Result<()> {
    if psi.dim() != ops.d {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: ops.d,
        });
    }
    Ok(())
}

/// Indicator of `|j| ≤ (2/π)⌊d/2⌋δ` over the centered index range.
fn selection(d: usize, delta: f64) -> Result<Vec<bool>> {
    check_delta(delta)?;
    let range = IndexRange::new(d)?;
    let cutoff = 2.0 / PI * (d / 2) as f64 * delta * (1.0 + CUTOFF_SLACK);
    Ok(range.iter().map(|j| (j.abs() as f64) <= cutoff).collect())
}

/// Diagonal 0/1 projector `P_δ`.
pub fn projector_p_delta(d: usize, delta: f64) -> Result<ComplexMatrix> {
    let diag: Vec<Complex64> = selection(d, delta)?
        .into_iter()
        .map(|s| Complex64::new(if s { 1.0 } else { 0.0 }, 0.0))
        .collect();
    Ok(ComplexMatrix::from_diagonal(&diag))
}

/// `F P_δ F^H`, the projector defining `𝒱_δ(ε)`.
pub fn dual_projector_p_delta(ops: &OperatorSet, delta: f64) -> Result<ComplexMatrix> {
    let p = projector_p_delta(ops.d, delta)?;
    Ok(&(&ops.dft * &p) * &ops.dft.adjoint())
}

pub fn projector_rank(d: usize, delta: f64) -> Result<usize> {
    Ok(selection(d, delta)?.into_iter().filter(|&s| s).count())
}

fn weight_outside(amplitudes: &[Complex64], delta: f64) -> Result<f64> {
    let inside: f64 = selection(amplitudes.len(), delta)?
        .into_iter()
        .zip(amplitudes)
        .filter(|(s, _)| *s)
        .map(|(_, c)| c.norm_sqr())
        .sum();
    Ok((1.0 - inside).clamp(0.0, 1.0))
}

/// `ε = 1 − ⟨ψ|P_δ|ψ⟩`.
pub fn membership_epsilon(psi: &StateVector, delta: f64) -> Result<f64> {
    weight_outside(psi.amplitudes(), delta)
}

/// `ε` for `𝒱_δ`, i.e. `1 − ⟨ψ|F P_δ F^H|ψ⟩`.
pub fn dual_membership_epsilon(psi: &StateVector, ops: &OperatorSet, delta: f64) -> Result<f64> {
    check_dim(psi, ops)?;
    let dual = ops.dft.adjoint().matvec(psi.amplitudes())?;
    weight_outside(&dual, delta)
}

/// A checked inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    pub holds: bool,
}

impl InequalityReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            lhs,
            rhs,
            slack,
            holds: slack >= -LEMMA_SLACK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaA1Report {
    pub epsilon: f64,
    /// `ΔU² ≤ δ²/2 + 2ε`.
    pub stated: InequalityReport,
    /// `ΔU² ≤ 1 − max(0, (1−ε)cos 2δ − ε)²`, which follows from the phases
    /// `2πj/d` of the kept indices reaching `2δ`.
    pub rigorous: InequalityReport,
}

/// Checks the dispersion bound implied by membership in `𝒰_δ(ε)`.
///
/// The stated bound `δ²/2 + 2ε` can fail: a state split evenly between the
/// two outermost kept indices has `ε = 0` and `ΔU² ≈ sin²2δ`. Both the
/// stated and a rigorous bound are reported.
pub fn lemma_a1_check(psi: &StateVector, ops: &OperatorSet, delta: f64) -> Result<LemmaA1Report> {
    check_dim(psi, ops)?;
    let epsilon = membership_epsilon(psi, delta)?;
    let du2 = residual_dispersion(&ops.clock, psi.amplitudes());
    let floor = ((1.0 - epsilon) * (2.0 * delta).cos() - epsilon).max(0.0);
    Ok(LemmaA1Report {
        epsilon,
        stated: InequalityReport::new(du2, delta * delta / 2.0 + 2.0 * epsilon),
        rigorous: InequalityReport::new(du2, 1.0 - floor * floor),
    })
}

#[derive(Debug, Clone)]
pub struct RecenterReport {
    /// Shift applied: the recentered state is `V^k|ψ⟩`.
    pub k: i64,
    pub recentered: StateVector,
    /// `arg⟨U⟩` after recentering; `|α| ≤ π/d`.
    pub alpha_after: f64,
    pub delta: f64,
    /// `ε` of the recentered state at `delta`.
    pub epsilon: f64,
    /// `sin²β = ΔU² + π²/d²`.
    pub sin2_beta: f64,
    /// `sin²(β/2)/sin²(δ/2)`, or `None` when `sin²β > 1`.
    pub upper_bound: Option<f64>,
    /// `cos²(β/2)/sin²(δ/2)`, the other branch of the dichotomy.
    pub lower_alternative: Option<f64>,
    /// `ε ≤ upper_bound` or `ε ≥ lower_alternative` (vacuous without a bound).
    pub holds: bool,
}

/// Shifts `psi` by the `V^k` that brings `arg⟨U⟩` closest to zero and
/// checks the localization bound at `delta`.
pub fn lemma_a2_recenter(
    psi: &StateVector,
    ops: &OperatorSet,
    delta: f64,
) -> Result<RecenterReport> {
    check_dim(psi, ops)?;
    check_delta(delta)?;
    let eu = ops.clock.expectation(psi.amplitudes());
    if eu.norm() <= 1e-12 {
        return Err(Error::UndefinedPhase(
            "<U> vanishes; recentering is undefined",
        ));
    }
    // ⟨U⟩ → e^{ikΦ}⟨U⟩ under V^k.
    let wrap = |x: f64| (x + PI).rem_euclid(TAU) - PI;
    let (k, _) = (0..ops.d as i64)
        .map(|k| (k, wrap(eu.arg() + k as f64 * ops.phi).abs()))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("d >= 2");
    let recentered = translate(psi, 0, -k, ops)?;
    let eu_after = ops.clock.expectation(recentered.amplitudes());
    let epsilon = membership_epsilon(&recentered, delta)?;

    let d = ops.d as f64;
    let sin2_beta = dispersion_of(eu_after) + PI * PI / (d * d);
    let half_delta = (delta / 2.0).sin().powi(2);
    let (upper_bound, lower_alternative) = if sin2_beta <= 1.0 {
        let beta = sin2_beta.sqrt().asin();
        (
            Some((beta / 2.0).sin().powi(2) / half_delta),
            Some((beta / 2.0).cos().powi(2) / half_delta),
        )
    } else {
        (None, None)
    };
    let holds = match (upper_bound, lower_alternative) {
        (Some(up), Some(low)) => epsilon <= up + LEMMA_SLACK || epsilon >= low - LEMMA_SLACK,
        _ => true,
    };
    Ok(RecenterReport {
        k,
        recentered,
        alpha_after: eu_after.arg(),
        delta,
        epsilon,
        sin2_beta,
        upper_bound,
        lower_alternative,
        holds,
    })
}

/// Second-order expansion `U ≈ I + i√(2π/d)u − (π/d)u²` checked against
/// `4δ² + 4δ⁴ + (4 + π² + π⁴/4)ε`.
pub fn expansion_residual(
    psi: &StateVector,
    ops: &OperatorSet,
    delta: f64,
) -> Result<InequalityReport> {
    check_dim(psi, ops)?;
    let u = &ops.generators()?.u;
    let d = ops.d as f64;
    let s = (TAU / d).sqrt();
    let i = Complex64::i();
    let x = psi.amplitudes();
    let ux = u.matvec(x)?;
    let uux = u.matvec(&ux)?;
    let clock_x = ops.clock.matvec(x)?;
    let residual: f64 = (0..x.len())
        .map(|n| (clock_x[n] - (x[n] + i * s * ux[n] - uux[n] * (PI / d))).norm_sqr())
        .sum();
    let epsilon = membership_epsilon(psi, delta)?;
    let bound =
        4.0 * delta.powi(2) + 4.0 * delta.powi(4) + (4.0 + PI * PI + PI.powi(4) / 4.0) * epsilon;
    Ok(InequalityReport::new(residual, bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionComparison {
    pub du2: f64,
    /// `(2π/d)(⟨u²⟩ − ⟨u⟩²)`.
    pub proxy: f64,
    /// `|du2 − proxy| / max(du2, proxy)`, zero when both vanish.
    pub relative_gap: f64,
}

pub fn dispersion_vs_variance(
    psi: &StateVector,
    ops: &OperatorSet,
) -> Result<DispersionComparison> {
    check_dim(psi, ops)?;
    let u = &ops.generators()?.u;
    let x = psi.amplitudes();
    let mean = u.expectation(x).re;
    let ux = u.matvec(x)?;
    let second: f64 = ux.iter().map(|z| z.norm_sqr()).sum();
    let proxy = TAU / ops.d as f64 * (second - mean * mean).max(0.0);
    let du2 = residual_dispersion(&ops.clock, x);
    let scale = du2.max(proxy);
    let relative_gap = if scale == 0.0 {
        0.0
    } else {
        (du2 - proxy).abs() / scale
    };
    Ok(DispersionComparison {
        du2,
        proxy,
        relative_gap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// Equal-width bins over `[min, max]` of `values`; the top edge is
    /// closed.
    pub fn new(values: &[f64], bins: usize) -> Self {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut counts = vec![0; bins];
        if bins > 0 && !values.is_empty() {
            let width = hi - lo;
            for &v in values {
                let b = if width > 0.0 {
                    (((v - lo) / width) * bins as f64) as usize
                } else {
                    0
                };
                counts[b.min(bins - 1)] += 1;
            }
        }
        Self { lo, hi, counts }
    }
}

/// Spectrum of the Hermitian matrix `−i[u, v]`.
///
/// The generators satisfy `[u, v] ≈ i` on most of the space, so the bulk of
/// this spectrum clusters at `+1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorSpectrumReport {
    pub d: usize,
    pub tolerance: f64,
    /// Ascending eigenvalues of `−i[u, v]`.
    pub eigenvalues: Vec<f64>,
    /// Fraction with `|λ − 1| ≤ tolerance`.
    pub near_one_fraction: f64,
    /// Same count for the opposite orientation `i[u, v]`.
    pub opposite_orientation_fraction: f64,
    /// `|Σλ|`.
    pub trace_residual: f64,
}

impl CommutatorSpectrumReport {
    pub fn histogram(&self) -> Histogram {
        Histogram::new(&self.eigenvalues, HISTOGRAM_BINS)
    }

    pub fn trace_within_bound(&self) -> bool {
        self.trace_residual <= 1e-6 * self.d as f64
    }
}

pub fn commutator_matrix(d: usize) -> Result<ComplexMatrix> {
    let g = build_generators(d)?;
    let c = g.u.commutator(&g.v);
    // −i·[u, v], symmetrized against rounding.
    let m = c.scale(Complex64::new(0.0, -1.0));
    Ok((&m + &m.adjoint()).scale_real(0.5))
}

pub fn commutator_spectrum(d: usize, tolerance: f64) -> Result<CommutatorSpectrumReport> {
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return out_of_range("tolerance", tolerance, "[0, inf)");
    }
    let m = commutator_matrix(d)?;
    let eigenvalues = hermitian_eigenvalues(&m)?;
    let fraction = |target: f64| {
        eigenvalues
            .iter()
            .filter(|&&l| (l - target).abs() <= tolerance)
            .count() as f64
            / d as f64
    };
    let near_one_fraction = fraction(1.0);
    let opposite_orientation_fraction = fraction(-1.0);
    let trace_residual = eigenvalues.iter().sum::<f64>().abs();
    Ok(CommutatorSpectrumReport {
        d,
        tolerance,
        eigenvalues,
        near_one_fraction,
        opposite_orientation_fraction,
        trace_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationReport {
    pub n: i64,
    pub delta: f64,
    pub epsilon_before: f64,
    /// `δ + π|n|/d`.
    pub delta_after: f64,
    /// `ε` of `V^n|ψ⟩` at `delta_after`.
    pub epsilon_after: f64,
    pub holds: bool,
}

/// Checks that `V^n` maps `𝒰_δ(ε)` into `𝒰_{δ+π|n|/d}(ε)`.
///
/// Exact for even `d`. For odd `d` the widened cutoff grows by
/// `n(d−1)/d < n` indices, so a state with weight on the boundary can fail.
pub fn v_translation_set_property(
    psi: &StateVector,
    n: i64,
    delta: f64,
    ops: &OperatorSet,
) -> Result<TranslationReport> {
    check_dim(psi, ops)?;
    check_delta(delta)?;
    let delta_after = delta + PI * n.unsigned_abs() as f64 / ops.d as f64;
    check_delta(delta_after)?;
    let epsilon_before = membership_epsilon(psi, delta)?;
    let shifted = translate(psi, 0, -n, ops)?;
    let epsilon_after = membership_epsilon(&shifted, delta_after)?;
    Ok(TranslationReport {
        n,
        delta,
        epsilon_before,
        delta_after,
        epsilon_after,
        holds: epsilon_after <= epsilon_before + LEMMA_SLACK,
    })
}

/// Discretized Gaussian `c_j ∝ exp(−ν_j²/(2σ²))` with `ν_j = √(2π/d)·j`.
#[derive(Debug, Clone)]
pub struct GaussianState {
    pub d: usize,
    pub sigma: f64,
    pub state: StateVector,
    /// `𝒩_σ`, the norm of the unnormalized amplitudes.
    pub norm_constant: f64,
}

impl GaussianState {
    /// Large-`d` value `σ√(d/2)` of `𝒩_σ²`.
    pub fn predicted_norm_sqr(&self) -> f64 {
        self.sigma * (self.d as f64 / 2.0).sqrt()
    }
}

pub fn make_gaussian(d: usize, sigma: f64) -> Result<GaussianState> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return out_of_range("sigma", sigma, "(0, inf)");
    }
    let range = IndexRange::new(d)?;
    if d < 2 {
        return out_of_range("d", d as f64, "d >= 2");
    }
    let raw: Vec<Complex64> = range
        .iter()
        .map(|j| {
            let jf = j as f64;
            Complex64::new((-PI * jf * jf / (sigma * sigma * d as f64)).exp(), 0.0)
        })
        .collect();
    let norm_constant = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    Ok(GaussianState {
        d,
        sigma,
        state: StateVector::normalized(raw)?,
        norm_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::build_operator_set;

    #[test]
    fn projector_full_width_selects_everything() {
        for d in [8, 9] {
            assert_eq!(projector_rank(d, FRAC_PI_2).unwrap(), d);
        }
        // d = 9, δ = 1: cutoff (2/π)·4 ≈ 2.546 keeps |j| ≤ 2.
        assert_eq!(projector_rank(9, 1.0).unwrap(), 5);
    }

    #[test]
    fn projector_rejects_bad_delta() {
        assert!(projector_p_delta(8, 0.0).is_err());
        assert!(projector_p_delta(8, 1.6).is_err());
        assert!(projector_p_delta(8, f64::NAN).is_err());
    }

    #[test]
    fn boundary_index_is_included() {
        // d = 8, δ = π/4: cutoff exactly 2.
        assert_eq!(projector_rank(8, PI / 4.0).unwrap(), 5);
    }

    #[test]
    fn basis_and_dual_memberships() {
        let psi = StateVector::basis(16, 0).unwrap();
        assert_eq!(membership_epsilon(&psi, 0.1).unwrap(), 0.0);
        let dual = StateVector::dual_basis(16, 3).unwrap();
        let rank = projector_rank(16, 0.7).unwrap();
        let eps = membership_epsilon(&dual, 0.7).unwrap();
        assert!((eps - (1.0 - rank as f64 / 16.0)).abs() < 1e-14);
    }

    #[test]
    fn dual_membership_matches_projector() {
        let ops = build_operator_set(12).unwrap();
        let g = make_gaussian(12, 1.3).unwrap();
        let p = dual_projector_p_delta(&ops, 0.8).unwrap();
        let direct = 1.0 - p.expectation(g.state.amplitudes()).re;
        let fast = dual_membership_epsilon(&g.state, &ops, 0.8).unwrap();
        assert!((direct - fast).abs() < 1e-13);
    }

    #[test]
    fn stated_dispersion_bound_fails_on_split_state() {
        // d = 64, δ = 0.5: kept indices |j| ≤ 10, phases up to 2π·10/64.
        let d = 64;
        let ops = build_operator_set(d).unwrap();
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        amps[32 - 10] = Complex64::new(h, 0.0);
        amps[32 + 10] = Complex64::new(h, 0.0);
        let psi = StateVector::new(amps).unwrap();
        let r = lemma_a1_check(&psi, &ops, 0.5).unwrap();
        assert_eq!(r.epsilon, 0.0);
        assert!(!r.stated.holds);
        assert!(r.rigorous.holds);
        assert!((r.stated.lhs - (TAU * 10.0 / 64.0).sin().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn expansion_is_exact_on_origin() {
        let ops = build_operator_set(32).unwrap();
        let psi = StateVector::basis(32, 0).unwrap();
        let r = expansion_residual(&psi, &ops, 0.3).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn histogram_layout() {
        let h = Histogram::new(&[0.0, 0.5, 1.0, 1.0], 4);
        assert_eq!(h.counts, vec![1, 0, 1, 2]);
        assert_eq!((h.lo, h.hi), (0.0, 1.0));
        let flat = Histogram::new(&[2.0, 2.0], 3);
        assert_eq!(flat.counts, vec![2, 0, 0]);
    }

    #[test]
    fn small_commutator_spectrum_is_traceless() {
        for d in [2, 3, 10] {
            let r = commutator_spectrum(d, 1e-10).unwrap();
            assert_eq!(r.eigenvalues.len(), d);
            assert!(r.trace_within_bound());
        }
    }

    #[test]
    fn gaussian_rejects_bad_width() {
        assert!(make_gaussian(16, 0.0).is_err());
        assert!(make_gaussian(16, -1.0).is_err());
        assert!(make_gaussian(1, 1.0).is_err());
    }

    #[test]
    fn recenter_needs_defined_phase() {
        let ops = build_operator_set(6).unwrap();
        let flat = StateVector::dual_basis(6, 0).unwrap();
        assert!(matches!(
            lemma_a2_recenter(&flat, &ops, 0.5),
            Err(Error::UndefinedPhase(_))
        ));
    }

    #[test]
    fn translation_rejects_excessive_shift() {
        let ops = build_operator_set(8).unwrap();
        let psi = StateVector::basis(8, 0).unwrap();
        assert!(v_translation_set_property(&psi, 3, 1.5, &ops).is_err());
    }
}
