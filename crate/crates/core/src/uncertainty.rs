//! Dispersions of unitary operators and the uncertainty relation they obey.
//!
//! For `UV = e^{iΦ} VU` with `0 < Φ ≤ π` and `A = tan(Φ/2)`, every state
//! satisfies `(1 + 2A)·ΔU²·ΔV² + A²(ΔU² + ΔV²) ≥ A²`. The relation is
//! evaluated here divided by `A²`, which stays finite in the `Φ = π` limit
//! where it becomes `ΔU² + ΔV² ≥ 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::linalg::rng::SeededRng;
use crate::linalg::{ComplexMatrix, StateVector};
use crate::operators::{build_operator_set, OperatorSet};

/// Smallest normalized margin accepted as "the bound holds".
pub const MARGIN_FLOOR: f64 = -1e-10;

/// Tolerance on `Im⟨U⟩`, `Im⟨V⟩` (and negative real parts) for the
/// phase-aligned preconditions.
pub const PHASE_TOLERANCE: f64 = 1e-10;

/// Unitarity tolerance enforced by [`dispersion`].
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Slack allowed on the inequality chains evaluated in floating point.
pub const INEQUALITY_SLACK: f64 = 1e-12;

/// `Φ` with `A = tan(Φ/2)` kept as the pair `(sin Φ/2, cos Φ/2)` so that
/// `Φ = π` represents `A = ∞` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub phi: f64,
    sin_half: f64,
    cos_half: f64,
}

impl BoundParams {
    pub fn new(phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&phi) {
            return out_of_range("phi", phi, "[0, pi]");
        }
        let (sin_half, mut cos_half) = (phi / 2.0).sin_cos();
        if phi == PI {
            cos_half = 0.0;
        }
        Ok(Self {
            phi,
            sin_half,
            cos_half,
        })
    }

    /// Same as [`BoundParams::new`] but rejecting the vacuous `Φ = 0`.
    pub fn nondegenerate(phi: f64) -> Result<Self> {
        if phi == 0.0 {
            return out_of_range(
                "phi",
                phi,
                "(0, pi]: commuting operators carry no constraint",
            );
        }
        Self::new(phi)
    }

    /// `tan(Φ/2)`; `+∞` at `Φ = π`.
    pub fn a(&self) -> f64 {
        if self.cos_half == 0.0 {
            f64::INFINITY
        } else {
            self.sin_half / self.cos_half
        }
    }

    pub fn is_pauli_limit(&self) -> bool {
        self.cos_half == 0.0
    }

    /// `(1 + 2A)/A²` written without dividing by `cos`.
    fn product_weight(&self) -> f64 {
        let (s, c) = (self.sin_half, self.cos_half);
        c * (c + 2.0 * s) / (s * s)
    }
}

/// `(ΔU², ΔV²)` with the normalized margin attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyPoint {
    pub du2: f64,
    pub dv2: f64,
    pub phi: f64,
    pub margin: f64,
}

/// `1 − |⟨ψ|W|ψ⟩|²` for a unitary `W`.
pub fn dispersion(psi: &StateVector, w: &ComplexMatrix) -> Result<f64> {
    if !w.is_square() || w.rows() != psi.dim() {
        return Err(Error::DimensionMismatch {
            left: w.rows(),
            right: psi.dim(),
        });
    }
    let deviation = w.unitarity_defect().unwrap_or(f64::INFINITY);
    if deviation > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(residual_dispersion(w, psi.amplitudes()))
}

pub(crate) fn dispersion_of(expectation: Complex64) -> f64 {
    (1.0 - expectation.norm_sqr()).clamp(0.0, 1.0)
}

/// `‖Wψ − ⟨W⟩ψ‖²`, equal to `1 − |⟨W⟩|²` for unitary `W` but free of the
/// cancellation that formula suffers when `|⟨W⟩|` is close to 1.
pub(crate) fn residual_dispersion(w: &ComplexMatrix, x: &[Complex64]) -> f64 {
    let wx = w.matvec(x).expect("dimensions checked by caller");
    let z: Complex64 = x.iter().zip(&wx).map(|(a, b)| a.conj() * b).sum();
    let r: f64 = wx.iter().zip(x).map(|(b, a)| (b - z * a).norm_sqr()).sum();
    r.clamp(0.0, 1.0)
}

/// `(ΔU², ΔV²)` of `psi` for the pair in `ops`.
pub fn dispersions(psi: &StateVector, ops: &OperatorSet) -> Result<(f64, f64)> {
    if psi.dim() != ops.d {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: ops.d,
        });
    }
    let x = psi.amplitudes();
    Ok((
        residual_dispersion(&ops.clock, x),
        residual_dispersion(&ops.shift, x),
    ))
}

fn check_unit_interval(what: &'static str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return out_of_range(what, x, "[0, 1]");
    }
    Ok(())
}

/// Normalized margin `((1+2A)/A²)·ΔU²ΔV² + ΔU² + ΔV² − 1`; the relation
/// holds iff the margin is nonnegative. At `Φ = π` this is `ΔU² + ΔV² − 1`.
pub fn theorem1_margin(du2: f64, dv2: f64, phi: f64) -> Result<f64> {
    check_unit_interval("dU2", du2)?;
    check_unit_interval("dV2", dv2)?;
    let params = BoundParams::nondegenerate(phi)?;
    Ok(margin_with(&params, du2, dv2))
}

fn margin_with(params: &BoundParams, du2: f64, dv2: f64) -> f64 {
    let product = if params.is_pauli_limit() {
        0.0
    } else {
        params.product_weight() * du2 * dv2
    };
    product + du2 + dv2 - 1.0
}

/// The value `ΔU² = ΔV² = A/(1+2A)` at which the relation is saturated.
pub fn symmetric_bound(phi: f64) -> Result<f64> {
    let p = BoundParams::nondegenerate(phi)?;
    Ok(p.sin_half / (p.cos_half + 2.0 * p.sin_half))
}

/// Dispersions and margin of `psi` for the pair in `ops`.
pub fn uncertainty_point(psi: &StateVector, ops: &OperatorSet) -> Result<UncertaintyPoint> {
    if psi.dim() != ops.d {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: ops.d,
        });
    }
    let (du2, dv2) = dispersions(psi, ops)?;
    let params = BoundParams::nondegenerate(ops.phi)?;
    Ok(UncertaintyPoint {
        du2,
        dv2,
        phi: ops.phi,
        margin: margin_with(&params, du2, dv2),
    })
}

/// Result of a Haar-random audit of the relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub d: usize,
    pub phi: f64,
    pub count: usize,
    pub seed: u64,
    pub min_margin: f64,
    /// Amplitudes of the worst state as `[re, im]` pairs, ascending `j`.
    pub argmin_state: Vec<[f64; 2]>,
}

impl AuditReport {
    pub fn passes(&self) -> bool {
        self.min_margin >= MARGIN_FLOOR
    }
}

/// Audits the fundamental pair (`Φ = 2π/d`) on `count` Haar-random states.
pub fn verify_random_states(d: usize, count: usize, seed: u64) -> Result<AuditReport> {
    let ops = build_operator_set(d)?;
    audit_pair(&ops, count, seed)
}

/// Audits an arbitrary pair, e.g. one from `clock_shift_pair`.
pub fn audit_pair(ops: &OperatorSet, count: usize, seed: u64) -> Result<AuditReport> {
    if count == 0 {
        return out_of_range("count", 0.0, "count >= 1");
    }
    let mut rng = SeededRng::new(seed);
    let mut worst: Option<(f64, StateVector)> = None;
    for _ in 0..count {
        let psi = StateVector::haar_random(ops.d, &mut rng);
        let m = uncertainty_point(&psi, ops)?.margin;
        if worst.as_ref().is_none_or(|(w, _)| m < *w) {
            worst = Some((m, psi));
        }
    }
    let (min_margin, state) = worst.expect("count >= 1");
    Ok(AuditReport {
        d: ops.d,
        phi: ops.phi,
        count,
        seed,
        min_margin,
        argmin_state: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
    })
}

/// Margins of the two saturating states `|j=0⟩` and `|k̃=0⟩`.
pub fn saturation_probes(ops: &OperatorSet) -> Result<[f64; 2]> {
    let position = StateVector::basis(ops.d, 0)?;
    let dual = StateVector::dual_basis(ops.d, 0)?;
    Ok([
        uncertainty_point(&position, ops)?.margin,
        uncertainty_point(&dual, ops)?.margin,
    ])
}

/// Rejects a state for which `⟨U⟩` or `⟨V⟩` is not real and nonnegative.
pub fn check_phase_aligned(psi: &StateVector, ops: &OperatorSet) -> Result<()> {
    if psi.dim() != ops.d {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: ops.d,
        });
    }
    let (eu, ev) = ops.expectations(psi);
    for (name, z) in [("<U>", eu), ("<V>", ev)] {
        if z.im.abs() > PHASE_TOLERANCE || z.re < -PHASE_TOLERANCE {
            return Err(Error::PhasePrecondition(format!(
                "{name} = {:e}{:+e}i is not real nonnegative",
                z.re, z.im
            )));
        }
    }
    Ok(())
}

/// The three quantities of `ΔU²ΔV² ≥ ΔS_U²ΔS_V² ≥ ¼|⟨[S_U,S_V]⟩|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    /// `ΔU·ΔV`.
    pub du_dv: f64,
    /// `ΔS_U·ΔS_V`.
    pub dsu_dsv: f64,
    /// `½|⟨[S_U,S_V]⟩|`.
    pub half_commutator: f64,
    pub holds: bool,
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn variance_of_hermitian(h: &ComplexMatrix, x: &[Complex64]) -> Result<(f64, Vec<Complex64>)> {
    let hx = h.matvec(x)?;
    let mean = inner(x, &hx).re;
    let second = inner(&hx, &hx).re;
    Ok(((second - mean * mean).max(0.0), hx))
}

pub fn robertson_chain_check(psi: &StateVector, ops: &OperatorSet) -> Result<ChainReport> {
    check_phase_aligned(psi, ops)?;
    let x = psi.amplitudes();
    let point = uncertainty_point(psi, ops)?;
    let (var_su, su_x) = variance_of_hermitian(&ops.sin_clock, x)?;
    let (var_sv, sv_x) = variance_of_hermitian(&ops.sin_shift, x)?;
    // ⟨[S_U,S_V]⟩ = ⟨S_Uψ|S_Vψ⟩ − ⟨S_Vψ|S_Uψ⟩ = 2i·Im⟨S_Uψ|S_Vψ⟩
    let half_commutator = inner(&su_x, &sv_x).im.abs();

    let lhs = point.du2 * point.dv2;
    let mid = var_su * var_sv;
    let rhs = half_commutator * half_commutator;
    Ok(ChainReport {
        du_dv: lhs.sqrt(),
        dsu_dsv: mid.sqrt(),
        half_commutator,
        holds: lhs >= mid - INEQUALITY_SLACK && mid >= rhs - INEQUALITY_SLACK,
    })
}

/// `‖[S_U,S_V] + i·tan(Φ/2)·(C_U C_V + C_V C_U)‖_max`; an exact operator
/// identity for `Φ < π`.
pub fn lemma_b1_residual(ops: &OperatorSet) -> Result<f64> {
    let params = BoundParams::nondegenerate(ops.phi)?;
    if params.is_pauli_limit() {
        return Err(Error::Unsupported("tan(phi/2) diverges at phi = pi"));
    }
    let comm = ops.sin_clock.commutator(&ops.sin_shift);
    let anti = ops.cos_clock.anticommutator(&ops.cos_shift);
    let rhs = anti.scale(Complex64::new(0.0, params.a()));
    Ok((&comm + &rhs).max_abs())
}

/// `‖C_U C_V + C_V C_U‖_max`, which must vanish at `Φ = π`.
pub fn cosine_anticommutator_norm(ops: &OperatorSet) -> f64 {
    ops.cos_clock.anticommutator(&ops.cos_shift).max_abs()
}

/// `|⟨C_U C_V⟩| ≥ √(1−ΔU²)·√(1−ΔV²) − ΔU·ΔV` for a phase-aligned state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaB2Report {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

pub fn lemma_b2_check(psi: &StateVector, ops: &OperatorSet) -> Result<LemmaB2Report> {
    check_phase_aligned(psi, ops)?;
    let x = psi.amplitudes();
    let point = uncertainty_point(psi, ops)?;
    let cu_x = ops.cos_clock.matvec(x)?;
    let cv_x = ops.cos_shift.matvec(x)?;
    let lhs = inner(&cu_x, &cv_x).norm();
    let rhs = (1.0 - point.du2).sqrt() * (1.0 - point.dv2).sqrt() - (point.du2 * point.dv2).sqrt();
    let slack = lhs - rhs;
    Ok(LemmaB2Report {
        lhs,
        rhs,
        slack,
        holds: slack >= -INEQUALITY_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn basis_state_dispersions() {
        let d = 6;
        let ops = build_operator_set(d).unwrap();
        let j = StateVector::basis(d, 1).unwrap();
        assert!(dispersion(&j, &ops.clock).unwrap().abs() < 1e-15);
        assert!((dispersion(&j, &ops.shift).unwrap() - 1.0).abs() < 1e-15);
        let k = StateVector::dual_basis(d, -2).unwrap();
        assert!((dispersion(&k, &ops.clock).unwrap() - 1.0).abs() < 1e-14);
        assert!(dispersion(&k, &ops.shift).unwrap().abs() < 1e-14);
    }

    #[test]
    fn d2_uniform_superposition() {
        let ops = build_operator_set(2).unwrap();
        let psi = StateVector::normalized(vec![Complex64::new(1.0, 0.0); 2]).unwrap();
        assert!((dispersion(&psi, &ops.clock).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dispersion_rejects_non_unitary() {
        let psi = StateVector::basis(3, 0).unwrap();
        let w = ComplexMatrix::identity(3).scale_real(2.0);
        assert!(matches!(
            dispersion(&psi, &w),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn margin_saturation_points() {
        for phi in [0.1, 1.0, TAU / 7.0, PI] {
            assert_eq!(theorem1_margin(0.0, 1.0, phi).unwrap(), 0.0);
            assert_eq!(theorem1_margin(1.0, 0.0, phi).unwrap(), 0.0);
        }
        assert_eq!(theorem1_margin(0.5, 0.5, PI).unwrap(), 0.0);
    }

    #[test]
    fn margin_positive_root() {
        // Positive root of (1+2A)x² + 2A²x − A² = 0 is A/(1+2A).
        let phi = TAU / 7.0;
        let a = (phi / 2.0).tan();
        let disc = (4.0 * a.powi(4) + 4.0 * (1.0 + 2.0 * a) * a * a).sqrt();
        let root = (-2.0 * a * a + disc) / (2.0 * (1.0 + 2.0 * a));
        assert!((root - a / (1.0 + 2.0 * a)).abs() < 1e-15);
        assert!(theorem1_margin(root, root, phi).unwrap().abs() < 1e-14);
    }

    #[test]
    fn margin_rejects_bad_inputs() {
        assert!(theorem1_margin(0.5, 0.5, 0.0).is_err());
        assert!(theorem1_margin(1.5, 0.5, 1.0).is_err());
        assert!(theorem1_margin(0.5, 0.5, 4.0).is_err());
        assert!(symmetric_bound(0.0).is_err());
    }

    #[test]
    fn symmetric_bound_values() {
        assert_eq!(symmetric_bound(PI).unwrap(), 0.5);
        for phi in [0.01, 0.7, 2.0, 3.0] {
            let s = symmetric_bound(phi).unwrap();
            assert!(theorem1_margin(s, s, phi).unwrap().abs() < 1e-12);
        }
        let d = 4096.0;
        let s = symmetric_bound(TAU / d).unwrap();
        assert!((s * d / PI - 1.0).abs() < 2e-3);
    }

    #[test]
    fn bound_params_pauli_limit() {
        let p = BoundParams::new(PI).unwrap();
        assert!(p.is_pauli_limit() && p.a().is_infinite());
        let p = BoundParams::new(1.0).unwrap();
        assert!((p.a() - 0.5f64.tan()).abs() < 1e-14);
    }

    #[test]
    fn small_random_audit() {
        let report = verify_random_states(2, 1000, 9).unwrap();
        assert!(report.passes(), "{report:?}");
        assert_eq!(report.argmin_state.len(), 2);
        let ops = build_operator_set(5).unwrap();
        for m in saturation_probes(&ops).unwrap() {
            assert!(m.abs() < 1e-12);
        }
    }

    #[test]
    fn chain_on_basis_state() {
        let ops = build_operator_set(4).unwrap();
        let psi = StateVector::basis(4, 0).unwrap();
        let r = robertson_chain_check(&psi, &ops).unwrap();
        assert!(r.holds);
        assert_eq!(r.du_dv, 0.0);
        assert!(r.half_commutator.abs() < 1e-15);
    }

    #[test]
    fn chain_rejects_unaligned_state() {
        let ops = build_operator_set(5).unwrap();
        let psi = StateVector::basis(5, 1).unwrap(); // ⟨U⟩ = e^{i2π/5}
        assert!(matches!(
            robertson_chain_check(&psi, &ops),
            Err(Error::PhasePrecondition(_))
        ));
        assert!(lemma_b2_check(&psi, &ops).is_err());
    }

    #[test]
    fn lemma_b1_small_cases() {
        assert!(lemma_b1_residual(&build_operator_set(3).unwrap()).unwrap() <= 1e-13);
        assert!(lemma_b1_residual(&build_operator_set(16).unwrap()).unwrap() <= 1e-12);
        assert!(lemma_b1_residual(&build_operator_set(2).unwrap()).is_err());
        assert!(cosine_anticommutator_norm(&build_operator_set(2).unwrap()) < 1e-15);
    }

    #[test]
    fn lemma_b2_on_basis_state() {
        let ops = build_operator_set(6).unwrap();
        let psi = StateVector::basis(6, 0).unwrap();
        let r = lemma_b2_check(&psi, &ops).unwrap();
        assert!(r.holds);
        assert!(r.rhs.abs() < 1e-15);
    }
}
