//! Minimum-uncertainty states.
//!
//! For `0 ≤ θ ≤ π/2` the maximum of `cosθ·|⟨U⟩| + sinθ·|⟨V⟩|` over states is
//! `−h_min`, where `h_min` is the smallest eigenvalue of the Harper
//! Hamiltonian `H = −cosθ C_U − sinθ C_V`. The maximizers are the ground
//! states of `H` (resolved by parity when degenerate) and their translates
//! `U^a V^{−b}|ψ⟩`. Sweeping θ traces the boundary of the convex hull of the
//! accessible `(|⟨U⟩|, |⟨V⟩|)` region.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::linalg::{hermitian_eigendecomposition, ComplexMatrix, StateVector};
use crate::operators::{build_operator_set, translate, OperatorSet};
use crate::uncertainty::{dispersions, symmetric_bound};

/// Parity eigenvalues must be ±1 within this tolerance.
const PARITY_TOLERANCE: f64 = 1e-8;

/// Supporting-line identity tolerance for frontier samples.
const SUPPORT_TOLERANCE: f64 = 1e-9;

/// `|ΔU² − ΔV²|` allowed at θ = π/4.
const SWAP_SYMMETRY_TOLERANCE: f64 = 1e-8;

/// Expectations below this modulus have no usable phase.
const PHASE_FLOOR: f64 = 1e-12;

pub const DEFAULT_THETA_POINTS: usize = 65;

#[derive(Debug, Clone)]
pub struct HarperResult {
    pub theta: f64,
    pub d: usize,
    /// Smallest eigenvalue of `H`.
    pub h_min: f64,
    /// `−h_min`, the maximum of `cosθ|⟨U⟩| + sinθ|⟨V⟩|`.
    pub max_value: f64,
    pub ground_states: Vec<StateVector>,
    pub degenerate: bool,
    /// Parity eigenvalue (±1) of each ground state.
    pub parity_labels: Vec<i8>,
}

pub fn harper_ground(theta: f64, d: usize) -> Result<HarperResult> {
    let ops = build_operator_set(d)?;
    harper_ground_with(&ops, theta)
}

pub fn harper_ground_with(ops: &OperatorSet, theta: f64) -> Result<HarperResult> {
    let h = ops.harper(theta)?;
    let ground = ground_space(&h.matrix, &ops.parity)?;
    Ok(HarperResult {
        theta,
        d: ops.d,
        h_min: ground.h_min,
        max_value: -ground.h_min,
        degenerate: ground.states.len() > 1,
        ground_states: ground.states,
        parity_labels: ground.parity_labels,
    })
}

struct GroundSpace {
    h_min: f64,
    states: Vec<StateVector>,
    parity_labels: Vec<i8>,
}

/// Ground eigenspace of `h`, with a basis of parity eigenstates when the
/// lowest level is degenerate. `h` must commute with `parity`.
fn ground_space(h: &ComplexMatrix, parity: &ComplexMatrix) -> Result<GroundSpace> {
    let eig = hermitian_eigendecomposition(h)?;
    let multiplicity = eig.ground_multiplicity();
    let h_min = eig.eigenvalues[0];
    let d = h.rows();

    if multiplicity == 1 {
        let psi = StateVector::normalized(eig.eigenvector(0))?.canonical_phase();
        let p = parity.expectation(psi.amplitudes()).re;
        return Ok(GroundSpace {
            h_min,
            states: vec![psi],
            parity_labels: vec![parity_label(p)?],
        });
    }

    let basis = ComplexMatrix::from_fn(d, multiplicity, |i, k| eig.eigenvectors[(i, k)]);
    let restricted = &(&basis.adjoint() * parity) * &basis;
    let sub = hermitian_eigendecomposition(&restricted)?;
    let joint = &basis * &sub.eigenvectors;
    let mut states = Vec::with_capacity(multiplicity);
    let mut parity_labels = Vec::with_capacity(multiplicity);
    for k in 0..multiplicity {
        states.push(StateVector::normalized(joint.column(k))?.canonical_phase());
        parity_labels.push(parity_label(sub.eigenvalues[k])?);
    }
    Ok(GroundSpace {
        h_min,
        states,
        parity_labels,
    })
}

fn parity_label(p: f64) -> Result<i8> {
    let label = if p >= 0.0 { 1 } else { -1 };
    let deviation = (p - f64::from(label)).abs();
    if deviation > PARITY_TOLERANCE {
        return Err(Error::Inconsistent {
            what: "parity eigenvalue of a ground state",
            deviation,
        });
    }
    Ok(label)
}

/// Outcome of [`phase_fix`].
#[derive(Debug, Clone)]
pub struct PhaseFix {
    pub state: StateVector,
    /// The translation `U^a V^{−b}` that was applied.
    pub a: i64,
    pub b: i64,
    /// `arg⟨U⟩`, `arg⟨V⟩` left after the translation (zero when the phases
    /// lie on the translation lattice).
    pub residual_clock_phase: f64,
    pub residual_shift_phase: f64,
    /// Set when `⟨U⟩` (resp. `⟨V⟩`) vanishes and its rotation was skipped.
    pub clock_phase_skipped: bool,
    pub shift_phase_skipped: bool,
}

fn wrap_angle(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// Lattice step `n ∈ 0..d` whose multiple of `Φ` best cancels `angle`.
fn nearest_lattice_step(angle: f64, phi: f64, d: usize) -> (i64, f64) {
    (0..d as i64)
        .map(|n| (n, wrap_angle(angle - n as f64 * phi)))
        .min_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
        .expect("d >= 1")
}

/// Translates `psi` so that `⟨U⟩` and `⟨V⟩` become real and nonnegative (as
/// far as the translation lattice allows) and puts the largest amplitude on
/// the positive real axis. `|⟨U⟩|` and `|⟨V⟩|` are unchanged.
pub fn phase_fix(psi: &StateVector, ops: &OperatorSet) -> Result<PhaseFix> {
    if psi.dim() != ops.d {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: ops.d,
        });
    }
    let (eu, ev) = ops.expectations(psi);
    // ⟨U⟩ → e^{−ibΦ}⟨U⟩ and ⟨V⟩ → e^{−iaΦ}⟨V⟩ under U^a V^{−b}.
    let clock_phase_skipped = eu.norm() <= PHASE_FLOOR;
    let shift_phase_skipped = ev.norm() <= PHASE_FLOOR;
    let (b, residual_clock_phase) = if clock_phase_skipped {
        (0, 0.0)
    } else {
        nearest_lattice_step(eu.arg(), ops.phi, ops.d)
    };
    let (a, residual_shift_phase) = if shift_phase_skipped {
        (0, 0.0)
    } else {
        nearest_lattice_step(ev.arg(), ops.phi, ops.d)
    };
    let state = translate(psi, a, b, ops)?.canonical_phase();
    Ok(PhaseFix {
        state,
        a,
        b,
        residual_clock_phase,
        residual_shift_phase,
        clock_phase_skipped,
        shift_phase_skipped,
    })
}

/// `min_γ max_j |Im(e^{iγ} c_j)|`.
pub fn realness_check(psi: &StateVector) -> f64 {
    let amps = psi.amplitudes();
    let cost = |gamma: f64| {
        let w = Complex64::from_polar(1.0, gamma);
        amps.iter().map(|&c| (w * c).im.abs()).fold(0.0, f64::max)
    };
    // γ that makes Σ c_j² real positive is optimal for any state that is
    // real up to a global phase; a grid plus local refinement covers the rest.
    let sum_sq: Complex64 = amps.iter().map(|c| c * c).sum();
    let mut best_gamma = -0.5 * sum_sq.arg();
    let mut best = cost(best_gamma);
    const GRID: usize = 720;
    for i in 0..GRID {
        let g = PI * i as f64 / GRID as f64;
        let c = cost(g);
        if c < best {
            best = c;
            best_gamma = g;
        }
    }
    let mut half_width = PI / GRID as f64;
    for _ in 0..60 {
        for g in [best_gamma - half_width, best_gamma + half_width] {
            let c = cost(g);
            if c < best {
                best = c;
                best_gamma = g;
            }
        }
        half_width *= 0.5;
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierSample {
    pub theta: f64,
    pub abs_u: f64,
    pub abs_v: f64,
    pub du2: f64,
    pub dv2: f64,
    pub h_min: f64,
    pub degenerate: bool,
}

/// Boundary of the convex hull of the accessible `(|⟨U⟩|, |⟨V⟩|)` region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierCurve {
    pub d: usize,
    pub samples: Vec<FrontierSample>,
}

/// `n` uniform points on `[0, π/2]`, endpoints included.
pub fn default_theta_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![FRAC_PI_4],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    FRAC_PI_2
                } else {
                    FRAC_PI_2 * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

pub fn frontier(d: usize, theta_grid: &[f64]) -> Result<FrontierCurve> {
    let ops = build_operator_set(d)?;
    let mut samples = Vec::with_capacity(theta_grid.len());
    for &theta in theta_grid {
        let ground = harper_ground_with(&ops, theta)?;
        let psi = &ground.ground_states[0];
        let (eu, ev) = ops.expectations(psi);
        let (abs_u, abs_v) = (eu.norm(), ev.norm());
        let (du2, dv2) = dispersions(psi, &ops)?;
        let deviation = (theta.cos() * abs_u + theta.sin() * abs_v + ground.h_min).abs();
        if deviation > SUPPORT_TOLERANCE {
            return Err(Error::Inconsistent {
                what: "supporting line cos(theta)|<U>| + sin(theta)|<V>| = -h_min",
                deviation,
            });
        }
        samples.push(FrontierSample {
            theta,
            abs_u,
            abs_v,
            du2,
            dv2,
            h_min: ground.h_min,
            degenerate: ground.degenerate,
        });
    }
    Ok(FrontierCurve { d, samples })
}

/// One row of the minimum-uncertainty-versus-dimension table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Figure1Row {
    pub d: usize,
    /// `ΔU²` of the θ = π/4 Harper ground state.
    pub exact_bound: f64,
    /// `A/(1+2A)` with `A = tan(π/d)`.
    pub theorem1_bound: f64,
}

/// Symmetric (`ΔU² = ΔV²`) minimum uncertainty for one dimension.
pub fn figure1_row(d: usize) -> Result<Figure1Row> {
    let ops = build_operator_set(d)?;
    let ground = harper_ground_with(&ops, FRAC_PI_4)?;
    let (du2, dv2) = dispersions(&ground.ground_states[0], &ops)?;
    let deviation = (du2 - dv2).abs();
    if deviation > SWAP_SYMMETRY_TOLERANCE {
        return Err(Error::Inconsistent {
            what: "dU2 = dV2 at theta = pi/4",
            deviation,
        });
    }
    Ok(Figure1Row {
        d,
        exact_bound: du2,
        theorem1_bound: symmetric_bound(ops.phi)?,
    })
}

pub fn figure1_data(d_min: usize, d_max: usize) -> Result<Vec<Figure1Row>> {
    if d_min < 2 {
        return out_of_range("d_min", d_min as f64, "d_min >= 2");
    }
    if d_max < d_min {
        return out_of_range("d_max", d_max as f64, "d_max >= d_min");
    }
    (d_min..=d_max).map(figure1_row).collect()
}
