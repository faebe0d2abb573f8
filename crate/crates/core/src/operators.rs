//! The operators of the finite-dimensional Fourier pair: clock `U`, shift
//! `V`, their Hermitian generators, sine/cosine parts, parity, the DFT
//! matrix and the Harper Hamiltonian.
//!
//! Every vector and matrix is indexed by ascending `j` over the centered
//! range `−⌊d/2⌋ ..= ⌊(d−1)/2⌋`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{out_of_range, Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};

/// Agreement required between the two constructions of `U` and `V`.
const FORM_AGREEMENT_TOLERANCE: f64 = 1e-12;

/// `2π n / d` with `n` first reduced into the centered range, which keeps
/// the angle small and its sine/cosine accurate.
pub fn phase(n: i64, d: usize) -> f64 {
    let d_i = d as i64;
    let lo = -(d_i / 2);
    let r = (n - lo).rem_euclid(d_i) + lo;
    TAU * r as f64 / d as f64
}

fn unit(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

/// The centered index set `{−⌊d/2⌋, …, ⌊(d−1)/2⌋}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    d: usize,
}

impl IndexRange {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return out_of_range("d", 0.0, "d >= 1");
        }
        Ok(Self { d })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn lo(&self) -> i64 {
        -((self.d / 2) as i64)
    }

    pub fn hi(&self) -> i64 {
        ((self.d - 1) / 2) as i64
    }

    pub fn contains(&self, j: i64) -> bool {
        (self.lo()..=self.hi()).contains(&j)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo()..=self.hi()
    }

    /// Cyclic re-centering: `j mod d` mapped back into the range.
    pub fn wrap(&self, j: i64) -> i64 {
        (j - self.lo()).rem_euclid(self.d as i64) + self.lo()
    }

    /// Storage position of index `j`.
    pub fn position(&self, j: i64) -> Result<usize> {
        if !self.contains(j) {
            return Err(Error::OutOfRange {
                what: "index",
                value: j as f64,
                range: "the centered range -[d/2]..=[(d-1)/2]",
            });
        }
        Ok((j - self.lo()) as usize)
    }

    /// Storage position of `j` after cyclic wrapping.
    pub fn wrapped_position(&self, j: i64) -> usize {
        (j - self.lo()).rem_euclid(self.d as i64) as usize
    }

    pub fn index_at(&self, position: usize) -> i64 {
        self.lo() + position as i64
    }
}

/// `F[j,k] = e^{+i2πjk/d}/√d`; column `k` is the dual basis vector `|k̃⟩`.
pub fn dft_matrix(d: usize) -> Result<ComplexMatrix> {
    let range = IndexRange::new(d)?;
    let scale = 1.0 / (d as f64).sqrt();
    Ok(ComplexMatrix::from_fn(d, d, |p, q| {
        let (j, k) = (range.index_at(p), range.index_at(q));
        Complex64::from_polar(scale, phase(j * k, d))
    }))
}

/// The cyclic shift `|j⟩ → |j+1⟩` (wrapping) as a matrix.
fn cyclic_shift(range: IndexRange) -> ComplexMatrix {
    let d = range.dim();
    let mut s = ComplexMatrix::zeros(d, d);
    for j in range.iter() {
        let from = range.wrapped_position(j);
        let to = range.wrapped_position(j + 1);
        s[(to, from)] = Complex64::new(1.0, 0.0);
    }
    s
}

fn diagonal_phases(range: IndexRange, sign: f64) -> ComplexMatrix {
    let diag: Vec<Complex64> = range
        .iter()
        .map(|j| unit(sign * phase(j, range.dim())))
        .collect();
    ComplexMatrix::from_diagonal(&diag)
}

fn cosine_part(w: &ComplexMatrix) -> ComplexMatrix {
    (w + &w.adjoint()).scale_real(0.5)
}

fn sine_part(w: &ComplexMatrix) -> ComplexMatrix {
    (w - &w.adjoint()).scale(Complex64::new(0.0, -0.5))
}

/// Hermitian generators `u`, `v` with `U = exp(i√(2π/d) u)`.
#[derive(Debug, Clone)]
pub struct Generators {
    /// `u = √(2π/d)·diag(j)`.
    pub u: ComplexMatrix,
    /// `v = F u F^H`, diagonal in the dual basis with eigenvalues `√(2π/d)·k`.
    pub v: ComplexMatrix,
}

/// `u`, `v` with the branch choice `k_j = 0` (eigenvalues `√(2π/d)·j`).
pub fn build_generators(d: usize) -> Result<Generators> {
    if d < 2 {
        return out_of_range("d", d as f64, "d >= 2");
    }
    let range = IndexRange::new(d)?;
    let f = dft_matrix(d)?;
    Ok(generators_with(range, &f))
}

fn generators_with(range: IndexRange, f: &ComplexMatrix) -> Generators {
    let d = range.dim();
    let step = (TAU / d as f64).sqrt();
    let nu: Vec<Complex64> = range
        .iter()
        .map(|j| Complex64::new(step * j as f64, 0.0))
        .collect();
    let u = ComplexMatrix::from_diagonal(&nu);
    let raw = &(f * &u) * &f.adjoint();
    // Remove the rounding asymmetry of the two products.
    let v = (&raw + &raw.adjoint()).scale_real(0.5);
    Generators { u, v }
}

/// Off-diagonal entry `⟨j|[u,v]|j′⟩` in closed form:
/// `i(−1)^{j−j′+1}·x/sin x` with `x = π(j−j′)/d`, times `e^{−ix}` for even `d`.
/// The diagonal is identically zero and is not handled here.
pub fn analytic_uv_commutator_entry(j: i64, jp: i64, d: usize) -> Result<Complex64> {
    let range = IndexRange::new(d)?;
    range.position(j)?;
    range.position(jp)?;
    if j == jp {
        return Err(Error::Unsupported(
            "closed form is indeterminate on the diagonal (the diagonal is exactly 0)",
        ));
    }
    let diff = j - jp;
    let x = PI * diff as f64 / d as f64;
    let sign = if (diff + 1).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    let value = Complex64::new(0.0, sign * x / x.sin());
    Ok(if d.is_multiple_of(2) { value * unit(-x) } else { value })
}

/// The full analytic commutator matrix (zero diagonal).
pub fn analytic_uv_commutator(d: usize) -> Result<ComplexMatrix> {
    let range = IndexRange::new(d)?;
    let mut m = ComplexMatrix::zeros(d, d);
    for j in range.iter() {
        for jp in range.iter() {
            if j != jp {
                m[(range.position(j)?, range.position(jp)?)] =
                    analytic_uv_commutator_entry(j, jp, d)?;
            }
        }
    }
    Ok(m)
}

/// Parity `|j⟩ → |−j⟩` with cyclic wrapping; for even `d` the index `−d/2`
/// is its own image.
pub fn build_parity(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return out_of_range("d", d as f64, "d >= 2");
    }
    let range = IndexRange::new(d)?;
    let mut p = ComplexMatrix::zeros(d, d);
    for j in range.iter() {
        p[(range.wrapped_position(-j), range.wrapped_position(j))] = Complex64::new(1.0, 0.0);
    }
    Ok(p)
}

/// A commuting-up-to-phase unitary pair `UV = e^{iΦ} VU` with everything
/// derived from it.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub d: usize,
    /// `Φ ∈ (0, π]`.
    pub phi: f64,
    pub dft: ComplexMatrix,
    /// `U`.
    pub clock: ComplexMatrix,
    /// `V`.
    pub shift: ComplexMatrix,
    pub cos_clock: ComplexMatrix,
    pub sin_clock: ComplexMatrix,
    pub cos_shift: ComplexMatrix,
    pub sin_shift: ComplexMatrix,
    pub parity: ComplexMatrix,
    /// Present only for the fundamental pair (`Φ = 2π/d`, unrephased).
    pub generators: Option<Generators>,
}

/// The fundamental clock/shift pair with `Φ = 2π/d`.
///
/// `U` and `V` are each built twice, as a diagonal phase matrix in one basis
/// and as a cyclic shift in the other, and the two forms must agree.
pub fn build_operator_set(d: usize) -> Result<OperatorSet> {
    if d < 2 {
        return out_of_range("d", d as f64, "d >= 2");
    }
    let range = IndexRange::new(d)?;
    let f = dft_matrix(d)?;
    let f_h = f.adjoint();

    let clock = diagonal_phases(range, 1.0);
    let shift = cyclic_shift(range);

    // U = Σ |k̃+1⟩⟨k̃|, V = Σ e^{−i2πk/d} |k̃⟩⟨k̃|
    let clock_dual = &(&f * &cyclic_shift(range)) * &f_h;
    let shift_dual = &(&f * &diagonal_phases(range, -1.0)) * &f_h;
    let deviation = clock
        .max_abs_diff(&clock_dual)
        .max(shift.max_abs_diff(&shift_dual));
    if deviation > FORM_AGREEMENT_TOLERANCE {
        return Err(Error::Inconsistent {
            what: "diagonal and shift forms of U, V",
            deviation,
        });
    }

    let generators = generators_with(range, &f);
    let phi = if d == 2 { PI } else { TAU / d as f64 };
    Ok(assemble(d, phi, f, clock, shift, Some(generators)))
}

fn assemble(
    d: usize,
    phi: f64,
    dft: ComplexMatrix,
    clock: ComplexMatrix,
    shift: ComplexMatrix,
    generators: Option<Generators>,
) -> OperatorSet {
    OperatorSet {
        d,
        phi,
        cos_clock: cosine_part(&clock),
        sin_clock: sine_part(&clock),
        cos_shift: cosine_part(&shift),
        sin_shift: sine_part(&shift),
        parity: build_parity(d).expect("d >= 2 checked by caller"),
        dft,
        clock,
        shift,
        generators,
    }
}

/// The pair `(U, V^m)` with `Φ = 2πm/d`. When `2πm/d > π` the clock is
/// replaced by `U^H` and `Φ` by `2π − 2πm/d`, keeping `Φ ∈ (0, π]`.
pub fn clock_shift_pair(d: usize, m: usize) -> Result<OperatorSet> {
    if d < 2 {
        return out_of_range("d", d as f64, "d >= 2");
    }
    if m == 0 || m >= d {
        return out_of_range("m", m as f64, "1 <= m <= d-1");
    }
    let base = build_operator_set(d)?;
    let (clock, phi) = if 2 * m > d {
        (base.clock.adjoint(), TAU * (d - m) as f64 / d as f64)
    } else if 2 * m == d {
        (base.clock.clone(), PI)
    } else {
        (base.clock.clone(), TAU * m as f64 / d as f64)
    };
    let shift = base.shift.unitary_pow(m as i64);
    let generators = (m == 1).then_some(base.generators).flatten();
    Ok(assemble(d, phi, base.dft, clock, shift, generators))
}

impl OperatorSet {
    pub fn range(&self) -> IndexRange {
        IndexRange { d: self.d }
    }

    /// `‖UV − e^{iΦ} VU‖_max`.
    pub fn commutation_residual(&self) -> f64 {
        let uv = &self.clock * &self.shift;
        let vu = (&self.shift * &self.clock).scale(unit(self.phi));
        uv.max_abs_diff(&vu)
    }

    /// `(⟨U⟩, ⟨V⟩)`.
    pub fn expectations(&self, psi: &StateVector) -> (Complex64, Complex64) {
        let x = psi.amplitudes();
        (self.clock.expectation(x), self.shift.expectation(x))
    }

    /// Phase-rotated copy `U → e^{iμ}U`, `V → e^{iμ′}V`. The commutation
    /// phase is unchanged; the generators no longer apply and are dropped.
    pub fn rephased(&self, mu_clock: f64, mu_shift: f64) -> OperatorSet {
        let clock = self.clock.scale(unit(mu_clock));
        let shift = self.shift.scale(unit(mu_shift));
        assemble(self.d, self.phi, self.dft.clone(), clock, shift, None)
    }

    /// Rephased copy for which `⟨U⟩` and `⟨V⟩` are real and nonnegative in
    /// `psi`. A vanishing expectation leaves that operator's phase alone.
    pub fn aligned_to(&self, psi: &StateVector) -> OperatorSet {
        let (eu, ev) = self.expectations(psi);
        let mu = |z: Complex64| if z.norm() > 0.0 { -z.arg() } else { 0.0 };
        self.rephased(mu(eu), mu(ev))
    }

    pub fn generators(&self) -> Result<&Generators> {
        self.generators.as_ref().ok_or(Error::Unsupported(
            "generators exist only for the fundamental Φ = 2π/d pair",
        ))
    }

    /// Harper Hamiltonian `H = −cosθ C_U − sinθ C_V`.
    pub fn harper(&self, theta: f64) -> Result<HarperHamiltonian> {
        check_theta(theta)?;
        let matrix =
            &self.cos_clock.scale_real(-theta.cos()) - &self.cos_shift.scale_real(theta.sin());
        Ok(HarperHamiltonian {
            theta,
            d: self.d,
            matrix,
        })
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return out_of_range("theta", theta, "[0, pi/2]");
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct HarperHamiltonian {
    pub theta: f64,
    pub d: usize,
    pub matrix: ComplexMatrix,
}

pub fn build_harper(theta: f64, d: usize) -> Result<HarperHamiltonian> {
    check_theta(theta)?;
    build_operator_set(d)?.harper(theta)
}

/// `U^a V^{−b} |ψ⟩`.
///
/// For the fundamental pair this multiplies `⟨U⟩` by `e^{−i2πb/d}` and `⟨V⟩`
/// by `e^{−i2πa/d}`; in general by `e^{−ibΦ}` and `e^{−iaΦ}`.
pub fn translate(psi: &StateVector, a: i64, b: i64, ops: &OperatorSet) -> Result<StateVector> {
    if psi.dim() != ops.d {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: ops.d,
        });
    }
    let mut x = psi.amplitudes().to_vec();
    let shift_step = if b > 0 {
        ops.shift.adjoint()
    } else {
        ops.shift.clone()
    };
    for _ in 0..b.unsigned_abs() {
        x = shift_step.matvec(&x)?;
    }
    let clock_step = if a < 0 {
        ops.clock.adjoint()
    } else {
        ops.clock.clone()
    };
    for _ in 0..a.unsigned_abs() {
        x = clock_step.matvec(&x)?;
    }
    Ok(StateVector::from_raw(x))
}
