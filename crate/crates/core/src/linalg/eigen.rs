//! Hermitian eigendecomposition.
//!
//! The matrix is reduced to a real symmetric tridiagonal form by Householder
//! reflectors whose pivots are chosen real (so the complex phases end up in
//! the unitary similarity), then diagonalized by implicit-shift QL
//! iteration. Eigenvectors are `Q·Z` with `Q` the accumulated reflectors and
//! `Z` the accumulated real Givens rotations.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative tolerance on `‖M − M^H‖_max / ‖M‖_max` accepted as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Two eigenvalues closer than `DEGENERACY_RELATIVE · max(1, ‖M‖_F)` are
/// treated as one degenerate level.
pub const DEGENERACY_RELATIVE: f64 = 1e-9;

const MAX_QL_SWEEPS_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
    /// Frobenius norm of the decomposed matrix.
    pub norm_frobenius: f64,
}

impl EigenDecomposition {
    pub fn degeneracy_tolerance(&self) -> f64 {
        degeneracy_tolerance(self.norm_frobenius)
    }

    /// Number of eigenvalues within the degeneracy tolerance of the smallest.
    pub fn ground_multiplicity(&self) -> usize {
        let tol = self.degeneracy_tolerance();
        let lo = self.eigenvalues[0];
        self.eigenvalues
            .iter()
            .take_while(|&&l| l - lo <= tol)
            .count()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `‖Q diag(λ) Q^H − M‖_F`.
    pub fn reconstruction_residual(&self, m: &ComplexMatrix) -> f64 {
        let q = &self.eigenvectors;
        let n = q.rows();
        let scaled = ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * self.eigenvalues[j]);
        let rebuilt = &scaled * &q.adjoint();
        (&rebuilt - m).frobenius_norm()
    }

    /// Largest per-column residual `‖M v_k − λ_k v_k‖₂`.
    pub fn max_column_residual(&self, m: &ComplexMatrix) -> f64 {
        let mq = m * &self.eigenvectors;
        let n = m.rows();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        (mq[(i, k)] - self.eigenvectors[(i, k)] * self.eigenvalues[k]).norm_sqr()
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

pub fn degeneracy_tolerance(norm_frobenius: f64) -> f64 {
    DEGENERACY_RELATIVE * norm_frobenius.max(1.0)
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigendecomposition(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let a = validated_hermitian(m)?;
    let n = m.rows();
    let norm_frobenius = m.frobenius_norm();
    let mut tri = tridiagonalize(a, true);
    let mut z = RealSquare::identity(n);
    implicit_ql(&mut tri.diag, &mut tri.off, Some(&mut z))?;

    let order = ascending_order(&tri.diag);
    let eigenvalues = order.iter().map(|&k| tri.diag[k]).collect();
    let q = tri.q.expect("reflectors were accumulated");
    // eigenvectors = Q · Z with columns permuted into ascending order.
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let zk = z.row(k);
        for r in 0..n {
            let q_row = q.row(r);
            let mut acc = Complex64::new(0.0, 0.0);
            for (qv, &zv) in q_row.iter().zip(zk) {
                acc += qv * zv;
            }
            vecs[(r, col)] = acc;
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vecs,
        norm_frobenius,
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let a = validated_hermitian(m)?;
    let mut tri = tridiagonalize(a, false);
    implicit_ql(&mut tri.diag, &mut tri.off, None)?;
    let mut values = tri.diag;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn validated_hermitian(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let max_asymmetry = m.hermitian_asymmetry();
    let scale = m.max_abs();
    let relative = if scale > 0.0 {
        max_asymmetry / scale
    } else {
        0.0
    };
    if relative > HERMITIAN_TOLERANCE || !max_asymmetry.is_finite() {
        return Err(Error::NotHermitian {
            max_asymmetry,
            relative,
        });
    }
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    for i in 0..n {
        a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
        for j in i + 1..n {
            let z = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    Ok(a)
}

struct Tridiagonal {
    diag: Vec<f64>,
    /// `off[i] = T[i+1][i]`; the last slot is zero.
    off: Vec<f64>,
    q: Option<ComplexMatrix>,
}

struct Reflector {
    tau: Complex64,
    /// Starts at index `k + 1`; `v[0] = 1`.
    v: Vec<Complex64>,
}

/// Reduces the full (already Hermitian) row-major matrix `a` in place.
fn tridiagonalize(mut a: Vec<Complex64>, want_q: bool) -> Tridiagonal {
    let n = (a.len() as f64).sqrt() as usize;
    let zero = Complex64::new(0.0, 0.0);
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(1));
    let mut p = vec![zero; n];

    for k in 0..n.saturating_sub(1) {
        diag[k] = a[k * n + k].re;
        let m = n - k - 1;
        let alpha = a[(k + 1) * n + k];
        let xnorm = (k + 2..n)
            .map(|i| a[i * n + k].norm_sqr())
            .sum::<f64>()
            .sqrt();

        if xnorm == 0.0 && alpha.im == 0.0 {
            off[k] = alpha.re;
            reflectors.push(Reflector {
                tau: zero,
                v: Vec::new(),
            });
            continue;
        }

        let mut beta = (alpha.norm_sqr() + xnorm * xnorm).sqrt();
        if alpha.re >= 0.0 {
            beta = -beta;
        }
        let tau = Complex64::new((beta - alpha.re) / beta, -alpha.im / beta);
        let scal = Complex64::new(1.0, 0.0) / (alpha - beta);
        let mut v = Vec::with_capacity(m);
        v.push(Complex64::new(1.0, 0.0));
        for i in k + 2..n {
            v.push(a[i * n + k] * scal);
        }
        off[k] = beta;

        // p = tau · B v over the trailing block B = a[k+1.., k+1..].
        let base = k + 1;
        for (i, pi) in p[..m].iter_mut().enumerate() {
            let row = &a[(base + i) * n + base..(base + i) * n + n];
            let s: Complex64 = row.iter().zip(&v).map(|(b, x)| b * x).sum();
            *pi = tau * s;
        }
        // w = p − ½ tau (p^H v) v
        let pv: Complex64 = p[..m].iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
        let shift = tau * pv * -0.5;
        for (pi, vi) in p[..m].iter_mut().zip(&v) {
            *pi += shift * vi;
        }
        // B −= v w^H + w v^H
        for i in 0..m {
            let vi = v[i];
            let wi = p[i];
            let row = &mut a[(base + i) * n + base..(base + i) * n + n];
            for (j, b) in row.iter_mut().enumerate() {
                *b -= vi * p[j].conj() + wi * v[j].conj();
            }
        }
        reflectors.push(Reflector { tau, v });
    }
    if n > 0 {
        diag[n - 1] = a[(n - 1) * n + (n - 1)].re;
    }

    let q = want_q.then(|| accumulate_reflectors(n, &reflectors));
    Tridiagonal { diag, off, q }
}

/// Forms `Q = H_0 H_1 ⋯ H_{n−2}` by applying the reflectors right to left.
fn accumulate_reflectors(n: usize, reflectors: &[Reflector]) -> ComplexMatrix {
    let mut q = ComplexMatrix::identity(n);
    let zero = Complex64::new(0.0, 0.0);
    let mut tmp = vec![zero; n];
    for (k, refl) in reflectors.iter().enumerate().rev() {
        if refl.tau == zero {
            continue;
        }
        let base = k + 1;
        let cols = base..n;
        // tmp = v^H Q_block
        for t in tmp[base..n].iter_mut() {
            *t = zero;
        }
        for (i, vi) in refl.v.iter().enumerate() {
            let vc = vi.conj();
            for c in cols.clone() {
                tmp[c] += vc * q[(base + i, c)];
            }
        }
        for (i, vi) in refl.v.iter().enumerate() {
            let f = refl.tau * vi;
            for c in cols.clone() {
                let t = tmp[c];
                q[(base + i, c)] -= f * t;
            }
        }
    }
    q
}

/// Real square matrix stored so that row `k` is the k-th eigenvector column
/// of the tridiagonal problem (rotations touch contiguous rows).
struct RealSquare {
    n: usize,
    data: Vec<f64>,
}

impl RealSquare {
    fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n, data }
    }

    fn row(&self, k: usize) -> &[f64] {
        &self.data[k * self.n..(k + 1) * self.n]
    }

    fn rotate(&mut self, i: usize, c: f64, s: f64) {
        let n = self.n;
        let (lo, hi) = self.data.split_at_mut((i + 1) * n);
        let zi = &mut lo[i * n..];
        let zi1 = &mut hi[..n];
        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
            let h = *b;
            *b = s * *a + c * h;
            *a = c * *a - s * h;
        }
    }
}

/// Symmetric tridiagonal QL with implicit shifts.
fn implicit_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut RealSquare>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_QL_SWEEPS_PER_EIGENVALUE {
                    return Err(Error::Unsupported("QL iteration did not converge"));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        z.rotate(i, c, s);
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}
