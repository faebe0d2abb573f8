use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries, rejecting a wrong length or
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: rows * cols,
            });
        }
        if let Some(index) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    /// Convenience constructor from real entries, mainly for tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: n_cols,
                });
            }
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_row_major(n_rows, n_cols, data)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    /// Checked matrix product.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: rhs.rows,
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Checked matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> ComplexMatrix {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |M[i,j] - conj(M[j,i])|.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermitian_asymmetry() <= tol
    }

    /// `‖A^H A − I‖_max ≤ tol`. Non-square matrices are never unitary.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect().is_some_and(|dev| dev <= tol)
    }

    /// `‖A^H A − I‖_max`, or `None` for a non-square matrix.
    pub fn unitarity_defect(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let gram = &self.adjoint() * self;
        Some(gram.max_abs_diff(&ComplexMatrix::identity(self.rows)))
    }

    /// Integer power by repeated squaring. Negative exponents use the adjoint,
    /// which is the inverse for the unitary operators this crate builds.
    pub fn unitary_pow(&self, n: i64) -> ComplexMatrix {
        assert!(self.is_square());
        let base = if n < 0 { self.adjoint() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = ComplexMatrix::identity(self.rows);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &ComplexMatrix) -> ComplexMatrix {
        &(self * other) - &(other * self)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &ComplexMatrix) -> ComplexMatrix {
        &(self * other) + &(other * self)
    }

    /// `⟨x|A|x⟩` for a vector of matching length.
    pub fn expectation(&self, x: &[Complex64]) -> Complex64 {
        let ax = self.matvec(x).expect("expectation: dimension mismatch");
        x.iter().zip(&ax).map(|(a, b)| a.conj() * b).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; use `matmul` for the checked path.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
            .expect("matrix product: inner dimensions differ")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rng::{random_hermitian, random_matrix, SeededRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = SeededRng::new(1);
        let a = random_matrix(&mut rng, 4, 4);
        let i = ComplexMatrix::identity(4);
        assert_eq!(a.matmul(&i).unwrap(), a);
    }

    #[test]
    fn pauli_products_anticommute() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let xz = &x * &z;
        let zx = &z * &x;
        assert_eq!(xz[(0, 1)], -zx[(0, 1)]);
        assert_eq!(xz[(1, 0)], -zx[(1, 0)]);
        assert_eq!(xz[(0, 1)], c(-1.0, 0.0));
    }

    #[test]
    fn matmul_matches_triple_loop() {
        let mut rng = SeededRng::new(7);
        let a = random_matrix(&mut rng, 8, 8);
        let b = random_matrix(&mut rng, 8, 8);
        let got = a.matmul(&b).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let mut s = c(0.0, 0.0);
                for k in 0..8 {
                    s += a[(i, k)] * b[(k, j)];
                }
                assert!((got[(i, j)] - s).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert_eq!(
            a.matmul(&b),
            Err(Error::DimensionMismatch { left: 3, right: 2 })
        );
    }

    #[test]
    fn adjoint_is_an_involution() {
        let mut rng = SeededRng::new(3);
        let a = random_matrix(&mut rng, 3, 5);
        assert_eq!(a.adjoint().adjoint(), a);
        let d = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(-2.5, 0.0)]);
        assert_eq!(d.adjoint(), d);
    }

    #[test]
    fn unitarity_check() {
        assert!(ComplexMatrix::identity(4).is_unitary(1e-14));
        assert!(!ComplexMatrix::identity(4).scale_real(2.0).is_unitary(1e-3));
        assert!(!ComplexMatrix::zeros(2, 3).is_unitary(1.0));
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = ComplexMatrix::from_row_major(1, 2, vec![c(0.0, 0.0), c(f64::NAN, 0.0)]);
        assert_eq!(err, Err(Error::NonFinite { index: 1 }));
    }

    #[test]
    fn hermitian_detection() {
        let mut rng = SeededRng::new(11);
        let h = random_hermitian(&mut rng, 6);
        assert!(h.is_hermitian(0.0));
        let mut g = h.clone();
        g[(0, 1)] += c(0.0, 1e-3);
        assert!(g.hermitian_asymmetry() > 9e-4);
    }

    #[test]
    fn unitary_pow_handles_negative_exponents() {
        let s =
            ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]])
                .unwrap();
        assert_eq!(s.unitary_pow(3), ComplexMatrix::identity(3));
        assert_eq!(s.unitary_pow(-1), s.adjoint());
        assert_eq!(s.unitary_pow(0), ComplexMatrix::identity(3));
    }
}
