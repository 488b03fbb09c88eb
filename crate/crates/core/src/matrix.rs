//! Dense square complex matrices.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Square matrix of `Complex<T>` stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix<T: Real> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from row-major data; `data.len()` must be a perfect square.
    pub fn from_row_major(data: Vec<Complex<T>>) -> Result<Self> {
        let n = (data.len() as f64).sqrt().round() as usize;
        if n * n != data.len() {
            return Err(Error::Dimension(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from separate real and imaginary row lists.
    pub fn from_parts(re: &[Vec<T>], im: &[Vec<T>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n || re.iter().chain(im).any(|row| row.len() != n) {
            return Err(Error::Dimension(
                "real and imaginary parts must both be n x n".into(),
            ));
        }
        Ok(Self::from_fn(n, |i, j| Complex::new(re[i][j], im[i][j])))
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex<T>]) {
        for (i, &v) in col.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    acc = acc + self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(T::lit(0.5))
    }

    /// `‖A − A†‖_F`.
    pub fn hermitian_deviation(&self) -> T {
        (self - &self.adjoint()).frobenius_norm()
    }

    /// `‖A†A − I‖_F`.
    pub fn unitary_deviation(&self) -> T {
        (&(&self.adjoint() * self) - &Self::identity(self.n)).frobenius_norm()
    }

    /// Hermitian within `tol` relative to `‖A‖_F` (absolute when `A = 0`).
    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol * self.frobenius_norm().max(T::one())
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitary_deviation() <= tol * T::lit(self.n.max(1) as f64).sqrt()
    }

    pub fn ensure_hermitian(&self, tol: T) -> Result<()> {
        let dev = self.hermitian_deviation();
        let bound = tol * self.frobenius_norm().max(T::one());
        if dev <= bound {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                deviation: dev.as_f64(),
                tol: bound.as_f64(),
            })
        }
    }

    pub fn ensure_same_dim(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "matrix dimensions {} and {} differ",
                self.n, other.n
            )))
        }
    }

    /// `U · diag(d) · U†` for real `d`.
    pub fn from_spectral(vectors: &Self, values: &[T]) -> Self {
        let n = vectors.n;
        Self::from_fn(n, |i, j| {
            let mut acc = Complex::zero();
            for (k, &d) in values.iter().enumerate() {
                acc = acc + vectors[(i, k)] * vectors[(j, k)].conj() * d;
            }
            acc
        })
    }

    /// `U · diag(d) · U†` for complex `d`.
    pub fn from_spectral_complex(vectors: &Self, values: &[Complex<T>]) -> Self {
        let n = vectors.n;
        Self::from_fn(n, |i, j| {
            let mut acc = Complex::zero();
            for (k, &d) in values.iter().enumerate() {
                acc = acc + vectors[(i, k)] * d * vectors[(j, k)].conj();
            }
            acc
        })
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// Returns `None` when a pivot falls below `pivot_tol · ‖A‖_F`.
    pub fn inverse(&self, pivot_tol: T) -> Option<Self> {
        let n = self.n;
        let scale = self.frobenius_norm();
        if scale == T::zero() {
            return None;
        }
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| {
                    a[(x, col)]
                        .norm()
                        .partial_cmp(&a[(y, col)].norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if !(a[(piv, col)].norm() > pivot_tol * scale) {
                return None;
            }
            if piv != col {
                for k in 0..n {
                    a.data.swap(piv * n + k, col * n + k);
                    inv.data.swap(piv * n + k, col * n + k);
                }
            }
            let d = a[(col, col)].inv();
            for k in 0..n {
                a[(col, k)] = a[(col, k)] * d;
                inv[(col, k)] = inv[(col, k)] * d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let (ack, ick) = (a[(col, k)], inv[(col, k)]);
                    a[(r, k)] = a[(r, k)] - f * ack;
                    inv[(r, k)] = inv[(r, k)] - f * ick;
                }
            }
        }
        Some(inv)
    }

    /// Lossless widening to `f64`, used for reporting.
    pub fn to_f64(&self) -> CMatrix<f64> {
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(z.re.as_f64(), z.im.as_f64()))
                .collect(),
        }
    }

    pub fn cast<U: Real>(&self) -> CMatrix<U> {
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

impl<'a, T: Real> Add<&'a CMatrix<T>> for &'a CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in add");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a, T: Real> Sub<&'a CMatrix<T>> for &'a CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sub");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a, T: Real> Mul<&'a CMatrix<T>> for &'a CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in mul");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }
}

impl<T: Real> Neg for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn neg(self) -> CMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> AddAssign<&CMatrix<T>> for CMatrix<T> {
    fn add_assign(&mut self, rhs: &CMatrix<T>) {
        assert_eq!(self.n, rhs.n, "dimension mismatch in add_assign");
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a = *a + b;
        }
    }
}

impl<T: Real> SubAssign<&CMatrix<T>> for CMatrix<T> {
    fn sub_assign(&mut self, rhs: &CMatrix<T>) {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sub_assign");
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a = *a - b;
        }
    }
}

impl<T: Real> fmt::Debug for CMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.4e}{:+.4e}i", z.re.as_f64(), z.im.as_f64()))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn product_and_adjoint() {
        let a = CMatrix::from_row_major(vec![c(1., 1.), c(0., 2.), c(3., 0.), c(-1., 0.)]).unwrap();
        let b = CMatrix::from_row_major(vec![c(0., 1.), c(1., 0.), c(2., 0.), c(0., -1.)]).unwrap();
        let ab = &a * &b;
        assert_eq!(ab[(0, 0)], c(1., 1.) * c(0., 1.) + c(0., 2.) * c(2., 0.));
        assert_eq!(ab[(1, 1)], c(3., 0.) + c(-1., 0.) * c(0., -1.));
        let lhs = (&a * &b).adjoint();
        let rhs = &b.adjoint() * &a.adjoint();
        assert!((&lhs - &rhs).frobenius_norm() < 1e-15);
    }

    #[test]
    fn predicates() {
        let h = CMatrix::from_row_major(vec![c(1., 0.), c(0., 1.), c(0., -1.), c(2., 0.)]).unwrap();
        assert!(h.is_hermitian(1e-12));
        assert!(CMatrix::<f64>::identity(3).is_unitary(1e-12));
        assert!(!h.is_unitary(1e-12));
        assert!(CMatrix::<f64>::from_row_major(vec![c(1., 0.); 3]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let a = CMatrix::from_fn(4, |i, j| c(1.0 / (1 + i + j) as f64, (i as f64 - j as f64) * 0.3));
        let inv = a.inverse(1e-14).unwrap();
        assert!((&(&a * &inv) - &CMatrix::identity(4)).frobenius_norm() < 1e-10);
        let singular = CMatrix::from_fn(3, |_, j| c(j as f64, 0.0));
        assert!(singular.inverse(1e-12).is_none());
    }
}
