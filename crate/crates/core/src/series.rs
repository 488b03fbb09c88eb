//! Truncated power series in λ with square complex matrix coefficients.
//!
//! Coefficients do not commute, so every composition below is written as an
//! ordered Cauchy product. All operations truncate at the common order `K`.

use num_complex::Complex;

use crate::blockstruct::BlockPartition;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 8;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 3;

/// `C₀ + λC₁ + … + λᴷC_K`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSeries<T: Real> {
    coeffs: Vec<CMatrix<T>>,
}

impl<T: Real> MatrixSeries<T> {
    pub fn new(coeffs: Vec<CMatrix<T>>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::Dimension("series needs at least one coefficient".into()));
        };
        if coeffs.len() > MAX_ORDER + 1 {
            return Err(Error::Dimension(format!(
                "order {} exceeds the supported maximum {MAX_ORDER}",
                coeffs.len() - 1
            )));
        }
        let n = first.dim();
        if coeffs.iter().any(|c| c.dim() != n) {
            return Err(Error::Dimension("series coefficients differ in dimension".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(n: usize, order: usize) -> Self {
        Self {
            coeffs: vec![CMatrix::zeros(n); order + 1],
        }
    }

    pub fn identity(n: usize, order: usize) -> Self {
        Self::constant(CMatrix::identity(n), order)
    }

    pub fn constant(c: CMatrix<T>, order: usize) -> Self {
        let n = c.dim();
        let mut s = Self::zero(n, order);
        s.coeffs[0] = c;
        s
    }

    /// `H₀ + λH₁`, padded with zeros to `order`.
    pub fn linear(c0: CMatrix<T>, c1: CMatrix<T>, order: usize) -> Result<Self> {
        c0.ensure_same_dim(&c1)?;
        let mut s = Self::constant(c0, order);
        if order >= 1 {
            s.coeffs[1] = c1;
        }
        Ok(s)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn coeffs(&self) -> &[CMatrix<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &CMatrix<T> {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<CMatrix<T>> {
        self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: CMatrix<T>) {
        assert_eq!(c.dim(), self.dim());
        self.coeffs[k] = c;
    }

    /// Keeps the coefficients of order `≤ order`.
    pub fn truncate(&self, order: usize) -> Self {
        Self {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&CMatrix<T>) -> CMatrix<T>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Coefficientwise conjugate transpose (λ is real).
    pub fn adjoint(&self) -> Self {
        self.map(CMatrix::adjoint)
    }

    /// Coefficientwise `B(·)`.
    pub fn block_project(&self, p: &BlockPartition) -> Result<Self> {
        p.check_dim(&self.coeffs[0])?;
        Ok(self.map(|c| p.project_unchecked(c)))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|c| c.scale(s))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() || self.order() != other.order() {
            return Err(Error::Dimension(format!(
                "series shapes differ: n={} K={} vs n={} K={}",
                self.dim(),
                self.order(),
                other.dim(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Partial sum `Σₖ λᵏ Cₖ` over the retained orders.
    pub fn evaluate(&self, lambda: T) -> CMatrix<T> {
        self.evaluate_to(lambda, self.order())
    }

    /// Partial sum `Σ_{k ≤ order} λᵏ Cₖ` (Horner).
    pub fn evaluate_to(&self, lambda: T, order: usize) -> CMatrix<T> {
        let top = order.min(self.order());
        let mut acc = self.coeffs[top].clone();
        for k in (0..top).rev() {
            acc = acc.scale_real(lambda);
            acc += &self.coeffs[k];
        }
        acc
    }

    /// Largest coefficientwise Frobenius distance.
    pub fn max_coeff_distance(&self, other: &Self) -> Result<T> {
        self.check_compatible(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).frobenius_norm())
            .fold(T::zero(), T::max))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let k_max = self.order();
        let n = self.dim();
        let coeffs = (0..=k_max)
            .map(|k| {
                let mut acc = CMatrix::zeros(n);
                for i in 0..=k {
                    acc += &(&self.coeffs[i] * &other.coeffs[k - i]);
                }
                acc
            })
            .collect();
        Self { coeffs }
    }

    fn ensure_constant(&self, want: &CMatrix<T>, what: &str) -> Result<()> {
        let dev = (&self.coeffs[0] - want).frobenius_norm();
        let tol = T::epsilon() * T::lit(64.0) * T::lit(self.dim() as f64);
        if dev <= tol {
            Ok(())
        } else {
            Err(Error::Normalization(format!(
                "{what}: constant term off by {:.3e}",
                dev.as_f64()
            )))
        }
    }
}

/// Cauchy product truncated at the common order.
pub fn series_mul<T: Real>(a: &MatrixSeries<T>, b: &MatrixSeries<T>) -> Result<MatrixSeries<T>> {
    a.check_compatible(b)?;
    Ok(a.mul_unchecked(b))
}

/// `Σ_{m ≥ 0} c_m Wᵐ` for `W` with zero constant term.
fn substitute<T: Real>(w: &MatrixSeries<T>, coeff: impl Fn(usize) -> Complex<T>) -> MatrixSeries<T> {
    let (n, k) = (w.dim(), w.order());
    let mut out = MatrixSeries::identity(n, k).scale(coeff(0));
    let mut power = MatrixSeries::identity(n, k);
    for m in 1..=k {
        power = power.mul_unchecked(w);
        out = MatrixSeries {
            coeffs: out
                .coeffs
                .iter()
                .zip(&power.coeffs)
                .map(|(o, p)| o + &p.scale(coeff(m)))
                .collect(),
        };
    }
    out
}

/// `A^{−1/2}` for `A = I + W`, via the binomial series of `(1 + x)^{−1/2}`.
pub fn series_inv_sqrt<T: Real>(a: &MatrixSeries<T>) -> Result<MatrixSeries<T>> {
    let id = CMatrix::identity(a.dim());
    a.ensure_constant(&id, "series_inv_sqrt needs A0 = I")?;
    let mut w = a.clone();
    w.coeffs[0] = CMatrix::zeros(a.dim());
    // binom(−1/2, m) = binom(−1/2, m−1) · (1/2 − m) / m
    let mut binom = vec![T::one()];
    for m in 1..=a.order() {
        let prev = binom[m - 1];
        binom.push(prev * (T::lit(0.5) - T::lit(m as f64)) / T::lit(m as f64));
    }
    Ok(substitute(&w, |m| Complex::new(binom[m], T::zero())))
}

/// The series of `e^{−iG(λ)}` for `G` with zero constant term.
pub fn series_exp<T: Real>(g: &MatrixSeries<T>) -> Result<MatrixSeries<T>> {
    g.ensure_constant(&CMatrix::zeros(g.dim()), "series_exp needs G0 = 0")?;
    let mut a = g.scale(-Complex::i());
    a.coeffs[0] = CMatrix::zeros(g.dim());
    let mut fact = T::one();
    let inv_fact: Vec<T> = (0..=g.order())
        .map(|m| {
            if m > 0 {
                fact = fact * T::lit(m as f64);
            }
            fact.recip()
        })
        .collect();
    Ok(substitute(&a, |m| Complex::new(inv_fact[m], T::zero())))
}

/// The series `G` with `e^{−iG} = U`, for `U` with constant term `I`.
pub fn series_log<T: Real>(u: &MatrixSeries<T>) -> Result<MatrixSeries<T>> {
    let n = u.dim();
    u.ensure_constant(&CMatrix::identity(n), "series_log needs U0 = I")?;
    let mut w = u.clone();
    w.coeffs[0] = CMatrix::zeros(n);
    // log(1 + W) = Σ (−1)^{m+1} Wᵐ / m, then G = i·log U
    let log = substitute(&w, |m| {
        if m == 0 {
            Complex::new(T::zero(), T::zero())
        } else {
            let sign = if m % 2 == 1 { T::one() } else { -T::one() };
            Complex::new(sign / T::lit(m as f64), T::zero())
        }
    });
    Ok(log.scale(Complex::i()))
}
