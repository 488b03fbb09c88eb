//! Perturbative block diagonalization of `H = H₀ + λH₁`.
//!
//! Two generator prescriptions are built here:
//!
//! * least action: the series of `T = X·B(X†)·(B(X)B(X†))^{−1/2}` with
//!   `X = e^{−iZ}` the perturbative diagonalizer, and `S = i·log T`;
//! * block-off-diagonal: the unique `S` with `B(S) = 0` at every order that
//!   makes `e^{iS} H e^{−iS}` block diagonal.
//!
//! Both series agree through λ². At λ³ the least-action generator acquires a
//! block-diagonal part once there are three or more blocks.
//!
//! Energy denominators need a diagonal `H₀`. A block-diagonal but
//! non-diagonal `H₀` is first rotated into its block-wise eigenbasis `W`;
//! since `W` is block diagonal it commutes with `B`, and results are rotated
//! back with `W`.

pub mod transcribed;

use num_complex::Complex;

use crate::blockstruct::{off_block_norm, BlockPartition};
use crate::error::{Error, Result};
use crate::matfun::hermitian_eig_with;
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::series::{series_exp, series_inv_sqrt, series_log, series_mul, MatrixSeries, MAX_ORDER};
use crate::tolerance::Tolerances;

/// `H₀ + λH₁` with `H₀` block diagonal with respect to `partition`.
#[derive(Clone, Debug)]
pub struct PerturbedHamiltonian<T: Real> {
    h0: CMatrix<T>,
    h1: CMatrix<T>,
    partition: BlockPartition,
    tol: Tolerances<T>,
}

impl<T: Real> PerturbedHamiltonian<T> {
    pub fn new(h0: CMatrix<T>, h1: CMatrix<T>, partition: BlockPartition) -> Result<Self> {
        Self::with_tolerances(h0, h1, partition, Tolerances::default())
    }

    pub fn with_tolerances(
        h0: CMatrix<T>,
        h1: CMatrix<T>,
        partition: BlockPartition,
        tol: Tolerances<T>,
    ) -> Result<Self> {
        partition.check_dim(&h0)?;
        partition.check_dim(&h1)?;
        h0.ensure_hermitian(tol.hermitian)?;
        h1.ensure_hermitian(tol.hermitian)?;
        let off = off_block_norm(&h0, &partition)?;
        if off > tol.hermitian * h0.frobenius_norm() {
            return Err(Error::Dimension(format!(
                "H0 is not block diagonal for partition {partition}: off-block norm {:.3e}",
                off.as_f64()
            )));
        }
        Ok(Self {
            h0: h0.hermitian_part(),
            h1: h1.hermitian_part(),
            partition,
            tol,
        })
    }

    pub fn h0(&self) -> &CMatrix<T> {
        &self.h0
    }

    pub fn h1(&self) -> &CMatrix<T> {
        &self.h1
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    pub fn tolerances(&self) -> &Tolerances<T> {
        &self.tol
    }

    /// `H₀ + λH₁`.
    pub fn at(&self, lambda: T) -> CMatrix<T> {
        &self.h0 + &self.h1.scale_real(lambda)
    }

    pub fn as_series(&self, order: usize) -> MatrixSeries<T> {
        MatrixSeries::linear(self.h0.clone(), self.h1.clone(), order).expect("dimensions checked")
    }

    /// Block-wise eigenbasis of `H₀`; identity (`None`) when `H₀` is already diagonal.
    fn working_frame(&self) -> Result<WorkingFrame<T>> {
        let n = self.h0.dim();
        if self.h0.off_diagonal_norm() <= self.tol.hermitian * self.h0.frobenius_norm() {
            return Ok(WorkingFrame {
                rotation: None,
                energies: self.h0.diagonal().iter().map(|z| z.re).collect(),
                h1: self.h1.clone(),
            });
        }
        let mut w = CMatrix::zeros(n);
        for block in self.partition.blocks() {
            let sub = CMatrix::from_fn(block.len(), |a, b| self.h0[(block[a], block[b])]);
            let eig = hermitian_eig_with(&sub, self.tol.hermitian)?;
            for (a, &i) in block.iter().enumerate() {
                for (b, &j) in block.iter().enumerate() {
                    w[(i, j)] = eig.vectors[(a, b)];
                }
            }
        }
        let h0w = &(&w.adjoint() * &self.h0) * &w;
        if h0w.off_diagonal_norm() > T::lit(1e3) * T::epsilon() * self.h0.frobenius_norm().max(T::one()) {
            return Err(Error::Internal(format!(
                "H0 not diagonal after block-wise reduction (off-diagonal norm {:.3e})",
                h0w.off_diagonal_norm().as_f64()
            )));
        }
        let h1w = (&(&w.adjoint() * &self.h1) * &w).hermitian_part();
        Ok(WorkingFrame {
            energies: h0w.diagonal().iter().map(|z| z.re).collect(),
            rotation: Some(w),
            h1: h1w,
        })
    }

    fn gap_tol(&self, energies: &[T]) -> T {
        let spectral = energies.iter().fold(T::zero(), |a, e| a.max(e.abs()));
        self.tol.gap_tol_rel * spectral
    }
}

struct WorkingFrame<T: Real> {
    rotation: Option<CMatrix<T>>,
    energies: Vec<T>,
    h1: CMatrix<T>,
}

/// Which prescription produced a generator series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `Z` with `X = e^{−iZ}` diagonalizing `H`; `diag(z_k) = 0`.
    ZFullDiag,
    /// Generator of the least-action transform.
    SLeastAction,
    /// Generator constrained by `B(S) = 0`.
    SBlockOffdiag,
}

/// `λs₁ + λ²s₂ + …` with Hermitian coefficients.
#[derive(Clone, Debug)]
pub struct GeneratorSeries<T: Real> {
    pub kind: GeneratorKind,
    pub series: MatrixSeries<T>,
    /// Block-diagonal unitary `W` relating the basis of `series` to the input
    /// basis (`A_input = W·A·W†`); `None` when they coincide.
    pub frame: Option<CMatrix<T>>,
}

impl<T: Real> GeneratorSeries<T> {
    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn coeff(&self, k: usize) -> &CMatrix<T> {
        self.series.coeff(k)
    }

    /// Coefficients rotated into the input basis.
    pub fn in_input_basis(&self) -> MatrixSeries<T> {
        match &self.frame {
            None => self.series.clone(),
            Some(w) => to_input_basis(&self.series, w),
        }
    }
}

fn to_input_basis<T: Real>(s: &MatrixSeries<T>, w: &CMatrix<T>) -> MatrixSeries<T> {
    let wd = w.adjoint();
    s.map(|c| &(w * c) * &wd)
}

fn to_working_basis<T: Real>(a: &CMatrix<T>, w: &CMatrix<T>) -> CMatrix<T> {
    &(&w.adjoint() * a) * w
}

fn check_order(k: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&k) {
        Ok(())
    } else {
        Err(Error::Dimension(format!("order {k} outside 1..={MAX_ORDER}")))
    }
}

/// Order-by-order construction of a Hermitian generator `S` (with zero
/// constant term) such that the entries `(m, n)` selected by `rotate` vanish
/// in every coefficient of `e^{iS}·H·e^{−iS}`.
///
/// At order `k` the conjugated series equals `i[s_k, H₀] + R_k`, where `R_k`
/// depends only on lower orders. With `H₀ = diag(E)` the selected entries of
/// `s_k` are therefore `i·R_k[m][n] / (E_n − E_m)`; all other entries stay 0.
fn eliminate<T: Real>(
    energies: &[T],
    h1: &CMatrix<T>,
    order: usize,
    gap_tol: T,
    rotate: impl Fn(usize, usize) -> bool,
) -> Result<MatrixSeries<T>> {
    let n = energies.len();
    for m in 0..n {
        for k in (m + 1)..n {
            if rotate(m, k) {
                let gap = (energies[k] - energies[m]).abs();
                if !(gap > gap_tol) {
                    return Err(Error::Degeneracy {
                        i: m,
                        j: k,
                        gap: gap.as_f64(),
                        tol: gap_tol.as_f64(),
                    });
                }
            }
        }
    }
    let h = MatrixSeries::linear(CMatrix::from_real_diag(energies), h1.clone(), order)?;
    let mut s = MatrixSeries::zero(n, order);
    for k in 1..=order {
        let u = series_exp(&s)?;
        let conj = series_mul(&series_mul(&u.adjoint(), &h)?, &u)?;
        let r = conj.coeff(k);
        let sk = CMatrix::from_fn(n, |a, b| {
            if a != b && rotate(a, b) {
                r[(a, b)] * Complex::i() / (energies[b] - energies[a])
            } else {
                Complex::new(T::zero(), T::zero())
            }
        });
        s.set_coeff(k, sk.hermitian_part());
    }
    Ok(s)
}

/// Generator `Z` of the exact diagonalizer `X = e^{−iZ}` as a series in λ.
///
/// The series lives in the working frame where `H₀` is diagonal (see
/// [`GeneratorSeries::frame`]). Requires all levels of `H₀` to be separated by
/// more than `gap_tol_rel · ‖H₀‖₂`.
pub fn z_series<T: Real>(ph: &PerturbedHamiltonian<T>, order: usize) -> Result<GeneratorSeries<T>> {
    check_order(order)?;
    let frame = ph.working_frame()?;
    let gap_tol = ph.gap_tol(&frame.energies);
    let series = eliminate(&frame.energies, &frame.h1, order, gap_tol, |_, _| true)?;
    Ok(GeneratorSeries {
        kind: GeneratorKind::ZFullDiag,
        series,
        frame: frame.rotation,
    })
}

/// The least-action unitary `T = X·B(X†)·(B(X)B(X†))^{−1/2}` as a series, in
/// the input basis.
pub fn t_series_least_action<T: Real>(z: &GeneratorSeries<T>, p: &BlockPartition) -> Result<MatrixSeries<T>> {
    if z.kind != GeneratorKind::ZFullDiag {
        return Err(Error::Internal(format!(
            "least-action T needs the Z generator, got {:?}",
            z.kind
        )));
    }
    let x = series_exp(&z.series)?;
    let xd = x.adjoint();
    let bx = x.block_project(p)?;
    let bxd = xd.block_project(p)?;
    let gram = series_mul(&bx, &bxd)?;
    let t = series_mul(&series_mul(&x, &bxd)?, &series_inv_sqrt(&gram)?)?;
    Ok(match &z.frame {
        None => t,
        Some(w) => to_input_basis(&t, w),
    })
}

/// Generator of the least-action transform, `S = i·log T`, truncated at `order`.
pub fn s_series_least_action<T: Real>(
    z: &GeneratorSeries<T>,
    p: &BlockPartition,
    order: usize,
) -> Result<GeneratorSeries<T>> {
    check_order(order)?;
    if order > z.order() {
        return Err(Error::Dimension(format!(
            "requested order {order} exceeds Z order {}",
            z.order()
        )));
    }
    let t = t_series_least_action(z, p)?.truncate(order);
    let s = series_log(&t)?.map(CMatrix::hermitian_part);
    Ok(GeneratorSeries {
        kind: GeneratorKind::SLeastAction,
        series: s,
        frame: None,
    })
}

/// Generator with `B(s_k) = 0` at every order, in the input basis.
///
/// Only cross-block level pairs enter the denominators, so degeneracies
/// inside a block are allowed.
pub fn s_series_block_offdiag<T: Real>(ph: &PerturbedHamiltonian<T>, order: usize) -> Result<GeneratorSeries<T>> {
    check_order(order)?;
    let frame = ph.working_frame()?;
    let gap_tol = ph.gap_tol(&frame.energies);
    let p = ph.partition();
    let s = eliminate(&frame.energies, &frame.h1, order, gap_tol, |a, b| !p.same_block(a, b))?;
    let s = match &frame.rotation {
        None => s,
        // rotating back preserves B(s_k) = 0 exactly up to rounding; re-project
        Some(w) => to_input_basis(&s, w).map(|c| p.off_block_unchecked(c).hermitian_part()),
    };
    Ok(GeneratorSeries {
        kind: GeneratorKind::SBlockOffdiag,
        series: s,
        frame: None,
    })
}

/// `e^{iS}(H₀ + λH₁)e^{−iS}` truncated at `order`.
///
/// The conjugation is carried out in the generator's frame and the result is
/// returned in the input basis.
pub fn h_block_from_generators<T: Real>(
    ph: &PerturbedHamiltonian<T>,
    s: &GeneratorSeries<T>,
    order: usize,
) -> Result<MatrixSeries<T>> {
    check_order(order)?;
    if order > s.order() {
        return Err(Error::Dimension(format!(
            "requested order {order} exceeds generator order {}",
            s.order()
        )));
    }
    let gen = s.series.truncate(order);
    let (h0, h1) = match &s.frame {
        None => (ph.h0.clone(), ph.h1.clone()),
        Some(w) => (to_working_basis(&ph.h0, w), to_working_basis(&ph.h1, w)),
    };
    let h = MatrixSeries::linear(h0, h1, order)?;
    let u = series_exp(&gen)?;
    let hb = series_mul(&series_mul(&u.adjoint(), &h)?, &u)?.map(CMatrix::hermitian_part);
    Ok(match &s.frame {
        None => hb,
        Some(w) => to_input_basis(&hb, w),
    })
}
