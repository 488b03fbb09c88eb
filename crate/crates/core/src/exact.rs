//! Non-perturbative least-action block diagonalization.
//!
//! With `X` the eigenvector matrix of `H`, the unitary closest to the identity
//! that block-diagonalizes `H` is
//!
//! ```text
//! T = X · B(X†) · (B(X) B(X†))^{−1/2},    H_block = T† H T
//! ```
//!
//! The formula is invariant under `X → X·V` for block-diagonal unitary `V`, so
//! any eigenvector gauge with the right block assignment gives the same `T`.

use num_complex::Complex;

use crate::blockstruct::{off_block_norm, BlockPartition};
use crate::error::{Error, Result};
use crate::matfun::{align_eigenvectors_with, hermitian_eig_with, hpd_inv_sqrt_with, unitary_log_principal_with};
use crate::matrix::CMatrix;
use crate::random::{random_block_unitary, rng_from_seed};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics<T: Real> {
    /// `‖H_block − B(H_block)‖_F`
    pub off_block_residual: T,
    /// `‖T†T − I‖_F`
    pub unitarity_residual: T,
    /// `‖T − I‖_F`
    pub distance_to_identity: T,
}

#[derive(Clone, Debug)]
pub struct BlockDiagResult<T: Real> {
    pub t: CMatrix<T>,
    pub h_block: CMatrix<T>,
    /// Generator with `T = e^{−iS}`, filled by [`BlockDiagResult::with_generator`].
    pub s: Option<CMatrix<T>>,
    pub diagnostics: Diagnostics<T>,
    /// Eigenvalues of `H` paired with the aligned eigenvector columns.
    pub eigenvalues: Vec<T>,
    tol: Tolerances<T>,
}

impl<T: Real> BlockDiagResult<T> {
    pub fn with_generator(mut self) -> Result<Self> {
        self.s = Some(extract_generator(&self)?);
        Ok(self)
    }
}

/// `X·B(X†)·(B(X)B(X†))^{−1/2}` for an arbitrary gauge of the eigenvector matrix.
pub fn least_action_unitary<T: Real>(x: &CMatrix<T>, p: &BlockPartition, tol: &Tolerances<T>) -> Result<CMatrix<T>> {
    p.check_dim(x)?;
    let bx = p.project_unchecked(x);
    let bxd = bx.adjoint();
    let gram = (&bx * &bxd).hermitian_part();
    let r = hpd_inv_sqrt_with(&gram, tol)?;
    Ok(&(x * &bxd) * &r)
}

/// Right-hand side of `H_block = (BB†)^{−1/2} B(X) · X†HX · B(X†) (BB†)^{−1/2}`,
/// assembled factor by factor.
pub fn h_block_explicit<T: Real>(
    h: &CMatrix<T>,
    x: &CMatrix<T>,
    p: &BlockPartition,
    tol: &Tolerances<T>,
) -> Result<CMatrix<T>> {
    p.check_dim(h)?;
    let bx = p.project_unchecked(x);
    let bxd = bx.adjoint();
    let r = hpd_inv_sqrt_with(&(&bx * &bxd).hermitian_part(), tol)?;
    let rotated = &(&x.adjoint() * h) * x;
    let left = &r * &bx;
    let right = &bxd * &r;
    Ok(&(&left * &rotated) * &right)
}

/// Least-action transform of `H` for partition `P`.
pub fn cederbaum_transform<T: Real>(h: &CMatrix<T>, p: &BlockPartition) -> Result<BlockDiagResult<T>> {
    cederbaum_transform_with(h, p, &Tolerances::default())
}

pub fn cederbaum_transform_with<T: Real>(
    h: &CMatrix<T>,
    p: &BlockPartition,
    tol: &Tolerances<T>,
) -> Result<BlockDiagResult<T>> {
    p.check_dim(h)?;
    let eig = hermitian_eig_with(h, tol.hermitian)?;
    let aligned = align_eigenvectors_with(&eig, p, tol.ambiguity)?;
    let x = &aligned.vectors;
    let t = least_action_unitary(x, p, tol)?;

    if cfg!(debug_assertions) {
        // diagonal phases are a block-diagonal gauge change; T must not move
        let n = x.dim();
        let phased = CMatrix::from_fn(n, |i, j| {
            x[(i, j)] * Complex::from_polar(T::one(), T::lit(0.37 * (j + 1) as f64))
        });
        let t2 = least_action_unitary(&phased, p, tol)?;
        let dev = (&t - &t2).frobenius_norm();
        if dev > T::lit(1e3) * T::epsilon() * T::lit(n as f64) {
            return Err(Error::Internal(format!(
                "least-action unitary depends on eigenvector gauge ({:.3e})",
                dev.as_f64()
            )));
        }
    }

    let h_block = (&(&t.adjoint() * h) * &t).hermitian_part();
    let diagnostics = Diagnostics {
        off_block_residual: off_block_norm(&h_block, p)?,
        unitarity_residual: t.unitary_deviation(),
        distance_to_identity: (&t - &CMatrix::identity(t.dim())).frobenius_norm(),
    };
    Ok(BlockDiagResult {
        t,
        h_block,
        s: None,
        diagnostics,
        eigenvalues: aligned.eigenvalues,
        tol: *tol,
    })
}

/// Principal generator `S` with `e^{−iS} = T`.
pub fn extract_generator<T: Real>(r: &BlockDiagResult<T>) -> Result<CMatrix<T>> {
    unitary_log_principal_with(&r.t, &r.tol)
}

/// `min_V ‖T·V − I‖_F − ‖T − I‖_F` over the given block-diagonal unitaries.
/// Zero for an empty set.
pub fn minimality_gap_over<T: Real>(r: &BlockDiagResult<T>, candidates: &[CMatrix<T>]) -> T {
    let id = CMatrix::identity(r.t.dim());
    let base = r.diagnostics.distance_to_identity;
    candidates
        .iter()
        .map(|v| (&(&r.t * v) - &id).frobenius_norm() - base)
        .reduce(T::min)
        .unwrap_or(T::zero())
}

/// Sampled certificate of the least-action property: draws `trials` Haar
/// block-diagonal unitaries `V` (seeded) and returns
/// `min ‖T·V − I‖_F − ‖T − I‖_F`, which should never be negative.
pub fn minimality_gap<T: Real>(r: &BlockDiagResult<T>, p: &BlockPartition, trials: usize, seed: u64) -> T {
    let mut rng = rng_from_seed(seed);
    let id = CMatrix::identity(r.t.dim());
    let base = r.diagnostics.distance_to_identity;
    (0..trials)
        .map(|_| {
            let v = random_block_unitary::<T>(p, &mut rng);
            (&(&r.t * &v) - &id).frobenius_norm() - base
        })
        .reduce(T::min)
        .unwrap_or(T::zero())
}
