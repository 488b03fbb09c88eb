//! Block diagonalization of Hermitian matrices.
//!
//! Two ways of choosing the block-diagonalizing unitary `T` (with
//! `H_block = T†·H·T`) are implemented side by side:
//!
//! * **least action**: the `T` closest to the identity, available in closed
//!   form from the eigenvector matrix ([`exact`]) and as a power series in the
//!   perturbation strength ([`perturb`]);
//! * **block-off-diagonal generator**: `T = e^{−iS}` with `B(S) = 0`, built
//!   order by order ([`perturb::s_series_block_offdiag`]).
//!
//! The numerical core is generic over the real scalar ([`Real`], implemented
//! for `f32` and `f64`); the aliases below fix it to `f64`, which is what the
//! experiment harness and the CLI use.

// `!(x > tol)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blockstruct;
pub mod error;
pub mod exact;
pub mod harness;
pub mod matfun;
pub mod matrix;
pub mod perturb;
pub mod random;
pub mod scalar;
pub mod series;
pub mod tolerance;

pub use blockstruct::{block_project, is_block_diagonal, off_block_norm, BlockPartition};
pub use error::{Error, Result};
pub use exact::{cederbaum_transform, extract_generator, minimality_gap, BlockDiagResult};
pub use matfun::{align_eigenvectors, hermitian_eig, hpd_inv_sqrt, matrix_exp_i, unitary_log_principal, Eigendecomposition};
pub use matrix::CMatrix;
pub use perturb::{
    h_block_from_generators, s_series_block_offdiag, s_series_least_action, t_series_least_action, z_series,
    GeneratorKind, GeneratorSeries, PerturbedHamiltonian,
};
pub use scalar::Real;
pub use series::{series_exp, series_inv_sqrt, series_log, series_mul, MatrixSeries};
pub use tolerance::Tolerances;

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;
pub type Matrix = CMatrix<f64>;
pub type Matrix32 = CMatrix<f32>;
pub type Series = MatrixSeries<f64>;
pub type Series32 = MatrixSeries<f32>;
pub type Generator = GeneratorSeries<f64>;
pub type Hamiltonian = PerturbedHamiltonian<f64>;
pub type Decomposition = Eigendecomposition<f64>;
pub type Transform = BlockDiagResult<f64>;
