//! Configurable numerical thresholds.

use crate::scalar::Real;

/// Thresholds shared by the matrix functions, the series builders and the
/// exact transform. Defaults are the double-precision values; `f32` widens
/// the ones that would sit below its rounding floor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T: Real> {
    /// Relative hermiticity tolerance on inputs.
    pub hermitian: T,
    /// Unitarity tolerance for `unitary_log_principal` inputs.
    pub unitary: T,
    /// Smallest admissible eigenvalue in `hpd_inv_sqrt`.
    pub eps_pd: T,
    /// Refuse a unitary logarithm when an eigenvalue lies this close to −1.
    pub neg_one_cutoff: T,
    /// Level gaps below `gap_tol_rel · ‖H₀‖₂` count as degenerate.
    pub gap_tol_rel: T,
    /// Minimum separation of competing block weights in gauge alignment.
    pub ambiguity: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        let floor = |x: f64, ulps: f64| T::lit(x).max(T::epsilon() * T::lit(ulps));
        Self {
            hermitian: T::check_tol(),
            unitary: floor(1e-10, 100.0),
            eps_pd: floor(1e-10, 10.0),
            neg_one_cutoff: floor(1e-8, 10.0),
            gap_tol_rel: floor(1e-8, 100.0),
            ambiguity: floor(1e-10, 10.0),
        }
    }
}
