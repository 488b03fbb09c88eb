//! Experiment engine: seeded instances, λ-sweeps, slope fits and reports.

pub mod fit;
pub mod io;
pub mod sweep;

pub use crate::random::generate_random_hermitian;
pub use fit::{fit_loglog_slope, LogLogFit};
pub use io::{matrix_to_json, parse_matrix_json, read_matrix_json, write_atomic, write_matrix_json};
pub use sweep::{
    build_series, default_spectrum, residual_names, residuals_at, sweep_divergence, ExperimentConfig, LambdaGrid,
    SeriesBundle, SweepReport,
};
