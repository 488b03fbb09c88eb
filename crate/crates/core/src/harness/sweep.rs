//! λ-sweeps comparing the exact transform with the perturbative series and
//! the two generator prescriptions with each other.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::blockstruct::{block_project, BlockPartition};
use crate::error::{Error, Result};
use crate::exact::{cederbaum_transform_with, extract_generator};
use crate::harness::fit::{fit_loglog_slope, LogLogFit};
use crate::harness::io::write_atomic;
use crate::matfun::matrix_exp_i;
use crate::matrix::CMatrix;
use crate::perturb::{
    h_block_from_generators, s_series_block_offdiag, s_series_least_action, t_series_least_action, z_series,
    GeneratorSeries, PerturbedHamiltonian,
};
use crate::random::generate_random_hermitian;
use crate::series::{MatrixSeries, DEFAULT_ORDER, MAX_ORDER};
use crate::tolerance::Tolerances;

/// Unperturbed spectrum of the default instance: three clustered bands.
pub const DEFAULT_SPECTRUM: [f64; 8] = [0.0, 0.3, 0.7, 2.0, 2.4, 2.9, 5.0, 5.6];
pub const DEFAULT_BLOCKS: &str = "0,1,2;3,4,5;6,7";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_LAMBDA_MIN: f64 = 1e-3;
pub const DEFAULT_LAMBDA_MAX: f64 = 1e-1;
pub const DEFAULT_LAMBDA_POINTS: usize = 12;

/// Residuals below `FLOOR_FACTOR · ε · ‖H‖_F` are excluded from slope fits.
pub const FLOOR_FACTOR: f64 = 1e3;

/// Geometric grid of λ values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LambdaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for LambdaGrid {
    fn default() -> Self {
        Self {
            min: DEFAULT_LAMBDA_MIN,
            max: DEFAULT_LAMBDA_MAX,
            points: DEFAULT_LAMBDA_POINTS,
        }
    }
}

impl LambdaGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.min > 0.0 && self.max > self.min && self.max.is_finite()) {
            return Err(Error::Parse(format!(
                "lambda grid needs 0 < min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.points < 4 {
            return Err(Error::Parse(format!(
                "lambda grid needs at least 4 points, got {}",
                self.points
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let ratio = (self.max / self.min).ln();
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.max
                } else {
                    self.min * (ratio * i as f64 / (self.points - 1) as f64).exp()
                }
            })
            .collect()
    }
}

/// Block-clustered unperturbed spectrum for an arbitrary partition.
///
/// The default three-block partition gets [`DEFAULT_SPECTRUM`]; otherwise the
/// `k`-th index of block `b` sits at `2.5·b + 0.3·k + 0.05·k²`.
pub fn default_spectrum(p: &BlockPartition) -> Vec<f64> {
    if p.to_string() == DEFAULT_BLOCKS {
        return DEFAULT_SPECTRUM.to_vec();
    }
    let mut e = vec![0.0; p.n()];
    for (b, block) in p.blocks().iter().enumerate() {
        let mut idx = block.clone();
        idx.sort_unstable();
        for (k, &i) in idx.iter().enumerate() {
            let k = k as f64;
            e[i] = 2.5 * b as f64 + 0.3 * k + 0.05 * k * k;
        }
    }
    e
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub partition: BlockPartition,
    pub seed: u64,
    pub lambda_grid: LambdaGrid,
    pub order: usize,
    /// Target `‖H₁‖_F` for a generated perturbation.
    pub norm_scale: f64,
    /// Explicit `H₀`; `None` uses [`default_spectrum`].
    pub h0: Option<CMatrix<f64>>,
    /// Explicit `H₁`; `None` draws a seeded GUE matrix.
    pub h1: Option<CMatrix<f64>>,
    pub gap_tol: Option<f64>,
    pub eps_pd: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::for_partition(BlockPartition::parse(DEFAULT_BLOCKS).expect("default partition"), DEFAULT_SEED)
    }
}

impl ExperimentConfig {
    pub fn for_partition(partition: BlockPartition, seed: u64) -> Self {
        Self {
            partition,
            seed,
            lambda_grid: LambdaGrid::default(),
            order: DEFAULT_ORDER,
            norm_scale: 1.0,
            h0: None,
            h1: None,
            gap_tol: None,
            eps_pd: None,
        }
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn validate(&self) -> Result<()> {
        self.lambda_grid.validate()?;
        if !(1..=MAX_ORDER).contains(&self.order) {
            return Err(Error::Parse(format!("order must lie in 1..={MAX_ORDER}, got {}", self.order)));
        }
        if !(self.norm_scale > 0.0 && self.norm_scale.is_finite()) {
            return Err(Error::Parse(format!("norm scale must be positive, got {}", self.norm_scale)));
        }
        for (name, m) in [("H0", &self.h0), ("H1", &self.h1)] {
            if let Some(m) = m {
                if m.dim() != self.n() {
                    return Err(Error::Dimension(format!(
                        "{name} is {0}x{0} but the partition covers {1} indices",
                        m.dim(),
                        self.n()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances<f64> {
        let mut tol = Tolerances::default();
        if let Some(g) = self.gap_tol {
            tol.gap_tol_rel = g;
        }
        if let Some(e) = self.eps_pd {
            tol.eps_pd = e;
        }
        tol
    }

    pub fn instance(&self) -> Result<PerturbedHamiltonian<f64>> {
        self.validate()?;
        let h0 = match &self.h0 {
            Some(m) => m.clone(),
            None => CMatrix::from_real_diag(&default_spectrum(&self.partition)),
        };
        let h1 = match &self.h1 {
            Some(m) => m.clone(),
            None => generate_random_hermitian(self.n(), self.seed, self.norm_scale)?,
        };
        PerturbedHamiltonian::with_tolerances(h0, h1, self.partition.clone(), self.tolerances())
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            n: self.n(),
            blocks: self.partition.to_string(),
            seed: self.seed,
            lambda_grid: self.lambda_grid,
            order: self.order,
            norm_scale: self.norm_scale,
            h0: if self.h0.is_some() { "explicit" } else { "default-spectrum" },
            h1: if self.h1.is_some() { "explicit" } else { "seeded-gue" },
            gap_tol: self.tolerances().gap_tol_rel,
            eps_pd: self.tolerances().eps_pd,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub blocks: String,
    pub seed: u64,
    pub lambda_grid: LambdaGrid,
    pub order: usize,
    pub norm_scale: f64,
    pub h0: &'static str,
    pub h1: &'static str,
    pub gap_tol: f64,
    pub eps_pd: f64,
}

/// Every perturbative object of one instance, built once per sweep.
#[derive(Clone, Debug)]
pub struct SeriesBundle {
    pub z: GeneratorSeries<f64>,
    pub t_least_action: MatrixSeries<f64>,
    pub s_least_action: GeneratorSeries<f64>,
    pub s_block_offdiag: GeneratorSeries<f64>,
    pub h_least_action: MatrixSeries<f64>,
    pub h_block_offdiag: MatrixSeries<f64>,
}

pub fn build_series(ph: &PerturbedHamiltonian<f64>, order: usize) -> Result<SeriesBundle> {
    let p = ph.partition();
    let z = z_series(ph, order)?;
    let t_least_action = t_series_least_action(&z, p)?;
    let s_least_action = s_series_least_action(&z, p, order)?;
    let s_block_offdiag = s_series_block_offdiag(ph, order)?;
    let h_least_action = h_block_from_generators(ph, &s_least_action, order)?;
    let h_block_offdiag = h_block_from_generators(ph, &s_block_offdiag, order)?;
    Ok(SeriesBundle {
        z,
        t_least_action,
        s_least_action,
        s_block_offdiag,
        h_least_action,
        h_block_offdiag,
    })
}

/// Per-order norms of the generator coefficients.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorDiagnostics {
    pub order: usize,
    pub norm_s_least_action: f64,
    pub norm_block_part_least_action: f64,
    pub norm_block_part_block_offdiag: f64,
    pub norm_difference: f64,
}

pub fn generator_diagnostics(bundle: &SeriesBundle, p: &BlockPartition) -> Result<Vec<GeneratorDiagnostics>> {
    (1..=bundle.s_least_action.order())
        .map(|k| {
            let la = bundle.s_least_action.coeff(k);
            let sw = bundle.s_block_offdiag.coeff(k);
            Ok(GeneratorDiagnostics {
                order: k,
                norm_s_least_action: la.frobenius_norm(),
                norm_block_part_least_action: block_project(la, p)?.frobenius_norm(),
                norm_block_part_block_offdiag: block_project(sw, p)?.frobenius_norm(),
                norm_difference: (la - sw).frobenius_norm(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub lambda: f64,
    pub residual: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeEntry {
    pub residual: String,
    /// `None` when too few residuals clear the floor guard.
    pub exponent: Option<f64>,
    pub r_squared: Option<f64>,
    pub points_used: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportMetadata {
    pub version: &'static str,
    pub config: ConfigEcho,
    pub generators: Vec<GeneratorDiagnostics>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub rows: Vec<ReportRow>,
    pub slopes: Vec<SlopeEntry>,
    pub metadata: ReportMetadata,
    #[serde(skip)]
    h_norms: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct ReportSidecar<'a> {
    slopes: &'a [SlopeEntry],
    metadata: &'a ReportMetadata,
}

impl SweepReport {
    pub fn slope(&self, residual: &str) -> Option<&SlopeEntry> {
        self.slopes.iter().find(|s| s.residual == residual)
    }

    pub fn values(&self, residual: &str) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.residual == residual)
            .map(|r| (r.lambda, r.value))
            .collect()
    }

    /// `‖H(λ)‖_F` at each grid point, in grid order.
    pub fn h_norms(&self) -> &[(f64, f64)] {
        &self.h_norms
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,residual,value\n");
        for r in &self.rows {
            let _ = writeln!(out, "{:e},{},{:e}", r.lambda, r.residual, r.value);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let sidecar = ReportSidecar {
            slopes: &self.slopes,
            metadata: &self.metadata,
        };
        let mut s = serde_json::to_string_pretty(&sidecar).expect("report values are finite");
        s.push('\n');
        s
    }

    /// Writes `sweep.csv` and/or `sweep.json` into `dir`; returns the paths.
    pub fn write(&self, dir: &Path, csv: bool, json: bool) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        if csv {
            let p = dir.join("sweep.csv");
            write_atomic(&p, self.to_csv().as_bytes())?;
            written.push(p);
        }
        if json {
            let p = dir.join("sweep.json");
            write_atomic(&p, self.to_json().as_bytes())?;
            written.push(p);
        }
        Ok(written)
    }
}

/// Residual names in report order for truncation order `k`.
pub fn residual_names(order: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=order).map(|k| format!("r_T{k}")).collect();
    names.extend(["r_H", "r_split", "r_BS"].map(String::from));
    names
}

fn at_lambda(lambda: f64) -> impl Fn(Error) -> Error {
    move |e| Error::AtLambda {
        lambda,
        source: Box::new(e),
    }
}

/// Residuals at one λ, in [`residual_names`] order.
pub fn residuals_at(
    ph: &PerturbedHamiltonian<f64>,
    bundle: &SeriesBundle,
    lambda: f64,
) -> Result<Vec<f64>> {
    let p = ph.partition();
    let order = bundle.s_least_action.order();
    let h = ph.at(lambda);
    let exact = cederbaum_transform_with(&h, p, ph.tolerances())?;
    let s_exact = extract_generator(&exact)?;

    let mut out = Vec::with_capacity(order + 3);
    for k in 1..=order {
        out.push((&exact.t - &bundle.t_least_action.evaluate_to(lambda, k)).frobenius_norm());
    }
    out.push((&exact.h_block - &bundle.h_least_action.evaluate(lambda)).frobenius_norm());
    let u_la = matrix_exp_i(&bundle.s_least_action.series.evaluate(lambda))?;
    let u_sw = matrix_exp_i(&bundle.s_block_offdiag.series.evaluate(lambda))?;
    out.push((&u_la - &u_sw).frobenius_norm());
    out.push(block_project(&s_exact, p)?.frobenius_norm());
    Ok(out)
}

/// Runs the full sweep for `cfg`. Grid points are evaluated in parallel and
/// reassembled in grid order; the first failing λ (in grid order) aborts the
/// sweep.
pub fn sweep_divergence(cfg: &ExperimentConfig) -> Result<SweepReport> {
    let ph = cfg.instance()?;
    let bundle = build_series(&ph, cfg.order)?;
    let grid = cfg.lambda_grid.values();
    let names = residual_names(cfg.order);

    let results: Vec<Result<Vec<f64>>> = grid
        .par_iter()
        .map(|&l| residuals_at(&ph, &bundle, l).map_err(at_lambda(l)))
        .collect();

    let mut rows = Vec::with_capacity(grid.len() * names.len());
    let mut h_norms = Vec::with_capacity(grid.len());
    for (&lambda, res) in grid.iter().zip(results) {
        let values = res?;
        for (name, &value) in names.iter().zip(&values) {
            if !(value.is_finite() && value >= 0.0) {
                return Err(at_lambda(lambda)(Error::Internal(format!("residual {name} = {value}"))));
            }
            rows.push(ReportRow {
                lambda,
                residual: name.clone(),
                value,
            });
        }
        h_norms.push((lambda, ph.at(lambda).frobenius_norm()));
    }

    let slopes = names
        .iter()
        .map(|name| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| &r.residual == name)
                .zip(&h_norms)
                .filter(|(r, (_, hn))| r.value > FLOOR_FACTOR * f64::EPSILON * hn)
                .map(|(r, _)| (r.lambda, r.value))
                .collect();
            let used = pts.len();
            match fit_loglog_slope(&pts) {
                Ok(LogLogFit { exponent, r_squared, .. }) => SlopeEntry {
                    residual: name.clone(),
                    exponent: Some(exponent),
                    r_squared: Some(r_squared),
                    points_used: used,
                },
                Err(_) => SlopeEntry {
                    residual: name.clone(),
                    exponent: None,
                    r_squared: None,
                    points_used: used,
                },
            }
        })
        .collect();

    Ok(SweepReport {
        rows,
        slopes,
        metadata: ReportMetadata {
            version: env!("CARGO_PKG_VERSION"),
            config: cfg.echo(),
            generators: generator_diagnostics(&bundle, ph.partition())?,
        },
        h_norms,
    })
}
