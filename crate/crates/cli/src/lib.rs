//! Argument handling and dispatch for the `blockdiag` binary.
//!
//! Exit codes: 0 success, 2 input or parse error, 3 numerical error,
//! 4 internal invariant violation.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use blockdiag::exact::cederbaum_transform_with;
use blockdiag::harness::sweep::{generator_diagnostics, DEFAULT_BLOCKS};
use blockdiag::harness::{
    build_series, read_matrix_json, sweep_divergence, write_atomic, write_matrix_json, ExperimentConfig, LambdaGrid,
};
use blockdiag::{extract_generator, BlockPartition, Error, Matrix, Result, Tolerances};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "blockdiag", version, about = "Least-action and block-off-diagonal block diagonalization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact least-action transform of one Hermitian matrix
    Transform(TransformArgs),
    /// Perturbative coefficients of one seeded instance
    Series(InstanceArgs),
    /// λ-sweep comparing the exact transform with the series
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct TransformArgs {
    /// Matrix file with fields n, re, im
    #[arg(long)]
    input: PathBuf,
    /// Partition, e.g. "0,1;2,3"
    #[arg(long)]
    blocks: String,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    eps_pd: Option<f64>,
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Dimension; must match --blocks when both are given
    #[arg(long)]
    n: Option<usize>,
    /// Partition; defaults to contiguous blocks of three
    #[arg(long)]
    blocks: Option<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    order: usize,
    /// Frobenius norm of the generated perturbation
    #[arg(long, default_value_t = 1.0)]
    norm_scale: f64,
    /// Unperturbed Hamiltonian from a matrix file
    #[arg(long, conflicts_with = "h0_diag")]
    h0: Option<PathBuf>,
    /// Diagonal unperturbed Hamiltonian, comma-separated
    #[arg(long, allow_hyphen_values = true)]
    h0_diag: Option<String>,
    /// Perturbation from a matrix file instead of the seeded draw
    #[arg(long)]
    h1: Option<PathBuf>,
    /// Relative level-gap tolerance
    #[arg(long)]
    gap_tol: Option<f64>,
    #[arg(long)]
    eps_pd: Option<f64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Write only this format (default: both)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 1e-3)]
    lambda_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    lambda_max: f64,
    #[arg(long, default_value_t = 12)]
    lambda_points: usize,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run_experiment<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Transform(a) => transform(&a),
        Command::Series(a) => series(&a),
        Command::Sweep(a) => sweep(&a),
    };
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_input() {
        EXIT_INPUT
    } else if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INTERNAL
    }
}

fn default_blocks(n: usize) -> String {
    if n == 8 {
        return DEFAULT_BLOCKS.to_string();
    }
    (0..n)
        .collect::<Vec<_>>()
        .chunks(3)
        .map(|c| c.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_diag(text: &str) -> Result<Matrix> {
    let values = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("--h0-diag entry {:?}: {e}", t.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_real_diag(&values))
}

fn config(a: &InstanceArgs) -> Result<ExperimentConfig> {
    let blocks = match (&a.blocks, a.n) {
        (Some(b), _) => b.clone(),
        (None, n) => default_blocks(n.unwrap_or(8)),
    };
    let partition = BlockPartition::parse(&blocks)?;
    if let Some(n) = a.n {
        if n != partition.n() {
            return Err(Error::Dimension(format!("--n is {n} but --blocks covers {} indices", partition.n())));
        }
    }
    let mut cfg = ExperimentConfig::for_partition(partition, a.seed);
    cfg.order = a.order;
    cfg.norm_scale = a.norm_scale;
    cfg.gap_tol = a.gap_tol;
    cfg.eps_pd = a.eps_pd;
    cfg.h0 = match (&a.h0, &a.h0_diag) {
        (Some(p), _) => Some(read_matrix_json(p)?),
        (None, Some(d)) => Some(parse_diag(d)?),
        (None, None) => None,
    };
    cfg.h1 = a.h1.as_deref().map(read_matrix_json).transpose()?;
    Ok(cfg)
}

fn outputs(format: Option<Format>) -> (bool, bool) {
    match format {
        None => (true, true),
        Some(Format::Csv) => (true, false),
        Some(Format::Json) => (false, true),
    }
}

fn sweep(a: &SweepArgs) -> Result<Vec<PathBuf>> {
    let mut cfg = config(&a.instance)?;
    cfg.lambda_grid = LambdaGrid {
        min: a.lambda_min,
        max: a.lambda_max,
        points: a.lambda_points,
    };
    let report = sweep_divergence(&cfg)?;
    let (csv, json) = outputs(a.instance.format);
    report.write(&a.instance.out, csv, json)
}

fn matrix_value(m: &Matrix) -> Value {
    let n = m.dim();
    let part = |f: fn(&blockdiag::Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| f(&m[(i, j)])).collect()).collect()
    };
    json!({ "n": n, "re": part(|z| z.re), "im": part(|z| z.im) })
}

fn series(a: &InstanceArgs) -> Result<Vec<PathBuf>> {
    let cfg = config(a)?;
    let ph = cfg.instance()?;
    let p = ph.partition();
    let bundle = build_series(&ph, cfg.order)?;
    let objects: [(&str, &blockdiag::Series); 6] = [
        ("z", &bundle.z.series),
        ("t_least_action", &bundle.t_least_action),
        ("s_least_action", &bundle.s_least_action.series),
        ("s_block_offdiag", &bundle.s_block_offdiag.series),
        ("h_least_action", &bundle.h_least_action),
        ("h_block_offdiag", &bundle.h_block_offdiag),
    ];
    let (csv, json) = outputs(a.format);
    let mut written = Vec::new();

    if csv {
        let mut text = String::from("order,object,norm,block_norm\n");
        for k in 0..=cfg.order {
            for (name, s) in &objects {
                let c = s.coeff(k);
                let b = blockdiag::block_project(c, p)?;
                text.push_str(&format!("{k},{name},{:e},{:e}\n", c.frobenius_norm(), b.frobenius_norm()));
            }
        }
        let path = a.out.join("series.csv");
        write_atomic(&path, text.as_bytes())?;
        written.push(path);
    }
    if json {
        let coefficients: Vec<Value> = (0..=cfg.order)
            .map(|k| {
                let mut entry = serde_json::Map::new();
                entry.insert("order".into(), json!(k));
                for (name, s) in &objects {
                    entry.insert((*name).into(), matrix_value(s.coeff(k)));
                }
                Value::Object(entry)
            })
            .collect();
        let doc = json!({
            "blocks": p.to_string(),
            "seed": cfg.seed,
            "order": cfg.order,
            "generators": generator_diagnostics(&bundle, p)?,
            "coefficients": coefficients,
        });
        let path = a.out.join("series.json");
        write_atomic(&path, pretty(&doc).as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("finite values");
    s.push('\n');
    s
}

fn transform(a: &TransformArgs) -> Result<Vec<PathBuf>> {
    let h = read_matrix_json(&a.input)?;
    let p = BlockPartition::parse(&a.blocks)?;
    let mut tol = Tolerances::default();
    if let Some(e) = a.eps_pd {
        tol.eps_pd = e;
    }
    let r = cederbaum_transform_with(&h, &p, &tol)?;
    let s = extract_generator(&r)?;
    let out: &Path = &a.out;
    let files = [("T.json", &r.t), ("H_block.json", &r.h_block), ("S.json", &s)];
    let mut written = Vec::new();
    for (name, m) in files {
        let path = out.join(name);
        write_matrix_json(&path, m)?;
        written.push(path);
    }
    let doc = json!({
        "blocks": p.to_string(),
        "eigenvalues": r.eigenvalues,
        "off_block_residual": r.diagnostics.off_block_residual,
        "unitarity_residual": r.diagnostics.unitarity_residual,
        "distance_to_identity": r.diagnostics.distance_to_identity,
        "generator_norm": s.frobenius_norm(),
    });
    let path = out.join("transform.json");
    write_atomic(&path, pretty(&doc).as_bytes())?;
    written.push(path);
    Ok(written)
}
