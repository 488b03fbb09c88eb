use std::path::Path;
use std::process::{Command, Output};

fn blockdiag(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockdiag"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn sweep_writes_both_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = blockdiag(&["sweep", "--n", "8", "--blocks", "0,1,2;3,4,5;6,7", "--seed", "42"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("lambda,residual,value\n"));
    // 12 grid points times (3 truncation orders + 3 residuals)
    assert_eq!(csv.lines().count(), 1 + 12 * 6);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.json")).unwrap()).unwrap();
    let slopes = json["slopes"].as_array().unwrap();
    let r_h = slopes.iter().find(|s| s["residual"] == "r_H").unwrap();
    assert!((r_h["exponent"].as_f64().unwrap() - 4.0).abs() < 0.3);
    assert_eq!(json["metadata"]["config"]["seed"], 42);
}

#[test]
fn sweep_format_and_grid_flags() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sweep", "--format", "csv", "--lambda-min", "0.01", "--lambda-max", "0.1", "--lambda-points", "5", "--order",
        "2", "--out", "reports",
    ];
    let o = blockdiag(&args, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("reports");
    assert!(!out.join("sweep.json").exists());
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 5 * 5);
    assert!(csv.contains(",r_T2,") && !csv.contains(",r_T3,"));
}

#[test]
fn sweep_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = blockdiag(&["sweep", "--seed", "7", "--lambda-points", "6"], d.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for f in ["sweep.csv", "sweep.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn transform_writes_matrices_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let h = r#"{"n": 4,
      "re": [[1, 0.1, 0, 0.05], [0.1, 1.2, 0.02, 0], [0, 0.02, 3, 0.1], [0.05, 0, 0.1, 3.3]],
      "im": [[0, 0, 0.01, 0], [0, 0, 0, 0], [-0.01, 0, 0, 0], [0, 0, 0, 0]]}"#;
    std::fs::write(dir.path().join("H.json"), h).unwrap();
    let o = blockdiag(&["transform", "--input", "H.json", "--blocks", "0,1;2,3"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for f in ["T.json", "H_block.json", "S.json"] {
        let m = blockdiag::harness::read_matrix_json(&dir.path().join(f)).unwrap();
        assert_eq!(m.dim(), 4);
    }
    let hb = blockdiag::harness::read_matrix_json(&dir.path().join("H_block.json")).unwrap();
    assert!(hb[(0, 2)].norm() < 1e-12 && hb[(1, 3)].norm() < 1e-12);
    let diag: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("transform.json")).unwrap()).unwrap();
    assert!(diag["unitarity_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn series_writes_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let o = blockdiag(&["series", "--order", "4", "--seed", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("series.json")).unwrap()).unwrap();
    assert_eq!(json["coefficients"].as_array().unwrap().len(), 5);
    assert_eq!(json["coefficients"][2]["s_least_action"]["n"], 8);
    let csv = std::fs::read_to_string(dir.path().join("series.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 5 * 6);
}

#[test]
fn cross_block_degeneracy_exits_numerical() {
    let dir = tempfile::tempdir().unwrap();
    let o = blockdiag(&["sweep", "--h0-diag", "0,1,2,2,4,5,6,7"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let msg = stderr(&o);
    assert!(msg.contains("DegeneracyError") && msg.contains("gap"), "{msg}");
    assert!(!dir.path().join("sweep.csv").exists());
}

#[test]
fn malformed_input_exits_input_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"n\": 2,\n \"re\": [[1, 0], [0, 1]],\n \"im\": nope}").unwrap();
    let o = blockdiag(&["transform", "--input", "bad.json", "--blocks", "0;1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ParseError"));

    let o = blockdiag(&["sweep", "--blocks", "0,1;1,2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = blockdiag(&["sweep", "--lambda-min", "0.5", "--lambda-max", "0.1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = blockdiag(&["sweep", "--bogus"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_hermitian_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("h.json"), r#"{"n": 2, "re": [[1, 1], [0, 2]], "im": [[0, 0], [0, 0]]}"#).unwrap();
    let o = blockdiag(&["transform", "--input", "h.json", "--blocks", "0;1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotHermitianError"));
}
