//! Matrix files and atomic report writing.
//!
//! Matrix files are JSON objects `{"n": 3, "re": [[…]], "im": [[…]]}` with
//! row-major real and imaginary parts. The writer prints every entry with 17
//! significant digits so files round-trip exactly.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    n: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Parses a matrix document; `origin` labels error messages.
pub fn parse_matrix_json(text: &str, origin: &str) -> Result<CMatrix<f64>> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "{origin}: line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    if file.re.len() != file.n {
        return Err(Error::Parse(format!(
            "{origin}: \"n\" is {} but \"re\" has {} rows",
            file.n,
            file.re.len()
        )));
    }
    CMatrix::from_parts(&file.re, &file.im).map_err(|e| Error::Parse(format!("{origin}: {e}")))
}

pub fn read_matrix_json(path: &Path) -> Result<CMatrix<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix_json(&text, &path.display().to_string())
}

fn write_rows(out: &mut String, m: &CMatrix<f64>, part: impl Fn(usize, usize) -> f64) {
    let n = m.dim();
    out.push('[');
    for i in 0..n {
        if i > 0 {
            out.push_str(",\n    ");
        }
        out.push('[');
        for j in 0..n {
            if j > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{:.16e}", part(i, j));
        }
        out.push(']');
    }
    out.push(']');
}

pub fn matrix_to_json(m: &CMatrix<f64>) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\n  \"n\": {},\n  \"re\": ", m.dim());
    write_rows(&mut out, m, |i, j| m[(i, j)].re);
    out.push_str(",\n  \"im\": ");
    write_rows(&mut out, m, |i, j| m[(i, j)].im);
    out.push_str("\n}\n");
    out
}

/// Writes via a temporary file in the target directory followed by a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

pub fn write_matrix_json(path: &Path, m: &CMatrix<f64>) -> Result<()> {
    write_atomic(path, matrix_to_json(m).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::generate_random_hermitian;

    #[test]
    fn round_trip_is_exact() {
        let m = generate_random_hermitian::<f64>(4, 8, 1.7).unwrap();
        let back = parse_matrix_json(&matrix_to_json(&m), "mem").unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_matrix_json("{\"n\": 2,\n \"re\": [[1, 2], [3]],\n \"im\": oops}", "h.json").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("h.json: line 3"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_matrix_json("{\"n\": 2, \"re\": [[1, 2], [3]], \"im\": [[0, 0], [0, 0]]}", "h").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        let err = parse_matrix_json("{\"n\": 3, \"re\": [[1]], \"im\": [[0]]}", "h").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
    }
}
