//! Least-squares power-law fits on log-log axes.

use serde::Serialize;

use crate::error::{Error, Result};

/// Minimum number of points a slope fit accepts.
pub const MIN_FIT_POINTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogLogFit {
    pub exponent: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Fits `log value = exponent · log λ + c` by ordinary least squares.
///
/// Points with a non-positive or non-finite coordinate are discarded first.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<LogLogFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(l, v)| l.is_finite() && v.is_finite() && *l > 0.0 && *v > 0.0)
        .map(|(l, v)| (l.ln(), v.ln()))
        .collect();
    if logs.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            usable: logs.len(),
            needed: MIN_FIT_POINTS,
        });
    }
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &logs {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData {
            usable: 1,
            needed: MIN_FIT_POINTS,
        });
    }
    let exponent = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LogLogFit {
        exponent,
        r_squared,
        points: logs.len(),
    })
}
