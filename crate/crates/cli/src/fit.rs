//! Least-squares scaling fits on log-log axes.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FitError {
    #[error(
        "need at least 3 usable points, got {usable} (excluded {excluded} at/below the floor)"
    )]
    TooFewPoints { usable: usize, excluded: usize },
    #[error("fit requires positive x values, got {0}")]
    NonPositiveX(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub stderr_slope: f64,
    pub r_squared: f64,
    pub points_used: usize,
    pub points_excluded: usize,
}

/// Least squares on `(log x, log y)`; points with `y <= floor` are excluded
/// and counted rather than allowed to corrupt the slope.
pub fn loglog_fit(points: &[(f64, f64)], floor: f64) -> Result<FitResult, FitError> {
    for &(x, _) in points {
        if x <= 0.0 {
            return Err(FitError::NonPositiveX(x));
        }
    }
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, y)| y > floor)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    let excluded = points.len() - usable.len();
    if usable.len() < 3 {
        return Err(FitError::TooFewPoints {
            usable: usable.len(),
            excluded,
        });
    }

    let n = usable.len() as f64;
    let sx: f64 = usable.iter().map(|p| p.0).sum();
    let sy: f64 = usable.iter().map(|p| p.1).sum();
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;

    let ss_res: f64 = usable
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let ss_tot: f64 = usable.iter().map(|p| (p.1 - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    let dof = (usable.len() as f64 - 2.0).max(1.0);
    let stderr_slope = (ss_res / dof / sxx).sqrt();

    Ok(FitResult {
        slope,
        intercept,
        stderr_slope,
        r_squared,
        points_used: usable.len(),
        points_excluded: excluded,
    })
}
