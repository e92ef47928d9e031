//! Error measurement between expansions and log-log rate fitting.

use crate::error::{Error, Result};
use crate::series::ChebSeries;

/// Recovery error in both working norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPair {
    /// Weighted L2 distance (= coefficient l2 distance).
    pub l2w: f64,
    /// Uniform distance, estimated on the Chebyshev-Lobatto grid.
    pub sup: f64,
}

/// Distance between two expansions; the shorter coefficient vector is padded
/// with zeros. `grid_size` controls the sup-norm grid.
pub fn error_between(approx: &ChebSeries, reference: &ChebSeries, grid_size: usize) -> ErrorPair {
    let diff = approx.add_scaled(reference, -1.0);
    ErrorPair {
        l2w: diff.norm_l2w(),
        sup: diff.norm_sup(grid_size),
    }
}

/// Least-squares fit of log10(err) against log10(delta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n_points: usize,
}

/// Fits err ~ C * delta^slope from (delta, err) pairs. Needs at least three
/// pairs with positive finite entries.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::InvalidInput {
            what: format!("rate fit needs at least 3 points, got {}", points.len()),
        });
    }
    if points
        .iter()
        .any(|&(d, e)| !d.is_finite() || !e.is_finite() || d <= 0.0 || e <= 0.0)
    {
        return Err(Error::InvalidInput {
            what: "rate fit needs positive finite deltas and errors".to_string(),
        });
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.log10()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.log10()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput {
            what: "rate fit needs at least two distinct deltas".to_string(),
        });
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let fit = intercept + slope * x;
            (y - fit) * (y - fit)
        })
        .sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(RateFit {
        slope,
        intercept,
        r2,
        n_points: points.len(),
    })
}
