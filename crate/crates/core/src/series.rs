//! Finite expansions over the orthonormal Chebyshev system on [-1, 1].
//!
//! The basis is T_0 = pi^(-1/2) Tbar_0 and T_k = (2/pi)^(1/2) Tbar_k for
//! k >= 1, where Tbar_k is the classical Chebyshev polynomial of the first
//! kind. The system is orthonormal under the weight w(t) = (1 - t^2)^(-1/2),
//! so the weighted L2 norm of an expansion equals the l2 norm of its
//! coefficient vector.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Grid size used by [`ChebSeries::norm_sup`] when callers have no reason to
/// pick their own.
pub const DEFAULT_SUP_GRID: usize = 4096;

/// Normalization factor turning Tbar_k into the orthonormal T_k.
pub fn basis_scale(k: usize) -> f64 {
    if k == 0 {
        1.0 / PI.sqrt()
    } else {
        (2.0 / PI).sqrt()
    }
}

/// Value of the orthonormal basis function T_k at t.
pub fn basis_eval(k: usize, t: f64) -> f64 {
    // Tbar_k(cos th) = cos(k th); the three-term recurrence is cheaper and
    // exact enough for |t| <= 1.
    let mut prev = 1.0;
    let mut cur = t;
    let tbar = match k {
        0 => 1.0,
        1 => t,
        _ => {
            for _ in 2..=k {
                let next = 2.0 * t * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    };
    basis_scale(k) * tbar
}

/// Chebyshev-Lobatto grid cos(j pi / (g - 1)), j = 0..g-1, in descending t.
/// Always contains both endpoints; g is clamped below at 2.
pub fn lobatto_grid(g: usize) -> Vec<f64> {
    let g = g.max(2);
    let h = PI / (g - 1) as f64;
    (0..g).map(|j| (j as f64 * h).cos()).collect()
}

/// A finite expansion sum_k a_k T_k with coefficients in the orthonormal
/// system. The empty expansion is the zero function.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
}

impl ChebSeries {
    /// Wraps a coefficient vector a_0..a_M. Rejects non-finite entries.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                context: "series coefficients",
            });
        }
        Ok(ChebSeries { coeffs })
    }

    /// The zero expansion.
    pub fn zero() -> Self {
        ChebSeries { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Number of stored coefficients (M + 1 for a series supported up to M).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest stored index M, if any coefficient is stored.
    pub fn max_index(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
        self
    }

    /// Coefficients rescaled into the classical basis, ready for Clenshaw.
    fn classical(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| a * basis_scale(k))
            .collect()
    }

    /// Pointwise evaluation. Errors outside [-1, 1].
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&t) {
            return Err(Error::DomainPoint { t });
        }
        Ok(clenshaw(&self.classical(), t))
    }

    /// Evaluation on a grid; the coefficient rescaling is hoisted out of the
    /// per-point recurrence.
    pub fn eval_grid(&self, ts: &[f64]) -> Result<Vec<f64>> {
        let classical = self.classical();
        ts.iter()
            .map(|&t| {
                if !(-1.0..=1.0).contains(&t) {
                    return Err(Error::DomainPoint { t });
                }
                Ok(clenshaw(&classical, t))
            })
            .collect()
    }

    /// Weighted L2 norm; by orthonormality this is the l2 norm of the
    /// coefficients.
    pub fn norm_l2w(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Sup norm estimated on the Chebyshev-Lobatto grid with `grid_size`
    /// points; the endpoints +-1 are always included.
    pub fn norm_sup(&self, grid_size: usize) -> f64 {
        let classical = self.classical();
        lobatto_grid(grid_size)
            .into_iter()
            .map(|t| clenshaw(&classical, t).abs())
            .fold(0.0, f64::max)
    }

    /// Coefficient-wise a + scale * b, padding the shorter vector with zeros.
    pub fn add_scaled(&self, other: &ChebSeries, scale: f64) -> ChebSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (o, &a) in out.iter_mut().zip(&self.coeffs) {
            *o = a;
        }
        for (o, &b) in out.iter_mut().zip(&other.coeffs) {
            *o += scale * b;
        }
        ChebSeries { coeffs: out }
    }

    /// Plain-text form: a header naming the basis and the top index, then one
    /// coefficient per line with 17 significant digits. The zero expansion is
    /// written as a single zero coefficient.
    pub fn to_text(&self) -> String {
        let coeffs: &[f64] = if self.coeffs.is_empty() {
            &[0.0]
        } else {
            &self.coeffs
        };
        let mut out = String::new();
        let _ = writeln!(out, "cheb-orthonormal v1 M={}", coeffs.len() - 1);
        for c in coeffs {
            let _ = writeln!(out, "{:.16e}", c);
        }
        out
    }

    /// Parses the format produced by [`ChebSeries::to_text`]. `path` is used
    /// only in error messages.
    pub fn from_text(text: &str, path: &str) -> Result<Self> {
        let parse_err = |line: usize, what: &str| Error::Parse {
            path: path.to_string(),
            line,
            what: what.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty file"))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("cheb-orthonormal") || fields.next() != Some("v1") {
            return Err(parse_err(1, "expected header 'cheb-orthonormal v1 M=<int>'"));
        }
        let m: usize = fields
            .next()
            .and_then(|f| f.strip_prefix("M="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| parse_err(1, "expected header 'cheb-orthonormal v1 M=<int>'"))?;
        let mut coeffs = Vec::with_capacity(m + 1);
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let c: f64 = line
                .parse()
                .map_err(|_| parse_err(idx + 1, "expected a coefficient"))?;
            if !c.is_finite() {
                return Err(parse_err(idx + 1, "coefficient is not finite"));
            }
            coeffs.push(c);
        }
        if coeffs.len() != m + 1 {
            return Err(parse_err(
                1,
                &format!("header promises {} coefficients, found {}", m + 1, coeffs.len()),
            ));
        }
        Ok(ChebSeries { coeffs })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_text(&text, &path.display().to_string())
    }
}

/// Clenshaw recurrence for sum_k c_k Tbar_k(t) with classical coefficients.
fn clenshaw(classical: &[f64], t: f64) -> f64 {
    match classical.len() {
        0 => 0.0,
        1 => classical[0],
        _ => {
            let mut b1 = 0.0;
            let mut b2 = 0.0;
            for &c in classical[1..].iter().rev() {
                let next = c + 2.0 * t * b1 - b2;
                b2 = b1;
                b1 = next;
            }
            classical[0] + t * b1 - b2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-14;

    fn series(coeffs: &[f64]) -> ChebSeries {
        ChebSeries::new(coeffs.to_vec()).unwrap()
    }

    #[test]
    fn constant_basis_function_is_normalized() {
        // a_0 = sqrt(pi) represents the constant 1.
        let s = series(&[PI.sqrt()]);
        assert!((s.eval(0.37).unwrap() - 1.0).abs() < EPS);
    }

    #[test]
    fn linear_basis_function_is_identity_scaled() {
        // a_1 = sqrt(pi/2) represents t.
        let s = series(&[0.0, (PI / 2.0).sqrt()]);
        assert!((s.eval(0.5).unwrap() - 0.5).abs() < EPS);
    }

    #[test]
    fn endpoint_value_of_t3() {
        // T_3(1) = sqrt(2/pi).
        let s = series(&[0.0, 0.0, 0.0, 1.0]);
        assert!((s.eval(1.0).unwrap() - (2.0 / PI).sqrt()).abs() < EPS);
    }

    #[test]
    fn midpoint_value_of_t2() {
        // Tbar_2(0) = -1.
        let s = series(&[0.0, 0.0, 1.0]);
        assert!((s.eval(0.0).unwrap() + (2.0 / PI).sqrt()).abs() < EPS);
    }

    #[test]
    fn basis_eval_matches_cosine_form() {
        for k in 0..=20 {
            for j in 0..40 {
                let th = j as f64 * PI / 39.0;
                let expect = basis_scale(k) * (k as f64 * th).cos();
                assert!((basis_eval(k, th.cos()) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eval_rejects_points_outside_domain() {
        let s = series(&[1.0]);
        assert!(matches!(s.eval(1.0 + 1e-9), Err(Error::DomainPoint { .. })));
        assert!(matches!(s.eval(-1.5), Err(Error::DomainPoint { .. })));
    }

    #[test]
    fn norm_l2w_is_coefficient_l2() {
        let s = series(&[3.0, 4.0]);
        assert!((s.norm_l2w() - 5.0).abs() < EPS);
    }

    #[test]
    fn parseval_against_dense_quadrature() {
        // Gauss-Chebyshev with Q nodes integrates w * p^2 exactly for
        // deg p <= Q - 1 pairs; relative agreement to 1e-10.
        let s = series(&[0.3, -1.2, 0.0, 0.7, 0.05, -0.4]);
        let q = 64;
        let mut integral = 0.0;
        for i in 1..=q {
            let th = (2 * i - 1) as f64 * PI / (2 * q) as f64;
            let v = s.eval(th.cos()).unwrap();
            integral += v * v;
        }
        integral *= PI / q as f64;
        let parseval = s.norm_l2w().powi(2);
        assert!((integral - parseval).abs() <= 1e-10 * parseval);
    }

    #[test]
    fn sup_norm_of_t3_attained_at_endpoint() {
        let s = series(&[0.0, 0.0, 0.0, 1.0]);
        let sup = s.norm_sup(DEFAULT_SUP_GRID);
        assert!((sup - (2.0 / PI).sqrt()).abs() < EPS);
    }

    #[test]
    fn sup_norm_of_one_plus_t() {
        // 1 + t has sup 2 at t = 1, which the grid always contains.
        let s = series(&[PI.sqrt(), (PI / 2.0).sqrt()]);
        assert!((s.norm_sup(64) - 2.0).abs() < EPS);
    }

    #[test]
    fn eval_grid_is_linear() {
        let f = series(&[0.4, -0.3, 0.9, 0.0, 0.2]);
        let g = series(&[-1.0, 0.5, 0.0, 0.25]);
        let (alpha, beta) = (1.7, -0.6);
        let ts = lobatto_grid(33);
        let combo = f.add_scaled(&g, beta / alpha);
        let combo = ChebSeries::new(combo.coeffs().iter().map(|c| c * alpha).collect()).unwrap();
        let lhs = combo.eval_grid(&ts).unwrap();
        let fv = f.eval_grid(&ts).unwrap();
        let gv = g.eval_grid(&ts).unwrap();
        for ((l, a), b) in lhs.iter().zip(&fv).zip(&gv) {
            assert!((l - (alpha * a + beta * b)).abs() < 1e-12);
        }
    }

    #[test]
    fn text_round_trip_preserves_coefficients() {
        let s = series(&[1.0, -2.5e-17, 0.0, 3.141592653589793e8]);
        let back = ChebSeries::from_text(&s.to_text(), "mem").unwrap();
        assert_eq!(s.coeffs(), back.coeffs());
    }

    #[test]
    fn zero_series_round_trips_as_single_zero() {
        let z = ChebSeries::zero();
        let back = ChebSeries::from_text(&z.to_text(), "mem").unwrap();
        assert_eq!(back.coeffs(), &[0.0]);
        assert_eq!(back.norm_l2w(), 0.0);
    }

    #[test]
    fn malformed_header_is_rejected() {
        assert!(ChebSeries::from_text("cheb v2 M=0\n1.0\n", "mem").is_err());
        assert!(ChebSeries::from_text("cheb-orthonormal v1 M=2\n1.0\n", "mem").is_err());
    }

    #[test]
    fn trimmed_drops_trailing_zeros_only() {
        let s = series(&[0.0, 1.0, 0.0, 0.0]).trimmed();
        assert_eq!(s.coeffs(), &[0.0, 1.0]);
    }
}
