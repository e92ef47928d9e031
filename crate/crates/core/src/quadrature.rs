//! Computing Fourier-Chebyshev coefficients from function values.
//!
//! Two routes are provided. `exact_coeffs` integrates against the weight
//! with a Gauss-Chebyshev rule large enough that, for the smooth benchmark
//! inputs, the result serves as ground truth. `clenshaw_curtis_coeffs`
//! consumes samples on the practical cos(j pi / n) grid; its accuracy is
//! limited by aliasing, which `choose_quadrature_n` balances against a
//! target perturbation level.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::{basis_scale, ChebSeries};

/// Hard ceiling for the quadrature-size search.
pub const QUADRATURE_CAP: usize = 1 << 20;

/// Compensated accumulator; the summation order of callers is fixed, so
/// results are reproducible bit for bit.
#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Gauss-Chebyshev approximation of the coefficients a_0..a_m of f, using q
/// weight-adapted nodes cos((2i - 1) pi / (2q)). Exact for polynomials of
/// degree at most 2q - 1 - m.
pub fn gauss_chebyshev_coeffs(
    f: impl Fn(f64) -> f64,
    m: usize,
    q: usize,
) -> Result<ChebSeries> {
    let q = q.max(m + 1);
    let mut sums = vec![Kahan::default(); m + 1];
    for i in 1..=q {
        let theta = (2 * i - 1) as f64 * PI / (2 * q) as f64;
        let c = theta.cos();
        let v = f(c);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: "function value under quadrature",
            });
        }
        // cos(k theta) by recurrence in k.
        let mut prev = 1.0;
        let mut cur = c;
        sums[0].add(v);
        if m >= 1 {
            sums[1].add(v * c);
        }
        for sum_k in sums.iter_mut().skip(2) {
            let next = 2.0 * c * cur - prev;
            prev = cur;
            cur = next;
            sum_k.add(v * next);
        }
    }
    let scale = PI / q as f64;
    let coeffs = sums
        .iter()
        .enumerate()
        .map(|(k, s)| scale * basis_scale(k) * s.sum)
        .collect();
    ChebSeries::new(coeffs)
}

/// Default quadrature size for smooth integrands.
pub fn default_quadrature(m: usize) -> usize {
    (4 * m + 16).max(256)
}

/// Quadrature size for integrands with limited interior smoothness, such as
/// |t|, where the midpoint rule converges only algebraically.
pub fn nonsmooth_quadrature(m: usize) -> usize {
    (4 * m + 16).max(4096)
}

/// Reference coefficients a_0..a_m with the default quadrature size.
pub fn exact_coeffs(f: impl Fn(f64) -> f64, m: usize) -> Result<ChebSeries> {
    gauss_chebyshev_coeffs(f, m, default_quadrature(m))
}

/// Function values on the Clenshaw-Curtis grid t_j = cos(j pi / n),
/// j = 0..n, stored in descending t.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    values: Vec<f64>,
}

impl SampledFunction {
    /// Samples f on the n-interval grid; n >= 1.
    pub fn from_fn(f: impl Fn(f64) -> f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput {
                what: "sample grid needs at least one interval".to_string(),
            });
        }
        let values: Vec<f64> = (0..=n).map(|j| f(Self::node(n, j))).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "sampled function value",
            });
        }
        Ok(SampledFunction { values })
    }

    pub fn node(n: usize, j: usize) -> f64 {
        (j as f64 * PI / n as f64).cos()
    }

    /// Number of grid intervals (one less than the number of samples).
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Two-column text: node and value per line, 17 significant digits.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        for (j, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{:.16e} {:.16e}", Self::node(n, j), v);
        }
        out
    }

    /// Parses the two-column format, checking that the first column is the
    /// grid cos(j pi / n) to within 1e-12. `path` is used in errors only.
    pub fn from_text(text: &str, path: &str) -> Result<Self> {
        let parse_err = |line: usize, what: String| Error::Parse {
            path: path.to_string(),
            line,
            what,
        };
        let mut rows = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (t, v) = match (cols.next(), cols.next(), cols.next()) {
                (Some(t), Some(v), None) => (t, v),
                _ => {
                    return Err(parse_err(
                        idx + 1,
                        "expected two columns: node and value".to_string(),
                    ))
                }
            };
            let t: f64 = t
                .parse()
                .map_err(|_| parse_err(idx + 1, format!("bad node '{t}'")))?;
            let v: f64 = v
                .parse()
                .map_err(|_| parse_err(idx + 1, format!("bad value '{v}'")))?;
            if !v.is_finite() {
                return Err(parse_err(idx + 1, "value is not finite".to_string()));
            }
            rows.push((idx + 1, t, v));
        }
        if rows.len() < 2 {
            return Err(parse_err(1, "need at least two samples".to_string()));
        }
        let n = rows.len() - 1;
        let mut values = Vec::with_capacity(rows.len());
        for (j, (line, t, v)) in rows.into_iter().enumerate() {
            let expect = Self::node(n, j);
            if (t - expect).abs() > 1e-12 {
                return Err(parse_err(
                    line,
                    format!("node {t} is not cos({j} pi / {n}) = {expect}"),
                ));
            }
            values.push(v);
        }
        Ok(SampledFunction { values })
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

/// Coefficients a_0..a_m from Clenshaw-Curtis samples: the trapezoid rule in
/// the angle, with halved endpoint terms. Exact whenever the integrand
/// degree k + deg f stays below 2n; indices above n alias down, so m <= n is
/// required.
pub fn clenshaw_curtis_coeffs(samples: &SampledFunction, m: usize) -> Result<ChebSeries> {
    let n = samples.n();
    if m > n {
        return Err(Error::Aliasing { m, n });
    }
    let values = samples.values();
    let mut sums = vec![Kahan::default(); m + 1];
    for (j, &v) in values.iter().enumerate() {
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        let theta = j as f64 * PI / n as f64;
        let c = theta.cos();
        let mut prev = 1.0;
        let mut cur = c;
        sums[0].add(w * v);
        if m >= 1 {
            sums[1].add(w * v * c);
        }
        for sum_k in sums.iter_mut().skip(2) {
            let next = 2.0 * c * cur - prev;
            prev = cur;
            cur = next;
            sum_k.add(w * v * next);
        }
    }
    let scale = PI / n as f64;
    let coeffs = sums
        .iter()
        .enumerate()
        .map(|(k, s)| scale * basis_scale(k) * s.sum)
        .collect();
    ChebSeries::new(coeffs)
}

/// l2 distance between coefficient vectors over the shared index range.
pub fn coeff_l2_error(a: &ChebSeries, b: &ChebSeries) -> f64 {
    a.add_scaled(b, -1.0).norm_l2w()
}

/// Smallest n (within the aliasing floor n >= max(m, 2) and the cap) whose
/// Clenshaw-Curtis coefficients a_0..a_m fall within target_delta of the
/// reference values in l2. Doubling finds a passing n, bisection then walks
/// back to the boundary.
pub fn choose_quadrature_n(
    f: impl Fn(f64) -> f64,
    target_delta: f64,
    m: usize,
) -> Result<usize> {
    if !target_delta.is_finite() || target_delta <= 0.0 {
        return Err(Error::InvalidDelta {
            delta: target_delta,
        });
    }
    let reference = gauss_chebyshev_coeffs(&f, m, 8 * m + 64)?;
    let err_at = |n: usize| -> Result<f64> {
        let samples = SampledFunction::from_fn(&f, n)?;
        Ok(coeff_l2_error(&clenshaw_curtis_coeffs(&samples, m)?, &reference))
    };
    let floor = m.max(2);
    if err_at(floor)? <= target_delta {
        return Ok(floor);
    }
    let mut lo = floor;
    let mut hi = floor;
    loop {
        hi = (hi * 2).min(QUADRATURE_CAP);
        if err_at(hi)? <= target_delta {
            break;
        }
        if hi == QUADRATURE_CAP {
            return Err(Error::QuadratureBudget { cap: QUADRATURE_CAP });
        }
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if err_at(mid)? <= target_delta {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
