//! Coefficient-weighted smoothness classes and their extremal members.
//!
//! A function belongs to the class (mu, s) when the weighted coefficient
//! norm (sum_k max(1, k)^(s mu) |a_k|^s)^(1/s) is at most 1. The two
//! constructors below build the classical worst-case members used to probe
//! how much accuracy any method can extract from data known to l_p accuracy
//! delta: a block of equal coefficients sized so the block is invisible at
//! noise level delta, yet carries as much of the derivative norm as the
//! class permits.

use crate::error::{Error, Result};
use crate::series::ChebSeries;

/// Largest block start index the extremal constructor will materialize.
/// Beyond this the coefficient vector alone would occupy tens of megabytes.
pub const MAX_EXTREMAL_BLOCK_START: usize = 1 << 21;

/// Parameter pair (mu, s) of a coefficient-decay smoothness class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessClass {
    pub mu: f64,
    pub s: f64,
}

impl SmoothnessClass {
    /// Requires mu > 0 and finite s >= 1.
    pub fn new(mu: f64, s: f64) -> Result<Self> {
        if !mu.is_finite() || mu <= 0.0 {
            return Err(Error::InvalidClass {
                what: format!("mu must be positive and finite, got {mu}"),
            });
        }
        if !s.is_finite() || s < 1.0 {
            return Err(Error::InvalidClass {
                what: format!("s must be finite and at least 1, got {s}"),
            });
        }
        Ok(SmoothnessClass { mu, s })
    }
}

/// Weighted coefficient norm (sum_k max(1, k)^(s mu) |a_k|^s)^(1/s).
pub fn norm_smooth(series: &ChebSeries, class: &SmoothnessClass) -> f64 {
    let SmoothnessClass { mu, s } = *class;
    let mut total = 0.0f64;
    for (k, &a) in series.coeffs().iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let kbar = (k.max(1)) as f64;
        total += kbar.powf(s * mu) * a.abs().powf(s);
    }
    total.powf(1.0 / s)
}

/// Extremal member with a coefficient block just below the noise floor.
///
/// N_1 solves 3^(-mu) N_1^(-mu + 1/p - 1/s) = delta (rounded to the nearest
/// positive integer); the series then carries the value
/// 3^(-mu) N_1^(-mu - 1/s) on indices N_1 + r .. 2 N_1 + r - 1. Its l_p
/// coefficient norm equals 3^(-mu) N_1^(-mu + 1/p - 1/s) by construction,
/// and its class norm stays at most 1 whenever r <= N_1 + 1.
///
/// Returns the series together with N_1.
pub fn make_extremal_f1(
    class: &SmoothnessClass,
    r: usize,
    p: f64,
    delta: f64,
) -> Result<(ChebSeries, usize)> {
    validate_p(p)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidDelta { delta });
    }
    let SmoothnessClass { mu, s } = *class;
    let required = 2.0 * r as f64 - 1.0 / s + 1.0;
    if mu <= required {
        return Err(Error::Inadmissible {
            requirement: format!("mu > 2r - 1/s + 1 = {required}"),
            mu,
        });
    }
    let q = mu - inv(p) + 1.0 / s;
    let n1_real = (3.0f64.powf(-mu) / delta).powf(1.0 / q);
    // The block starts near delta^(-1/q); a tiny exponent q makes that
    // astronomically large, so refuse rather than exhaust memory.
    if !n1_real.is_finite() || n1_real >= MAX_EXTREMAL_BLOCK_START as f64 {
        return Err(Error::InvalidPlan {
            what: format!(
                "extremal block would start near index {n1_real:.3e}; \
                 delta = {delta} is too small for mu - 1/p + 1/s = {q}"
            ),
        });
    }
    let n1 = (n1_real.round() as usize).max(1);
    let value = 3.0f64.powf(-mu) * (n1 as f64).powf(-mu - 1.0 / s);
    let top = 2 * n1 + r - 1;
    let mut coeffs = vec![0.0; top + 1];
    for c in coeffs.iter_mut().take(top + 1).skip(n1 + r) {
        *c = value;
    }
    Ok((ChebSeries::new(coeffs)?, n1))
}

/// Extremal member spread over a choosable index set.
///
/// Lambda is the N smallest indices in [N + r, 3N + r] that are not
/// excluded; each carries the value 4^(-mu) N^(-mu - 1/s). At most N
/// exclusions are allowed, which always leaves enough eligible indices.
pub fn make_extremal_f2(
    class: &SmoothnessClass,
    r: usize,
    n: usize,
    excluded: &[usize],
) -> Result<ChebSeries> {
    if n == 0 {
        return Err(Error::InvalidInput {
            what: "block size N must be positive".to_string(),
        });
    }
    if excluded.len() > n {
        return Err(Error::InvalidInput {
            what: format!("at most N = {n} exclusions allowed, got {}", excluded.len()),
        });
    }
    let SmoothnessClass { mu, s } = *class;
    let value = 4.0f64.powf(-mu) * (n as f64).powf(-mu - 1.0 / s);
    let mut coeffs = vec![0.0; 3 * n + r + 1];
    let mut placed = 0;
    for (k, c) in coeffs.iter_mut().enumerate().skip(n + r) {
        if placed == n {
            break;
        }
        if excluded.contains(&k) {
            continue;
        }
        *c = value;
        placed += 1;
    }
    debug_assert_eq!(placed, n, "window [N+r, 3N+r] holds 2N+1 indices");
    Ok(ChebSeries::new(coeffs)?.trimmed())
}

/// 1/p with the convention 1/inf = 0.
pub(crate) fn inv(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

pub(crate) fn validate_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidPlan {
            what: format!("p must lie in [1, inf], got {p}"),
        });
    }
    Ok(())
}
