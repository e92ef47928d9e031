//! Truncated recovery of derivatives and sums, with the discretization rule
//! that balances noise amplification against truncation bias.
//!
//! Given coefficients known to accuracy delta, the method keeps the window
//! k = r..N and differentiates the windowed expansion r times (r = 0 keeps
//! k = 0..N and sums). The window length N = max(r, 1, ceil(c_N *
//! delta^(-1/(mu - 1/p + 1/s)))) is order-optimal over the class (mu, s):
//! no method reading the same data can beat the resulting accuracy order.

use crate::derivative::differentiate_series;
use crate::error::{Error, Result};
use crate::series::ChebSeries;
use crate::smoothness::{inv, validate_p, SmoothnessClass};

/// Norm in which the recovery error is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Uniform norm on [-1, 1].
    C,
    /// Weighted L2 norm with weight (1 - t^2)^(-1/2).
    L2w,
}

impl Metric {
    pub fn label(&self) -> &'static str {
        match self {
            Metric::C => "C",
            Metric::L2w => "L2w",
        }
    }
}

/// How the data error delta is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataModel {
    /// l_p error on the coefficient vector.
    CoeffLp,
    /// Weighted L2 error on the function itself (coefficient l2 error).
    FunctionL2w,
}

/// Smallest mu admitting stable order-r recovery in the given metric.
fn admissibility_floor(class: &SmoothnessClass, r: usize, metric: Metric) -> f64 {
    let base = 2.0 * r as f64 - 1.0 / class.s;
    match metric {
        Metric::C => base + 1.0,
        Metric::L2w => base + 0.5,
    }
}

pub fn check_admissible(class: &SmoothnessClass, r: usize, metric: Metric) -> Result<()> {
    let floor = admissibility_floor(class, r, metric);
    if class.mu <= floor {
        let tail = match metric {
            Metric::C => "1",
            Metric::L2w => "1/2",
        };
        return Err(Error::Inadmissible {
            requirement: format!(
                "metric {} needs mu > 2r - 1/s + {tail} = {floor}",
                metric.label()
            ),
            mu: class.mu,
        });
    }
    Ok(())
}

/// The level rule divides by mu - 1/p + 1/s; a nonpositive value would make
/// the window shrink as the data improve. Only summation from l_p data with
/// p < 2 and small mu can reach this.
fn check_level_rule(class: &SmoothnessClass, p: f64) -> Result<()> {
    let gap = class.mu - inv(p) + 1.0 / class.s;
    if gap <= 0.0 {
        return Err(Error::Inadmissible {
            requirement: format!("the level rule needs mu > 1/p - 1/s = {}", inv(p) - 1.0 / class.s),
            mu: class.mu,
        });
    }
    Ok(())
}

/// Truncation level for accuracy delta: N = max(r, 1, ceil(c_n *
/// delta^(-1/(mu - 1/p + 1/s)))). Errors when the class cannot support
/// order-r recovery in the chosen metric.
pub fn select_truncation_level(
    class: &SmoothnessClass,
    r: usize,
    p: f64,
    metric: Metric,
    delta: f64,
    c_n: f64,
) -> Result<usize> {
    validate_p(p)?;
    check_admissible(class, r, metric)?;
    check_level_rule(class, p)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidDelta { delta });
    }
    if !c_n.is_finite() || c_n <= 0.0 {
        return Err(Error::InvalidPlan {
            what: format!("c_n must be positive and finite, got {c_n}"),
        });
    }
    let exponent = 1.0 / (class.mu - inv(p) + 1.0 / class.s);
    let raw = c_n * delta.powf(-exponent);
    let n = raw.ceil() as usize;
    Ok(n.max(r).max(1))
}

/// A validated recovery request: order, data accuracy, and window size.
#[derive(Debug, Clone)]
pub struct RecoveryPlan {
    pub class: SmoothnessClass,
    pub r: usize,
    pub p: f64,
    pub metric: Metric,
    pub delta: f64,
    pub c_n: f64,
    pub n: usize,
}

impl RecoveryPlan {
    pub fn new(
        class: SmoothnessClass,
        r: usize,
        p: f64,
        metric: Metric,
        delta: f64,
        c_n: f64,
    ) -> Result<Self> {
        let n = select_truncation_level(&class, r, p, metric, delta, c_n)?;
        Ok(RecoveryPlan {
            class,
            r,
            p,
            metric,
            delta,
            c_n,
            n,
        })
    }
}

/// Applies the truncated method to a noisy coefficient vector: zero outside
/// the window [r, n] (or [0, n] for r = 0), then differentiate r times.
/// Coefficients beyond the window never influence the output.
pub fn truncate_recover(noisy: &ChebSeries, r: usize, n: usize) -> Result<ChebSeries> {
    if n < r {
        return Err(Error::InvalidPlan {
            what: format!("window end N = {n} is below the order r = {r}"),
        });
    }
    let src = noisy.coeffs();
    let keep = src.len().min(n + 1);
    let mut windowed = src[..keep].to_vec();
    for c in windowed.iter_mut().take(r.min(keep)) {
        *c = 0.0;
    }
    let windowed = ChebSeries::new(windowed)?;
    Ok(differentiate_series(&windowed, r))
}

/// Accuracy order of the method under the given data model: the recovery
/// error is O(delta^exponent) over the unit ball of the class.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub exponent: f64,
    pub regime: String,
}

/// Worst-case rate exponent for order-r recovery measured in `metric` from
/// data with accuracy delta in the given model.
pub fn theoretical_rate(
    class: &SmoothnessClass,
    r: usize,
    p: f64,
    metric: Metric,
    data: DataModel,
) -> Result<RateReport> {
    validate_p(p)?;
    check_admissible(class, r, metric)?;
    if data == DataModel::CoeffLp {
        check_level_rule(class, p)?;
    }
    let SmoothnessClass { mu, s } = *class;
    if data == DataModel::FunctionL2w && s < 2.0 {
        return Err(Error::InvalidPlan {
            what: format!("the function-error model requires s >= 2, got s = {s}"),
        });
    }
    let numerator = match metric {
        Metric::C => mu - 2.0 * r as f64 + 1.0 / s - 1.0,
        Metric::L2w => mu - 2.0 * r as f64 + 1.0 / s - 0.5,
    };
    let denominator = match data {
        DataModel::CoeffLp => mu - inv(p) + 1.0 / s,
        DataModel::FunctionL2w => mu + 1.0 / s - 0.5,
    };
    let regime = format!(
        "{}-{}",
        metric.label(),
        match data {
            DataModel::CoeffLp => "lp",
            DataModel::FunctionL2w => "function",
        }
    );
    // The raw ratio exceeds one only for summation in the weighted L2 norm
    // from l_p data with p < 2. The error can never decay faster than the
    // data accuracy itself (a perturbation of the zeroth coefficient alone
    // survives every truncation), so the rate saturates at one there.
    Ok(RateReport {
        exponent: (numerator / denominator).min(1.0),
        regime,
    })
}

/// Whether summation (r = 0) is well posed: the recovery error then stays
/// proportional to delta itself. True exactly for the uniform metric with
/// p = 1, and for the weighted L2 metric with p <= 2 and s >= 2.
pub fn is_wellposed_summation(s: f64, p: f64, metric: Metric) -> bool {
    match metric {
        Metric::C => p == 1.0,
        Metric::L2w => p <= 2.0 && s >= 2.0,
    }
}
