//! The three benchmark functions driving the bundled experiments, with
//! closed-form derivatives and reference expansions.
//!
//! Scales are chosen so each function sits near the unit ball of its
//! smoothness class: (1 - t^2)^(5/2)/497 in (mu = 5.4, s = 2), |t|/7 in
//! (mu = 2, s = 2), and t sin(pi t / 2)/1580 in (mu = 6.5, s = 2).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{default_quadrature, gauss_chebyshev_coeffs, nonsmooth_quadrature};
use crate::series::ChebSeries;
use crate::smoothness::SmoothnessClass;

/// Identifier of a bundled benchmark function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    /// f(t) = (1 - t^2)^(5/2) / 497; finite smoothness, differentiable twice.
    F1,
    /// f(t) = |t| / 7; summation only.
    F2,
    /// f(t) = t sin(pi t / 2) / 1580; entire.
    F3,
}

impl Benchmark {
    pub fn parse(name: &str) -> Option<Benchmark> {
        match name {
            "ex1" | "f1" => Some(Benchmark::F1),
            "ex2" | "f2" => Some(Benchmark::F2),
            "ex3" | "f3" => Some(Benchmark::F3),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Benchmark::F1 => "ex1",
            Benchmark::F2 => "ex2",
            Benchmark::F3 => "ex3",
        }
    }

    /// Highest derivative order with a closed-form reference.
    pub fn max_order(&self) -> usize {
        match self {
            Benchmark::F1 | Benchmark::F3 => 2,
            Benchmark::F2 => 0,
        }
    }

    /// Smoothness class in which the function (approximately) sits.
    pub fn class(&self) -> SmoothnessClass {
        let (mu, s) = match self {
            Benchmark::F1 => (5.4, 2.0),
            Benchmark::F2 => (2.0, 2.0),
            Benchmark::F3 => (6.5, 2.0),
        };
        SmoothnessClass::new(mu, s).expect("benchmark classes are valid")
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Benchmark::F1 => (1.0 - t * t).powf(2.5) / 497.0,
            Benchmark::F2 => t.abs() / 7.0,
            Benchmark::F3 => t * (PI * t / 2.0).sin() / 1580.0,
        }
    }

    /// Closed-form r-th derivative value, r <= max_order().
    pub fn derivative_value(&self, r: usize, t: f64) -> Result<f64> {
        if r > self.max_order() {
            return Err(Error::InvalidPlan {
                what: format!(
                    "{} has reference derivatives only up to order {}, asked for {r}",
                    self.label(),
                    self.max_order()
                ),
            });
        }
        Ok(match (self, r) {
            (_, 0) => self.value(t),
            (Benchmark::F1, 1) => -5.0 * t * (1.0 - t * t).powf(1.5) / 497.0,
            (Benchmark::F1, 2) => {
                let w = 1.0 - t * t;
                (-5.0 * w.powf(1.5) + 15.0 * t * t * w.sqrt()) / 497.0
            }
            (Benchmark::F3, 1) => {
                let x = PI * t / 2.0;
                (x.sin() + t * (PI / 2.0) * x.cos()) / 1580.0
            }
            (Benchmark::F3, 2) => {
                let x = PI * t / 2.0;
                (PI * x.cos() - t * (PI / 2.0) * (PI / 2.0) * x.sin()) / 1580.0
            }
            _ => unreachable!("guarded by max_order"),
        })
    }

    /// Expansion length used for reference series: generous for the two
    /// functions of finite smoothness, modest for the entire one.
    pub fn reference_len(&self) -> usize {
        match self {
            Benchmark::F1 | Benchmark::F2 => 4096,
            Benchmark::F3 => 256,
        }
    }

    fn quadrature_size(&self, m: usize) -> usize {
        match self {
            Benchmark::F2 => nonsmooth_quadrature(m),
            _ => default_quadrature(m),
        }
    }

    /// Coefficients a_0..a_m of the function itself.
    pub fn exact_series(&self, m: usize) -> Result<ChebSeries> {
        gauss_chebyshev_coeffs(|t| self.value(t), m, self.quadrature_size(m))
    }
}

/// Expansion of the closed-form r-th derivative, supported up to the
/// benchmark's reference length.
pub fn reference_derivative(bench: Benchmark, r: usize) -> Result<ChebSeries> {
    bench.derivative_value(r, 0.0)?; // surface the order error early
    let m = bench.reference_len();
    gauss_chebyshev_coeffs(
        |t| bench.derivative_value(r, t).expect("order checked above"),
        m,
        bench.quadrature_size(m),
    )
}
