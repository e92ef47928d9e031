//! Reproducible noise for coefficient vectors.
//!
//! Simulations must replay bit for bit across runs and thread counts, so the
//! generator is pinned down completely: a splitmix64 stream for uniforms and
//! the Box-Muller transform (two uniform draws per normal, in fixed order)
//! for Gaussians. Nothing here depends on platform word size or on global
//! RNG state.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::series::ChebSeries;
use crate::smoothness::validate_p;

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

/// splitmix64 finalizer: a bijective mix of the state word.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Seedable 64-bit generator (splitmix64).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform draw in (0, 1]; never zero, so logarithms stay finite.
    pub fn next_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller: u1 then u2 are drawn in that order
    /// and combined as sqrt(-2 ln u1) cos(2 pi u2).
    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }
}

/// Independent stream seed for row (a, b) of a run keyed by `master`.
/// Chained finalizer applications keep streams with swapped indices or
/// nearby seeds uncorrelated.
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    mix(mix(mix(master).wrapping_add(GOLDEN.wrapping_mul(a.wrapping_add(1))))
        .wrapping_add(GOLDEN.wrapping_mul(b.wrapping_add(2))))
}

/// Shape of simulated coefficient noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    /// xi_k = delta g_k |F_k| / (2 ||F||_2) with independent standard
    /// normals g_k: each coefficient is perturbed relative to its own size.
    Relative,
    /// A random direction rescaled so that ||xi||_p = delta exactly.
    LpProjected,
    /// No perturbation.
    Clean,
}

impl NoiseKind {
    pub fn parse(name: &str) -> Option<NoiseKind> {
        match name {
            "relative" => Some(NoiseKind::Relative),
            "lp-projected" => Some(NoiseKind::LpProjected),
            "none" => Some(NoiseKind::Clean),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            NoiseKind::Relative => "relative",
            NoiseKind::LpProjected => "lp-projected",
            NoiseKind::Clean => "none",
        }
    }
}

/// A concrete noise request: kind, level, the l_p index used by
/// [`NoiseKind::LpProjected`], and the stream seed.
#[derive(Debug, Clone, Copy)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub delta: f64,
    pub p: f64,
    pub seed: u64,
}

fn lp_norm(v: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    } else {
        v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Perturbs a coefficient vector according to the spec. Draw order is one
/// normal per coefficient, ascending index, so results are reproducible.
pub fn add_noise(clean: &ChebSeries, spec: &NoiseSpec) -> Result<ChebSeries> {
    if spec.kind == NoiseKind::Clean {
        return Ok(clean.clone());
    }
    if !(spec.delta > 0.0 && spec.delta < 1.0) {
        return Err(Error::InvalidDelta { delta: spec.delta });
    }
    validate_p(spec.p)?;
    let coeffs = clean.coeffs();
    let mut rng = SplitMix64::new(spec.seed);
    let draws: Vec<f64> = coeffs.iter().map(|_| rng.next_normal()).collect();
    let noisy: Vec<f64> = match spec.kind {
        NoiseKind::Relative => {
            let norm = clean.norm_l2w();
            if norm == 0.0 {
                // Relative noise on the zero vector vanishes.
                return Ok(clean.clone());
            }
            coeffs
                .iter()
                .zip(&draws)
                .map(|(&a, &g)| a + spec.delta * g * a.abs() / (2.0 * norm))
                .collect()
        }
        NoiseKind::LpProjected => {
            let scale = spec.delta / lp_norm(&draws, spec.p);
            coeffs
                .iter()
                .zip(&draws)
                .map(|(&a, &g)| a + scale * g)
                .collect()
        }
        NoiseKind::Clean => unreachable!(),
    };
    ChebSeries::new(noisy)
}
