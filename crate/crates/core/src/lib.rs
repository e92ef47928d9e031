//! Stable recovery of derivatives and truncated sums of functions on
//! [-1, 1] from noisy Fourier-Chebyshev coefficients.
//!
//! The input is a finite vector of coefficients in the orthonormal
//! Chebyshev basis, known only up to an l_p perturbation of size delta.
//! Differentiating such data term by term is ill-posed: the high-order
//! coefficients get amplified without bound. The method here regularizes
//! by truncation: keep the first N + 1 coefficients, differentiate the
//! truncated series exactly, and choose N from delta and the assumed
//! smoothness of the underlying function so that the truncation error and
//! the amplified noise balance. With that choice the total error decays
//! at the best possible power of delta.
//!
//! The crate provides the series arithmetic ([`series`], [`derivative`]),
//! the smoothness classes and their extremal functions ([`smoothness`]),
//! the truncation rule and its error theory ([`truncate`]), coefficient
//! ingestion by Gauss-Chebyshev and Clenshaw-Curtis quadrature
//! ([`quadrature`]), reproducible noise simulation ([`noise`]), error
//! measurement and rate fitting ([`metrics`]), the benchmark functions
//! ([`functions`]) and an end-to-end experiment driver ([`experiment`]).

pub mod derivative;
pub mod error;
pub mod experiment;
pub mod functions;
pub mod metrics;
pub mod noise;
pub mod quadrature;
pub mod series;
pub mod smoothness;
pub mod truncate;

pub use derivative::{derivative_pass, differentiate_series};
pub use error::{Error, Result};
pub use experiment::{
    emit_table, run_example, DeltaSummary, ExperimentConfig, ExperimentReport, ExperimentRow,
    InputModel, DEFAULT_MASTER_SEED,
};
pub use functions::{reference_derivative, Benchmark};
pub use metrics::{error_between, fit_rate, ErrorPair, RateFit};
pub use noise::{add_noise, derive_seed, NoiseKind, NoiseSpec, SplitMix64};
pub use quadrature::{
    choose_quadrature_n, clenshaw_curtis_coeffs, coeff_l2_error, default_quadrature,
    exact_coeffs, gauss_chebyshev_coeffs, nonsmooth_quadrature, SampledFunction, QUADRATURE_CAP,
};
pub use series::{basis_eval, basis_scale, lobatto_grid, ChebSeries, DEFAULT_SUP_GRID};
pub use smoothness::{
    make_extremal_f1, make_extremal_f2, norm_smooth, SmoothnessClass, MAX_EXTREMAL_BLOCK_START,
};
pub use truncate::{
    check_admissible, is_wellposed_summation, select_truncation_level, theoretical_rate,
    truncate_recover, DataModel, Metric, RateReport, RecoveryPlan,
};
