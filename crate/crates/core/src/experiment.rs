//! End-to-end experiment pipeline: ingest a benchmark function, perturb or
//! sample it, recover the derivative (or sum) at every noise level, and
//! aggregate the errors across seeds.
//!
//! Rows are computed in parallel but keyed by (delta index, seed index) and
//! every random stream is derived from the master seed, so reports and CSV
//! outputs are byte-identical across runs and thread counts.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functions::{reference_derivative, Benchmark};
use crate::metrics::{fit_rate, ErrorPair, RateFit};
use crate::noise::{add_noise, derive_seed, NoiseKind, NoiseSpec};
use crate::quadrature::{choose_quadrature_n, clenshaw_curtis_coeffs, SampledFunction};
use crate::series::{lobatto_grid, ChebSeries, DEFAULT_SUP_GRID};
use crate::smoothness::SmoothnessClass;
use crate::truncate::{select_truncation_level, truncate_recover, Metric};

/// Master seed used by the published experiment configurations.
pub const DEFAULT_MASTER_SEED: u64 = 42;

/// How the noisy coefficient vector is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputModel {
    /// Exact coefficients perturbed by simulated noise.
    Noise(NoiseKind),
    /// Coefficients computed by Clenshaw-Curtis quadrature sized to keep the
    /// perturbation near delta; deterministic, so one row per delta.
    Quadrature,
}

/// Full description of an experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub bench: Benchmark,
    pub r: usize,
    pub deltas: Vec<f64>,
    /// Noise draws per delta (ignored in quadrature mode).
    pub seeds: usize,
    pub master_seed: u64,
    pub input: InputModel,
    /// l_p index describing the data accuracy (and the lp-projected noise).
    pub p: f64,
    pub c_n: f64,
    pub class: SmoothnessClass,
    pub sup_grid: usize,
    /// When set, report.csv, ratefit.csv and per-delta plot files are
    /// written here.
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Published defaults for a benchmark: its class, its usual derivative
    /// order, magnitude-relative noise, and the standard delta ladder.
    pub fn for_benchmark(bench: Benchmark) -> Self {
        let (r, deltas) = match bench {
            Benchmark::F1 => (1, vec![1e-4, 1e-5, 1e-6]),
            Benchmark::F2 => (0, vec![1e-2, 1e-3, 1e-4]),
            Benchmark::F3 => (2, vec![1e-5, 1e-6, 1e-7]),
        };
        ExperimentConfig {
            bench,
            r,
            deltas,
            seeds: 50,
            master_seed: DEFAULT_MASTER_SEED,
            input: InputModel::Noise(NoiseKind::Relative),
            p: 2.0,
            c_n: 1.0,
            class: bench.class(),
            sup_grid: DEFAULT_SUP_GRID,
            output_dir: None,
        }
    }
}

/// One recovery: a (delta, seed) cell of the experiment.
#[derive(Debug, Clone)]
pub struct ExperimentRow {
    pub delta_index: usize,
    pub seed_index: usize,
    pub delta: f64,
    pub n_level: usize,
    pub n_quadrature: Option<usize>,
    pub err: ErrorPair,
    pub recovered: ChebSeries,
    pub wall_ms: f64,
}

/// Median errors of all rows sharing a delta.
#[derive(Debug, Clone)]
pub struct DeltaSummary {
    pub delta: f64,
    pub n_level: usize,
    pub n_quadrature: Option<usize>,
    pub median_l2w: f64,
    pub median_sup: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    pub summaries: Vec<DeltaSummary>,
    /// Log-log fits of the median errors against delta, labelled "l2w" and
    /// "sup"; present when at least three deltas were run.
    pub rate_fits: Vec<(String, RateFit)>,
}

fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Errors of a recovery against reference values that were evaluated once.
fn measure(
    recovered: &ChebSeries,
    reference: &ChebSeries,
    grid: &[f64],
    ref_vals: &[f64],
) -> Result<ErrorPair> {
    let l2w = recovered.add_scaled(reference, -1.0).norm_l2w();
    let vals = recovered.eval_grid(grid)?;
    let sup = vals
        .iter()
        .zip(ref_vals)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(ErrorPair { l2w, sup })
}

/// Runs the configured experiment and, when an output directory is set,
/// writes report.csv, ratefit.csv and one plot_<delta>.csv per delta.
pub fn run_example(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.r > config.bench.max_order() {
        return Err(Error::InvalidPlan {
            what: format!(
                "{} supports orders up to {}, asked for r = {}",
                config.bench.label(),
                config.bench.max_order(),
                config.r
            ),
        });
    }
    if config.deltas.is_empty() {
        return Err(Error::InvalidPlan {
            what: "at least one delta is required".to_string(),
        });
    }
    let mut deltas = config.deltas.clone();
    deltas.sort_by(|a, b| b.total_cmp(a));
    deltas.dedup();

    // The level rule is metric-free; the uniform-metric gate is the stricter
    // admissibility check and both error norms are reported.
    let levels: Vec<usize> = deltas
        .iter()
        .map(|&d| select_truncation_level(&config.class, config.r, config.p, Metric::C, d, config.c_n))
        .collect::<Result<_>>()?;

    let reference = reference_derivative(config.bench, config.r)?;
    let grid = lobatto_grid(config.sup_grid);
    let ref_vals = reference.eval_grid(&grid)?;

    let rows: Vec<ExperimentRow> = match config.input {
        InputModel::Noise(kind) => {
            if config.seeds == 0 {
                return Err(Error::InvalidPlan {
                    what: "noise experiments need at least one seed".to_string(),
                });
            }
            let m_data = *levels.iter().max().expect("deltas is non-empty");
            let clean = config.bench.exact_series(m_data)?;
            let tasks: Vec<(usize, usize)> = (0..deltas.len())
                .flat_map(|di| (0..config.seeds).map(move |si| (di, si)))
                .collect();
            tasks
                .into_par_iter()
                .map(|(di, si)| {
                    let start = Instant::now();
                    let spec = NoiseSpec {
                        kind,
                        delta: deltas[di],
                        p: config.p,
                        seed: derive_seed(config.master_seed, di as u64, si as u64),
                    };
                    let noisy = add_noise(&clean, &spec)?;
                    let recovered = truncate_recover(&noisy, config.r, levels[di])?;
                    let err = measure(&recovered, &reference, &grid, &ref_vals)?;
                    Ok(ExperimentRow {
                        delta_index: di,
                        seed_index: si,
                        delta: deltas[di],
                        n_level: levels[di],
                        n_quadrature: None,
                        err,
                        recovered,
                        wall_ms: start.elapsed().as_secs_f64() * 1e3,
                    })
                })
                .collect::<Result<_>>()?
        }
        InputModel::Quadrature => {
            let value = |t: f64| config.bench.value(t);
            deltas
                .par_iter()
                .enumerate()
                .map(|(di, &delta)| {
                    let start = Instant::now();
                    let n_quad = choose_quadrature_n(value, delta, levels[di])?;
                    let samples = SampledFunction::from_fn(value, n_quad)?;
                    let noisy = clenshaw_curtis_coeffs(&samples, levels[di])?;
                    let recovered = truncate_recover(&noisy, config.r, levels[di])?;
                    let err = measure(&recovered, &reference, &grid, &ref_vals)?;
                    Ok(ExperimentRow {
                        delta_index: di,
                        seed_index: 0,
                        delta,
                        n_level: levels[di],
                        n_quadrature: Some(n_quad),
                        err,
                        recovered,
                        wall_ms: start.elapsed().as_secs_f64() * 1e3,
                    })
                })
                .collect::<Result<_>>()?
        }
    };

    let mut rows = rows;
    rows.sort_by_key(|row| (row.delta_index, row.seed_index));

    let summaries: Vec<DeltaSummary> = deltas
        .iter()
        .enumerate()
        .map(|(di, &delta)| {
            let mut l2: Vec<f64> = rows
                .iter()
                .filter(|r| r.delta_index == di)
                .map(|r| r.err.l2w)
                .collect();
            let mut sup: Vec<f64> = rows
                .iter()
                .filter(|r| r.delta_index == di)
                .map(|r| r.err.sup)
                .collect();
            DeltaSummary {
                delta,
                n_level: levels[di],
                n_quadrature: rows
                    .iter()
                    .find(|r| r.delta_index == di)
                    .and_then(|r| r.n_quadrature),
                median_l2w: median(&mut l2),
                median_sup: median(&mut sup),
            }
        })
        .collect();

    let mut rate_fits = Vec::new();
    if summaries.len() >= 3 {
        let l2_points: Vec<(f64, f64)> =
            summaries.iter().map(|s| (s.delta, s.median_l2w)).collect();
        let sup_points: Vec<(f64, f64)> =
            summaries.iter().map(|s| (s.delta, s.median_sup)).collect();
        rate_fits.push(("l2w".to_string(), fit_rate(&l2_points)?));
        rate_fits.push(("sup".to_string(), fit_rate(&sup_points)?));
    }

    let report = ExperimentReport {
        rows,
        summaries,
        rate_fits,
    };

    if let Some(dir) = &config.output_dir {
        write_outputs(&report, &reference, dir)?;
    }
    Ok(report)
}

/// The summary table as CSV, one row per delta in descending order.
pub fn emit_table(report: &ExperimentReport) -> String {
    let mut out = String::from("delta,N,median_err_l2w,median_err_sup,n_quadrature\n");
    for s in &report.summaries {
        let nq = s
            .n_quadrature
            .map(|n| n.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{:e},{},{:e},{:e},{nq}",
            s.delta, s.n_level, s.median_l2w, s.median_sup
        );
    }
    out
}

fn rate_table(report: &ExperimentReport) -> String {
    let mut out = String::from("metric,slope,intercept,r2,n_points\n");
    for (label, fit) in &report.rate_fits {
        let _ = writeln!(
            out,
            "{label},{:e},{:e},{:e},{}",
            fit.slope, fit.intercept, fit.r2, fit.n_points
        );
    }
    out
}

fn write_file(dir: &std::path::Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_outputs(
    report: &ExperimentReport,
    reference: &ChebSeries,
    dir: &std::path::Path,
) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    write_file(dir, "report.csv", &emit_table(report))?;
    if !report.rate_fits.is_empty() {
        write_file(dir, "ratefit.csv", &rate_table(report))?;
    }
    // One plot per delta from its first row: recovered and reference values
    // on a 512-point uniform grid.
    let ts: Vec<f64> = (0..512).map(|i| -1.0 + 2.0 * i as f64 / 511.0).collect();
    let ref_vals = reference.eval_grid(&ts)?;
    for (di, summary) in report.summaries.iter().enumerate() {
        let row = report
            .rows
            .iter()
            .find(|r| r.delta_index == di)
            .expect("every delta has rows");
        let vals = row.recovered.eval_grid(&ts)?;
        let mut text = String::from("t,approx,reference\n");
        for ((t, a), b) in ts.iter().zip(&vals).zip(&ref_vals) {
            let _ = writeln!(text, "{:e},{:e},{:e}", t, a, b);
        }
        write_file(dir, &format!("plot_{:e}.csv", summary.delta), &text)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        let mut config = ExperimentConfig::for_benchmark(Benchmark::F3);
        config.deltas = vec![1e-5, 1e-6];
        config.seeds = 3;
        config.sup_grid = 512;
        config
    }

    #[test]
    fn reports_are_deterministic_across_runs() {
        let config = tiny_config();
        let a = run_example(&config).unwrap();
        let b = run_example(&config).unwrap();
        assert_eq!(emit_table(&a), emit_table(&b));
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.err.l2w.to_bits(), rb.err.l2w.to_bits());
            assert_eq!(ra.err.sup.to_bits(), rb.err.sup.to_bits());
        }
    }

    #[test]
    fn reports_are_thread_count_independent() {
        let config = tiny_config();
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = pool1.install(|| run_example(&config)).unwrap();
        let b = pool4.install(|| run_example(&config)).unwrap();
        assert_eq!(emit_table(&a), emit_table(&b));
    }

    #[test]
    fn summary_table_round_trips_through_text() {
        let report = run_example(&tiny_config()).unwrap();
        let text = emit_table(&report);
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("delta,N,median_err_l2w,median_err_sup,n_quadrature")
        );
        for (line, summary) in lines.zip(&report.summaries) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols.len(), 5);
            assert_eq!(cols[0].parse::<f64>().unwrap(), summary.delta);
            assert_eq!(cols[1].parse::<usize>().unwrap(), summary.n_level);
            assert_eq!(cols[2].parse::<f64>().unwrap(), summary.median_l2w);
            assert_eq!(cols[3].parse::<f64>().unwrap(), summary.median_sup);
            assert_eq!(cols[4], "");
        }
    }

    #[test]
    fn deltas_are_reported_in_descending_order() {
        let mut config = tiny_config();
        config.deltas = vec![1e-6, 1e-5, 1e-6];
        let report = run_example(&config).unwrap();
        let ds: Vec<f64> = report.summaries.iter().map(|s| s.delta).collect();
        assert_eq!(ds, vec![1e-5, 1e-6]);
    }

    #[test]
    fn median_of_even_and_odd_counts() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(&mut [5.0]), 5.0);
    }

    #[test]
    fn rejects_orders_without_reference() {
        let mut config = ExperimentConfig::for_benchmark(Benchmark::F2);
        config.r = 1;
        assert!(run_example(&config).is_err());
    }

    #[test]
    fn plot_files_round_trip_series_evaluations() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = tiny_config();
        config.deltas = vec![1e-5];
        config.seeds = 1;
        config.output_dir = Some(dir.path().to_path_buf());
        let report = run_example(&config).unwrap();

        let text = std::fs::read_to_string(dir.path().join("plot_1e-5.csv")).unwrap();
        let recovered = &report.rows[0].recovered;
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,approx,reference"));
        let mut count = 0;
        for line in lines {
            let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            let again = recovered.eval(cols[0]).unwrap();
            assert_eq!(cols[1].to_bits(), again.to_bits(), "t = {}", cols[0]);
            count += 1;
        }
        assert_eq!(count, 512);
        assert!(dir.path().join("report.csv").exists());
    }

    #[test]
    fn quadrature_mode_records_n() {
        let mut config = tiny_config();
        config.input = InputModel::Quadrature;
        config.deltas = vec![1e-5];
        let report = run_example(&config).unwrap();
        assert_eq!(report.rows.len(), 1);
        let nq = report.rows[0].n_quadrature.unwrap();
        assert!(nq >= report.rows[0].n_level);
        assert!(report.summaries[0].n_quadrature.is_some());
    }
}
