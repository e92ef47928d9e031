//! Command line driver: run the published experiments, recover a derivative
//! or truncated sum from a coefficient or sample file, and query the
//! theoretical error rates.
//!
//! Every option can also come from a `key = value` config file given with
//! --config; explicit flags override the file. Exit codes: 0 on success,
//! 2 for configuration errors (bad parameters, inadmissible classes),
//! 3 for data errors (unreadable or malformed input files).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use chebtrunc::{
    clenshaw_curtis_coeffs, error_between, is_wellposed_summation, run_example, theoretical_rate,
    truncate_recover, Benchmark, ChebSeries, DataModel, Error, ExperimentConfig, InputModel,
    Metric, NoiseKind, RecoveryPlan, Result, SampledFunction, SmoothnessClass, DEFAULT_SUP_GRID,
};

#[derive(Parser)]
#[command(
    name = "chebtrunc",
    version,
    about = "Recover derivatives and sums from noisy Fourier-Chebyshev coefficients"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a benchmark experiment and print its summary table as CSV.
    Example(ExampleArgs),
    /// Recover the r-th derivative from a coefficient or sample file.
    Recover(RecoverArgs),
    /// Recover the truncated sum (order r = 0) from a coefficient or sample file.
    Sum(RecoverArgs),
    /// Print the theoretical error exponents for a class as CSV.
    Rate(RateArgs),
}

#[derive(Args)]
struct ExampleArgs {
    /// Benchmark name: ex1, ex2 or ex3.
    name: Option<String>,
    /// key = value file supplying defaults for the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Derivative order (0 sums the series).
    #[arg(long)]
    r: Option<usize>,
    /// Noise level; repeat for a ladder of levels.
    #[arg(long = "delta")]
    deltas: Vec<f64>,
    /// Noise draws per level.
    #[arg(long)]
    seeds: Option<usize>,
    /// Input model: relative, lp-projected, none or quadrature.
    #[arg(long)]
    noise: Option<String>,
    /// Smoothness order of the assumed class.
    #[arg(long)]
    mu: Option<f64>,
    /// Summability index of the assumed class.
    #[arg(long)]
    s: Option<f64>,
    /// l_p index of the data perturbation.
    #[arg(long)]
    p: Option<f64>,
    /// Constant in the truncation level rule.
    #[arg(long)]
    cn: Option<f64>,
    /// Master seed for the noise streams.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for report.csv, ratefit.csv and plot files.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RecoverArgs {
    /// key = value file supplying defaults for the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coefficient file (text format written by this tool).
    #[arg(long)]
    coeffs: Option<PathBuf>,
    /// Sample file on the Clenshaw-Curtis grid, one "t value" pair per line.
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Derivative order (fixed to 0 by the sum command).
    #[arg(long)]
    r: Option<usize>,
    /// Noise level of the data.
    #[arg(long)]
    delta: Option<f64>,
    /// Smoothness order of the assumed class.
    #[arg(long)]
    mu: Option<f64>,
    /// Summability index of the assumed class.
    #[arg(long)]
    s: Option<f64>,
    /// l_p index of the data perturbation.
    #[arg(long)]
    p: Option<f64>,
    /// Error metric the level rule targets: C or L2w.
    #[arg(long)]
    metric: Option<String>,
    /// Constant in the truncation level rule.
    #[arg(long)]
    cn: Option<f64>,
    /// Coefficient file of the true derivative; errors are printed when given.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Write the recovered coefficients here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RateArgs {
    /// Derivative order.
    #[arg(long)]
    r: Option<usize>,
    /// Smoothness order of the assumed class.
    #[arg(long)]
    mu: f64,
    /// Summability index of the assumed class.
    #[arg(long)]
    s: Option<f64>,
    /// l_p index of the data perturbation.
    #[arg(long)]
    p: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match cli.cmd {
        Cmd::Example(args) => cmd_example(args),
        Cmd::Recover(args) => cmd_recover(args, false),
        Cmd::Sum(args) => cmd_recover(args, true),
        Cmd::Rate(args) => cmd_rate(args),
    };
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_config() { 2 } else { 3 })
        }
    }
}

/// Writes to stdout, exiting quietly when the reading end has gone away
/// (e.g. piped into head) instead of panicking.
fn print_out(text: &str) {
    let mut out = std::io::stdout().lock();
    let result = out.write_all(text.as_bytes()).and_then(|()| out.flush());
    if let Err(err) = result {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {err}");
        std::process::exit(3);
    }
}

/// key = value pairs from a config file; keys must be known to the command.
struct FileConfig(HashMap<String, String>);

impl FileConfig {
    fn load(path: Option<&PathBuf>, allowed: &[&str]) -> Result<FileConfig> {
        let mut map = HashMap::new();
        let Some(path) = path else {
            return Ok(FileConfig(map));
        };
        let text = std::fs::read_to_string(path).map_err(|err| Error::InvalidPlan {
            what: format!("cannot read config {}: {err}", path.display()),
        })?;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidPlan {
                    what: format!(
                        "{} line {}: expected key = value, got {line:?}",
                        path.display(),
                        idx + 1
                    ),
                });
            };
            let key = key.trim().to_string();
            if !allowed.contains(&key.as_str()) {
                return Err(Error::InvalidPlan {
                    what: format!("{} line {}: unknown key {key:?}", path.display(), idx + 1),
                });
            }
            map.insert(key, value.trim().to_string());
        }
        Ok(FileConfig(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| Error::InvalidPlan {
                what: format!("config key {key} has unparseable value {raw:?}"),
            }),
        }
    }

    fn get_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|item| {
                    let item = item.trim();
                    item.parse().map_err(|_| Error::InvalidPlan {
                        what: format!("config key {key} has unparseable entry {item:?}"),
                    })
                })
                .collect::<Result<Vec<f64>>>()
                .map(Some),
        }
    }
}

/// Flag value if given, else config value, else none.
fn pick<T: FromStr>(flag: Option<T>, cfg: &FileConfig, key: &str) -> Result<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

fn parse_benchmark(name: &str) -> Result<Benchmark> {
    Benchmark::parse(name).ok_or_else(|| Error::InvalidPlan {
        what: format!("unknown benchmark {name:?} (expected ex1, ex2 or ex3)"),
    })
}

fn parse_metric(name: &str) -> Result<Metric> {
    match name {
        "C" | "c" | "sup" => Ok(Metric::C),
        "L2w" | "l2w" | "L2" | "l2" => Ok(Metric::L2w),
        _ => Err(Error::InvalidPlan {
            what: format!("unknown metric {name:?} (expected C or L2w)"),
        }),
    }
}

fn parse_input_model(name: &str) -> Result<InputModel> {
    if name == "quadrature" {
        return Ok(InputModel::Quadrature);
    }
    let kind = NoiseKind::parse(name).ok_or_else(|| Error::InvalidPlan {
        what: format!(
            "unknown input model {name:?} (expected relative, lp-projected, none or quadrature)"
        ),
    })?;
    Ok(InputModel::Noise(kind))
}

fn cmd_example(args: ExampleArgs) -> Result<()> {
    const KEYS: &[&str] = &[
        "example", "r", "delta", "seeds", "noise", "mu", "s", "p", "cn", "seed", "out",
    ];
    let cfg = FileConfig::load(args.config.as_ref(), KEYS)?;

    let name = match args.name {
        Some(name) => name,
        None => cfg.get::<String>("example")?.ok_or(Error::InvalidPlan {
            what: "benchmark name is required (ex1, ex2 or ex3)".to_string(),
        })?,
    };
    let bench = parse_benchmark(&name)?;
    let mut config = ExperimentConfig::for_benchmark(bench);

    if let Some(r) = pick(args.r, &cfg, "r")? {
        config.r = r;
    }
    if !args.deltas.is_empty() {
        config.deltas = args.deltas.clone();
    } else if let Some(deltas) = cfg.get_list("delta")? {
        config.deltas = deltas;
    }
    if let Some(seeds) = pick(args.seeds, &cfg, "seeds")? {
        config.seeds = seeds;
    }
    if let Some(noise) = pick(args.noise, &cfg, "noise")? {
        config.input = parse_input_model(&noise)?;
    }
    let mu = pick(args.mu, &cfg, "mu")?.unwrap_or(config.class.mu);
    let s = pick(args.s, &cfg, "s")?.unwrap_or(config.class.s);
    config.class = SmoothnessClass::new(mu, s)?;
    if let Some(p) = pick(args.p, &cfg, "p")? {
        config.p = p;
    }
    if let Some(cn) = pick(args.cn, &cfg, "cn")? {
        config.c_n = cn;
    }
    if let Some(seed) = pick(args.seed, &cfg, "seed")? {
        config.master_seed = seed;
    }
    config.output_dir = match args.out {
        Some(out) => Some(out),
        None => cfg.get::<PathBuf>("out")?,
    };

    let report = run_example(&config)?;
    print_out(&chebtrunc::emit_table(&report));
    for (label, fit) in &report.rate_fits {
        eprintln!(
            "rate fit {label}: error ~ delta^{:.3} (r2 = {:.4})",
            fit.slope, fit.r2
        );
    }
    if let Some(dir) = &config.output_dir {
        eprintln!(
            "wrote report.csv, ratefit.csv and {} plot files to {}",
            report.summaries.len(),
            dir.display()
        );
    }
    Ok(())
}

fn cmd_recover(args: RecoverArgs, is_sum: bool) -> Result<()> {
    const KEYS: &[&str] = &[
        "coeffs", "samples", "r", "delta", "mu", "s", "p", "metric", "cn", "reference", "out",
    ];
    let cfg = FileConfig::load(args.config.as_ref(), KEYS)?;

    let r = match (is_sum, pick(args.r, &cfg, "r")?) {
        (true, Some(_)) => {
            return Err(Error::InvalidPlan {
                what: "sum fixes r = 0; use recover to set an order".to_string(),
            })
        }
        (true, None) => 0,
        (false, r) => r.unwrap_or(1),
    };
    let delta = pick(args.delta, &cfg, "delta")?.ok_or(Error::InvalidPlan {
        what: "--delta is required (0 keeps every coefficient)".to_string(),
    })?;
    let mu = pick(args.mu, &cfg, "mu")?.ok_or(Error::InvalidPlan {
        what: "--mu is required".to_string(),
    })?;
    let s = pick(args.s, &cfg, "s")?.unwrap_or(2.0);
    let p = pick(args.p, &cfg, "p")?.unwrap_or(2.0);
    let metric = match pick(args.metric, &cfg, "metric")? {
        Some(name) => parse_metric(&name)?,
        None => Metric::C,
    };
    let cn = pick(args.cn, &cfg, "cn")?.unwrap_or(1.0);

    let class = SmoothnessClass::new(mu, s)?;
    // delta = 0 means noise-free data: no window is needed, so the whole
    // input is kept and differentiating it is exact.
    let plan_n = if delta == 0.0 {
        None
    } else {
        Some(RecoveryPlan::new(class, r, p, metric, delta, cn)?.n)
    };

    if is_sum && !is_wellposed_summation(s, p, metric) {
        eprintln!(
            "warning: summation with s = {s}, p = {p} in metric {} is outside the \
             well-posed range; errors need not shrink with delta",
            metric.label()
        );
    }

    let coeffs_path = match args.coeffs {
        Some(path) => Some(path),
        None => cfg.get::<PathBuf>("coeffs")?,
    };
    let samples_path = match args.samples {
        Some(path) => Some(path),
        None => cfg.get::<PathBuf>("samples")?,
    };
    let (noisy, n) = match (coeffs_path, samples_path) {
        (Some(path), None) => {
            let series = ChebSeries::load(&path)?;
            let n = plan_n.or(series.max_index()).unwrap_or(0).max(r);
            (series, n)
        }
        (None, Some(path)) => {
            let samples = SampledFunction::load(&path)?;
            let n = plan_n.unwrap_or(samples.n()).max(r);
            (clenshaw_curtis_coeffs(&samples, n)?, n)
        }
        _ => {
            return Err(Error::InvalidPlan {
                what: "exactly one of --coeffs and --samples is required".to_string(),
            })
        }
    };
    if noisy.len() < n + 1 {
        eprintln!(
            "warning: input supplies {} coefficients of the {}-coefficient window; \
             the missing ones are treated as zero",
            noisy.len(),
            n + 1
        );
    }

    let recovered = truncate_recover(&noisy, r, n)?;
    match plan_n {
        Some(_) => {
            let rate = theoretical_rate(&class, r, p, metric, DataModel::CoeffLp)?;
            eprintln!(
                "N = {n}, r = {r}: kept {} of {} input coefficients, output has {}; \
                 worst-case error ~ delta^{:.4} in {}",
                (n + 1).min(noisy.len()),
                noisy.len(),
                recovered.len(),
                rate.exponent,
                metric.label()
            );
        }
        None => eprintln!(
            "noise-free: differentiated all {} input coefficients, output has {}",
            noisy.len(),
            recovered.len()
        ),
    }

    let reference_path = match args.reference {
        Some(path) => Some(path),
        None => cfg.get::<PathBuf>("reference")?,
    };
    if let Some(path) = reference_path {
        let reference = ChebSeries::load(&path)?;
        let err = error_between(&recovered, &reference, DEFAULT_SUP_GRID);
        eprintln!("error vs reference: L2w {:e}, C {:e}", err.l2w, err.sup);
    }

    let out_path = match args.out {
        Some(path) => Some(path),
        None => cfg.get::<PathBuf>("out")?,
    };
    match out_path {
        Some(path) => {
            recovered.save(&path)?;
            eprintln!("wrote {}", path.display());
        }
        None => print_out(&recovered.to_text()),
    }
    Ok(())
}

fn cmd_rate(args: RateArgs) -> Result<()> {
    let r = args.r.unwrap_or(1);
    let s = args.s.unwrap_or(2.0);
    let p = args.p.unwrap_or(2.0);
    let class = SmoothnessClass::new(args.mu, s)?;

    let combos = [
        (Metric::C, DataModel::CoeffLp, "coeff-lp"),
        (Metric::L2w, DataModel::CoeffLp, "coeff-lp"),
        (Metric::C, DataModel::FunctionL2w, "function-l2w"),
        (Metric::L2w, DataModel::FunctionL2w, "function-l2w"),
    ];
    let mut table = String::from("metric,model,exponent,regime\n");
    let mut last_err = None;
    let mut any_ok = false;
    for (metric, model, model_label) in combos {
        match theoretical_rate(&class, r, p, metric, model) {
            Ok(rate) => {
                any_ok = true;
                let _ = writeln!(
                    table,
                    "{},{model_label},{:e},{}",
                    metric.label(),
                    rate.exponent,
                    rate.regime
                );
            }
            Err(err) => {
                let _ = writeln!(table, "{},{model_label},-,inadmissible", metric.label());
                last_err = Some(err);
            }
        }
    }
    print_out(&table);
    if any_ok {
        Ok(())
    } else {
        Err(last_err.expect("no combo succeeded, so an error was recorded"))
    }
}
