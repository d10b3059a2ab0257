use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aisgd::checks::{run_checks, CheckOptions};
use aisgd::experiments::{
    parse_kv, prepare, run_benchmark, run_prepared, sensitivity_sweep, write_sweep_csv, ConfigMap,
    ExperimentConfig, SweepAxis,
};
use aisgd::{Algorithm, Error, Family, RngSeed};
use clap::{Args, Parser, Subcommand};

const EXIT_VALIDATION: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_DIVERGED: u8 = 3;
const EXIT_CHECK_FAILED: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "aisgd",
    version,
    about = "Streaming implicit/averaged SGD: fit, benchmark, sweep, check"
)]
struct Cli {
    /// More log output (-v info, -vv debug). RUST_LOG takes precedence.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit one model on a synthetic stream or a libsvm file and write the estimate.
    Fit(FitArgs),
    /// Run a benchmark config and write one CSV trace per run.
    Bench(BenchArgs),
    /// Vary one hyperparameter of a benchmark config and write a wide CSV.
    Sweep(SweepArgs),
    /// Run the numeric property checks.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Synthetic data as key=value pairs: n, p, task, noise_sd, theta_star, test.n.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE", conflicts_with = "data")]
    synthetic: Vec<String>,
    /// libsvm training file.
    #[arg(long)]
    data: Option<PathBuf>,
    /// libsvm test file (default: hold out --test-fraction of --data).
    #[arg(long, requires = "data")]
    test: Option<PathBuf>,
    #[arg(long, requires = "data", default_value_t = 0.2)]
    test_fraction: f64,
    #[arg(long, default_value = "aisgd")]
    algo: String,
    #[arg(long, default_value = "squared")]
    loss: String,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// const:<g>, poly:<g1>:<exp>, xu:<eta0> or xu:auto.
    #[arg(long, default_value = "xu:auto")]
    rate: String,
    #[arg(long, default_value_t = 1)]
    passes: usize,
    /// zero, ones, unit, random:<norm> or a comma-separated list.
    #[arg(long)]
    theta0: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Estimate file: one number per line.
    #[arg(long, short, default_value = "estimate.txt")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    config: PathBuf,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Debug)]
struct SweepArgs {
    config: PathBuf,
    /// lambda, gamma_constant, gamma1 or eta0.
    #[arg(long)]
    axis: String,
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    /// Output CSV (default: <out>/sweep_<axis>.csv).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Debug)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    algorithms: Option<String>,
    /// Any config key, e.g. `--set n=5000` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Only run checks whose name contains this string.
    #[arg(long)]
    filter: Option<String>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn split_kv(s: &str) -> Result<(String, String), Error> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| Error::InvalidArgument(format!("expected KEY=VALUE, got `{s}`")))
}

fn load_config(path: &Path, ov: &Overrides) -> Result<ExperimentConfig, Error> {
    let text = fs::read_to_string(path)?;
    let mut map = parse_kv(&text)?;
    for kv in &ov.set {
        let (k, v) = split_kv(kv)?;
        map.insert(k, v);
    }
    if let Some(seed) = ov.seed {
        map.insert("seed".into(), seed.to_string());
    }
    if let Some(out) = &ov.out {
        map.insert("out".into(), out.clone());
    }
    if let Some(a) = &ov.algorithms {
        map.insert("algorithms".into(), a.clone());
    }
    ExperimentConfig::from_map(&map)
}

fn rate_keys(rate: &str, map: &mut ConfigMap) -> Result<(), Error> {
    let parts: Vec<&str> = rate.split(':').collect();
    let bad = || Error::InvalidSchedule(format!("cannot parse rate `{rate}`"));
    match parts.as_slice() {
        ["const", g] => {
            map.insert("schedule.kind".into(), "constant".into());
            map.insert("schedule.gamma".into(), g.to_string());
        }
        ["poly", g1, e] => {
            map.insert("schedule.kind".into(), "poly".into());
            map.insert("schedule.gamma1".into(), g1.to_string());
            map.insert("schedule.exponent".into(), e.to_string());
        }
        ["xu", e] => {
            map.insert("schedule.kind".into(), "xu".into());
            map.insert("schedule.eta0".into(), e.to_string());
        }
        _ => return Err(bad()),
    }
    Ok(())
}

fn fit(args: &FitArgs) -> Result<u8, Error> {
    let algorithm: Algorithm = args.algo.parse()?;
    let family: Family = args.loss.parse()?;
    let mut map = ConfigMap::new();
    map.insert("algorithms".into(), algorithm.name().into());
    map.insert("loss".into(), args.loss.clone());
    map.insert("lambda".into(), args.lambda.to_string());
    rate_keys(&args.rate, &mut map)?;
    map.insert("passes".into(), args.passes.to_string());
    map.insert("seed".into(), args.seed.to_string());
    map.insert("out".into(), ".".into());
    if let Some(t) = &args.theta0 {
        map.insert("theta0".into(), t.clone());
    }
    match &args.data {
        Some(path) => {
            map.insert("task".into(), "libsvm".into());
            map.insert("data.path".into(), path.display().to_string());
            match &args.test {
                Some(t) => map.insert("test.path".into(), t.display().to_string()),
                None => map.insert("test.fraction".into(), args.test_fraction.to_string()),
            };
            map.insert("eval.log_points".into(), "1".into());
        }
        None => {
            let task = if family.is_classification() {
                "logistic"
            } else {
                "linear"
            };
            map.insert("task".into(), task.into());
            for kv in &args.synthetic {
                for tok in kv.split_whitespace() {
                    let (k, v) = split_kv(tok)?;
                    if !matches!(
                        k.as_str(),
                        "n" | "p" | "task" | "noise_sd" | "theta_star" | "test.n"
                    ) {
                        return Err(Error::InvalidArgument(format!(
                            "unknown synthetic key `{k}`"
                        )));
                    }
                    map.insert(k, v);
                }
            }
            for (k, v) in [("n", "1000"), ("p", "10")] {
                map.entry(k.into()).or_insert_with(|| v.into());
            }
            let n = map["n"].clone();
            map.insert("eval_every".into(), n);
        }
    }
    let cfg = ExperimentConfig::from_map(&map)?;
    let prep = prepare(&cfg)?;
    let run = run_prepared(&cfg, &prep)?
        .into_iter()
        .next()
        .expect("one algorithm and one schedule give one run");

    let mut w = BufWriter::new(fs::File::create(&args.out)?);
    for v in run.state.estimate() {
        writeln!(w, "{v:.17e}")?;
    }
    w.flush()?;

    let metric = run.trace.final_metric();
    println!(
        "{}: n={} metric={metric:.6e}{} -> {}",
        run.run_id,
        run.state.n,
        if run.trace.diverged { " DIVERGED" } else { "" },
        args.out.display()
    );
    Ok(if run.trace.diverged { EXIT_DIVERGED } else { 0 })
}

fn bench(args: &BenchArgs) -> Result<u8, Error> {
    let cfg = load_config(&args.config, &args.overrides)?;
    let res = run_benchmark(&cfg)?;
    for (r, f) in res.runs.iter().zip(&res.files) {
        println!(
            "{:<32} final={:.6e}{}  {}",
            r.run_id,
            r.trace.final_metric(),
            if r.trace.diverged { " diverged" } else { "" },
            f.display()
        );
    }
    Ok(0)
}

fn sweep(args: &SweepArgs) -> Result<u8, Error> {
    let cfg = load_config(&args.config, &args.overrides)?;
    let axis: SweepAxis = args.axis.parse()?;
    let res = sensitivity_sweep(&cfg, axis, &args.values)?;
    let path = match &args.csv {
        Some(p) => p.clone(),
        None => {
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
            fs::create_dir_all(&dir)?;
            dir.join(format!("sweep_{}.csv", axis.name()))
        }
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let mut w = BufWriter::new(fs::File::create(&path)?);
    write_sweep_csv(&res, &mut w)?;
    w.flush()?;

    println!("{:>12}  {}", axis.name(), res.columns.join("  "));
    for (v, row) in res.values.iter().zip(&res.metrics) {
        let cells: Vec<String> = row.iter().map(|m| format!("{m:.4e}")).collect();
        println!("{v:>12.3e}  {}", cells.join("  "));
    }
    for c in &res.columns {
        println!("spread {c}: {:.4e}", res.spread(c).unwrap_or(f64::NAN));
    }
    println!("-> {}", path.display());
    Ok(0)
}

fn check(args: &CheckArgs) -> Result<u8, Error> {
    let mut opts = CheckOptions {
        seed: RngSeed(args.seed),
        ..CheckOptions::default()
    };
    if args.inject_fault {
        opts.tol = 1.0;
    }
    let outcomes = run_checks(&opts, args.filter.as_deref())?;
    if outcomes.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no check matches `{}`",
            args.filter.as_deref().unwrap_or("")
        )));
    }
    let mut failed = 0;
    for o in &outcomes {
        println!(
            "{} {:<12} {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        failed += usize::from(!o.passed);
    }
    println!(
        "{} of {} checks passed",
        outcomes.len() - failed,
        outcomes.len()
    );
    Ok(if failed > 0 { EXIT_CHECK_FAILED } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let res = match &cli.command {
        Command::Fit(a) => fit(a),
        Command::Bench(a) => bench(a),
        Command::Sweep(a) => sweep(a),
        Command::Check(a) => check(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { EXIT_IO } else { EXIT_VALIDATION })
        }
    }
}
