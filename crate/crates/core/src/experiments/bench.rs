use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use rand::seq::SliceRandom;

use super::config::{DataSource, EvalSpec, ExperimentConfig, Leading, TestSource};
use crate::datagen::{
    excess_risk, make_holdout, make_normal_design, trace_radius, Covariance, Dataset,
    SyntheticSpec, Task,
};
use crate::error::{Error, Result};
use crate::libsvm::{read_libsvm_with, LabelMode};
use crate::loss::GlmLoss;
use crate::schedule::LearningRate;
use crate::solver::{Algorithm, OptimizerState};
use crate::stream::{EvalPlan, StreamRunner, Trace, TracePoint};
use crate::vector::Features;

pub const CSV_HEADER: &str = "run_id,n,metric,diverged,wall_ms";

/// Fraction of samples with `sign(xᵀθ) ≠ y`, where `sign(0) = +1`.
/// Non-finite predictions count as errors.
pub fn classification_error(theta: &[f64], test: &Dataset) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if theta.len() != test.p {
        return Err(Error::DimensionMismatch {
            expected: test.p,
            got: theta.len(),
        });
    }
    let wrong = test
        .samples
        .iter()
        .filter(|s| {
            let u = s.x.dot(theta);
            if u.is_nan() {
                return true;
            }
            let pred = if u >= 0.0 { 1.0 } else { -1.0 };
            pred != s.y
        })
        .count();
    Ok(wrong as f64 / test.len() as f64)
}

/// What a trace row measures.
#[derive(Debug, Clone)]
pub enum Metric {
    ExcessRisk(SyntheticSpec),
    TestError(Dataset),
    TestLoss(Dataset, GlmLoss),
}

impl Metric {
    pub fn eval(&self, theta: &[f64]) -> f64 {
        match self {
            Metric::ExcessRisk(spec) => excess_risk(theta, spec).unwrap_or(f64::NAN),
            Metric::TestError(test) => classification_error(theta, test).unwrap_or(f64::NAN),
            Metric::TestLoss(test, loss) => {
                let unreg = GlmLoss::new(loss.family);
                let total: f64 = test
                    .samples
                    .iter()
                    .map(|s| unreg.value(s.x.dot(theta), s.y).unwrap_or(f64::NAN))
                    .sum();
                total / test.len() as f64
            }
        }
    }
}

/// Training data, metric and scale shared by every run of an experiment.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub train: Dataset,
    pub metric: Metric,
    /// `trace(H)` for synthetic data, mean `‖x‖²` otherwise.
    pub r2: f64,
    pub theta0: Vec<f64>,
}

fn pad_sparse(data: &mut Dataset, p: usize) {
    for s in &mut data.samples {
        if let Features::Sparse(sv) = &mut s.x {
            sv.set_dim(p);
        }
    }
    data.p = p;
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    let seed = cfg.seed;
    let (mut train, metric, r2) = match &cfg.data {
        DataSource::Synthetic {
            task,
            n,
            p,
            theta_star,
            noise_sd,
            test_n,
        } => {
            let spec = SyntheticSpec {
                n: *n,
                theta_star: theta_star.build(*p, seed.derive(11))?,
                covariance: Covariance::harmonic(*p, seed.derive(0))?,
                noise_sd: *noise_sd,
                seed,
                task: *task,
            };
            let train = make_normal_design(&spec)?;
            let r2 = trace_radius(&spec);
            let metric = match task {
                Task::Linear => Metric::ExcessRisk(spec),
                Task::Logistic => Metric::TestError(make_holdout(&spec, *test_n, 0)?),
            };
            (train, metric, r2)
        }
        DataSource::Libsvm { path, test } => {
            let labels = if cfg.loss.family.is_classification() {
                LabelMode::Binary
            } else {
                LabelMode::Raw
            };
            let mut train = read_libsvm_with(path, labels)?;
            if cfg.shuffle {
                train.shuffle(seed.derive(3));
            }
            let (mut train, mut test) = match test {
                TestSource::Path(tp) => (train, read_libsvm_with(tp, labels)?),
                TestSource::Fraction(f) => train.split(*f)?,
                TestSource::None => {
                    return Err(Error::Config(
                        "libsvm runs need test.path or test.fraction".into(),
                    ))
                }
            };
            let p = train.p.max(test.p);
            pad_sparse(&mut train, p);
            pad_sparse(&mut test, p);
            let r2 = train.mean_norm_sq();
            let metric = if cfg.loss.family.is_classification() {
                Metric::TestError(test)
            } else {
                Metric::TestLoss(test, cfg.loss)
            };
            (train, metric, r2)
        }
    };
    if matches!(cfg.data, DataSource::Synthetic { .. }) && cfg.shuffle {
        train.shuffle(seed.derive(3));
    }
    if r2.is_nan() || r2 <= 0.0 {
        return Err(Error::InvalidArgument(
            "training features are all zero".into(),
        ));
    }
    for s in &train.samples {
        cfg.loss.check_label(s.y)?;
    }
    let theta0 = cfg.theta0.build(train.p, seed.derive(10))?;
    Ok(Prepared {
        train,
        metric,
        r2,
        theta0,
    })
}

/// Picks η₀ for the Xu schedule from `{2⁻⁶ … 2⁴}/R²` by the mean training
/// objective of a pilot run on a seeded subset of `min(1000, N/10)` samples.
pub fn tune_eta0(
    algorithm: Algorithm,
    loss: &GlmLoss,
    data: &Dataset,
    r2: f64,
    theta0: &[f64],
    seed: crate::rng::RngSeed,
    tol: f64,
) -> Result<f64> {
    let m = (data.len() / 10).clamp(1, 1000);
    let mut idx: Vec<usize> = (0..data.len()).collect();
    idx.shuffle(&mut seed.derive(20).rng());
    idx.truncate(m);
    let subset: Vec<_> = idx.iter().map(|&i| &data.samples[i]).collect();

    let mut best: Option<(f64, f64)> = None;
    for k in -6..=4 {
        let eta0 = 2f64.powi(k) / r2;
        let sched = LearningRate::xu(eta0)?;
        let mut state = OptimizerState::new(algorithm, theta0.to_vec());
        let mut ok = true;
        for s in &subset {
            if state.step(s, &sched, loss, tol).is_err() || state.is_diverged() {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let est = state.estimate();
        let obj: f64 = subset
            .iter()
            .map(|s| loss.objective(est, s).unwrap_or(f64::INFINITY))
            .sum::<f64>()
            / m as f64;
        if obj.is_finite() && best.is_none_or(|(_, b)| obj < b) {
            best = Some((eta0, obj));
        }
    }
    best.map(|(e, _)| e)
        .ok_or_else(|| Error::InvalidArgument("no η₀ on the tuning grid gave a finite loss".into()))
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub run_id: String,
    pub algorithm: Algorithm,
    pub schedule: LearningRate,
    pub trace: Trace,
    pub state: OptimizerState,
}

#[derive(Debug, Clone, Default)]
pub struct BenchResult {
    pub runs: Vec<RunResult>,
    pub files: Vec<PathBuf>,
}

impl BenchResult {
    pub fn run(&self, run_id: &str) -> Option<&RunResult> {
        self.runs.iter().find(|r| r.run_id == run_id)
    }
}

/// Replaces characters that are awkward in file names.
pub fn file_stem(run_id: &str) -> String {
    run_id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Writes a trace as CSV with a header and 17 significant digits.
pub fn write_trace_csv<W: Write>(trace: &Trace, mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for TracePoint {
        run_id,
        n,
        metric,
        diverged,
        wall_ms,
    } in &trace.points
    {
        writeln!(out, "{run_id},{n},{metric:.16e},{diverged},{wall_ms:.16e}")?;
    }
    Ok(())
}

/// Every (algorithm, schedule) pair on already-prepared data.
pub fn run_prepared(cfg: &ExperimentConfig, prep: &Prepared) -> Result<Vec<RunResult>> {
    let total = (prep.train.len() * cfg.passes) as u64;
    let plan = match cfg.eval {
        EvalSpec::Every(k) => EvalPlan::Every(k),
        EvalSpec::LogPoints(points) => EvalPlan::LogSpaced { total, points },
    };
    let mut runs = Vec::new();
    for &algorithm in &cfg.algorithms {
        let leads: Vec<(f64, String)> = match &cfg.schedule.leading {
            Leading::Values(v) => v.iter().map(|&x| (x, cfg.schedule.label(x))).collect(),
            Leading::Auto => {
                let eta0 = tune_eta0(
                    algorithm,
                    &cfg.loss,
                    &prep.train,
                    prep.r2,
                    &prep.theta0,
                    cfg.seed,
                    cfg.tol,
                )?;
                log::info!("{algorithm}: tuned eta0 = {eta0:e}");
                // tuned value is absolute, not in units of 1/R²
                vec![(
                    eta0 * if cfg.schedule.per_r2 { prep.r2 } else { 1.0 },
                    format!("xu:auto={eta0:e}"),
                )]
            }
        };
        for (value, label) in leads {
            let schedule = cfg.schedule.build(value, prep.r2)?;
            let run_id = format!("{algorithm}_{label}");
            let mut runner = StreamRunner::new(
                run_id.clone(),
                OptimizerState::new(algorithm, prep.theta0.clone()),
                cfg.loss,
                schedule,
                plan.clone(),
            )?
            .with_tolerance(cfg.tol);
            let mut eval = |t: &[f64]| prep.metric.eval(t);
            for _ in 0..cfg.passes {
                runner.consume(&prep.train.samples, &mut eval)?;
            }
            let (trace, state) = runner.finish();
            log::info!(
                "{run_id}: final metric {:.6e}{}",
                trace.final_metric(),
                if trace.diverged { " (diverged)" } else { "" }
            );
            runs.push(RunResult {
                run_id,
                algorithm,
                schedule,
                trace,
                state,
            });
        }
    }
    Ok(runs)
}

/// Runs every (algorithm, schedule) pair and writes one CSV per run into
/// `cfg.out` (created if missing). Diverged runs are results, not errors.
pub fn run_benchmark(cfg: &ExperimentConfig) -> Result<BenchResult> {
    cfg.validate()?;
    let prep = prepare(cfg)?;
    if let EvalSpec::Every(k) = cfg.eval {
        if k as usize > prep.train.len() {
            return Err(Error::Config(format!(
                "eval_every ({k}) exceeds the dataset size ({})",
                prep.train.len()
            )));
        }
    }
    let runs = run_prepared(cfg, &prep)?;
    let mut files = Vec::new();
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir)?;
        for r in &runs {
            let path = dir.join(format!("{}.csv", file_stem(&r.run_id)));
            let mut w = BufWriter::new(fs::File::create(&path)?);
            write_trace_csv(&r.trace, &mut w)?;
            w.flush()?;
            files.push(path);
        }
    }
    Ok(BenchResult { runs, files })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::Storage;
    use crate::experiments::config::parse_kv;
    use crate::vector::Sample;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_map(&parse_kv(text).unwrap()).unwrap()
    }

    fn small_linear(extra: &str) -> ExperimentConfig {
        cfg(&format!(
            "task = linear\nalgorithms = aisgd, isgd\nloss = squared\n\
             schedule.kind = constant\nschedule.gamma = 0.5\nschedule.scale = r2\n\
             n = 500\np = 4\ntheta0 = unit\neval_every = 50\nseed = 3\nout = unused\n{extra}"
        ))
    }

    #[test]
    fn classification_error_cases() {
        let test = Dataset::new(
            vec![
                Sample::dense(vec![1.0, 0.0], 1.0).unwrap(),
                Sample::dense(vec![-1.0, 0.0], -1.0).unwrap(),
                Sample::dense(vec![0.0, 1.0], -1.0).unwrap(),
                Sample::dense(vec![0.0, -1.0], 1.0).unwrap(),
            ],
            2,
            Storage::Dense,
        )
        .unwrap();
        // sign(0) = +1, so θ = 0 predicts +1 everywhere
        assert_eq!(classification_error(&[0.0, 0.0], &test).unwrap(), 0.5);
        assert_eq!(classification_error(&[1.0, -1.0], &test).unwrap(), 0.0);
        assert_eq!(classification_error(&[-1.0, 1.0], &test).unwrap(), 1.0);
        assert_eq!(classification_error(&[f64::NAN, 0.0], &test).unwrap(), 1.0);
        assert!(classification_error(&[0.0], &test).is_err());
    }

    #[test]
    fn isgd_and_aisgd_paths_agree() {
        let mut c = small_linear("");
        c.out = None;
        let res = run_benchmark(&c).unwrap();
        assert_eq!(res.runs.len(), 2);
        assert_eq!(res.runs[0].state.theta, res.runs[1].state.theta);
        assert_ne!(
            res.runs[0].trace.final_metric(),
            res.runs[1].trace.final_metric()
        );
        assert!(res.files.is_empty());
    }

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small_linear("eval_every = 64");
        c.out = Some(dir.path().join("nested/out"));
        let res = run_benchmark(&c).unwrap();
        assert_eq!(res.files.len(), 2);
        let text = fs::read_to_string(&res.files[0]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 500usize.div_ceil(64));
        let fields: Vec<&str> = rows[0].split(',').collect();
        assert_eq!(fields.len(), 5);
        assert_eq!(fields[0], "aisgd_const:0.5/R2");
        assert_eq!(fields[1], "64");
        // 17 significant digits: d.dddddddddddddddde±x
        let mantissa = fields[2].split('e').next().unwrap();
        assert_eq!(mantissa.replace(['.', '-'], "").len(), 17);
        assert_eq!(fields[3], "false");
    }

    #[test]
    fn single_sample_single_row() {
        let mut c = small_linear("n = 1\neval_every = 1");
        c.algorithms = vec![Algorithm::Sgd];
        c.out = None;
        let res = run_benchmark(&c).unwrap();
        assert_eq!(res.runs[0].trace.points.len(), 1);
    }

    #[test]
    fn auto_eta0_picks_grid_value() {
        let mut c = cfg(
            "task = logistic\nalgorithms = aisgd\nloss = logistic\nschedule.kind = xu\n\
             schedule.eta0 = auto\nn = 2000\np = 5\ntheta_star = ones\ntest.n = 500\n\
             eval_every = 500\nseed = 1\nout = unused",
        );
        c.out = None;
        let res = run_benchmark(&c).unwrap();
        let LearningRate::Xu { eta0 } = res.runs[0].schedule else {
            panic!("expected a Xu schedule");
        };
        let prep = prepare(&c).unwrap();
        let k = (eta0 * prep.r2).log2();
        assert!(
            (k - k.round()).abs() < 1e-9 && (-6.0..=4.0).contains(&k),
            "{k}"
        );
        assert!(res.runs[0].run_id.starts_with("aisgd_xu:auto="));
    }

    #[test]
    fn libsvm_pipeline() {
        let dir = tempfile::tempdir().unwrap();
        let train = dir.path().join("train.svm");
        let test = dir.path().join("test.svm");
        let mut t = String::new();
        for i in 0..200 {
            let pos = i % 2 == 0;
            t.push_str(&format!(
                "{} 1:{} 2:{}\n",
                if pos { 1 } else { 0 },
                if pos { 1.0 } else { -1.0 },
                (i % 7) as f64 * 0.1
            ));
        }
        fs::write(&train, &t).unwrap();
        fs::write(&test, "1 1:1 3:0.5\n0 1:-1\n").unwrap();
        let mut c = cfg(&format!(
            "task = libsvm\ndata.path = {}\ntest.path = {}\nalgorithms = aisgd, adagrad\n\
             loss = logistic\nlambda = 1e-4\nschedule.kind = constant\nschedule.gamma = 0.5\n\
             eval_every = 50\nseed = 1\nout = unused",
            train.display(),
            test.display()
        ));
        c.out = None;
        let res = run_benchmark(&c).unwrap();
        for r in &res.runs {
            assert_eq!(r.state.dim(), 3);
            assert_eq!(r.trace.final_metric(), 0.0, "{}", r.run_id);
        }

        let mut c2 = c.clone();
        c2.data = DataSource::Libsvm {
            path: train.clone(),
            test: TestSource::None,
        };
        assert!(run_benchmark(&c2).is_err());
    }
}
