//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # figure-1 preset
//! task = linear
//! algorithms = aisgd, asgd, isgd
//! loss = squared
//! schedule.kind = constant
//! schedule.gamma = 0.5, 1, 2
//! schedule.scale = r2
//! n = 200000
//! p = 20
//! seed = 7
//! out = out/fig1
//! ```
//!
//! Lists are comma-separated; `#` starts a comment.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::datagen::Task;
use crate::error::{Error, Result};
use crate::loss::{Family, GlmLoss};
use crate::rng::RngSeed;
use crate::schedule::LearningRate;
use crate::solver::{Algorithm, DEFAULT_TOL};

pub type ConfigMap = BTreeMap<String, String>;

const KNOWN_KEYS: &[&str] = &[
    "task",
    "algorithms",
    "loss",
    "lambda",
    "schedule.kind",
    "schedule.gamma",
    "schedule.gamma1",
    "schedule.exponent",
    "schedule.eta0",
    "schedule.scale",
    "n",
    "p",
    "noise_sd",
    "theta_star",
    "theta0",
    "test.n",
    "test.path",
    "test.fraction",
    "data.path",
    "passes",
    "eval_every",
    "eval.log_points",
    "shuffle",
    "seed",
    "out",
    "tol",
];

/// Parses `key = value` lines into a map; later keys override earlier ones.
pub fn parse_kv(text: &str) -> Result<ConfigMap> {
    let mut map = ConfigMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::Parse {
                line: i + 1,
                msg: "empty key".into(),
            });
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// A vector chosen by name or listed explicitly.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorSpec {
    Zero,
    Ones,
    /// Random direction with the given Euclidean norm.
    Random {
        norm: f64,
    },
    Explicit(Vec<f64>),
}

impl VectorSpec {
    fn parse(key: &str, s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "zero" | "0" => return Ok(VectorSpec::Zero),
            "ones" => return Ok(VectorSpec::Ones),
            "unit" => return Ok(VectorSpec::Random { norm: 1.0 }),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("random:") {
            let norm = parse_f64(key, n)?;
            return Ok(VectorSpec::Random { norm });
        }
        Ok(VectorSpec::Explicit(parse_list(key, s)?))
    }

    pub fn build(&self, p: usize, seed: RngSeed) -> Result<Vec<f64>> {
        use rand::Rng;
        use rand_distr::StandardNormal;
        match self {
            VectorSpec::Zero => Ok(vec![0.0; p]),
            VectorSpec::Ones => Ok(vec![1.0; p]),
            VectorSpec::Random { norm } => {
                let mut rng = seed.rng();
                let v: Vec<f64> = (0..p).map(|_| rng.sample(StandardNormal)).collect();
                let len = crate::vector::norm(&v);
                Ok(v.into_iter().map(|x| x * norm / len).collect())
            }
            VectorSpec::Explicit(v) => {
                if v.len() != p {
                    return Err(Error::DimensionMismatch {
                        expected: p,
                        got: v.len(),
                    });
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestSource {
    None,
    Fraction(f64),
    Path(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Synthetic {
        task: Task,
        n: usize,
        p: usize,
        theta_star: VectorSpec,
        noise_sd: f64,
        /// Holdout size for classification metrics.
        test_n: usize,
    },
    Libsvm {
        path: PathBuf,
        test: TestSource,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Constant,
    Polynomial,
    Xu,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Leading {
    Values(Vec<f64>),
    /// Pick η₀ by a short pilot run (Xu only).
    Auto,
}

/// The schedules of an experiment: one kind, one or more leading constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleSpec {
    pub kind: ScheduleKind,
    pub leading: Leading,
    pub exponent: Option<f64>,
    /// Leading constants are in units of `1/R²`.
    pub per_r2: bool,
}

impl ScheduleSpec {
    pub fn build(&self, value: f64, r2: f64) -> Result<LearningRate> {
        let v = if self.per_r2 { value / r2 } else { value };
        match self.kind {
            ScheduleKind::Constant => LearningRate::constant(v),
            ScheduleKind::Polynomial => {
                let e = self.exponent.ok_or_else(|| {
                    Error::Config("schedule.exponent is required for poly".into())
                })?;
                LearningRate::polynomial(v, e)
            }
            ScheduleKind::Xu => LearningRate::xu(v),
        }
    }

    pub fn label(&self, value: f64) -> String {
        let kind = match self.kind {
            ScheduleKind::Constant => "const",
            ScheduleKind::Polynomial => "poly",
            ScheduleKind::Xu => "xu",
        };
        let unit = if self.per_r2 { "/R2" } else { "" };
        match (self.kind, self.exponent) {
            (ScheduleKind::Polynomial, Some(e)) => format!("{kind}:{value}{unit}:{e}"),
            _ => format!("{kind}:{value}{unit}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalSpec {
    Every(u64),
    LogPoints(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub data: DataSource,
    pub algorithms: Vec<Algorithm>,
    pub loss: GlmLoss,
    pub schedule: ScheduleSpec,
    pub passes: usize,
    pub eval: EvalSpec,
    pub theta0: VectorSpec,
    pub shuffle: bool,
    pub seed: RngSeed,
    pub out: Option<PathBuf>,
    pub tol: f64,
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: `{}` is not a number", s.trim())))
}

fn parse_usize(key: &str, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| {
        Error::Config(format!(
            "{key}: `{}` is not a non-negative integer",
            s.trim()
        ))
    })
}

fn parse_list(key: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_f64(key, t))
        .collect()
}

fn required<'a>(map: &'a ConfigMap, key: &str) -> Result<&'a str> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
}

impl ExperimentConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        ExperimentConfig::from_map(&parse_kv(&text)?)
    }

    pub fn from_map(map: &ConfigMap) -> Result<Self> {
        if let Some(k) = map.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown key `{k}`")));
        }

        let algorithms: Vec<Algorithm> = required(map, "algorithms")?
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;

        let family: Family = required(map, "loss")?.parse()?;
        let lambda = map
            .get("lambda")
            .map(|v| parse_f64("lambda", v))
            .transpose()?
            .unwrap_or(0.0);
        let loss = GlmLoss::with_lambda(family, lambda)?;

        let kind = match required(map, "schedule.kind")? {
            "constant" | "const" => ScheduleKind::Constant,
            "poly" | "polynomial" => ScheduleKind::Polynomial,
            "xu" => ScheduleKind::Xu,
            other => {
                return Err(Error::Unknown {
                    kind: "schedule.kind",
                    name: other.to_string(),
                    expected: "constant, poly, xu",
                })
            }
        };
        let lead_key = match kind {
            ScheduleKind::Constant => "schedule.gamma",
            ScheduleKind::Polynomial => "schedule.gamma1",
            ScheduleKind::Xu => "schedule.eta0",
        };
        let lead_raw = required(map, lead_key)?;
        let leading = if lead_raw.trim() == "auto" {
            if kind != ScheduleKind::Xu {
                return Err(Error::Config(format!(
                    "{lead_key} = auto is only supported for xu"
                )));
            }
            Leading::Auto
        } else {
            Leading::Values(parse_list(lead_key, lead_raw)?)
        };
        let exponent = map
            .get("schedule.exponent")
            .map(|v| parse_f64("schedule.exponent", v))
            .transpose()?;
        let per_r2 = match map.get("schedule.scale").map(|s| s.trim()) {
            None | Some("none") | Some("1") => false,
            Some("r2") => true,
            Some(other) => {
                return Err(Error::Config(format!(
                    "schedule.scale must be `r2` or `none`, got `{other}`"
                )))
            }
        };
        let schedule = ScheduleSpec {
            kind,
            leading,
            exponent,
            per_r2,
        };

        let task = required(map, "task")?;
        let data = match task {
            "linear" | "logistic" => {
                let n = parse_usize("n", required(map, "n")?)?;
                let p = parse_usize("p", required(map, "p")?)?;
                let theta_star = map
                    .get("theta_star")
                    .map(|v| VectorSpec::parse("theta_star", v))
                    .transpose()?
                    .unwrap_or(VectorSpec::Zero);
                let noise_sd = map
                    .get("noise_sd")
                    .map(|v| parse_f64("noise_sd", v))
                    .transpose()?
                    .unwrap_or(1.0);
                let test_n = map
                    .get("test.n")
                    .map(|v| parse_usize("test.n", v))
                    .transpose()?
                    .unwrap_or(10_000);
                DataSource::Synthetic {
                    task: if task == "linear" {
                        Task::Linear
                    } else {
                        Task::Logistic
                    },
                    n,
                    p,
                    theta_star,
                    noise_sd,
                    test_n,
                }
            }
            "libsvm" => {
                let path = PathBuf::from(required(map, "data.path")?);
                let test = match (map.get("test.path"), map.get("test.fraction")) {
                    (Some(_), Some(_)) => {
                        return Err(Error::Config(
                            "give either test.path or test.fraction, not both".into(),
                        ))
                    }
                    (Some(p), None) => TestSource::Path(PathBuf::from(p)),
                    (None, Some(f)) => TestSource::Fraction(parse_f64("test.fraction", f)?),
                    (None, None) => TestSource::None,
                };
                DataSource::Libsvm { path, test }
            }
            other => {
                return Err(Error::Unknown {
                    kind: "task",
                    name: other.to_string(),
                    expected: "linear, logistic, libsvm",
                })
            }
        };

        let passes = map
            .get("passes")
            .map(|v| parse_usize("passes", v))
            .transpose()?
            .unwrap_or(1);
        let eval = match (map.get("eval.log_points"), map.get("eval_every")) {
            (Some(lp), _) => EvalSpec::LogPoints(parse_usize("eval.log_points", lp)?),
            (None, Some(k)) => EvalSpec::Every(parse_usize("eval_every", k)? as u64),
            (None, None) => {
                let n = match &data {
                    DataSource::Synthetic { n, .. } => *n,
                    DataSource::Libsvm { .. } => 100_000,
                };
                EvalSpec::Every((n / 100).max(1) as u64)
            }
        };
        let theta0 = map
            .get("theta0")
            .map(|v| VectorSpec::parse("theta0", v))
            .transpose()?
            .unwrap_or(VectorSpec::Zero);
        let shuffle = match map.get("shuffle").map(|s| s.trim()) {
            None | Some("false") | Some("0") => false,
            Some("true") | Some("1") => true,
            Some(other) => {
                return Err(Error::Config(format!(
                    "shuffle: `{other}` is not a boolean"
                )))
            }
        };
        let seed = RngSeed(
            required(map, "seed")?
                .trim()
                .parse()
                .map_err(|_| Error::Config("seed must be an unsigned 64-bit integer".into()))?,
        );
        let out = Some(PathBuf::from(required(map, "out")?));
        let tol = map
            .get("tol")
            .map(|v| parse_f64("tol", v))
            .transpose()?
            .unwrap_or(DEFAULT_TOL);

        let cfg = ExperimentConfig {
            data,
            algorithms,
            loss,
            schedule,
            passes,
            eval,
            theta0,
            shuffle,
            seed,
            out,
            tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::Config("at least one algorithm is required".into()));
        }
        if let Leading::Values(v) = &self.schedule.leading {
            if v.is_empty() {
                return Err(Error::Config("at least one schedule is required".into()));
            }
            for &x in v {
                // surfaces invalid values before any run starts
                self.schedule.build(x, 1.0)?;
            }
        }
        if self.passes == 0 {
            return Err(Error::Config("passes must be >= 1".into()));
        }
        match self.eval {
            EvalSpec::Every(0) => return Err(Error::Config("eval_every must be >= 1".into())),
            EvalSpec::LogPoints(0) => {
                return Err(Error::Config("eval.log_points must be >= 1".into()))
            }
            _ => {}
        }
        if let DataSource::Synthetic {
            n,
            p,
            noise_sd,
            test_n,
            task,
            ..
        } = &self.data
        {
            if *n == 0 || *p == 0 {
                return Err(Error::Config("n and p must be >= 1".into()));
            }
            if let EvalSpec::Every(k) = self.eval {
                if k as usize > *n {
                    return Err(Error::Config(format!(
                        "eval_every ({k}) exceeds the dataset size ({n})"
                    )));
                }
            }
            if !(noise_sd.is_finite() && *noise_sd > 0.0) {
                return Err(Error::Config("noise_sd must be positive".into()));
            }
            if *task == Task::Logistic && *test_n == 0 {
                return Err(Error::Config(
                    "test.n must be >= 1 for classification".into(),
                ));
            }
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Config("tol must be positive".into()));
        }
        Ok(())
    }
}
