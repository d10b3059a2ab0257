use std::fmt;
use std::io::Write;
use std::str::FromStr;

use super::bench::{prepare, run_prepared};
use super::config::{ExperimentConfig, Leading, ScheduleKind};
use crate::error::{Error, Result};
use crate::loss::GlmLoss;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Lambda,
    GammaConstant,
    Gamma1,
    Eta0,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::GammaConstant => "gamma_constant",
            SweepAxis::Gamma1 => "gamma1",
            SweepAxis::Eta0 => "eta0",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "lambda" => Ok(SweepAxis::Lambda),
            "gamma_constant" => Ok(SweepAxis::GammaConstant),
            "gamma1" => Ok(SweepAxis::Gamma1),
            "eta0" => Ok(SweepAxis::Eta0),
            other => Err(Error::Unknown {
                kind: "sweep axis",
                name: other.to_string(),
                expected: "lambda, gamma_constant, gamma1, eta0",
            }),
        }
    }
}

/// Final metric of every run (columns) at every axis value (rows).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub columns: Vec<String>,
    pub metrics: Vec<Vec<f64>>,
    pub diverged: Vec<Vec<bool>>,
}

impl SweepResult {
    /// Final metrics of one column across the sweep.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.metrics.iter().map(|row| row[j]).collect())
    }

    /// `max − min` of a column; NaN when any entry is non-finite.
    pub fn spread(&self, name: &str) -> Option<f64> {
        let col = self.column(name)?;
        if col.iter().any(|v| !v.is_finite()) {
            return Some(f64::NAN);
        }
        let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = col.iter().copied().fold(f64::INFINITY, f64::min);
        Some(max - min)
    }

    pub fn any_diverged(&self, name: &str) -> Option<bool> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.diverged.iter().any(|row| row[j]))
    }
}

fn with_axis(base: &ExperimentConfig, axis: SweepAxis, value: f64) -> Result<ExperimentConfig> {
    let mut cfg = base.clone();
    cfg.out = None;
    let kind = match axis {
        SweepAxis::Lambda => {
            cfg.loss = GlmLoss::with_lambda(cfg.loss.family, value)?;
            return Ok(cfg);
        }
        SweepAxis::GammaConstant => ScheduleKind::Constant,
        SweepAxis::Gamma1 => ScheduleKind::Polynomial,
        SweepAxis::Eta0 => ScheduleKind::Xu,
    };
    cfg.schedule.kind = kind;
    cfg.schedule.leading = Leading::Values(vec![value]);
    cfg.validate()?;
    Ok(cfg)
}

/// Reruns `base` once per axis value and records each run's final metric.
/// Columns are algorithm names, or run ids when `base` has several schedules.
pub fn sensitivity_sweep(
    base: &ExperimentConfig,
    axis: SweepAxis,
    values: &[f64],
) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs at least one value".into(),
        ));
    }
    let prep = prepare(base)?;
    let mut columns: Vec<String> = Vec::new();
    let mut metrics = Vec::new();
    let mut diverged = Vec::new();
    for &v in values {
        let cfg = with_axis(base, axis, v)?;
        let runs = run_prepared(&cfg, &prep)?;
        if columns.is_empty() {
            let by_algorithm = runs.len() == cfg.algorithms.len();
            columns = runs
                .iter()
                .map(|r| {
                    if by_algorithm {
                        r.algorithm.name().to_string()
                    } else {
                        r.run_id.clone()
                    }
                })
                .collect();
        }
        metrics.push(runs.iter().map(|r| r.trace.final_metric()).collect());
        diverged.push(runs.iter().map(|r| r.trace.diverged).collect());
    }
    Ok(SweepResult {
        axis,
        values: values.to_vec(),
        columns,
        metrics,
        diverged,
    })
}

/// Wide CSV: one row per axis value, one metric column and one divergence
/// column per run.
pub fn write_sweep_csv<W: Write>(res: &SweepResult, mut out: W) -> Result<()> {
    write!(out, "{}", res.axis)?;
    for c in &res.columns {
        write!(out, ",{c}")?;
    }
    for c in &res.columns {
        write!(out, ",{c}.diverged")?;
    }
    writeln!(out)?;
    for ((v, m), d) in res.values.iter().zip(&res.metrics).zip(&res.diverged) {
        write!(out, "{v:.16e}")?;
        for x in m {
            write!(out, ",{x:.16e}")?;
        }
        for x in d {
            write!(out, ",{x}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::bench::run_benchmark;
    use crate::experiments::config::parse_kv;

    fn base() -> ExperimentConfig {
        let mut c = ExperimentConfig::from_map(
            &parse_kv(
                "task = logistic\nalgorithms = aisgd, asgd\nloss = logistic\nlambda = 1e-3\n\
                 schedule.kind = xu\nschedule.eta0 = 1\nn = 1500\np = 5\ntheta_star = ones\n\
                 test.n = 500\neval_every = 500\nseed = 5\nout = unused",
            )
            .unwrap(),
        )
        .unwrap();
        c.out = None;
        c
    }

    #[test]
    fn single_value_matches_benchmark() {
        let b = base();
        let sweep = sensitivity_sweep(&b, SweepAxis::Lambda, &[1e-3]).unwrap();
        let bench = run_benchmark(&b).unwrap();
        assert_eq!(sweep.columns, vec!["aisgd", "asgd"]);
        for (j, r) in bench.runs.iter().enumerate() {
            assert_eq!(sweep.metrics[0][j], r.trace.final_metric());
        }
    }

    #[test]
    fn schedule_axes_override_kind() {
        let b = base();
        let s = sensitivity_sweep(&b, SweepAxis::GammaConstant, &[0.1, 0.2]).unwrap();
        assert_eq!(s.metrics.len(), 2);
        assert!(
            sensitivity_sweep(&b, SweepAxis::Gamma1, &[0.1]).is_err(),
            "poly needs an exponent"
        );
        let mut b2 = b.clone();
        b2.schedule.exponent = Some(0.75);
        assert!(sensitivity_sweep(&b2, SweepAxis::Gamma1, &[0.1]).is_ok());
    }

    #[test]
    fn axis_names() {
        for a in [
            SweepAxis::Lambda,
            SweepAxis::GammaConstant,
            SweepAxis::Gamma1,
            SweepAxis::Eta0,
        ] {
            assert_eq!(a.name().parse::<SweepAxis>().unwrap(), a);
        }
        assert!("momentum".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn csv_is_wide() {
        let s = SweepResult {
            axis: SweepAxis::Lambda,
            values: vec![0.1, 0.01],
            columns: vec!["aisgd".into(), "asgd".into()],
            metrics: vec![vec![0.5, 0.25], vec![0.125, 1.0]],
            diverged: vec![vec![false, false], vec![false, true]],
        };
        let mut buf = Vec::new();
        write_sweep_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "lambda,aisgd,asgd,aisgd.diverged,asgd.diverged");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].ends_with(",false,true"));
        assert_eq!(s.spread("aisgd"), Some(0.375));
        assert_eq!(s.any_diverged("asgd"), Some(true));
    }
}
