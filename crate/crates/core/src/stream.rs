//! The stream-driving loop: one optimizer state, samples in order, periodic
//! evaluation of the reported estimate.

use crate::error::{Error, Result};
use crate::loss::GlmLoss;
use crate::schedule::LearningRate;
use crate::solver::{Algorithm, OptimizerState, DEFAULT_TOL};
use crate::vector::Sample;

/// When to evaluate the reported estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalPlan {
    /// Every `k` samples within a pass, plus the last sample of the pass.
    Every(u64),
    /// Roughly `points` log-spaced sample counts in `[1, total]`, plus the
    /// last sample of each pass. Used for log-log slope fits.
    LogSpaced { total: u64, points: usize },
}

impl EvalPlan {
    fn checkpoints(&self) -> Vec<u64> {
        match *self {
            EvalPlan::Every(_) => Vec::new(),
            EvalPlan::LogSpaced { total, points } => {
                let total = total.max(1);
                let top = (total as f64).ln();
                let denom = points.saturating_sub(1).max(1) as f64;
                let mut v: Vec<u64> = (0..points.max(1))
                    .map(|i| ((top * i as f64 / denom).exp().round() as u64).clamp(1, total))
                    .collect();
                v.dedup();
                v
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracePoint {
    pub run_id: String,
    /// Samples consumed.
    pub n: u64,
    pub metric: f64,
    pub diverged: bool,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub run_id: String,
    pub points: Vec<TracePoint>,
    /// Set once any iterate diverged.
    pub diverged: bool,
}

impl Trace {
    pub fn last(&self) -> Option<&TracePoint> {
        self.points.last()
    }

    pub fn final_metric(&self) -> f64 {
        self.last().map_or(f64::NAN, |p| p.metric)
    }
}

#[cfg(not(target_arch = "wasm32"))]
mod clock {
    pub struct Clock(std::time::Instant);

    impl Clock {
        pub fn start() -> Self {
            Clock(std::time::Instant::now())
        }

        pub fn elapsed_ms(&self) -> f64 {
            self.0.elapsed().as_secs_f64() * 1e3
        }
    }
}

#[cfg(target_arch = "wasm32")]
mod clock {
    // no monotonic clock on bare wasm32; wall times read as zero
    pub struct Clock;

    impl Clock {
        pub fn start() -> Self {
            Clock
        }

        pub fn elapsed_ms(&self) -> f64 {
            0.0
        }
    }
}

/// Drives an [`OptimizerState`] over one or more passes of data.
pub struct StreamRunner {
    run_id: String,
    state: OptimizerState,
    loss: GlmLoss,
    schedule: LearningRate,
    plan: EvalPlan,
    tol: f64,
    checkpoints: Vec<u64>,
    next_checkpoint: usize,
    points: Vec<TracePoint>,
    diverged: bool,
    clock: clock::Clock,
}

impl StreamRunner {
    pub fn new(
        run_id: impl Into<String>,
        state: OptimizerState,
        loss: GlmLoss,
        schedule: LearningRate,
        plan: EvalPlan,
    ) -> Result<Self> {
        if let EvalPlan::Every(0) = plan {
            return Err(Error::InvalidArgument("eval_every must be >= 1".into()));
        }
        Ok(StreamRunner {
            run_id: run_id.into(),
            checkpoints: plan.checkpoints(),
            state,
            loss,
            schedule,
            plan,
            tol: DEFAULT_TOL,
            next_checkpoint: 0,
            points: Vec::new(),
            diverged: false,
            clock: clock::Clock::start(),
        })
    }

    /// Relative fixed-point tolerance for implicit algorithms.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn state(&self) -> &OptimizerState {
        &self.state
    }

    fn due(&mut self, n: u64, in_pass: u64) -> bool {
        match self.plan {
            EvalPlan::Every(k) => in_pass.is_multiple_of(k),
            EvalPlan::LogSpaced { .. } => {
                let mut hit = false;
                while self.next_checkpoint < self.checkpoints.len()
                    && self.checkpoints[self.next_checkpoint] <= n
                {
                    hit |= self.checkpoints[self.next_checkpoint] == n;
                    self.next_checkpoint += 1;
                }
                hit
            }
        }
    }

    fn record<F: FnMut(&[f64]) -> f64>(&mut self, evaluator: &mut F) {
        let metric = evaluator(self.state.estimate());
        self.points.push(TracePoint {
            run_id: self.run_id.clone(),
            n: self.state.n,
            metric,
            diverged: self.diverged,
            wall_ms: self.clock.elapsed_ms(),
        });
    }

    /// Consumes one pass of `data`. Non-finite iterates do not abort the run:
    /// the state is frozen, later rows carry the divergence flag.
    pub fn consume<'a, I, F>(&mut self, data: I, evaluator: &mut F) -> Result<()>
    where
        I: IntoIterator<Item = &'a Sample>,
        F: FnMut(&[f64]) -> f64,
    {
        let mut consumed = 0usize;
        for sample in data {
            consumed += 1;
            if self.diverged && !self.state.theta.iter().all(|t| t.is_finite()) {
                self.state.n += 1;
            } else {
                match self
                    .state
                    .step(sample, &self.schedule, &self.loss, self.tol)
                {
                    Ok(()) => {}
                    // predictor overflowed on a finite but huge iterate
                    Err(Error::NonFinite(_)) => {
                        self.state.theta.iter_mut().for_each(|t| *t = f64::NAN);
                        self.state.n += 1;
                    }
                    Err(e) => return Err(e),
                }
                if !self.diverged && self.state.is_diverged() {
                    log::debug!("{}: diverged at n = {}", self.run_id, self.state.n);
                    self.diverged = true;
                }
            }
            let n = self.state.n;
            if self.due(n, consumed as u64) {
                self.record(evaluator);
            }
        }
        if consumed == 0 {
            return Err(Error::EmptyDataset);
        }
        if self.points.last().map(|p| p.n) != Some(self.state.n) {
            self.record(evaluator);
        }
        Ok(())
    }

    pub fn finish(self) -> (Trace, OptimizerState) {
        (
            Trace {
                run_id: self.run_id,
                points: self.points,
                diverged: self.diverged,
            },
            self.state,
        )
    }
}

/// Single-pass convenience over [`StreamRunner`].
pub fn run_stream<'a, I, F>(
    algorithm: Algorithm,
    loss: GlmLoss,
    schedule: LearningRate,
    theta0: Vec<f64>,
    data: I,
    plan: EvalPlan,
    mut evaluator: F,
) -> Result<(Trace, OptimizerState)>
where
    I: IntoIterator<Item = &'a Sample>,
    F: FnMut(&[f64]) -> f64,
{
    let run_id = format!("{algorithm}_{schedule}");
    let mut runner = StreamRunner::new(
        run_id,
        OptimizerState::new(algorithm, theta0),
        loss,
        schedule,
        plan,
    )?;
    runner.consume(data, &mut evaluator)?;
    Ok(runner.finish())
}
