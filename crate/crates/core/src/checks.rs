//! Numeric checks of the properties the implicit update is supposed to have.
//! Each check is self-contained and deterministic given its seed.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::datagen::{make_normal_design, SyntheticSpec, Task};
use crate::error::Result;
use crate::loss::GlmLoss;
use crate::rng::RngSeed;
use crate::schedule::LearningRate;
use crate::solver::{solve_fixed_point, Algorithm, OptimizerState, DEFAULT_TOL};
use crate::vector::{dist, Sample};

pub const CHECK_NAMES: [&str; 5] = [
    "decay",
    "step_bound",
    "contraction",
    "fixed_point",
    "averaging",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    /// Relative fixed-point tolerance handed to every implicit step.
    pub tol: f64,
    pub seed: RngSeed,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            tol: DEFAULT_TOL,
            seed: RngSeed(2024),
        }
    }
}

/// Runs the checks whose name contains `filter` (all when `None`).
pub fn run_checks(opts: &CheckOptions, filter: Option<&str>) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for name in CHECK_NAMES {
        if filter.is_some_and(|f| !name.contains(f)) {
            continue;
        }
        let (passed, detail) = match name {
            "decay" => decay_factor(),
            "step_bound" => step_bound(opts)?,
            "contraction" => contraction(opts)?,
            "fixed_point" => fixed_point_oracle(opts)?,
            "averaging" => averaging_exactness(opts),
            _ => unreachable!(),
        };
        out.push(CheckOutcome {
            name,
            passed,
            detail,
        });
    }
    Ok(out)
}

/// `∏ 1/(1+bᵢ) ≤ exp(−K Σ bᵢ)` with `K = log(1+b₁)/b₁`, `bₙ = b₁n^(−β)`,
/// compared in log space at every `n ≤ 10⁴`.
pub fn decay_factor() -> (bool, String) {
    let mut worst = f64::NEG_INFINITY;
    for (b1, beta) in [(0.1, 0.5), (1.0, 0.7), (2.0, 1.0)] {
        let k = f64::ln_1p(b1) / b1;
        let (mut log_prod, mut sum) = (0.0f64, 0.0f64);
        for n in 1..=10_000u32 {
            let b = b1 * f64::from(n).powf(-beta);
            log_prod -= b.ln_1p();
            sum += b;
            let rhs = -k * sum;
            // equality holds at n = 1; allow rounding there
            worst = worst.max(log_prod - rhs - 1e-12 * rhs.abs());
        }
    }
    (worst <= 0.0, format!("max log-gap {worst:.3e}"))
}

/// Logistic AISGD: every step moves at most `2γₙ‖xₙ‖`.
pub fn step_bound(opts: &CheckOptions) -> Result<(bool, String)> {
    let spec = SyntheticSpec::harmonic(10_000, 10, opts.seed.derive(1))?
        .with_task(Task::Logistic)
        .with_theta_star(vec![1.0; 10]);
    let data = make_normal_design(&spec)?;
    let loss = GlmLoss::logistic();
    let sched = LearningRate::polynomial(5.0, 0.6)?;
    let mut state = OptimizerState::new(Algorithm::Aisgd, vec![0.0; 10]);
    let mut worst = f64::NEG_INFINITY;
    for s in &data.samples {
        let gamma = sched.rate_at(state.n + 1)?;
        let before = state.theta.clone();
        state.implicit_step(s, gamma, &loss, opts.tol)?;
        state.update_average();
        let moved = dist(&state.theta, &before);
        worst = worst.max(moved - 2.0 * gamma * s.x.norm_sq().sqrt());
    }
    Ok((worst <= 1e-12, format!("max excess over bound {worst:.3e}")))
}

/// 1-D noiseless squared loss: `|θₙ−θ⋆|² ≤ |θₙ₋₁−θ⋆|²/(1+2γₙxₙ²)`.
pub fn contraction(opts: &CheckOptions) -> Result<(bool, String)> {
    let theta_star = 1.5;
    let loss = GlmLoss::squared();
    let sched = LearningRate::polynomial(2.0, 0.75)?;
    let mut rng = opts.seed.derive(2).rng();
    let mut state = OptimizerState::new(Algorithm::Isgd, vec![-8.0]);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let mut x: f64 = rng.sample(StandardNormal);
        if x == 0.0 {
            x = 1.0;
        }
        let s = Sample::dense(vec![x], x * theta_star)?;
        let gamma = sched.rate_at(state.n + 1)?;
        let before = (state.theta[0] - theta_star).powi(2);
        state.implicit_step(&s, gamma, &loss, opts.tol)?;
        let after = (state.theta[0] - theta_star).powi(2);
        worst = worst.max(after - before / (1.0 + 2.0 * gamma * x * x));
    }
    Ok((worst <= 1e-12, format!("max violation {worst:.3e}")))
}

/// Squared loss: `sₙ = 1/(1 + 2γ‖x‖²)`.
pub fn fixed_point_oracle(opts: &CheckOptions) -> Result<(bool, String)> {
    let loss = GlmLoss::squared();
    let mut rng = opts.seed.derive(3).rng();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = rng.random_range(1..=50usize);
        let x: Vec<f64> = (0..p).map(|_| rng.sample(StandardNormal)).collect();
        let theta: Vec<f64> = (0..p).map(|_| rng.sample(StandardNormal)).collect();
        let y: f64 = rng.sample(StandardNormal);
        let gamma = 10f64.powf(rng.random_range(-4.0..1.0));
        let s = Sample::dense(x, y)?;
        let fp = solve_fixed_point(&loss, &s, &theta, gamma, opts.tol)?;
        let want = 1.0 / (1.0 + 2.0 * gamma * fp.c);
        worst = worst.max((fp.s_n - want).abs());
    }
    Ok((
        worst <= 1e-10,
        format!("max |s_n - closed form| {worst:.3e}"),
    ))
}

/// Running mean vs batch mean of 1000 random iterates.
pub fn averaging_exactness(opts: &CheckOptions) -> (bool, String) {
    let mut rng = opts.seed.derive(4).rng();
    let p = 8;
    let iterates: Vec<Vec<f64>> = (0..1000)
        .map(|_| {
            (0..p)
                .map(|_| 1.0 + rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect();
    let mut state = OptimizerState::new(Algorithm::Asgd, vec![0.0; p]);
    for (i, it) in iterates.iter().enumerate() {
        state.theta.clone_from(it);
        state.n = i as u64 + 1;
        state.update_average();
    }
    let mut worst = 0.0f64;
    for j in 0..p {
        let mean = iterates.iter().map(|v| v[j]).sum::<f64>() / iterates.len() as f64;
        worst = worst.max(((state.theta_bar[j] - mean) / mean).abs());
    }
    (worst <= 1e-12, format!("max relative error {worst:.3e}"))
}
