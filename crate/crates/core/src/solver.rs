//! Update rules: explicit SGD, implicit SGD through a scalar fixed point,
//! iterate averaging and diagonal AdaGrad.
//!
//! For a linear-predictor loss the gradient at any `θ` is collinear with
//! `x`, so the implicit update
//!
//! ```text
//! θₙ = θₙ₋₁ − γₙ (ℓ′(xᵀθₙ, y)·x + λθₙ)
//! ```
//!
//! has the form `θₙ = a·(θₙ₋₁ + u⋆·x)` with `a = 1/(1 + γₙλ)` and a scalar
//! `u⋆` solving
//!
//! ```text
//! u⋆ = γₙ · g(a·(u₀ + u⋆·c)),   g(u) = −ℓ′(u, y),  u₀ = xᵀθₙ₋₁,  c = ‖x‖².
//! ```
//!
//! `g` is non-increasing whenever `ℓ″ ≥ 0`, so `u⋆` lies between `0` and
//! `γₙ·g(a·u₀)` and plain bisection on that bracket always succeeds.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::loss::GlmLoss;
use crate::schedule::LearningRate;
use crate::vector::{norm, Sample};

/// Default residual tolerance factor: `|u − γg(·)| ≤ 1e−12·|bracket|`.
pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_BISECTION_ITERS: usize = 200;
pub const ADAGRAD_EPS: f64 = 1e-8;
/// Iterates with a larger Euclidean norm are flagged as diverged.
pub const DIVERGENCE_NORM: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointResult {
    /// Scalar step with `θₙ = a·(θₙ₋₁ + u⋆·x)`.
    pub u_star: f64,
    /// `u⋆ / bound`; the factor by which the implicit step shrinks the
    /// explicit one. In `(0, 1]` whenever the gradient is nonzero, and 1 when
    /// the step is trivially zero.
    pub s_n: f64,
    /// `xᵀθₙ₋₁`.
    pub u0: f64,
    /// `‖x‖²`.
    pub c: f64,
    /// Far end of the search bracket, `γₙ·g(a·u₀)`; the near end is 0.
    pub bound: f64,
    pub iterations: usize,
    /// `|u⋆ − γₙ·g(a·(u₀ + u⋆c))|`.
    pub residual: f64,
}

impl FixedPointResult {
    fn trivial(u0: f64, c: f64, bound: f64) -> Self {
        FixedPointResult {
            u_star: 0.0,
            s_n: 1.0,
            u0,
            c,
            bound,
            iterations: 0,
            residual: bound.abs(),
        }
    }
}

fn check_rate(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "learning rate must be finite and non-negative, got {gamma}"
        )))
    }
}

fn check_dims(theta: &[f64], sample: &Sample) -> Result<()> {
    if theta.len() != sample.dim() {
        return Err(Error::DimensionMismatch {
            expected: theta.len(),
            got: sample.dim(),
        });
    }
    Ok(())
}

/// Solves the scalar fixed point of the implicit update by bisection.
///
/// `tol` is relative: bisection stops once the residual is below
/// `tol·|bound|`, or when the bracket has shrunk to adjacent floats.
pub fn solve_fixed_point(
    loss: &GlmLoss,
    sample: &Sample,
    theta_prev: &[f64],
    gamma: f64,
    tol: f64,
) -> Result<FixedPointResult> {
    check_dims(theta_prev, sample)?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "implicit step needs a positive learning rate, got {gamma}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let y = sample.y;
    let u0 = sample.x.dot(theta_prev);
    let c = sample.x.norm_sq();
    let shrink = 1.0 / (1.0 + gamma * loss.lambda);

    if c == 0.0 {
        loss.check_label(y)?;
        return Ok(FixedPointResult::trivial(u0, c, 0.0));
    }

    let h = |u: f64| -> Result<f64> { Ok(-gamma * loss.deriv(shrink * (u0 + u * c), y)? - u) };

    let bound = -gamma * loss.deriv(shrink * u0, y)?;
    if bound == 0.0 {
        return Ok(FixedPointResult::trivial(u0, c, bound));
    }

    // h is non-increasing, h(0) = bound; the root sits between 0 and bound.
    let (mut lo, mut hi) = if bound > 0.0 {
        (0.0, bound)
    } else {
        (bound, 0.0)
    };
    let h_far = h(bound)?;
    if (bound > 0.0 && h_far > 0.0) || (bound < 0.0 && h_far < 0.0) {
        return Err(Error::BracketViolation { lo, hi });
    }
    let done = |u_star: f64, residual: f64, iterations: usize| FixedPointResult {
        u_star,
        s_n: u_star / bound,
        u0,
        c,
        bound,
        iterations,
        residual,
    };
    if h_far == 0.0 {
        return Ok(done(bound, 0.0, 0));
    }

    let tol_abs = tol * bound.abs();
    let mut best = (f64::NAN, f64::INFINITY);
    for it in 1..=MAX_BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        let hm = h(mid)?;
        if hm.abs() < best.1 {
            best = (mid, hm.abs());
        }
        if hm.abs() <= tol_abs {
            return Ok(done(mid, hm.abs(), it));
        }
        if mid <= lo || mid >= hi {
            // bracket resolved to machine precision
            return Ok(done(best.0, best.1, it));
        }
        if hm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_BISECTION_ITERS,
        residual: best.1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Sgd,
    Isgd,
    Asgd,
    Aisgd,
    AdaGrad,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Sgd,
        Algorithm::Isgd,
        Algorithm::Asgd,
        Algorithm::Aisgd,
        Algorithm::AdaGrad,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Sgd => "sgd",
            Algorithm::Isgd => "isgd",
            Algorithm::Asgd => "asgd",
            Algorithm::Aisgd => "aisgd",
            Algorithm::AdaGrad => "adagrad",
        }
    }

    pub fn is_implicit(&self) -> bool {
        matches!(self, Algorithm::Isgd | Algorithm::Aisgd)
    }

    /// Averaged variants report `θ̄ₙ`, the rest report `θₙ`.
    pub fn is_averaged(&self) -> bool {
        matches!(self, Algorithm::Asgd | Algorithm::Aisgd)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "algorithm",
                name: s.to_string(),
                expected: "sgd, isgd, asgd, aisgd, adagrad",
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    pub algorithm: Algorithm,
    /// Current iterate `θₙ`.
    pub theta: Vec<f64>,
    /// Running mean `θ̄ₙ` of `θ₁…θₙ`; equals `θ₀` before the first step.
    pub theta_bar: Vec<f64>,
    /// Samples consumed.
    pub n: u64,
    /// Accumulated squared gradients, AdaGrad only.
    pub adagrad_g: Option<Vec<f64>>,
}

impl OptimizerState {
    pub fn new(algorithm: Algorithm, theta0: Vec<f64>) -> Self {
        let adagrad_g = (algorithm == Algorithm::AdaGrad).then(|| vec![0.0; theta0.len()]);
        OptimizerState {
            algorithm,
            theta_bar: theta0.clone(),
            theta: theta0,
            n: 0,
            adagrad_g,
        }
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// The estimate an algorithm reports: `θ̄ₙ` if averaged, else `θₙ`.
    pub fn estimate(&self) -> &[f64] {
        if self.algorithm.is_averaged() {
            &self.theta_bar
        } else {
            &self.theta
        }
    }

    pub fn is_diverged(&self) -> bool {
        !self.theta.iter().all(|t| t.is_finite()) || norm(&self.theta) > DIVERGENCE_NORM
    }

    /// `θₙ = θₙ₋₁ − γ(ℓ′(xᵀθₙ₋₁, y)·x + λθₙ₋₁)`.
    pub fn explicit_step(&mut self, sample: &Sample, gamma: f64, loss: &GlmLoss) -> Result<()> {
        check_dims(&self.theta, sample)?;
        check_rate(gamma)?;
        let d = loss.deriv(sample.x.dot(&self.theta), sample.y)?;
        if loss.lambda != 0.0 {
            let keep = 1.0 - gamma * loss.lambda;
            self.theta.iter_mut().for_each(|t| *t *= keep);
        }
        sample.x.axpy(-gamma * d, &mut self.theta);
        self.n += 1;
        Ok(())
    }

    /// Implicit update; `tol` as in [`solve_fixed_point`].
    pub fn implicit_step(
        &mut self,
        sample: &Sample,
        gamma: f64,
        loss: &GlmLoss,
        tol: f64,
    ) -> Result<FixedPointResult> {
        let fp = solve_fixed_point(loss, sample, &self.theta, gamma, tol)?;
        sample.x.axpy(fp.u_star, &mut self.theta);
        if loss.lambda != 0.0 {
            let shrink = 1.0 / (1.0 + gamma * loss.lambda);
            self.theta.iter_mut().for_each(|t| *t *= shrink);
        }
        self.n += 1;
        Ok(fp)
    }

    /// Diagonal AdaGrad: `Gᵢ += gᵢ²`, `θᵢ −= η·gᵢ/(√Gᵢ + ε)`.
    pub fn adagrad_step(&mut self, sample: &Sample, eta: f64, loss: &GlmLoss) -> Result<()> {
        check_dims(&self.theta, sample)?;
        check_rate(eta)?;
        let grad = loss.gradient(&self.theta, sample)?;
        let acc = self.adagrad_g.get_or_insert_with(|| vec![0.0; grad.len()]);
        for ((t, gsum), g) in self.theta.iter_mut().zip(acc.iter_mut()).zip(&grad) {
            if *g != 0.0 {
                *gsum += g * g;
                *t -= eta * g / (gsum.sqrt() + ADAGRAD_EPS);
            }
        }
        self.n += 1;
        Ok(())
    }

    /// `θ̄ₙ = θ̄ₙ₋₁ + (θₙ − θ̄ₙ₋₁)/n`.
    pub fn update_average(&mut self) {
        assert!(self.n >= 1, "update_average before the first step");
        if self.n == 1 {
            self.theta_bar.copy_from_slice(&self.theta);
            return;
        }
        let w = 1.0 / self.n as f64;
        for (b, t) in self.theta_bar.iter_mut().zip(&self.theta) {
            *b += (t - *b) * w;
        }
    }

    /// One full iteration of the configured algorithm on `sample`, including
    /// the running average (kept for every algorithm).
    pub fn step(
        &mut self,
        sample: &Sample,
        schedule: &LearningRate,
        loss: &GlmLoss,
        tol: f64,
    ) -> Result<()> {
        let gamma = schedule.rate_at(self.n + 1)?;
        match self.algorithm {
            Algorithm::Sgd | Algorithm::Asgd => self.explicit_step(sample, gamma, loss)?,
            Algorithm::Isgd | Algorithm::Aisgd => {
                self.implicit_step(sample, gamma, loss, tol)?;
            }
            Algorithm::AdaGrad => self.adagrad_step(sample, gamma, loss)?,
        }
        self.update_average();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::Family;
    use crate::vector::{dist, Features, SparseVec};
    use proptest::prelude::*;

    fn state(theta: Vec<f64>) -> OptimizerState {
        OptimizerState::new(Algorithm::Aisgd, theta)
    }

    fn sigmoid(z: f64) -> f64 {
        1.0 / (1.0 + (-z).exp())
    }

    #[test]
    fn squared_fixed_point_worked_example() {
        let s = Sample::dense(vec![1.0, 0.0], 1.0).unwrap();
        let fp = solve_fixed_point(&GlmLoss::squared(), &s, &[0.0, 0.0], 1.0, DEFAULT_TOL).unwrap();
        // closed form 2γ(y−u0)/(1+2γc) = 2/3
        assert!((fp.u_star - 2.0 / 3.0).abs() < 1e-12);
        assert!((fp.s_n - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(fp.u0, 0.0);
        assert_eq!(fp.c, 1.0);

        let mut st = state(vec![0.0, 0.0]);
        st.implicit_step(&s, 1.0, &GlmLoss::squared(), DEFAULT_TOL)
            .unwrap();
        assert!((st.theta[0] - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(st.theta[1], 0.0);
    }

    #[test]
    fn logistic_fixed_point_worked_example() {
        let s = Sample::dense(vec![1.0], 1.0).unwrap();
        let fp = solve_fixed_point(&GlmLoss::logistic(), &s, &[0.0], 2.0, DEFAULT_TOL).unwrap();
        assert!(fp.u_star > 0.0 && fp.u_star <= 1.0);
        assert!((fp.u_star - 2.0 * sigmoid(-fp.u_star)).abs() < 1e-12);
        assert!(fp.iterations > 0);
    }

    #[test]
    fn zero_gradient_is_exact() {
        let s = Sample::dense(vec![1.0, 2.0], 3.0).unwrap();
        let theta = [1.0, 1.0];
        let fp = solve_fixed_point(&GlmLoss::squared(), &s, &theta, 0.7, DEFAULT_TOL).unwrap();
        assert_eq!(fp.u_star, 0.0);
        assert_eq!(fp.iterations, 0);

        let mut st = state(theta.to_vec());
        st.implicit_step(&s, 0.7, &GlmLoss::squared(), DEFAULT_TOL)
            .unwrap();
        assert_eq!(st.theta, theta);
    }

    #[test]
    fn zero_features_leave_theta_alone() {
        let s = Sample::dense(vec![0.0, 0.0], 3.0).unwrap();
        let mut st = state(vec![0.5, -0.5]);
        let fp = st
            .implicit_step(&s, 0.7, &GlmLoss::squared(), DEFAULT_TOL)
            .unwrap();
        assert_eq!(fp.iterations, 0);
        assert_eq!(st.theta, vec![0.5, -0.5]);

        let reg = GlmLoss::with_lambda(Family::Squared, 1.0).unwrap();
        let mut st = state(vec![0.5, -0.5]);
        st.implicit_step(&s, 1.0, &reg, DEFAULT_TOL).unwrap();
        assert_eq!(st.theta, vec![0.25, -0.25]);
    }

    #[test]
    fn explicit_worked_examples() {
        let s = Sample::dense(vec![1.0, 0.0], 1.0).unwrap();
        let mut st = state(vec![0.0, 0.0]);
        st.explicit_step(&s, 1.0, &GlmLoss::squared()).unwrap();
        assert_eq!(st.theta, vec![2.0, 0.0]);

        let mut st = state(vec![1.0, 0.0]);
        st.explicit_step(&s, 1.0, &GlmLoss::squared()).unwrap();
        assert_eq!(st.theta, vec![1.0, 0.0]);

        let mut st = state(vec![0.3, 0.4]);
        st.explicit_step(&s, 0.0, &GlmLoss::squared()).unwrap();
        assert_eq!(st.theta, vec![0.3, 0.4]);
        assert_eq!(st.n, 1);
    }

    #[test]
    fn vanishing_rate_matches_explicit() {
        let s = Sample::dense(vec![0.3, -1.2, 2.0], 1.0).unwrap();
        let loss = GlmLoss::logistic();
        let theta = vec![0.1, 0.2, -0.3];
        let gamma = 1e-12;
        let mut imp = state(theta.clone());
        let mut exp = state(theta.clone());
        imp.implicit_step(&s, gamma, &loss, DEFAULT_TOL).unwrap();
        exp.explicit_step(&s, gamma, &loss).unwrap();
        let gnorm = norm(&loss.gradient(&theta, &s).unwrap());
        assert!(dist(&imp.theta, &exp.theta) <= 1e-20 * (1.0 + gnorm));
    }

    #[test]
    fn averaging_worked_examples() {
        let mut st = state(vec![5.0]);
        st.theta = vec![0.0];
        st.n = 1;
        st.update_average();
        assert_eq!(st.theta_bar, vec![0.0]);
        st.theta = vec![2.0];
        st.n = 2;
        st.update_average();
        assert_eq!(st.theta_bar, vec![1.0]);
    }

    #[test]
    fn adagrad_first_step_is_sign_step() {
        let s = Sample::dense(vec![1.0, -2.0], 1.0).unwrap();
        let mut st = OptimizerState::new(Algorithm::AdaGrad, vec![0.0, 0.0]);
        st.adagrad_step(&s, 0.1, &GlmLoss::squared()).unwrap();
        // gradient = −2·(1 − 0)·x = (−2, 4)
        assert!((st.theta[0] - 0.1).abs() < 1e-8);
        assert!((st.theta[1] + 0.1).abs() < 1e-8);
        assert_eq!(st.adagrad_g.as_deref(), Some(&[4.0, 16.0][..]));
    }

    #[test]
    fn adagrad_two_unit_gradients() {
        // a loss whose derivative is −1 wherever the margin stays below 1−δ
        let loss = GlmLoss::new(Family::SmoothedHinge { delta: 0.5 });
        let s = Sample::dense(vec![1.0], 1.0).unwrap();
        let eta = 0.01;
        let mut st = OptimizerState::new(Algorithm::AdaGrad, vec![-10.0]);
        st.adagrad_step(&s, eta, &loss).unwrap();
        st.adagrad_step(&s, eta, &loss).unwrap();
        let moved = st.theta[0] + 10.0;
        let expected = eta * (1.0 + 1.0 / 2f64.sqrt());
        assert!((moved - expected).abs() < 1e-9);
    }

    #[test]
    fn adagrad_zero_gradient_only_counts() {
        let s = Sample::dense(vec![1.0], 1.0).unwrap();
        let mut st = OptimizerState::new(Algorithm::AdaGrad, vec![1.0]);
        st.adagrad_step(&s, 0.5, &GlmLoss::squared()).unwrap();
        assert_eq!(st.theta, vec![1.0]);
        assert_eq!(st.adagrad_g.as_deref(), Some(&[0.0][..]));
        assert_eq!(st.n, 1);
    }

    #[test]
    fn sparse_implicit_matches_dense() {
        let sp = SparseVec::new(4, vec![1, 3], vec![0.5, -1.5]).unwrap();
        let dense = Features::Sparse(sp.clone()).to_dense();
        let a = Sample::new(Features::Sparse(sp), 1.0).unwrap();
        let b = Sample::dense(dense, 1.0).unwrap();
        let loss = GlmLoss::with_lambda(Family::Logistic, 0.1).unwrap();
        let mut s1 = state(vec![0.1, 0.2, 0.3, 0.4]);
        let mut s2 = s1.clone();
        s1.implicit_step(&a, 0.8, &loss, DEFAULT_TOL).unwrap();
        s2.implicit_step(&b, 0.8, &loss, DEFAULT_TOL).unwrap();
        assert_eq!(s1.theta, s2.theta);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = Sample::dense(vec![1.0], 1.0).unwrap();
        let loss = GlmLoss::squared();
        assert!(solve_fixed_point(&loss, &s, &[0.0], 0.0, DEFAULT_TOL).is_err());
        assert!(solve_fixed_point(&loss, &s, &[0.0, 1.0], 1.0, DEFAULT_TOL).is_err());
        assert!(solve_fixed_point(&loss, &s, &[0.0], 1.0, 0.0).is_err());
        let mut st = state(vec![0.0]);
        assert!(st.explicit_step(&s, -1.0, &loss).is_err());
        assert!(st
            .implicit_step(&s, 1.0, &GlmLoss::logistic(), DEFAULT_TOL)
            .is_ok());
        let bad = Sample::dense(vec![1.0], 0.5).unwrap();
        assert!(st
            .implicit_step(&bad, 1.0, &GlmLoss::logistic(), DEFAULT_TOL)
            .is_err());
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        let err = "nag".parse::<Algorithm>().unwrap_err().to_string();
        assert!(err.contains("aisgd") && err.contains("adagrad"));
    }

    #[test]
    fn step_dispatches_and_counts() {
        let s = Sample::dense(vec![1.0, 0.0], 1.0).unwrap();
        let sched = LearningRate::constant(1.0).unwrap();
        let mut a = OptimizerState::new(Algorithm::Isgd, vec![0.0, 0.0]);
        let mut b = OptimizerState::new(Algorithm::Aisgd, vec![0.0, 0.0]);
        for _ in 0..3 {
            a.step(&s, &sched, &GlmLoss::squared(), DEFAULT_TOL)
                .unwrap();
            b.step(&s, &sched, &GlmLoss::squared(), DEFAULT_TOL)
                .unwrap();
        }
        assert_eq!(a.theta, b.theta);
        assert_eq!(a.n, 3);
        assert_eq!(a.estimate(), a.theta.as_slice());
        assert_eq!(b.estimate(), b.theta_bar.as_slice());
    }

    #[test]
    fn divergence_flag() {
        let mut st = state(vec![1.0]);
        assert!(!st.is_diverged());
        st.theta = vec![2e12];
        assert!(st.is_diverged());
        st.theta = vec![f64::NAN];
        assert!(st.is_diverged());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn squared_scaling_closed_form(
            x in prop::collection::vec(-3.0..3.0f64, 1..20),
            y in -5.0..5.0f64,
            gamma in 1e-4..10.0f64,
        ) {
            let theta = vec![0.1; x.len()];
            let s = Sample::dense(x.clone(), y).unwrap();
            let fp = solve_fixed_point(&GlmLoss::squared(), &s, &theta, gamma, DEFAULT_TOL).unwrap();
            prop_assume!(fp.bound != 0.0);
            let c: f64 = x.iter().map(|v| v * v).sum();
            prop_assert!((fp.s_n - 1.0 / (1.0 + 2.0 * gamma * c)).abs() <= 1e-10);
        }

        #[test]
        fn bracket_property(
            x in prop::collection::vec(-3.0..3.0f64, 1..10),
            label in prop::bool::ANY,
            gamma in 1e-4..10.0f64,
            t in -2.0..2.0f64,
        ) {
            let y = if label { 1.0 } else { -1.0 };
            let theta = vec![t; x.len()];
            let s = Sample::dense(x, y).unwrap();
            let fp = solve_fixed_point(&GlmLoss::logistic(), &s, &theta, gamma, DEFAULT_TOL).unwrap();
            prop_assume!(fp.bound != 0.0);
            prop_assert_eq!(fp.u_star.signum(), fp.bound.signum());
            prop_assert!(fp.u_star.abs() <= fp.bound.abs());
            prop_assert!(fp.s_n > 0.0 && fp.s_n <= 1.0);
        }

        #[test]
        fn averaging_tracks_batch_mean(iterates in prop::collection::vec(-1e3..1e3f64, 1..300)) {
            let mut st = state(vec![0.0]);
            for (i, v) in iterates.iter().enumerate() {
                st.theta = vec![*v];
                st.n = i as u64 + 1;
                st.update_average();
            }
            let mean = iterates.iter().sum::<f64>() / iterates.len() as f64;
            let scale = iterates.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
            prop_assert!((st.theta_bar[0] - mean).abs() <= 1e-12 * scale);
        }
    }
}
