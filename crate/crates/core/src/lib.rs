//! Averaged implicit stochastic gradient descent (AISGD) and its
//! comparators for streaming estimation with generalized-linear losses.
//!
//! The building blocks:
//!
//! - [`loss`]: linear-predictor losses with scalar derivatives.
//! - [`solver`]: explicit, implicit and AdaGrad steps plus iterate averaging.
//! - [`stream`]: the per-sample driving loop and its trace.
//! - [`datagen`], [`libsvm`]: synthetic Gaussian designs and file ingestion.
//! - [`experiments`]: config-driven benchmarks, sweeps and slope fits.
//! - [`checks`]: numeric property checks of the implicit update.
//!
//! ```
//! use aisgd::{Algorithm, GlmLoss, LearningRate, OptimizerState, Sample};
//!
//! let sample = Sample::dense(vec![1.0, 0.0], 1.0).unwrap();
//! let mut state = OptimizerState::new(Algorithm::Aisgd, vec![0.0, 0.0]);
//! let rate = LearningRate::constant(1.0).unwrap();
//! state.step(&sample, &rate, &GlmLoss::squared(), aisgd::solver::DEFAULT_TOL).unwrap();
//! assert!((state.theta[0] - 2.0 / 3.0).abs() < 1e-12);
//! ```

pub mod checks;
pub mod datagen;
pub mod error;
pub mod experiments;
pub mod libsvm;
pub mod loss;
pub mod rng;
pub mod schedule;
pub mod solver;
pub mod stream;
pub mod vector;

pub use datagen::{
    excess_risk, make_holdout, make_normal_design, trace_radius, Covariance, Dataset, Storage,
    SyntheticSpec, Task,
};
pub use error::{Error, Result};
pub use libsvm::{read_libsvm, write_libsvm, LabelMode};
pub use loss::{Family, GlmLoss};
pub use rng::RngSeed;
pub use schedule::LearningRate;
pub use solver::{solve_fixed_point, Algorithm, FixedPointResult, OptimizerState};
pub use stream::{run_stream, EvalPlan, StreamRunner, Trace, TracePoint};
pub use vector::{Features, Sample, SparseVec};
