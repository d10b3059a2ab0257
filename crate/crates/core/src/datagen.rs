//! Synthetic Gaussian designs with a prescribed covariance spectrum, and the
//! in-memory dataset type shared with the libsvm reader.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::RngSeed;
use crate::vector::{Features, Sample};

/// `H = Q·diag(λ)·Qᵀ`, stored in factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariance {
    /// Orthogonal; column `k` is the eigenvector for `eigenvalues[k]`.
    q: DMatrix<f64>,
    eigenvalues: Vec<f64>,
}

impl Covariance {
    /// Haar-random eigenvectors (QR of a Gaussian matrix with the sign of
    /// `R`'s diagonal folded into `Q`) and the given positive eigenvalues.
    pub fn random(eigenvalues: Vec<f64>, seed: RngSeed) -> Result<Self> {
        let p = eigenvalues.len();
        if p == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if eigenvalues.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
            return Err(Error::InvalidArgument(
                "eigenvalues must be positive".into(),
            ));
        }
        let mut rng = seed.rng();
        let g = DMatrix::<f64>::from_fn(p, p, |_, _| rng.sample(StandardNormal));
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        for k in 0..p {
            if r[(k, k)] < 0.0 {
                q.column_mut(k).neg_mut();
            }
        }
        Ok(Covariance { q, eigenvalues })
    }

    /// Eigenvalues `1/k`, `k = 1…p`.
    pub fn harmonic(p: usize, seed: RngSeed) -> Result<Self> {
        Covariance::random((1..=p).map(|k| 1.0 / k as f64).collect(), seed)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.q
    }

    /// Dense `H`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.eigenvalues));
        &self.q * d * self.q.transpose()
    }

    /// `vᵀHv`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        (0..self.dim())
            .map(|k| {
                let proj: f64 = self.q.column(k).iter().zip(v).map(|(a, b)| a * b).sum();
                self.eigenvalues[k] * proj * proj
            })
            .sum()
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    /// `y = xᵀθ⋆ + ε`, `ε ~ N(0, σ²)`.
    Linear,
    /// `y = ±1` with `P(+1) = σ(xᵀθ⋆)`.
    Logistic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n: usize,
    pub theta_star: Vec<f64>,
    pub covariance: Covariance,
    pub noise_sd: f64,
    pub seed: RngSeed,
    pub task: Task,
}

impl SyntheticSpec {
    /// `p`-dimensional design with eigenvalues `1/k`, `θ⋆ = 0`, unit noise.
    pub fn harmonic(n: usize, p: usize, seed: RngSeed) -> Result<Self> {
        Ok(SyntheticSpec {
            n,
            theta_star: vec![0.0; p],
            covariance: Covariance::harmonic(p, seed.derive(0))?,
            noise_sd: 1.0,
            seed,
            task: Task::Linear,
        })
    }

    pub fn dim(&self) -> usize {
        self.covariance.dim()
    }

    pub fn with_theta_star(mut self, theta_star: Vec<f64>) -> Self {
        self.theta_star = theta_star;
        self
    }

    pub fn with_task(mut self, task: Task) -> Self {
        self.task = task;
        self
    }

    pub fn with_noise_sd(mut self, noise_sd: f64) -> Self {
        self.noise_sd = noise_sd;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.dim() == 0 {
            return Err(Error::InvalidArgument("p must be >= 1".into()));
        }
        if self.theta_star.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: self.theta_star.len(),
            });
        }
        if !(self.noise_sd.is_finite() && self.noise_sd > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "noise_sd must be positive, got {}",
                self.noise_sd
            )));
        }
        Ok(())
    }
}

/// `R² = trace(H)`.
pub fn trace_radius(spec: &SyntheticSpec) -> f64 {
    spec.covariance.trace()
}

/// `(θ − θ⋆)ᵀH(θ − θ⋆)`.
pub fn excess_risk(theta: &[f64], spec: &SyntheticSpec) -> Result<f64> {
    if theta.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: theta.len(),
        });
    }
    let d: Vec<f64> = theta
        .iter()
        .zip(&spec.theta_star)
        .map(|(a, b)| a - b)
        .collect();
    Ok(spec.covariance.quad_form(&d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Storage {
    Dense,
    Sparse,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    pub p: usize,
    pub storage: Storage,
    pub spec: Option<SyntheticSpec>,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>, p: usize, storage: Storage) -> Result<Self> {
        if let Some(bad) = samples.iter().find(|s| s.dim() != p) {
            return Err(Error::DimensionMismatch {
                expected: p,
                got: bad.dim(),
            });
        }
        Ok(Dataset {
            samples,
            p,
            storage,
            spec: None,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean squared feature norm, the empirical `R²`.
    pub fn mean_norm_sq(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|s| s.x.norm_sq()).sum::<f64>() / self.samples.len() as f64
    }

    pub fn shuffle(&mut self, seed: RngSeed) {
        self.samples.shuffle(&mut seed.rng());
    }

    /// Splits off the trailing `fraction` of samples as a test set.
    pub fn split(mut self, fraction: f64) -> Result<(Dataset, Dataset)> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "test fraction must be in (0, 1), got {fraction}"
            )));
        }
        let n_test = ((self.len() as f64) * fraction).round() as usize;
        if n_test == 0 || n_test >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "test fraction {fraction} leaves an empty split of {} samples",
                self.len()
            )));
        }
        let test = self.samples.split_off(self.len() - n_test);
        let test = Dataset {
            samples: test,
            p: self.p,
            storage: self.storage,
            spec: self.spec.clone(),
        };
        Ok((self, test))
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// `x = Q·diag(√λ)·z`, `z ~ N(0, I)`, so `Cov(x) = H`.
pub fn make_normal_design(spec: &SyntheticSpec) -> Result<Dataset> {
    generate(spec, spec.n, spec.seed.derive(1))
}

/// An independent draw of `n` samples from the same design, e.g. a test set.
pub fn make_holdout(spec: &SyntheticSpec, n: usize, stream: u64) -> Result<Dataset> {
    generate(spec, n, spec.seed.derive(2 + stream))
}

fn generate(spec: &SyntheticSpec, n: usize, seed: RngSeed) -> Result<Dataset> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be >= 1".into()));
    }
    let p = spec.dim();
    let scale: Vec<f64> = spec
        .covariance
        .eigenvalues
        .iter()
        .map(|l| l.sqrt())
        .collect();
    let q = &spec.covariance.q;
    let mut rng = seed.rng();
    let mut z = vec![0.0; p];
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        for (zk, s) in z.iter_mut().zip(&scale) {
            *zk = s * rng.sample::<f64, _>(StandardNormal);
        }
        let x: Vec<f64> = (0..p)
            .map(|i| (0..p).map(|k| q[(i, k)] * z[k]).sum())
            .collect();
        let mean: f64 = x.iter().zip(&spec.theta_star).map(|(a, b)| a * b).sum();
        let y = match spec.task {
            Task::Linear => mean + spec.noise_sd * rng.sample::<f64, _>(StandardNormal),
            Task::Logistic => {
                if rng.random::<f64>() < sigmoid(mean) {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        samples.push(Sample {
            x: Features::Dense(x),
            y,
        });
    }
    Ok(Dataset {
        samples,
        p,
        storage: Storage::Dense,
        spec: Some(spec.clone()),
    })
}
