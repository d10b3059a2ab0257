//! Losses of linear-predictor form `L(θ, ξ) = ℓ(xᵀθ, y) + (λ/2)‖θ‖²`.
//!
//! All scalar functions take the predictor `u = xᵀθ` and the outcome `y`.
//! The gradient convention is `∇L(θ, ξ) = ℓ′(xᵀθ, y)·x + λθ`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::vector::{dot, Sample};

pub const DEFAULT_HINGE_DELTA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `(y − u)²`, no ½ factor.
    Squared,
    /// `log(1 + exp(−y·u))`, `y ∈ {−1, +1}`.
    Logistic,
    /// `exp(u) − y·u`, `y ∈ {0, 1, 2, …}`.
    Poisson,
    /// Huber-smoothed hinge on the margin `m = y·u`: zero for `m ≥ 1`,
    /// `(1−m)²/(2δ)` on `[1−δ, 1)`, `1 − m − δ/2` below.
    SmoothedHinge { delta: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Squared => "squared",
            Family::Logistic => "logistic",
            Family::Poisson => "poisson",
            Family::SmoothedHinge { .. } => "hinge",
        }
    }

    pub fn is_classification(&self) -> bool {
        matches!(self, Family::Logistic | Family::SmoothedHinge { .. })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::SmoothedHinge { delta } => write!(f, "hinge:{delta}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "squared" => Ok(Family::Squared),
            "logistic" => Ok(Family::Logistic),
            "poisson" => Ok(Family::Poisson),
            "hinge" => Ok(Family::SmoothedHinge {
                delta: DEFAULT_HINGE_DELTA,
            }),
            _ => {
                if let Some(d) = s.strip_prefix("hinge:") {
                    let delta: f64 = d.trim().parse().map_err(|_| {
                        Error::InvalidArgument(format!("hinge delta `{d}` is not a number"))
                    })?;
                    if !(delta.is_finite() && delta > 0.0) {
                        return Err(Error::InvalidArgument(format!(
                            "hinge delta must be positive, got {delta}"
                        )));
                    }
                    Ok(Family::SmoothedHinge { delta })
                } else {
                    Err(Error::Unknown {
                        kind: "loss",
                        name: s.to_string(),
                        expected: "squared, logistic, poisson, hinge:<delta>",
                    })
                }
            }
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(z))` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlmLoss {
    pub family: Family,
    /// L2 coefficient; the penalty is `(λ/2)‖θ‖²`.
    pub lambda: f64,
}

impl GlmLoss {
    pub fn new(family: Family) -> Self {
        GlmLoss {
            family,
            lambda: 0.0,
        }
    }

    pub fn with_lambda(family: Family, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "lambda must be non-negative, got {lambda}"
            )));
        }
        Ok(GlmLoss { family, lambda })
    }

    pub fn squared() -> Self {
        GlmLoss::new(Family::Squared)
    }

    pub fn logistic() -> Self {
        GlmLoss::new(Family::Logistic)
    }

    pub fn check_label(&self, y: f64) -> Result<()> {
        let ok = match self.family {
            Family::Squared => y.is_finite(),
            Family::Logistic | Family::SmoothedHinge { .. } => y == 1.0 || y == -1.0,
            Family::Poisson => y.is_finite() && y >= 0.0 && y.fract() == 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLabel {
                family: self.family.name(),
                y,
            })
        }
    }

    fn check(&self, u: f64, y: f64, op: &'static str) -> Result<()> {
        if !u.is_finite() || !y.is_finite() {
            return Err(Error::NonFinite(op));
        }
        self.check_label(y)
    }

    /// `ℓ(u, y)`. Poisson overflows to `+∞` for `u` beyond ~709.
    pub fn value(&self, u: f64, y: f64) -> Result<f64> {
        self.check(u, y, "loss value")?;
        Ok(match self.family {
            Family::Squared => (y - u) * (y - u),
            Family::Logistic => softplus(-y * u),
            Family::Poisson => u.exp() - y * u,
            Family::SmoothedHinge { delta } => {
                let m = y * u;
                if m >= 1.0 {
                    0.0
                } else if m >= 1.0 - delta {
                    (1.0 - m) * (1.0 - m) / (2.0 * delta)
                } else {
                    1.0 - m - 0.5 * delta
                }
            }
        })
    }

    /// `ℓ′(u, y) = ∂ℓ/∂u`.
    pub fn deriv(&self, u: f64, y: f64) -> Result<f64> {
        self.check(u, y, "loss derivative")?;
        Ok(match self.family {
            Family::Squared => -2.0 * (y - u),
            Family::Logistic => -y * sigmoid(-y * u),
            Family::Poisson => u.exp() - y,
            Family::SmoothedHinge { delta } => {
                let m = y * u;
                if m >= 1.0 {
                    0.0
                } else if m >= 1.0 - delta {
                    -y * (1.0 - m) / delta
                } else {
                    -y
                }
            }
        })
    }

    /// `ℓ″(u, y) ≥ 0`.
    pub fn second_deriv(&self, u: f64, y: f64) -> Result<f64> {
        self.check(u, y, "loss second derivative")?;
        Ok(match self.family {
            Family::Squared => 2.0,
            Family::Logistic => {
                let s = sigmoid(u);
                s * (1.0 - s)
            }
            Family::Poisson => u.exp(),
            Family::SmoothedHinge { delta } => {
                let m = y * u;
                if m < 1.0 && m >= 1.0 - delta {
                    y * y / delta
                } else {
                    0.0
                }
            }
        })
    }

    /// A global bound on `|ℓ′(u, y)|` over all `u`, when one exists.
    pub fn deriv_bound(&self) -> Option<f64> {
        match self.family {
            Family::Logistic | Family::SmoothedHinge { .. } => Some(1.0),
            Family::Squared | Family::Poisson => None,
        }
    }

    /// Every shipped family is convex in the predictor.
    pub fn is_convex(&self) -> bool {
        true
    }

    /// `L(θ, ξ)` including the L2 penalty.
    pub fn objective(&self, theta: &[f64], sample: &Sample) -> Result<f64> {
        let u = sample.x.dot(theta);
        Ok(self.value(u, sample.y)? + 0.5 * self.lambda * dot(theta, theta))
    }

    /// `∇L(θ, ξ)` as a dense vector.
    pub fn gradient(&self, theta: &[f64], sample: &Sample) -> Result<Vec<f64>> {
        let u = sample.x.dot(theta);
        let d = self.deriv(u, sample.y)?;
        let mut g: Vec<f64> = theta.iter().map(|t| self.lambda * t).collect();
        sample.x.axpy(d, &mut g);
        Ok(g)
    }
}

impl Default for GlmLoss {
    fn default() -> Self {
        GlmLoss::squared()
    }
}
