//! Learning-rate schedules `n ↦ γₙ`, 1-indexed.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LearningRate {
    /// `γₙ = γ`.
    Constant { gamma: f64 },
    /// `γₙ = γ₁·n^(−exponent)`, exponent in (0.5, 1].
    Polynomial { gamma1: f64, exponent: f64 },
    /// `γₙ = η₀·(1 + η₀·n)^(−3/4)`.
    Xu { eta0: f64 },
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidSchedule(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl LearningRate {
    pub fn constant(gamma: f64) -> Result<Self> {
        Ok(LearningRate::Constant {
            gamma: positive("gamma", gamma)?,
        })
    }

    pub fn polynomial(gamma1: f64, exponent: f64) -> Result<Self> {
        let gamma1 = positive("gamma1", gamma1)?;
        if !(exponent > 0.5 && exponent <= 1.0) {
            return Err(Error::InvalidSchedule(format!(
                "polynomial exponent must lie in (0.5, 1], got {exponent}"
            )));
        }
        Ok(LearningRate::Polynomial { gamma1, exponent })
    }

    pub fn xu(eta0: f64) -> Result<Self> {
        Ok(LearningRate::Xu {
            eta0: positive("eta0", eta0)?,
        })
    }

    /// Rate at iteration `n >= 1`.
    pub fn rate_at(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::ZeroIteration);
        }
        let n = n as f64;
        Ok(match *self {
            LearningRate::Constant { gamma } => gamma,
            LearningRate::Polynomial { gamma1, exponent } => gamma1 * n.powf(-exponent),
            LearningRate::Xu { eta0 } => eta0 * (1.0 + eta0 * n).powf(-0.75),
        })
    }

    /// Same schedule with its leading constant multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        match *self {
            LearningRate::Constant { gamma } => LearningRate::constant(gamma * factor),
            LearningRate::Polynomial { gamma1, exponent } => {
                LearningRate::polynomial(gamma1 * factor, exponent)
            }
            LearningRate::Xu { eta0 } => LearningRate::xu(eta0 * factor),
        }
    }
}

impl fmt::Display for LearningRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LearningRate::Constant { gamma } => write!(f, "const:{gamma}"),
            LearningRate::Polynomial { gamma1, exponent } => write!(f, "poly:{gamma1}:{exponent}"),
            LearningRate::Xu { eta0 } => write!(f, "xu:{eta0}"),
        }
    }
}

/// Parses `const:<gamma>`, `poly:<gamma1>:<exponent>` or `xu:<eta0>`.
impl FromStr for LearningRate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSchedule(format!("`{t}` is not a number in `{s}`")))
        };
        match parts.as_slice() {
            ["const" | "constant", g] => LearningRate::constant(num(g)?),
            ["poly" | "polynomial", g1, e] => LearningRate::polynomial(num(g1)?, num(e)?),
            ["xu", e0] => LearningRate::xu(num(e0)?),
            _ => Err(Error::InvalidSchedule(format!(
                "`{s}`: expected const:<gamma>, poly:<gamma1>:<exponent> or xu:<eta0>"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_values() {
        let c = LearningRate::constant(0.5).unwrap();
        assert_eq!(c.rate_at(7).unwrap(), 0.5);
        let p = LearningRate::polynomial(1.0, 1.0).unwrap();
        assert_eq!(p.rate_at(4).unwrap(), 0.25);
        let x = LearningRate::xu(1.0).unwrap();
        assert!((x.rate_at(1).unwrap() - 0.594_603_557_501_360_5).abs() < 1e-12);
    }

    #[test]
    fn zero_iteration_rejected() {
        let c = LearningRate::constant(0.5).unwrap();
        assert!(matches!(c.rate_at(0), Err(Error::ZeroIteration)));
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(LearningRate::constant(0.0).is_err());
        assert!(LearningRate::constant(f64::NAN).is_err());
        assert!(LearningRate::polynomial(1.0, 0.5).is_err());
        assert!(LearningRate::polynomial(1.0, 1.1).is_err());
        assert!(LearningRate::xu(-1.0).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["const:0.1", "poly:1:0.6", "xu:0.25"] {
            let r: LearningRate = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("const".parse::<LearningRate>().is_err());
        assert!("exp:1".parse::<LearningRate>().is_err());
        assert!("poly:1:abc".parse::<LearningRate>().is_err());
    }

    fn any_schedule() -> impl Strategy<Value = LearningRate> {
        prop_oneof![
            (1e-4..10.0f64).prop_map(|g| LearningRate::constant(g).unwrap()),
            (1e-4..10.0f64, 0.501..=1.0f64)
                .prop_map(|(g, e)| LearningRate::polynomial(g, e).unwrap()),
            (1e-4..10.0f64).prop_map(|e| LearningRate::xu(e).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn rates_positive_and_non_increasing(
            sched in any_schedule(),
            n in 1u64..1_000_000,
            gap in 1u64..1_000_000,
        ) {
            let m = (n + gap).min(1_000_000).max(n + 1);
            let a = sched.rate_at(n).unwrap();
            let b = sched.rate_at(m).unwrap();
            prop_assert!(b > 0.0);
            prop_assert!(a >= b);
        }

        #[test]
        fn polynomial_leading_constant(g1 in 1e-3..10.0f64, e in 0.501..=1.0f64, n in 1u64..1_000_000) {
            let s = LearningRate::polynomial(g1, e).unwrap();
            let back = s.rate_at(n).unwrap() * (n as f64).powf(e);
            prop_assert!(((back - g1) / g1).abs() <= 1e-12);
        }
    }
}
