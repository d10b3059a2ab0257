//! Feature vectors.
//!
//! Iterates are always dense `[f64]`; features are either dense or sparse
//! (sorted index/value pairs, 0-based indices).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseVec {
    dim: usize,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseVec {
    /// Builds a sparse vector; indices must be strictly increasing and `< dim`.
    pub fn new(dim: usize, indices: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "{} indices but {} values",
                indices.len(),
                values.len()
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "sparse indices must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = indices.last() {
            if last >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: last + 1,
                });
            }
        }
        Ok(SparseVec {
            dim,
            indices,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub(crate) fn set_dim(&mut self, dim: usize) {
        debug_assert!(self.indices.last().is_none_or(|&i| i < dim));
        self.dim = dim;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Features {
    Dense(Vec<f64>),
    Sparse(SparseVec),
}

impl Features {
    pub fn dim(&self) -> usize {
        match self {
            Features::Dense(v) => v.len(),
            Features::Sparse(s) => s.dim,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Features::Dense(v) => v.iter().all(|x| x.is_finite()),
            Features::Sparse(s) => s.values.iter().all(|x| x.is_finite()),
        }
    }

    /// `xᵀθ`. `theta` must have length `self.dim()`.
    pub fn dot(&self, theta: &[f64]) -> f64 {
        debug_assert_eq!(theta.len(), self.dim());
        match self {
            Features::Dense(v) => v.iter().zip(theta).map(|(a, b)| a * b).sum(),
            Features::Sparse(s) => s
                .indices
                .iter()
                .zip(&s.values)
                .map(|(&i, v)| v * theta[i])
                .sum(),
        }
    }

    /// `y ← y + a·x`.
    pub fn axpy(&self, a: f64, y: &mut [f64]) {
        debug_assert_eq!(y.len(), self.dim());
        match self {
            Features::Dense(v) => {
                for (yi, xi) in y.iter_mut().zip(v) {
                    *yi += a * xi;
                }
            }
            Features::Sparse(s) => {
                for (&i, v) in s.indices.iter().zip(&s.values) {
                    y[i] += a * v;
                }
            }
        }
    }

    /// `‖x‖²`.
    pub fn norm_sq(&self) -> f64 {
        let vals = match self {
            Features::Dense(v) => v.as_slice(),
            Features::Sparse(s) => s.values.as_slice(),
        };
        vals.iter().map(|v| v * v).sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        match self {
            Features::Dense(v) => v.clone(),
            Features::Sparse(s) => {
                let mut out = vec![0.0; s.dim];
                for (&i, v) in s.indices.iter().zip(&s.values) {
                    out[i] = *v;
                }
                out
            }
        }
    }
}

/// One observation `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub x: Features,
    pub y: f64,
}

impl Sample {
    pub fn new(x: Features, y: f64) -> Result<Self> {
        if x.dim() == 0 {
            return Err(Error::InvalidArgument(
                "sample dimension must be >= 1".into(),
            ));
        }
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFinite("sample"));
        }
        Ok(Sample { x, y })
    }

    pub fn dense(x: Vec<f64>, y: f64) -> Result<Self> {
        Sample::new(Features::Dense(x), y)
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_and_dense_agree() {
        let s = Features::Sparse(SparseVec::new(5, vec![0, 3], vec![2.0, -1.0]).unwrap());
        let d = Features::Dense(s.to_dense());
        let theta = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(s.dot(&theta), d.dot(&theta));
        assert_eq!(s.dot(&theta), -2.0);
        assert_eq!(s.norm_sq(), 5.0);

        let mut a = theta.to_vec();
        let mut b = theta.to_vec();
        s.axpy(0.5, &mut a);
        d.axpy(0.5, &mut b);
        assert_eq!(a, b);
        assert_eq!(a, vec![2.0, 2.0, 3.0, 3.5, 5.0]);
    }

    #[test]
    fn sparse_rejects_unsorted_and_out_of_range() {
        assert!(SparseVec::new(5, vec![3, 1], vec![1.0, 1.0]).is_err());
        assert!(SparseVec::new(5, vec![1, 1], vec![1.0, 1.0]).is_err());
        assert!(SparseVec::new(3, vec![0, 3], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn sample_validation() {
        assert!(Sample::dense(vec![], 1.0).is_err());
        assert!(Sample::dense(vec![f64::NAN], 1.0).is_err());
        assert!(Sample::dense(vec![1.0], f64::INFINITY).is_err());
        assert!(Sample::dense(vec![1.0], 1.0).is_ok());
    }
}
