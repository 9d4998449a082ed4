use crate::error::{check_dim, Error, Result};

/// `ℝⁿ` with the inner product `⟨u, v⟩ = Σ wᵢ uᵢ vᵢ`.
///
/// Quadrature weights of a grid make this a discretization of `L²`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSpace {
    weights: Vec<f64>,
}

impl WeightedSpace {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        for (index, &value) in weights.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveWeight { index, value });
            }
        }
        Ok(Self { weights })
    }

    /// Unit weights, i.e. plain Euclidean `ℝⁿ`.
    pub fn euclidean(dim: usize) -> Self {
        Self { weights: vec![1.0; dim] }
    }

    /// Concatenation `X₁ × X₂ × …`.
    pub fn product(parts: &[&WeightedSpace]) -> Self {
        Self { weights: parts.iter().flat_map(|p| p.weights.iter().copied()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.dim());
        debug_assert_eq!(v.len(), self.dim());
        self.weights.iter().zip(u.iter().zip(v)).map(|(w, (a, b))| w * a * b).sum()
    }

    pub fn norm(&self, u: &[f64]) -> f64 {
        self.inner(u, u).sqrt()
    }

    pub fn dist(&self, u: &[f64], v: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(u.iter().zip(v))
            .map(|(w, (a, b))| w * (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Riesz map: plain coordinates of a functional → representative in this space.
    pub fn riesz(&self, plain: &[f64]) -> Vec<f64> {
        plain.iter().zip(&self.weights).map(|(g, w)| g / w).collect()
    }

    /// Inverse Riesz map: representative → plain coordinates `W u`.
    pub fn lower(&self, u: &[f64]) -> Vec<f64> {
        u.iter().zip(&self.weights).map(|(g, w)| g * w).collect()
    }

    pub fn check(&self, v: &[f64]) -> Result<()> {
        check_dim(self.dim(), v.len())
    }
}
