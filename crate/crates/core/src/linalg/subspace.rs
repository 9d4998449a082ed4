use super::svd::{svd, unit_vector_orthogonal_to};
use super::{dot, norm2, Matrix};
use crate::error::{check_dim, Result};

/// Linear subspace of `ℝⁿ` stored through an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<f64>>,
}

impl Subspace {
    pub fn trivial(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: Vec::new() }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut e = vec![0.0; ambient_dim];
                e[i] = 1.0;
                e
            })
            .collect();
        Self { ambient_dim, basis }
    }

    /// Span of the columns of `spanning`, orthonormalized by SVD with the
    /// given relative rank tolerance.
    pub fn span(spanning: &Matrix, tol: f64) -> Result<Self> {
        let s = svd(spanning)?;
        let r = s.rank(tol);
        let basis = (0..r).map(|j| s.left_basis.column(j)).collect();
        Ok(Self { ambient_dim: spanning.rows(), basis })
    }

    /// `range A`.
    pub fn range_of(a: &Matrix, tol: f64) -> Result<Self> {
        Self::span(a, tol)
    }

    /// `ker A`, the orthogonal complement of the numerical row space.
    pub fn kernel_of(a: &Matrix, tol: f64) -> Result<Self> {
        let row_space = Self::span(&a.transpose(), tol)?;
        Ok(row_space.orthogonal_complement())
    }

    pub fn orthogonal_complement(&self) -> Self {
        let mut basis = self.basis.clone();
        let start = basis.len();
        while basis.len() < self.ambient_dim {
            let e = unit_vector_orthogonal_to(&basis, self.ambient_dim);
            if norm2(&e) == 0.0 {
                break;
            }
            basis.push(e);
        }
        Self { ambient_dim: self.ambient_dim, basis: basis.split_off(start) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let mut p = vec![0.0; self.ambient_dim];
        for b in &self.basis {
            let c = dot(b, x);
            for (pi, bi) in p.iter_mut().zip(b) {
                *pi += c * bi;
            }
        }
        p
    }

    /// Euclidean distance from `x` to the subspace.
    pub fn dist(&self, x: &[f64]) -> f64 {
        let p = self.project(x);
        let r: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a - b).collect();
        norm2(&r)
    }
}

/// Gap `δ(U, V) = sup{dist(x, V) : x ∈ U, ‖x‖ = 1}`, with `δ({0}, V) = 0`.
///
/// Computed as the largest singular value of `(I − P_V) B_U`. The gap is a
/// sine, so values below `64 ε √n` are roundoff and are returned as 0, and
/// values are clamped to at most 1.
pub fn subspace_gap(u: &Subspace, v: &Subspace) -> Result<f64> {
    check_dim(u.ambient_dim, v.ambient_dim)?;
    if u.dim() == 0 {
        return Ok(0.0);
    }
    let residuals: Vec<Vec<f64>> = u
        .basis
        .iter()
        .map(|b| {
            let p = v.project(b);
            b.iter().zip(&p).map(|(x, y)| x - y).collect()
        })
        .collect();
    let m = Matrix::from_columns(u.ambient_dim, &residuals)?;
    let gap = svd(&m)?.max_singular_value();
    let floor = 64.0 * f64::EPSILON * (u.ambient_dim as f64).sqrt();
    Ok(if gap <= floor { 0.0 } else { gap.min(1.0) })
}
