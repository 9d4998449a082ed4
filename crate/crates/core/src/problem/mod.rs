//! Problem instances `min f(x) s.t. x ∈ C, G(x) ∈ K` over weighted spaces.
//!
//! Evaluators work in plain coordinates (partial derivatives, Jacobian
//! products). [`Problem`] converts them into the weighted geometry: gradients
//! become Riesz representatives `W_X⁻¹ ∇f` and the Jacobian adjoint becomes
//! `W_X⁻¹ Jᵀ W_Y`. Multipliers live in the coordinates of `Y` itself.

mod analytic;
mod evaluators;
mod fd;
mod grid;
pub mod spec;

pub use analytic::{exact_inner, PiecewiseAnalytic, PowerTerm, Segment};
pub use evaluators::{
    AffineMap, BoxConstraintMap, ConstraintMap, DiagonalQuadratic, FnConstraint, FnObjective, LinearObjective, Objective,
    QuadraticMap, QuadraticObjective, ScaledCoordinateMap, ZeroMap,
};
pub use fd::{fd_check, FdReport};
pub use grid::{discretize_interval, GridDiscretization};
pub use spec::{load_problem, ProblemSpec};

use std::sync::Arc;

use crate::convex::{ConvexSet, WeightedSpace};
use crate::error::{check_dim, Result};
use crate::linalg::{weighted_adjoint, Matrix};

/// A constrained problem instance. Cheap to clone and safe to share across
/// threads; evaluators are required to be pure.
#[derive(Clone)]
pub struct Problem {
    pub name: String,
    pub space_x: WeightedSpace,
    pub space_y: WeightedSpace,
    pub set_c: ConvexSet,
    pub set_k: ConvexSet,
    objective: Arc<dyn Objective>,
    constraint: Arc<dyn ConstraintMap>,
    spec: Option<ProblemSpec>,
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dim_x", &self.dim_x())
            .field("dim_y", &self.dim_y())
            .field("set_c", &self.set_c.variant_name())
            .field("set_k", &self.set_k.variant_name())
            .finish()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        space_x: WeightedSpace,
        space_y: WeightedSpace,
        objective: Arc<dyn Objective>,
        constraint: Arc<dyn ConstraintMap>,
        set_c: ConvexSet,
        set_k: ConvexSet,
    ) -> Result<Self> {
        check_dim(space_x.dim(), set_c.dim())?;
        check_dim(space_y.dim(), set_k.dim())?;
        check_dim(space_x.dim(), constraint.dim_in())?;
        check_dim(space_y.dim(), constraint.dim_out())?;
        Ok(Self { name: name.into(), space_x, space_y, set_c, set_k, objective, constraint, spec: None })
    }

    pub(crate) fn with_spec(mut self, spec: ProblemSpec) -> Self {
        self.spec = Some(spec);
        self
    }

    /// The normalized spec this problem was loaded from, if any.
    pub fn spec(&self) -> Option<&ProblemSpec> {
        self.spec.as_ref()
    }

    pub fn dim_x(&self) -> usize {
        self.space_x.dim()
    }

    pub fn dim_y(&self) -> usize {
        self.space_y.dim()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.value(x)
    }

    /// Riesz representative of `f′(x)` in `X`.
    pub fn objective_grad(&self, x: &[f64]) -> Vec<f64> {
        self.space_x.riesz(&self.objective.gradient(x))
    }

    /// `f(x)` together with the Riesz representative of `f′(x)`.
    pub fn objective_value_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let (v, g) = self.objective.value_and_gradient(x);
        (v, self.space_x.riesz(&g))
    }

    pub fn objective_partials(&self, x: &[f64]) -> Vec<f64> {
        self.objective.gradient(x)
    }

    pub fn constraint_value(&self, x: &[f64]) -> Vec<f64> {
        self.constraint.value(x)
    }

    /// `G′(x) d`
    pub fn jacobian_action(&self, x: &[f64], d: &[f64]) -> Vec<f64> {
        self.constraint.jvp(x, d)
    }

    /// `G′(x)* λ` with respect to the weighted inner products.
    pub fn adjoint_action(&self, x: &[f64], lam: &[f64]) -> Vec<f64> {
        let plain = self.constraint.vjp(x, &self.space_y.lower(lam));
        self.space_x.riesz(&plain)
    }

    /// Plain Jacobian matrix, assembled column by column.
    pub fn jacobian_dense(&self, x: &[f64]) -> Matrix {
        let (n, m) = (self.dim_x(), self.dim_y());
        let mut jac = Matrix::zeros(m, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.constraint.jvp(x, &e);
            for i in 0..m {
                jac[(i, j)] = col[i];
            }
            e[j] = 0.0;
        }
        jac
    }

    /// Dense weighted adjoint `W_X⁻¹ Jᵀ W_Y`.
    pub fn adjoint_dense(&self, x: &[f64]) -> Matrix {
        weighted_adjoint(&self.jacobian_dense(x), self.space_x.weights(), self.space_y.weights())
            .expect("spaces validated at construction")
    }

    /// `d_K(G(x))`
    pub fn infeasibility(&self, x: &[f64]) -> f64 {
        self.set_k.dist(&self.constraint_value(x), &self.space_y).expect("dimensions validated")
    }

    pub fn check_x(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim_x(), x.len())
    }

    pub fn check_y(&self, y: &[f64]) -> Result<()> {
        check_dim(self.dim_y(), y.len())
    }
}
