use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::problem::Problem;
use crate::report::num;

/// Residuals of a primal-dual pair `(x, λ)`.
///
/// `eps_residual` is the smallest `‖ε‖` with `ε − L′ₓ(x, λ) ∈ N_C(x)`,
/// `r_residual` the support gap `sup_{y ∈ K} ⟨λ, y − G(x)⟩` clamped below at
/// zero. The signed gap is kept alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AkktRecord {
    #[serde(with = "num::vec")]
    pub x: Vec<f64>,
    #[serde(with = "num::vec")]
    pub lambda: Vec<f64>,
    #[serde(with = "num")]
    pub eps_residual: f64,
    #[serde(with = "num")]
    pub r_residual: f64,
    #[serde(with = "num")]
    pub support_gap: f64,
    #[serde(with = "num")]
    pub feasibility: f64,
    #[serde(with = "num")]
    pub multiplier_norm: f64,
}

impl AkktRecord {
    /// `max(eps, r, feasibility)`
    pub fn combined_residual(&self) -> f64 {
        self.eps_residual.max(self.r_residual).max(self.feasibility)
    }

    pub fn is_kkt(&self, tol_kkt: f64, tol_feas: f64) -> bool {
        self.eps_residual <= tol_kkt && self.r_residual <= tol_kkt && self.feasibility <= tol_feas
    }
}

/// `f′(x) + G′(x)*λ` as a Riesz representative in `X`.
pub fn lagrangian_grad_x(problem: &Problem, x: &[f64], lam: &[f64]) -> Result<Vec<f64>> {
    problem.check_x(x)?;
    problem.check_y(lam)?;
    let mut g = problem.objective_grad(x);
    for (gi, ai) in g.iter_mut().zip(problem.adjoint_action(x, lam)) {
        *gi += ai;
    }
    Ok(g)
}

/// Evaluates every field of [`AkktRecord`] at `(x, λ)`. A point outside `C`
/// (beyond the default feasibility tolerance) gets `eps_residual = +∞`.
pub fn akkt_residuals(problem: &Problem, x: &[f64], lam: &[f64]) -> Result<AkktRecord> {
    let grad = lagrangian_grad_x(problem, x, lam)?;
    record_from_grad(problem, x, lam, &grad)
}

/// Same as [`akkt_residuals`] with `L′ₓ(x, λ)` supplied by the caller.
pub(crate) fn record_from_grad(problem: &Problem, x: &[f64], lam: &[f64], grad: &[f64]) -> Result<AkktRecord> {
    let eps_residual = problem.set_c.normal_cone_dist(x, grad, &problem.space_x)?;
    let g = problem.constraint_value(x);
    let support_gap = problem.set_k.support_gap(lam, &g, &problem.space_y)?;
    let feasibility = problem.set_k.dist(&g, &problem.space_y)?;
    Ok(AkktRecord {
        x: x.to_vec(),
        lambda: lam.to_vec(),
        eps_residual,
        r_residual: support_gap.max(0.0),
        support_gap,
        feasibility,
        multiplier_norm: problem.space_y.norm(lam),
    })
}

/// KKT test at a single tolerance for all three conditions.
pub fn is_kkt(problem: &Problem, x: &[f64], lam: &[f64], tol: f64) -> Result<bool> {
    Ok(akkt_residuals(problem, x, lam)?.is_kkt(tol, tol))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::convex::{ConvexSet, WeightedSpace};
    use crate::linalg::Matrix;
    use crate::problem::{load_problem, AffineMap, LinearObjective, ProblemSpec};

    fn qp2d() -> Problem {
        let spec = ProblemSpec::from_json_str(
            r#"{"name": "qp2d", "family": "qp-box", "params": {"hessian": [[1, 0], [0, 1]],
                "lower": -10, "upper": 10, "eq_matrix": [[1, 1]], "eq_rhs": [1]}}"#,
        )
        .unwrap();
        load_problem(&spec).unwrap()
    }

    #[test]
    fn qp_hand_solution_is_kkt() {
        // x + λ(1, 1) = 0 with x = (½, ½) gives λ = −½.
        let p = qp2d();
        let rec = akkt_residuals(&p, &[0.5, 0.5], &[-0.5]).unwrap();
        assert!(rec.eps_residual <= 1e-10 && rec.r_residual <= 1e-10 && rec.feasibility == 0.0);
        assert!(is_kkt(&p, &[0.5, 0.5], &[-0.5], 1e-8).unwrap());
        assert!(!is_kkt(&p, &[0.5, 0.5], &[0.0], 1e-8).unwrap());
    }

    #[test]
    fn zero_multiplier_measures_gradient() {
        let p = qp2d();
        let rec = akkt_residuals(&p, &[0.3, 0.7], &[0.0]).unwrap();
        assert!((rec.eps_residual - (0.09f64 + 0.49).sqrt()).abs() < 1e-15);
        assert_eq!(rec.r_residual, 0.0);
        let far = akkt_residuals(&p, &[11.0, 0.0], &[0.0]).unwrap();
        assert_eq!(far.eps_residual, f64::INFINITY);
    }

    #[test]
    fn identity_constraint_gradient_is_multiplier() {
        let space = WeightedSpace::new(vec![2.0, 0.5]).unwrap();
        let p = Problem::new(
            "id",
            space.clone(),
            space,
            Arc::new(LinearObjective { coeffs: vec![0.0, 0.0] }),
            Arc::new(AffineMap::new(Matrix::identity(2), vec![0.0, 0.0]).unwrap()),
            ConvexSet::WholeSpace { dim: 2 },
            ConvexSet::Zero { dim: 2 },
        )
        .unwrap();
        assert_eq!(lagrangian_grad_x(&p, &[1.0, 1.0], &[3.0, -4.0]).unwrap(), vec![3.0, -4.0]);
        assert!(lagrangian_grad_x(&p, &[1.0], &[3.0, -4.0]).is_err());
    }

    #[test]
    fn unconstrained_minimum_with_zero_multiplier() {
        let spec = ProblemSpec::from_json_str(
            r#"{"name": "u", "family": "qp-box", "params": {"hessian": [[2, 0], [0, 1]], "linear": [-2, 1]}}"#,
        )
        .unwrap();
        let p = load_problem(&spec).unwrap();
        assert!(is_kkt(&p, &[1.0, -1.0], &[], 1e-12).unwrap());
    }

    mod properties {
        use proptest::prelude::*;
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        use super::*;
        use crate::suites::random_membership_instance;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn kkt_verdict_agrees_with_residuals(seed in any::<u64>(), scale in 0.0f64..1e-6, tol in 1e-9f64..1e-3) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let i = random_membership_instance(&mut rng).unwrap();
                let lam: Vec<f64> = (0..i.problem.dim_y()).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
                let rec = akkt_residuals(&i.problem, &i.x, &lam).unwrap();
                if is_kkt(&i.problem, &i.x, &lam, tol).unwrap() {
                    prop_assert!(rec.eps_residual <= tol && rec.r_residual <= tol && rec.feasibility <= tol);
                }
                prop_assert_eq!(rec.r_residual, rec.support_gap.max(0.0));
            }
        }
    }
}
