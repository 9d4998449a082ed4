use serde::{Deserialize, Serialize};

use super::record::{lagrangian_grad_x, record_from_grad, AkktRecord};
use crate::alm::{projected_gradient, InnerTolSchedule, PgParams};
use crate::convex::{ConvexSet, WeightedSpace, DEFAULT_FEAS_TOL};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::report::num;

/// Settings of [`quadratic_penalty_generator_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PenaltyConfig {
    /// Radius `r` of the localizing ball `B_r(x̄)`.
    pub radius: f64,
    pub max_inner: usize,
    pub armijo_sigma: f64,
    pub armijo_beta: f64,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self { radius: 1.0, max_inner: 50_000, armijo_sigma: 1e-4, armijo_beta: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyRecord {
    pub k: usize,
    pub record: AkktRecord,
    #[serde(with = "num")]
    pub inner_tol: f64,
    /// `‖x − P(x − ∇F_k(x))‖` with `P` the projection onto `B_r(x̄) ∩ C`.
    #[serde(with = "num")]
    pub inner_residual: f64,
    pub inner_iters: usize,
    /// The subproblem is solved to `inner_tol`.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltySequence {
    pub records: Vec<PenaltyRecord>,
    /// A subproblem missed its tolerance and the sequence stopped there.
    pub truncated: bool,
}

/// Projection onto `B_r(x̄) ∩ C` for `x̄ ∈ C`. The minimizer of
/// `½‖y − x‖² + (θ/2)‖y − x̄‖²` over `C` is `P_C((x + θx̄)/(1 + θ))`, and its
/// distance to `x̄` decreases in `θ`; bisection finds the multiplier of the
/// ball constraint.
pub(crate) fn project_ball_intersection(set_c: &ConvexSet, space: &WeightedSpace, xbar: &[f64], radius: f64, x: &[f64]) -> Vec<f64> {
    let at = |theta: f64| -> Vec<f64> {
        let m: Vec<f64> = x.iter().zip(xbar).map(|(a, b)| (a + theta * b) / (1.0 + theta)).collect();
        set_c.project(&m, space).expect("dimensions checked")
    };
    let y = at(0.0);
    if space.dist(&y, xbar) <= radius {
        return y;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while space.dist(&at(hi), xbar) > radius {
        hi *= 2.0;
        if hi > 1e300 {
            return xbar.to_vec();
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if space.dist(&at(mid), xbar) > radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(hi)
}

pub fn quadratic_penalty_generator(problem: &Problem, xbar: &[f64], k_max: usize, schedule: &InnerTolSchedule) -> Result<PenaltySequence> {
    quadratic_penalty_generator_with(problem, xbar, k_max, schedule, &PenaltyConfig::default())
}

/// For `k = 1..=k_max`, minimizes `F_k(x) = f(x) + ‖x − x̄‖² + k d_K(G(x))²`
/// over `B_r(x̄) ∩ C` by projected gradient (warm started, tolerance
/// `schedule.at(k)` on the projected-gradient residual), then records
/// `(xᵏ, λᵏ)` with `λᵏ = 2k (G(xᵏ) − P_K(G(xᵏ)))`.
pub fn quadratic_penalty_generator_with(
    problem: &Problem,
    xbar: &[f64],
    k_max: usize,
    schedule: &InnerTolSchedule,
    config: &PenaltyConfig,
) -> Result<PenaltySequence> {
    problem.check_x(xbar)?;
    schedule.validate()?;
    if !(config.radius > 0.0) {
        return Err(Error::InvalidInput(format!("ball radius must be positive, got {}", config.radius)));
    }
    let space = &problem.space_x;
    let dist_c = problem.set_c.dist(xbar, space)?;
    if dist_c > DEFAULT_FEAS_TOL {
        return Err(Error::Infeasible { distance: dist_c, tolerance: DEFAULT_FEAS_TOL });
    }
    let feas = problem.infeasibility(xbar);
    if feas > DEFAULT_FEAS_TOL {
        return Err(Error::Infeasible { distance: feas, tolerance: DEFAULT_FEAS_TOL });
    }
    let xbar = problem.set_c.project(xbar, space)?;
    let project = |x: &[f64]| project_ball_intersection(&problem.set_c, space, &xbar, config.radius, x);

    let multiplier = |x: &[f64], k: f64| -> Vec<f64> {
        let g = problem.constraint_value(x);
        let p = problem.set_k.project(&g, &problem.space_y).expect("dimensions checked");
        g.iter().zip(&p).map(|(a, b)| 2.0 * k * (a - b)).collect()
    };

    let mut records = Vec::with_capacity(k_max);
    let mut x = xbar.clone();
    let mut truncated = false;
    for k in 1..=k_max {
        let kf = k as f64;
        let tol = schedule.at(k);
        let value = |x: &[f64]| {
            let g = problem.constraint_value(x);
            let d = problem.set_k.dist(&g, &problem.space_y).expect("dimensions checked");
            let dx = space.dist(x, &xbar);
            problem.objective_value(x) + dx * dx + kf * d * d
        };
        let grad = |x: &[f64]| {
            let mut g = lagrangian_grad_x(problem, x, &multiplier(x, kf)).expect("dimensions checked");
            for ((gi, xi), bi) in g.iter_mut().zip(x).zip(&xbar) {
                *gi += 2.0 * (xi - bi);
            }
            g
        };
        let residual = |x: &[f64], g: &[f64]| {
            let trial: Vec<f64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
            space.dist(x, &project(&trial))
        };
        let params = PgParams { tol, max_iter: config.max_inner, sigma: config.armijo_sigma, beta: config.armijo_beta, step0: 1.0 };
        let inner = projected_gradient(space, &x, params, |x| (value(x), grad(x)), project, residual);
        x = inner.x;
        let lam = multiplier(&x, kf);
        let lgrad = lagrangian_grad_x(problem, &x, &lam)?;
        let record = record_from_grad(problem, &x, &lam, &lgrad)?;
        records.push(PenaltyRecord {
            k,
            record,
            inner_tol: tol,
            inner_residual: inner.residual,
            inner_iters: inner.iterations,
            converged: inner.converged,
        });
        if !inner.converged {
            truncated = true;
            break;
        }
    }
    Ok(PenaltySequence { records, truncated })
}
