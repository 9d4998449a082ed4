//! Safeguarded augmented Lagrangian method.
//!
//! With `z = G(x) + w/ρ`, the augmented Lagrangian is
//! `L_ρ(x, w) = f(x) + (ρ/2) d_K(z)² − ‖w‖²/(2ρ)`, the multiplier update is
//! `λ⁺ = ρ (z − P_K z)` and `V(x, w, ρ) = ‖G(x) − P_K z‖`.

mod config;
mod inner;
mod solver;

pub use config::{AlmConfig, InnerTolSchedule};
pub use inner::{InnerResult, BB_SHORT_MEMORY, BB_STEP_MAX, BB_STEP_MIN, NONMONOTONE_MEMORY};
pub(crate) use inner::{projected_gradient, PgParams};
pub use solver::{alm_solve, AlmState, AlmTrace, TraceRow};

use crate::akkt::lagrangian_grad_x;
use crate::convex::WeightedSpace;
use crate::error::{check_dim, Error, Result};
use crate::problem::Problem;

fn shifted(problem: &Problem, x: &[f64], w: &[f64], rho: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    if !(rho > 0.0) {
        return Err(Error::InvalidInput(format!("penalty must be positive, got {rho}")));
    }
    problem.check_x(x)?;
    problem.check_y(w)?;
    let g = problem.constraint_value(x);
    let z: Vec<f64> = g.iter().zip(w).map(|(gi, wi)| gi + wi / rho).collect();
    let pz = problem.set_k.project(&z, &problem.space_y)?;
    Ok((g, z, pz))
}

pub fn aug_lagrangian_value(problem: &Problem, x: &[f64], w: &[f64], rho: f64) -> Result<f64> {
    let (_, z, pz) = shifted(problem, x, w, rho)?;
    let d = problem.space_y.dist(&z, &pz);
    let ww = problem.space_y.inner(w, w);
    Ok(problem.objective_value(x) + 0.5 * rho * d * d - ww / (2.0 * rho))
}

/// `ρ [G(x) + w/ρ − P_K(G(x) + w/ρ)]`
pub fn multiplier_update(problem: &Problem, x: &[f64], w: &[f64], rho: f64) -> Result<Vec<f64>> {
    let (_, z, pz) = shifted(problem, x, w, rho)?;
    Ok(z.iter().zip(&pz).map(|(a, b)| rho * (a - b)).collect())
}

/// `f′(x) + ρ G′(x)*[G(x) + w/ρ − P_K(G(x) + w/ρ)]`, evaluated through the
/// multiplier update so that it coincides bitwise with
/// `lagrangian_grad_x(x, multiplier_update(x, w, ρ))`.
pub fn aug_lagrangian_grad(problem: &Problem, x: &[f64], w: &[f64], rho: f64) -> Result<Vec<f64>> {
    let lam = multiplier_update(problem, x, w, rho)?;
    lagrangian_grad_x(problem, x, &lam)
}

/// `L_ρ(x, w)` and its gradient from one evaluation of `G` and `f`. Both
/// agree bitwise with [`aug_lagrangian_value`] and [`aug_lagrangian_grad`].
pub fn aug_lagrangian_value_grad(problem: &Problem, x: &[f64], w: &[f64], rho: f64) -> Result<(f64, Vec<f64>)> {
    let (_, z, pz) = shifted(problem, x, w, rho)?;
    let d = problem.space_y.dist(&z, &pz);
    let ww = problem.space_y.inner(w, w);
    let lam: Vec<f64> = z.iter().zip(&pz).map(|(a, b)| rho * (a - b)).collect();
    let (f, mut g) = problem.objective_value_grad(x);
    for (gi, ai) in g.iter_mut().zip(problem.adjoint_action(x, &lam)) {
        *gi += ai;
    }
    Ok((f + 0.5 * rho * d * d - ww / (2.0 * rho), g))
}

pub fn v_measure(problem: &Problem, x: &[f64], lam: &[f64], rho: f64) -> Result<f64> {
    let (g, _, pz) = shifted(problem, x, lam, rho)?;
    Ok(problem.space_y.dist(&g, &pz))
}

/// Keeps `ρ` at `k = 0` or when `V` dropped by the factor `τ`, otherwise
/// multiplies it by `γ`.
pub fn penalty_update(v_new: f64, v_old: f64, rho: f64, gamma: f64, tau: f64, k: usize) -> f64 {
    if k == 0 || v_new <= tau * v_old {
        rho
    } else {
        gamma * rho
    }
}

/// Projection of `λ` onto the ball of radius `bound` in the norm of `space`.
pub fn safeguard(space: &WeightedSpace, lam: &[f64], bound: f64) -> Result<Vec<f64>> {
    check_dim(space.dim(), lam.len())?;
    if !(bound > 0.0) {
        return Err(Error::InvalidInput(format!("safeguard bound must be positive, got {bound}")));
    }
    let norm = space.norm(lam);
    if norm <= bound {
        return Ok(lam.to_vec());
    }
    let s = bound / norm;
    Ok(lam.iter().map(|v| v * s).collect())
}

/// Approximately minimizes `L_ρ(·, w)` over `C`, stopping when
/// `dist(−∇L_ρ(x), N_C(x)) ≤ tol`.
pub fn inner_solve(
    problem: &Problem,
    w: &[f64],
    rho: f64,
    x_start: &[f64],
    tol: f64,
    max_inner: usize,
    config: &AlmConfig,
) -> Result<InnerResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("inner tolerance must be positive, got {tol}")));
    }
    shifted(problem, x_start, w, rho)?;
    let params = PgParams { tol, max_iter: max_inner, sigma: config.armijo_sigma, beta: config.armijo_beta, step0: config.step0 };
    let space = &problem.space_x;
    Ok(projected_gradient(
        space,
        x_start,
        params,
        |x| aug_lagrangian_value_grad(problem, x, w, rho).expect("dimensions checked"),
        |x| problem.set_c.project(x, space).expect("dimensions checked"),
        |x, g| problem.set_c.normal_cone_dist(x, g, space).expect("dimensions checked"),
    ))
}
