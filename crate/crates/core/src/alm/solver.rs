use serde::{Deserialize, Serialize};

use super::{aug_lagrangian_grad, inner_solve, multiplier_update, penalty_update, safeguard, v_measure, AlmConfig};
use crate::akkt::{record_from_grad, AkktRecord, Certificate};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::report::num;

/// State after outer iteration `k`: the iterate `(xᵏ, λᵏ)`, the safeguarded
/// multiplier `wᵏ` and penalty `ρᵏ` used for the next subproblem, and `Vᵏ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlmState {
    pub k: usize,
    #[serde(with = "num::vec")]
    pub x: Vec<f64>,
    #[serde(with = "num::vec")]
    pub lambda: Vec<f64>,
    #[serde(with = "num::vec")]
    pub w: Vec<f64>,
    #[serde(with = "num")]
    pub rho: f64,
    #[serde(with = "num")]
    pub v_value: f64,
}

/// One line of the trace. Row `k ≥ 1` comes from the subproblem solved with
/// the `w` and `rho` stored in row `k − 1`; row 0 is the starting point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub k: usize,
    #[serde(with = "num")]
    pub rho: f64,
    #[serde(with = "num")]
    pub v: f64,
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
    pub inner_iters: usize,
    #[serde(with = "num")]
    pub inner_residual: f64,
    #[serde(with = "num")]
    pub inner_tol: f64,
    /// The subproblem reached `inner_tol`.
    pub accepted: bool,
    /// `w ≠ λ`
    pub safeguard_active: bool,
    /// `max |∇L_ρ(x, w_prev) − L′ₓ(x, λ)|` with the previous row's `w`, `rho`.
    #[serde(with = "num")]
    pub grad_identity_error: f64,
    #[serde(with = "num::vec")]
    pub x: Vec<f64>,
    #[serde(with = "num::vec")]
    pub lambda: Vec<f64>,
    #[serde(with = "num::vec")]
    pub w: Vec<f64>,
}

impl TraceRow {
    pub fn record(&self) -> AkktRecord {
        AkktRecord {
            x: self.x.clone(),
            lambda: self.lambda.clone(),
            eps_residual: self.eps_residual,
            r_residual: self.r_residual,
            support_gap: self.support_gap,
            feasibility: self.feasibility,
            multiplier_norm: self.multiplier_norm,
        }
    }

    pub fn state(&self) -> AlmState {
        AlmState { k: self.k, x: self.x.clone(), lambda: self.lambda.clone(), w: self.w.clone(), rho: self.rho, v_value: self.v }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlmTrace {
    pub rows: Vec<TraceRow>,
}

impl AlmTrace {
    pub fn records(&self) -> Vec<AkktRecord> {
        self.rows.iter().map(TraceRow::record).collect()
    }

    pub fn last(&self) -> &TraceRow {
        self.rows.last().expect("a trace always has the starting row")
    }

    pub fn outer_iterations(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn inner_iterations(&self) -> usize {
        self.rows.iter().map(|r| r.inner_iters).sum()
    }
}

#[allow(clippy::too_many_arguments)]
fn make_row(
    problem: &Problem,
    k: usize,
    x: Vec<f64>,
    lambda: Vec<f64>,
    grad: &[f64],
    grad_identity_error: f64,
    rho: f64,
    v: f64,
    w: Vec<f64>,
    inner: (usize, f64, f64, bool),
) -> Result<TraceRow> {
    let rec = record_from_grad(problem, &x, &lambda, grad)?;
    Ok(TraceRow {
        k,
        rho,
        v,
        eps_residual: rec.eps_residual,
        r_residual: rec.r_residual,
        support_gap: rec.support_gap,
        feasibility: rec.feasibility,
        multiplier_norm: rec.multiplier_norm,
        inner_iters: inner.0,
        inner_residual: inner.1,
        inner_tol: inner.2,
        accepted: inner.3,
        safeguard_active: w != lambda,
        grad_identity_error,
        x,
        lambda,
        w,
    })
}

/// Runs the safeguarded augmented Lagrangian method from `(x0, λ0)`
/// (defaults: a projection of the origin onto `C`, and `λ = 0`). `x0` is
/// projected onto `C`. Subproblem `k + 1` is solved to tolerance
/// `inner_tol_schedule.at(k + 1)`. The penalty follows [`penalty_update`]
/// capped at `rho_max`, and is held once `V ≤ outer_tol_feas`. Stops at the
/// first KKT record or after `max_outer` subproblems.
pub fn alm_solve(problem: &Problem, config: &AlmConfig, x0: Option<&[f64]>, lambda0: Option<&[f64]>) -> Result<(Certificate, AlmTrace)> {
    config.validate()?;
    let x0 = match x0 {
        Some(x) => {
            problem.check_x(x)?;
            x.to_vec()
        }
        None => vec![0.0; problem.dim_x()],
    };
    let lambda0 = match lambda0 {
        Some(l) => {
            problem.check_y(l)?;
            l.to_vec()
        }
        None => vec![0.0; problem.dim_y()],
    };
    if x0.iter().chain(&lambda0).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("starting point must be finite".into()));
    }

    let mut x = problem.set_c.project(&x0, &problem.space_x)?;
    let mut rho = config.rho0;
    let mut w = safeguard(&problem.space_y, &lambda0, config.safeguard_bound)?;
    let mut v = v_measure(problem, &x, &w, rho)?;
    let grad = crate::akkt::lagrangian_grad_x(problem, &x, &lambda0)?;
    let mut rows = vec![make_row(problem, 0, x.clone(), lambda0, &grad, 0.0, rho, v, w.clone(), (0, f64::NAN, f64::NAN, false))?];

    for k in 0..config.max_outer {
        if rows.last().expect("nonempty").record().is_kkt(config.outer_tol_kkt, config.outer_tol_feas) {
            break;
        }
        let tol = config.inner_tol_schedule.at(k + 1);
        let inner = inner_solve(problem, &w, rho, &x, tol, config.max_inner, config)?;
        let x_new = inner.x;
        let lambda_new = multiplier_update(problem, &x_new, &w, rho)?;
        let grad = crate::akkt::lagrangian_grad_x(problem, &x_new, &lambda_new)?;
        let al_grad = aug_lagrangian_grad(problem, &x_new, &w, rho)?;
        let identity = grad.iter().zip(&al_grad).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let v_new = v_measure(problem, &x_new, &w, rho)?;
        // Once V is within the feasibility tolerance the decrease test only
        // sees rounding noise, so the penalty is held.
        let rho_new = if v_new <= config.outer_tol_feas {
            rho
        } else {
            penalty_update(v_new, v, rho, config.gamma, config.tau, k).min(config.rho_max)
        };
        let w_new = safeguard(&problem.space_y, &lambda_new, config.safeguard_bound)?;
        rows.push(make_row(
            problem,
            k + 1,
            x_new.clone(),
            lambda_new.clone(),
            &grad,
            identity,
            rho_new,
            v_new,
            w_new.clone(),
            (inner.iterations, inner.residual, tol, inner.converged),
        )?);
        if x_new.iter().chain(&lambda_new).any(|v| !v.is_finite()) {
            break;
        }
        x = x_new;
        w = w_new;
        rho = rho_new;
        v = v_new;
    }
    let trace = AlmTrace { rows };
    let ks: Vec<f64> = trace.rows.iter().map(|r| r.k as f64).collect();
    let cert = Certificate::classify(problem, &ks, &trace.records(), config.outer_tol_kkt, config.outer_tol_feas)?;
    Ok((cert, trace))
}
