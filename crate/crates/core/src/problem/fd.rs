use super::Problem;
use crate::error::{Error, Result};
use crate::linalg::dot;

/// Coordinates beyond this count are subsampled with a fixed stride.
const MAX_FD_COORDS: usize = 512;

/// Worst relative errors of a central-difference derivative check.
#[derive(Debug, Clone, PartialEq)]
pub struct FdReport {
    /// Worst relative error over checked gradient components.
    pub objective_error: f64,
    pub objective_worst_index: usize,
    /// Worst relative error over checked Jacobian columns, measured in `Y`.
    pub constraint_error: f64,
    pub constraint_worst_index: usize,
    /// Relative mismatch of `⟨v, J d⟩` and `⟨Jᵀ v, d⟩` for fixed probe vectors.
    pub adjoint_error: f64,
    pub checked_coords: usize,
}

impl FdReport {
    pub fn max_error(&self) -> f64 {
        self.objective_error.max(self.constraint_error).max(self.adjoint_error)
    }
}

/// Compares the analytic gradient and Jacobian of `problem` at `x` with
/// central differences of step `h`.
///
/// Errors are relative to `max(1, |analytic|)` per gradient component and
/// `max(1, ‖J eⱼ‖_Y)` per Jacobian column.
pub fn fd_check(problem: &Problem, x: &[f64], h: f64) -> Result<FdReport> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidInput(format!("finite-difference step must be positive, got {h}")));
    }
    problem.check_x(x)?;
    let n = problem.dim_x();
    let stride = n.div_ceil(MAX_FD_COORDS).max(1);
    let coords: Vec<usize> = (0..n).step_by(stride).collect();

    let partials = problem.objective_partials(x);
    let mut report = FdReport {
        objective_error: 0.0,
        objective_worst_index: 0,
        constraint_error: 0.0,
        constraint_worst_index: 0,
        adjoint_error: 0.0,
        checked_coords: coords.len(),
    };
    let mut xp = x.to_vec();
    let mut e = vec![0.0; n];
    for &j in &coords {
        xp[j] = x[j] + h;
        let (fp, gp) = (problem.objective_value(&xp), problem.constraint_value(&xp));
        xp[j] = x[j] - h;
        let (fm, gm) = (problem.objective_value(&xp), problem.constraint_value(&xp));
        xp[j] = x[j];

        let fd = (fp - fm) / (2.0 * h);
        let err = (fd - partials[j]).abs() / partials[j].abs().max(1.0);
        if !(err <= report.objective_error) {
            report.objective_error = err;
            report.objective_worst_index = j;
        }

        e[j] = 1.0;
        let col = problem.jacobian_action(x, &e);
        e[j] = 0.0;
        let diff: Vec<f64> = gp.iter().zip(&gm).zip(&col).map(|((a, b), c)| (a - b) / (2.0 * h) - c).collect();
        let err = problem.space_y.norm(&diff) / problem.space_y.norm(&col).max(1.0);
        if !(err <= report.constraint_error) {
            report.constraint_error = err;
            report.constraint_worst_index = j;
        }
    }

    let m = problem.dim_y();
    let d: Vec<f64> = (0..n).map(|i| ((i as f64) * 0.618_033_988_75 + 0.3).sin()).collect();
    let v: Vec<f64> = (0..m).map(|i| ((i as f64) * 1.414_213_562_37 + 0.7).cos()).collect();
    let lhs = dot(&v, &problem.jacobian_action(x, &d));
    let rhs = dot(&problem.constraint.vjp(x, &v), &d);
    report.adjoint_error = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0);
    Ok(report)
}
