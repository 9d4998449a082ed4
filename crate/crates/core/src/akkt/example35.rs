//! The unbounded-multiplier fixture on `X = ℝ × L²(0,1)`, `Y = L²(0,1)`:
//! `f(α, u) = −α`, `G(α, u) = αq − u` with `q(t) = t^{−1/4}`, `K = {0}` and
//! `C = ℝ × {|u| ≤ 1}`. The iterates `αᵏ = 1/k`, `uᵏ = min(1, αᵏq)` with
//! `λᵏ = ¾k³ χ_[0, k⁻⁴]` and `μᵏ = (0, λᵏ)` solve the stationarity system
//! exactly while `‖λᵏ‖ = 3k/4` is unbounded.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{discretize_interval, exact_inner, GridDiscretization, PiecewiseAnalytic, PowerTerm, Problem, Segment};
use crate::report::num;

/// The `k`-th analytic iterate with its exact residual data.
#[derive(Debug, Clone)]
pub struct Example35Analytic {
    pub k: u32,
    pub alpha: f64,
    pub q: PiecewiseAnalytic,
    pub u: PiecewiseAnalytic,
    pub lambda: PiecewiseAnalytic,
    /// `‖λᵏ‖` by exact integration.
    pub exact_norm: f64,
    /// `⟨λᵏ, 0 − G(αᵏ, uᵏ)⟩` by exact integration.
    pub exact_gap: f64,
    pub closed_form_norm: f64,
    pub closed_form_gap: f64,
    /// `⟨q, λᵏ⟩`
    pub q_pairing: f64,
    /// `α`-component of `f′ + G′*λᵏ + μᵏ` with `μᵏ = (0, λᵏ)`.
    pub stationarity_alpha: f64,
    /// `‖u`-component of `f′ + G′*λᵏ + μᵏ‖`.
    pub stationarity_u: f64,
    /// `∫ λᵏ (1 − uᵏ)`, zero exactly when `(0, λᵏ)` is normal to `C` at `uᵏ`
    /// (given `λᵏ ≥ 0` and `uᵏ ≤ 1`).
    pub normality_gap: f64,
}

/// Builds the analytic iterate for `k ≥ 1`.
pub fn build_example35(k: u32) -> Result<Example35Analytic> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let kf = f64::from(k);
    let alpha = 1.0 / kf;
    let t_k = kf.powi(-4);
    let q = PiecewiseAnalytic::power(1.0, -0.25);
    let u = if k == 1 {
        PiecewiseAnalytic::constant(1.0)
    } else {
        PiecewiseAnalytic::new(
            vec![0.0, t_k, 1.0],
            vec![Segment::constant(1.0), Segment::new(vec![PowerTerm::new(alpha, -0.25)])],
        )?
    };
    let lambda = PiecewiseAnalytic::indicator(0.75 * kf.powi(3), 0.0, t_k)?;
    let g = q.scale(alpha).add_scaled(-1.0, &u)?;
    let exact_norm = exact_inner(&lambda, &lambda)?.sqrt();
    let exact_gap = -exact_inner(&lambda, &g)?;
    let q_pairing = exact_inner(&q, &lambda)?;
    // f′ = (−1, 0), G′*λ = (⟨q, λ⟩, −λ), μ = (0, λ).
    let stationarity_alpha = -1.0 + q_pairing;
    let u_part = lambda.scale(-1.0).add_scaled(1.0, &lambda)?;
    let stationarity_u = exact_inner(&u_part, &u_part)?.sqrt();
    let one_minus_u = PiecewiseAnalytic::constant(1.0).add_scaled(-1.0, &u)?;
    let normality_gap = exact_inner(&lambda, &one_minus_u)?;
    Ok(Example35Analytic {
        k,
        alpha,
        q,
        u,
        lambda,
        exact_norm,
        exact_gap,
        closed_form_norm: 0.75 * kf,
        closed_form_gap: -1.0 / (4.0 * kf),
        q_pairing,
        stationarity_alpha,
        stationarity_u,
        normality_gap,
    })
}

/// A primal-dual pair of the discretized fixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example35Pair {
    pub k: u32,
    #[serde(with = "num::vec")]
    pub x: Vec<f64>,
    #[serde(with = "num::vec")]
    pub lambda: Vec<f64>,
    #[serde(with = "num::vec")]
    pub mu: Vec<f64>,
}

/// The fixture on a graded midpoint grid. The profile is the vector of
/// exact cell averages of `q`, so `⟨q̄, χ_cell⟩` matches the continuous
/// pairing cell by cell.
#[derive(Debug, Clone)]
pub struct Example35Discrete {
    pub grid: GridDiscretization,
    pub problem: Problem,
}

impl Example35Discrete {
    pub fn new(n: usize, grading: f64, alpha_coefficient: f64) -> Result<Self> {
        let grid = discretize_interval(n, grading)?;
        let problem = crate::problem::spec::example35_from_grid("example35", &grid, alpha_coefficient)?;
        Ok(Self { grid, problem })
    }

    /// The discrete analogue of the `k`-th iterate: `λ` is `¾k³` on the
    /// cells inside `[0, k⁻⁴]`, rescaled so that `⟨q̄, λ⟩ = 1`;
    /// `x = (1/k, min(1, q̄/k))` and `μ = (0, λ)`.
    pub fn pair(&self, k: u32) -> Result<Example35Pair> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        let kf = f64::from(k);
        let t_k = kf.powi(-4);
        let b = &self.grid.boundaries;
        let inside = (0..self.grid.len()).take_while(|&i| b[i + 1] <= t_k * (1.0 + 1e-12)).count();
        if inside == 0 {
            return Err(Error::InvalidInput(format!("grid too coarse: no cell inside [0, {t_k:e}] for k = {k}")));
        }
        let profile = self.profile();
        let w = &self.grid.weights;
        let mut lambda = vec![0.0; self.grid.len()];
        lambda[..inside].fill(0.75 * kf.powi(3));
        let pairing: f64 = (0..inside).map(|i| w[i] * profile[i] * lambda[i]).sum();
        for l in &mut lambda[..inside] {
            *l /= pairing;
        }
        let alpha = 1.0 / kf;
        let mut x = Vec::with_capacity(self.grid.len() + 1);
        x.push(alpha);
        x.extend(profile.iter().map(|q| (alpha * q).clamp(-1.0, 1.0)));
        let mut mu = vec![0.0];
        mu.extend_from_slice(&lambda);
        Ok(Example35Pair { k, x, lambda, mu })
    }

    fn profile(&self) -> Vec<f64> {
        // G(0, e) = −e, G(1, 0) = q̄.
        let mut unit = vec![0.0; self.grid.len() + 1];
        unit[0] = 1.0;
        self.problem.constraint_value(&unit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::akkt::{akkt_residuals, is_kkt};

    #[test]
    fn closed_forms() {
        for k in [1u32, 2, 3, 4, 8, 16, 64] {
            let e = build_example35(k).unwrap();
            assert!((e.exact_norm - e.closed_form_norm).abs() <= 1e-12, "k = {k}");
            assert!((e.exact_gap - e.closed_form_gap).abs() <= 1e-12, "k = {k}");
            assert!((e.q_pairing - 1.0).abs() <= 1e-12);
            assert!(e.stationarity_alpha.abs() <= 1e-12 && e.stationarity_u == 0.0);
            assert_eq!(e.normality_gap, 0.0);
        }
        assert_eq!(build_example35(1).unwrap().exact_norm, 0.75);
        assert!(build_example35(0).is_err());
    }

    #[test]
    fn analytic_iterate_shape() {
        let e = build_example35(2).unwrap();
        assert_eq!(e.u.eval(0.01), 1.0);
        assert!((e.u.eval(0.5) - 0.5 * 0.5f64.powf(-0.25)).abs() < 1e-15);
        assert_eq!(e.lambda.eval(0.5), 0.0);
        assert_eq!(e.lambda.eval(0.01), 6.0);
    }

    #[test]
    fn discrete_pairs() {
        let d = Example35Discrete::new(256, 4.0, -1.0).unwrap();
        for k in [1u32, 2, 4, 8] {
            let pair = d.pair(k).unwrap();
            let rec = akkt_residuals(&d.problem, &pair.x, &pair.lambda).unwrap();
            assert!(rec.eps_residual <= 1e-12, "k = {k}: {}", rec.eps_residual);
            assert_eq!(rec.r_residual, 0.0);
            // Grid-aligned k: the gap and norm are exact up to rounding.
            assert!((rec.support_gap + 0.25 / f64::from(k)).abs() < 1e-12, "k = {k}: {}", rec.support_gap);
            assert!((rec.multiplier_norm - 0.75 * f64::from(k)).abs() < 1e-10);
        }
        assert!(d.pair(5).unwrap().lambda.iter().all(|l| *l >= 0.0));
        assert!(Example35Discrete::new(8, 4.0, -1.0).unwrap().pair(16).is_err());
    }

    #[test]
    fn origin_is_not_kkt() {
        let d = Example35Discrete::new(64, 4.0, -1.0).unwrap();
        let x = vec![0.0; 65];
        for scale in [0.0, 0.1, 1.0, 10.0] {
            let lam: Vec<f64> = d.pair(2).unwrap().lambda.iter().map(|l| l * scale).collect();
            assert!(!is_kkt(&d.problem, &x, &lam, 1e-6).unwrap());
        }
    }
}
