use serde::{Deserialize, Serialize};

use super::certificate::ls_slope;
use super::record::AkktRecord;
use crate::convex::ConvexSet;
use crate::error::{Error, Result};
use crate::linalg::{reduced_min_modulus, Matrix, DEFAULT_RANK_TOL};
use crate::problem::Problem;
use crate::report::num;

/// Growth exponents at or below this value count as bounded.
pub const BOUNDED_TREND_EXPONENT: f64 = 0.1;

/// Least-squares slope of `ln norm` against `ln k` over entries with a
/// positive norm. All-zero norms give exponent 0.
pub fn growth_exponent(ks: &[f64], norms: &[f64]) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = ks
        .iter()
        .zip(norms)
        .filter(|(k, v)| **k > 0.0 && v.is_finite() && **v > 0.0)
        .map(|(k, v)| (k.ln(), v.ln()))
        .unzip();
    if xs.is_empty() && norms.iter().all(|v| *v == 0.0) {
        return Some(0.0);
    }
    ls_slope(&xs, &ys)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierDiagnostic {
    #[serde(with = "num")]
    pub sup_norm: f64,
    #[serde(with = "num::opt")]
    pub growth_exponent: Option<f64>,
    pub bounded_trend: bool,
    /// `‖λᵏ‖ γ(G′(x̄)) / (‖vᵏ‖ (1 + ‖x̄ − xᵏ‖) + rᵏ)` with `vᵏ = G′(xᵏ)*λᵏ`,
    /// reported for `K = {0}` and `C = X` only.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "num::vec_opt")]
    pub bound_ratios: Option<Vec<f64>>,
}

/// Growth diagnostics of the multipliers of `records`, indexed by `ks`.
///
/// When `reference` supplies the problem and a limit point `x̄` of an
/// equality-constrained problem without abstract constraint, the bound
/// ratios are added, with `γ` taken in the weighted norms.
pub fn bounded_multiplier_diagnostic(
    ks: &[f64],
    records: &[AkktRecord],
    reference: Option<(&Problem, &[f64])>,
) -> Result<MultiplierDiagnostic> {
    if records.len() < 3 || ks.len() != records.len() {
        return Err(Error::InvalidInput(format!(
            "need at least 3 records with matching indices, got {} records and {} indices",
            records.len(),
            ks.len()
        )));
    }
    let norms: Vec<f64> = records.iter().map(|r| r.multiplier_norm).collect();
    let exponent = growth_exponent(ks, &norms);
    let bound_ratios = match reference {
        Some((problem, xbar))
            if matches!(problem.set_k, ConvexSet::Zero { .. }) && matches!(problem.set_c, ConvexSet::WholeSpace { .. }) =>
        {
            let gamma = weighted_min_modulus(problem, xbar)?;
            let ratios = records
                .iter()
                .map(|rec| {
                    let v = problem.adjoint_action(&rec.x, &rec.lambda);
                    let dx = problem.space_x.dist(xbar, &rec.x);
                    rec.multiplier_norm * gamma / (problem.space_x.norm(&v) * (1.0 + dx) + rec.r_residual)
                })
                .collect();
            Some(ratios)
        }
        _ => None,
    };
    Ok(MultiplierDiagnostic {
        sup_norm: norms.iter().copied().fold(0.0, f64::max),
        growth_exponent: exponent,
        bounded_trend: exponent.is_some_and(|e| e <= BOUNDED_TREND_EXPONENT),
        bound_ratios,
    })
}

/// `γ(G′(x̄))` as an operator between the weighted spaces, i.e. of
/// `W_Y^{1/2} J W_X^{-1/2}`.
pub fn weighted_min_modulus(problem: &Problem, x: &[f64]) -> Result<f64> {
    let j = problem.jacobian_dense(x);
    let (wx, wy) = (problem.space_x.weights(), problem.space_y.weights());
    let mut scaled = Matrix::zeros(j.rows(), j.cols());
    for i in 0..j.rows() {
        for c in 0..j.cols() {
            scaled[(i, c)] = wy[i].sqrt() * j[(i, c)] / wx[c].sqrt();
        }
    }
    reduced_min_modulus(&scaled, DEFAULT_RANK_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{load_problem, ProblemSpec};

    fn rec(norm: f64) -> AkktRecord {
        AkktRecord {
            x: vec![0.5, 0.5],
            lambda: vec![-norm],
            eps_residual: 0.0,
            r_residual: 0.0,
            support_gap: 0.0,
            feasibility: 0.0,
            multiplier_norm: norm,
        }
    }

    #[test]
    fn constant_multipliers_are_bounded() {
        let ks = [1.0, 2.0, 3.0, 4.0];
        let recs: Vec<_> = ks.iter().map(|_| rec(0.5)).collect();
        let d = bounded_multiplier_diagnostic(&ks, &recs, None).unwrap();
        assert!(d.growth_exponent.unwrap().abs() < 1e-12);
        assert!(d.bounded_trend);
        assert_eq!(d.sup_norm, 0.5);
    }

    #[test]
    fn linear_growth_exponent() {
        let ks = [1.0, 2.0, 4.0, 8.0, 16.0];
        let recs: Vec<_> = ks.iter().map(|k| rec(0.75 * k)).collect();
        let d = bounded_multiplier_diagnostic(&ks, &recs, None).unwrap();
        assert!((d.growth_exponent.unwrap() - 1.0).abs() < 1e-12);
        assert!(!d.bounded_trend);
        assert!(bounded_multiplier_diagnostic(&ks[..2], &recs[..2], None).is_err());
        let zeros: Vec<_> = ks.iter().map(|_| rec(0.0)).collect();
        assert_eq!(bounded_multiplier_diagnostic(&ks, &zeros, None).unwrap().growth_exponent, Some(0.0));
    }

    #[test]
    fn bound_ratio_for_equality_problem() {
        let spec = ProblemSpec::from_json_str(r#"{"name": "a", "family": "affine-equality", "params": {"a": [[1, 1]], "b": [1]}}"#)
            .unwrap();
        let p = load_problem(&spec).unwrap();
        let ks = [1.0, 2.0, 3.0];
        let recs: Vec<_> = ks.iter().map(|_| rec(0.5)).collect();
        let d = bounded_multiplier_diagnostic(&ks, &recs, Some((&p, &[0.5, 0.5]))).unwrap();
        // γ = √2 and ‖G′*λ‖ = √2 ‖λ‖, so every ratio is 1.
        for r in d.bound_ratios.unwrap() {
            assert!((r - 1.0).abs() < 1e-12);
        }
    }
}
