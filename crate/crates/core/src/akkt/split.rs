use serde::{Deserialize, Serialize};

use crate::convex::WeightedSpace;
use crate::error::{check_dim, Error, Result};
use crate::report::num;

/// Slack allowed when comparing the two sides of the bound.
pub const SPLIT_BOUND_SLACK: f64 = 1e-10;

/// Minimal splitting `λ = λ_a − λ_b` with `λ_a, λ_b ≤ 0`:
/// `λ_a = min(λ, 0)`, `λ_b = −max(λ, 0)`.
pub fn box_split(lam: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let a = lam.iter().map(|&l| l.min(0.0)).collect();
    let b = lam.iter().map(|&l| -(l.max(0.0))).collect();
    (a, b)
}

/// `−⟨λ_b, u_b − u⟩ − ⟨λ_a, u − u_a⟩`
pub fn split_bound_lhs(space: &WeightedSpace, u: &[f64], ua: &[f64], ub: &[f64], la: &[f64], lb: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..u.len() {
        total -= space.weights()[i] * (lb[i] * (ub[i] - u[i]) + la[i] * (u[i] - ua[i]));
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitBoundReport {
    /// Left-hand side for the given pair.
    #[serde(with = "num")]
    pub original_lhs: f64,
    /// Left-hand side for the minimal split of `λ_a − λ_b`.
    #[serde(with = "num")]
    pub split_lhs: f64,
    #[serde(with = "num")]
    pub r: f64,
    pub holds: bool,
    #[serde(with = "num")]
    pub split_a_norm: f64,
    #[serde(with = "num")]
    pub split_b_norm: f64,
    #[serde(with = "num")]
    pub lambda_norm: f64,
}

/// Checks that replacing `(λ_a, λ_b)` by the minimal split of
/// `λ = λ_a − λ_b` keeps `−⟨λ_b, u_b − u⟩ − ⟨λ_a, u − u_a⟩ ≤ r`.
pub fn split_bound_check(
    space: &WeightedSpace,
    u: &[f64],
    ua: &[f64],
    ub: &[f64],
    la: &[f64],
    lb: &[f64],
    r: f64,
) -> Result<SplitBoundReport> {
    let n = space.dim();
    for v in [u, ua, ub, la, lb] {
        check_dim(n, v.len())?;
    }
    for i in 0..n {
        if ua[i] > ub[i] {
            return Err(Error::InvalidInput(format!("u_a > u_b at {i}")));
        }
        if la[i] > 0.0 || lb[i] > 0.0 {
            return Err(Error::InvalidInput(format!("multipliers must be nonpositive, violated at {i}")));
        }
    }
    let original_lhs = split_bound_lhs(space, u, ua, ub, la, lb);
    if original_lhs > r + SPLIT_BOUND_SLACK {
        return Err(Error::InvalidInput(format!("input violates the bound: {original_lhs} > {r}")));
    }
    let lam: Vec<f64> = la.iter().zip(lb).map(|(a, b)| a - b).collect();
    let (sa, sb) = box_split(&lam);
    let split_lhs = split_bound_lhs(space, u, ua, ub, &sa, &sb);
    Ok(SplitBoundReport {
        original_lhs,
        split_lhs,
        r,
        holds: split_lhs <= r + SPLIT_BOUND_SLACK,
        split_a_norm: space.norm(&sa),
        split_b_norm: space.norm(&sb),
        lambda_norm: space.norm(&lam),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn split_examples() {
        assert_eq!(box_split(&[-2.0, 3.0]), (vec![-2.0, 0.0], vec![0.0, -3.0]));
        assert_eq!(box_split(&[0.0, 0.0]), (vec![0.0, 0.0], vec![0.0, 0.0]));
    }

    #[test]
    fn bound_check_examples() {
        let s = WeightedSpace::euclidean(2);
        let z = [0.0, 0.0];
        let r = split_bound_check(&s, &[0.5, 0.5], &z, &[1.0, 1.0], &z, &z, 0.3).unwrap();
        assert!(r.holds && r.original_lhs == 0.0 && r.split_lhs == 0.0);
        let r = split_bound_check(&s, &[0.5, 0.5], &z, &[1.0, 1.0], &[-1.0, -0.5], &[-0.5, -1.0], 2.0).unwrap();
        // λ = (−0.5, 0.5): split lhs = 0.5·0.5 + 0.5·0.5.
        assert!(r.holds && (r.split_lhs - 0.5).abs() < 1e-15 && (r.original_lhs - 1.5).abs() < 1e-15);
        assert!(split_bound_check(&s, &[0.5, 0.5], &z, &[1.0, 1.0], &[1.0, 0.0], &z, 1.0).is_err());
        assert!(split_bound_check(&s, &[0.5, 0.5], &[2.0, 0.0], &[1.0, 1.0], &z, &z, 1.0).is_err());
        assert!(split_bound_check(&s, &[0.5, 0.5], &z, &[1.0, 1.0], &[-1.0, -1.0], &z, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn split_is_minimal_and_exact(lam in proptest::collection::vec(-5.0f64..5.0, 1..8)) {
            let (a, b) = box_split(&lam);
            for i in 0..lam.len() {
                prop_assert_eq!(a[i] - b[i], lam[i]);
                prop_assert!(a[i] <= 0.0 && b[i] <= 0.0);
                prop_assert_eq!(a[i].abs() + b[i].abs(), lam[i].abs());
            }
        }

        #[test]
        fn any_other_split_dominates(lam in proptest::collection::vec(-5.0f64..5.0, 1..8), shift in proptest::collection::vec(0.0f64..3.0, 8)) {
            // Every nonpositive split has the form (λ̃_a − s, λ̃_b − s) with s ≥ 0.
            let (a, b) = box_split(&lam);
            for i in 0..lam.len() {
                let (oa, ob) = (a[i] - shift[i], b[i] - shift[i]);
                prop_assert!(oa <= a[i] && ob <= b[i]);
                prop_assert!(oa.abs() >= a[i].abs() && ob.abs() >= b[i].abs());
            }
        }
    }
}
