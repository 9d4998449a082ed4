//! Named reproduction suites. Each returns a list of [`PaperCheck`]s; the
//! `examples` command prints them and the acceptance tests reuse them.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::akkt::{box_split, build_example35, m_membership, split_bound_check, DEFAULT_MEMBERSHIP_MAX_ITER};
use crate::convex::{ConvexSet, WeightedSpace};
use crate::error::{Error, Result};
use crate::linalg::{reduced_min_modulus, subspace_gap, Matrix, Subspace, DEFAULT_RANK_TOL};
use crate::problem::{AffineMap, LinearObjective, Problem, ZeroMap};
use crate::report::PaperCheck;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ex35,
    BoxSplit,
    Affine,
    Gamma,
    Ball,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Ex35, Suite::BoxSplit, Suite::Affine, Suite::Gamma, Suite::Ball];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ex35 => "ex35",
            Suite::BoxSplit => "box-split",
            Suite::Affine => "affine",
            Suite::Gamma => "gamma",
            Suite::Ball => "ball",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite \"{name}\"")))
    }

    pub fn run(&self, seed: u64) -> Result<Vec<PaperCheck>> {
        match self {
            Suite::Ex35 => ex35(&[1, 2, 4, 8, 16]),
            Suite::BoxSplit => box_split_suite(seed, 50, 50),
            Suite::Affine => affine(seed, 20),
            Suite::Gamma => gamma(),
            Suite::Ball => ball(20),
        }
    }
}

const EX35_NORM: &str = "unbounded multiplier fixture: norm of the k-th multiplier is 3k/4";
const EX35_GAP: &str = "unbounded multiplier fixture: pairing with 0 - G at the k-th iterate is -1/(4k)";
const EX35_STAT: &str = "unbounded multiplier fixture: the k-th pair is exactly stationary";

/// Exact norms, gaps and stationarity of the analytic iterates.
pub fn ex35(ks: &[u32]) -> Result<Vec<PaperCheck>> {
    let mut out = Vec::new();
    for &k in ks {
        let e = build_example35(k)?;
        let kf = f64::from(k);
        out.push(PaperCheck::new(format!("ex35 norm k={k}"), EX35_NORM, 0.75 * kf, e.exact_norm, 1e-12));
        out.push(PaperCheck::new(format!("ex35 gap k={k}"), EX35_GAP, -0.25 / kf, e.exact_gap, 1e-12));
        let stat = e.stationarity_alpha.abs() + e.stationarity_u + e.normality_gap.abs();
        out.push(PaperCheck::new(format!("ex35 stationarity k={k}"), EX35_STAT, 0.0, stat, 0.0));
    }
    Ok(out)
}

const SPLIT_EXAMPLE: &str = "minimal box splitting: min(l, 0) and -max(l, 0)";
const SPLIT_BOUND: &str = "minimal box splitting keeps the complementarity bound";
const SPLIT_NORMS: &str = "minimal box splitting: trivial norm estimates of both parts";

/// Bound preservation and norm estimates of the minimal split on `count`
/// random feasible tuples of dimension `n`, plus the hand example.
pub fn box_split_suite(seed: u64, count: usize, n: usize) -> Result<Vec<PaperCheck>> {
    let (a, b) = box_split(&[-2.0, 3.0]);
    let mut out = vec![PaperCheck::holds("box-split (-2, 3)", SPLIT_EXAMPLE, a == [-2.0, 0.0] && b == [0.0, -3.0])];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_slack = f64::INFINITY;
    let mut norms_ok = true;
    for _ in 0..count {
        let t = random_split_tuple(&mut rng, n);
        let rep = split_bound_check(&t.space, &t.u, &t.ua, &t.ub, &t.la, &t.lb, t.r)?;
        worst_slack = worst_slack.min(rep.r - rep.split_lhs);
        norms_ok &= rep.split_a_norm <= rep.lambda_norm && rep.split_b_norm <= rep.lambda_norm;
    }
    out.push(PaperCheck::new(format!("box-split min slack over {count}"), SPLIT_BOUND, 0.0, worst_slack.min(0.0), 1e-10));
    out.push(PaperCheck::holds(format!("box-split norm estimates over {count}"), SPLIT_NORMS, norms_ok));
    Ok(out)
}

/// A random input to [`split_bound_check`] that satisfies its bound.
#[derive(Debug, Clone)]
pub struct SplitTuple {
    pub space: WeightedSpace,
    pub u: Vec<f64>,
    pub ua: Vec<f64>,
    pub ub: Vec<f64>,
    pub la: Vec<f64>,
    pub lb: Vec<f64>,
    pub r: f64,
}

/// Bounds in `[-2, 2]`, `u` in the box (on a bound a fifth of the time on
/// each side), nonpositive multipliers and `r` at or above the bound.
pub fn random_split_tuple(rng: &mut ChaCha8Rng, n: usize) -> SplitTuple {
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0) / n as f64).collect();
    let space = WeightedSpace::new(weights).expect("positive weights");
    let mut ua = Vec::with_capacity(n);
    let mut ub = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    for _ in 0..n {
        let a = rng.gen_range(-2.0..2.0);
        let b = a + rng.gen_range(0.0..2.0);
        let p: f64 = rng.gen();
        u.push(if p < 0.2 {
            a
        } else if p < 0.4 {
            b
        } else {
            rng.gen_range(a..=b)
        });
        ua.push(a);
        ub.push(b);
    }
    let la: Vec<f64> = (0..n).map(|_| -rng.gen_range(0.0..5.0)).collect();
    let lb: Vec<f64> = (0..n).map(|_| -rng.gen_range(0.0..5.0)).collect();
    let lhs = crate::akkt::split_bound_lhs(&space, &u, &ua, &ub, &la, &lb);
    let r = lhs + rng.gen_range(0.0..1.0);
    SplitTuple { space, u, ua, ub, la, lb, r }
}

const AFFINE_RANGE: &str = "affine equality constraints: the M-set is the range of the adjoint";

/// `G(x) = Ax − b` with a random `4 × 7` matrix `A`. Vectors in the range of
/// `Aᵀ` are members of every `M(x, r)`; a vector with a component in
/// `ker A` is not. Both verdicts are compared with a range projection.
pub fn affine(seed: u64, count: usize) -> Result<Vec<PaperCheck>> {
    let (m, n) = (4, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agree_in = 0;
    let mut agree_out = 0;
    for _ in 0..count {
        let a = random_matrix(&mut rng, m, n);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b = a.matvec(&x);
        let problem = Problem::new(
            "affine",
            WeightedSpace::euclidean(n),
            WeightedSpace::euclidean(m),
            Arc::new(LinearObjective { coeffs: vec![0.0; n] }),
            Arc::new(AffineMap::new(a.clone(), b)?),
            ConvexSet::WholeSpace { dim: n },
            ConvexSet::Zero { dim: m },
        )?;
        let range = Subspace::range_of(&a.transpose(), DEFAULT_RANK_TOL)?;
        let kernel = range.orthogonal_complement();
        let r = rng.gen_range(0.0..1.0);
        let y: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v_in = a.tr_matvec(&y);
        let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let off = kernel.project(&z);
        let off_norm = crate::linalg::norm2(&off);
        let v_out: Vec<f64> = v_in.iter().zip(&off).map(|(p, q)| p + 0.5 * q / off_norm).collect();

        let tol = 1e-7;
        let w_in = m_membership(&problem, &x, r, &v_in, tol, DEFAULT_MEMBERSHIP_MAX_ITER)?;
        let w_out = m_membership(&problem, &x, r, &v_out, tol, DEFAULT_MEMBERSHIP_MAX_ITER)?;
        agree_in += usize::from(w_in.member == (range.dist(&v_in) <= tol));
        agree_out += usize::from(!w_out.member && !w_out.inconclusive() && range.dist(&v_out) > tol);
    }
    Ok(vec![
        PaperCheck::new(format!("affine members agree ({count})"), AFFINE_RANGE, count as f64, agree_in as f64, 0.0),
        PaperCheck::new(format!("affine non-members agree ({count})"), AFFINE_RANGE, count as f64, agree_out as f64, 0.0),
    ])
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Matrix::new(rows, cols, data).expect("finite entries")
}

/// A small random query `v ∈ M(x, r)`, built by [`random_membership_instance`].
#[derive(Clone)]
pub struct MembershipInstance {
    pub problem: Problem,
    pub x: Vec<f64>,
    pub r: f64,
    pub v: Vec<f64>,
    /// `v` was shifted off a constructed member of `M(x, r)`. The shifted
    /// vector may still be a member.
    pub shifted: bool,
}

/// `G(x) = Ax − b` with `n, m ≤ 3` on weighted spaces. `K` is `{0}`,
/// `[0, ∞)ᵐ` or a finite box; `C` is the whole space or a finite box with
/// `x` on a bound in about two thirds of the coordinates. `v = G′(x)*λ + μ`
/// for an admissible pair, shifted by a random vector half of the time.
pub fn random_membership_instance(rng: &mut ChaCha8Rng) -> Result<MembershipInstance> {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=3);
    let space_x = WeightedSpace::new((0..n).map(|_| rng.gen_range(0.5..2.0)).collect())?;
    let space_y = WeightedSpace::new((0..m).map(|_| rng.gen_range(0.5..2.0)).collect())?;
    let a = Matrix::new(m, n, (0..m * n).map(|_| rng.gen_range(-2.0..2.0)).collect())?;
    let b: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let set_k = match rng.gen_range(0..3) {
        0 => ConvexSet::Zero { dim: m },
        1 => ConvexSet::NonnegCone { dim: m },
        _ => {
            let lower: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..0.5)).collect();
            let upper = lower.iter().map(|l| l + rng.gen_range(0.5..2.0)).collect();
            ConvexSet::new_box(lower, upper)?
        }
    };
    let mut x = Vec::with_capacity(n);
    let mut mu = vec![0.0; n];
    let set_c = if rng.gen_bool(0.5) {
        x.extend((0..n).map(|_| rng.gen_range(-2.0..2.0)));
        ConvexSet::WholeSpace { dim: n }
    } else {
        let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..0.0)).collect();
        let upper: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(0.5..2.0)).collect();
        for i in 0..n {
            match rng.gen_range(0..3) {
                0 => {
                    x.push(lower[i]);
                    mu[i] = -rng.gen_range(0.0..2.0);
                }
                1 => {
                    x.push(upper[i]);
                    mu[i] = rng.gen_range(0.0..2.0);
                }
                _ => x.push(rng.gen_range(lower[i]..upper[i])),
            }
        }
        ConvexSet::new_box(lower, upper)?
    };
    let problem = Problem::new(
        "membership",
        space_x,
        space_y,
        Arc::new(LinearObjective { coeffs: vec![0.0; n] }),
        Arc::new(AffineMap::new(a, b)?),
        set_c,
        set_k,
    )?;
    let r = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..2.0) };
    let g = problem.constraint_value(&x);
    let mut lam: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
    if matches!(problem.set_k, ConvexSet::NonnegCone { .. }) {
        lam.iter_mut().for_each(|l| *l = -l.abs());
    }
    // The support gap is positively homogeneous in λ.
    let gap = problem.set_k.support_gap(&lam, &g, &problem.space_y)?;
    if gap > r {
        let s = r / gap;
        lam.iter_mut().for_each(|l| *l *= s);
    }
    let mut v: Vec<f64> = problem.adjoint_action(&x, &lam).iter().zip(&mu).map(|(p, q)| p + q).collect();
    let shifted = rng.gen_bool(0.5);
    if shifted {
        v.iter_mut().for_each(|vi| *vi += rng.gen_range(-1.0..1.0));
    }
    Ok(MembershipInstance { problem, x, r, v, shifted })
}

const GAMMA_IDENTITY: &str = "reduced minimum modulus of the identity is 1";
const GAMMA_DIAG: &str = "reduced minimum modulus of diag(1, e) is e; the printed value is its reciprocal";
const GAMMA_KERNEL: &str = "reduced minimum modulus ignores the kernel";
const DELTA_SELF: &str = "subspace gap of a subspace to itself is 0";
const DELTA_TRIVIAL: &str = "subspace gap from the trivial subspace is 0";

pub fn gamma() -> Result<Vec<PaperCheck>> {
    let g = |m: &Matrix| reduced_min_modulus(m, DEFAULT_RANK_TOL);
    let mut out = vec![PaperCheck::new("gamma(I_3)", GAMMA_IDENTITY, 1.0, g(&Matrix::identity(3))?, 1e-12)];
    for eps in [1e-1, 1e-3, 1e-6] {
        out.push(PaperCheck::new(format!("gamma(diag(1, {eps:e}))"), GAMMA_DIAG, eps, g(&Matrix::from_diag(&[1.0, eps]))?, 1e-12));
    }
    out.push(PaperCheck::new("gamma(diag(1, 0))", GAMMA_KERNEL, 1.0, g(&Matrix::from_diag(&[1.0, 0.0]))?, 1e-12));
    let u = Subspace::span(&Matrix::from_rows(&[[1.0, 0.0], [1.0, 1.0], [0.0, 2.0]])?, DEFAULT_RANK_TOL)?;
    out.push(PaperCheck::new("delta(U, U)", DELTA_SELF, 0.0, subspace_gap(&u, &u)?, 0.0));
    out.push(PaperCheck::new("delta({0}, U)", DELTA_TRIVIAL, 0.0, subspace_gap(&Subspace::trivial(3), &u)?, 0.0));
    Ok(out)
}

const BALL_MEMBER: &str = "unit ball: the iterate is normal to the ball at itself";
const BALL_LIMIT: &str = "unit ball: the limit is not in M(x, 0), which is the zero normal cone";

/// The unit ball of `ℝⁿ` with no constraint map: `xᵏ = (e₁ + e_{k+1})/√2`
/// is in `M(xᵏ, 0)` for `k ≤ n − 2`, while `x̄ = e₁/√2` is interior and
/// `M(x̄, 0) = {0}`.
pub fn ball(n: usize) -> Result<Vec<PaperCheck>> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("ball suite needs n >= 3, got {n}")));
    }
    let problem = ball_problem(n)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for k in 1..=n - 2 {
        let mut x = vec![0.0; n];
        x[0] = s;
        x[k] = s;
        let w = m_membership(&problem, &x, 0.0, &x, 1e-8, DEFAULT_MEMBERSHIP_MAX_ITER)?;
        out.push(PaperCheck::at_most(format!("ball member k={k}"), BALL_MEMBER, 1e-8, if w.member { w.residual } else { f64::INFINITY }));
    }
    let mut xbar = vec![0.0; n];
    xbar[0] = s;
    let w = m_membership(&problem, &xbar, 0.0, &xbar, 1e-6, DEFAULT_MEMBERSHIP_MAX_ITER)?;
    out.push(PaperCheck::holds("ball limit not a member", BALL_LIMIT, !w.member && !w.inconclusive()));
    Ok(out)
}

pub fn ball_problem(n: usize) -> Result<Problem> {
    Problem::new(
        "unit-ball",
        WeightedSpace::euclidean(n),
        WeightedSpace::euclidean(0),
        Arc::new(LinearObjective { coeffs: vec![0.0; n] }),
        Arc::new(ZeroMap { dim_in: n, dim_out: 0 }),
        ConvexSet::new_ball(vec![0.0; n], 1.0)?,
        ConvexSet::Zero { dim: 0 },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for suite in Suite::ALL {
            let checks = suite.run(42).unwrap();
            assert!(!checks.is_empty());
            for c in &checks {
                assert!(c.pass, "{}: {c:?}", suite.name());
            }
        }
    }

    #[test]
    fn parse_names() {
        for suite in Suite::ALL {
            assert_eq!(Suite::parse(suite.name()).unwrap(), suite);
        }
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn split_tuples_are_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = random_split_tuple(&mut rng, 10);
            assert!(split_bound_check(&t.space, &t.u, &t.ua, &t.ub, &t.la, &t.lb, t.r).unwrap().holds);
        }
    }
}
