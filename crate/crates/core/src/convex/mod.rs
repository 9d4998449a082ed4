//! Closed convex sets over diagonally weighted spaces and the cone machinery
//! built on them: projections, distances, support gaps, normal-cone residuals,
//! polar projections, recession and tangent cone membership.

mod space;

pub use space::WeightedSpace;

use crate::error::{check_dim, Error, Result};
use crate::problem::Problem;

/// Feasibility tolerance (weighted norm) for normal and tangent cone queries.
pub const DEFAULT_FEAS_TOL: f64 = 1e-8;

/// Relative slack used to decide whether a point sits on a ball boundary.
const BOUNDARY_REL_TOL: f64 = 1e-10;

/// Catalog of nonempty closed convex sets.
///
/// `Product` concatenates its blocks in order; every operation distributes
/// over the blocks.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    /// Componentwise bounds, entries may be infinite.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Zero { dim: usize },
    NonnegCone { dim: usize },
    /// Ball in the weighted norm of the ambient space.
    Ball { center: Vec<f64>, radius: f64 },
    WholeSpace { dim: usize },
    Product(Vec<ConvexSet>),
}

/// Result of a cone membership query.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeMembershipReport {
    pub member: bool,
    pub violation: f64,
    pub witness: Option<Vec<f64>>,
}

impl ConvexSet {
    pub fn new_box(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if l.is_nan() || u.is_nan() || l > u || *l == f64::INFINITY || *u == f64::NEG_INFINITY {
                return Err(Error::InvalidInput(format!("box bounds [{l}, {u}] at {i} are empty")));
            }
        }
        Ok(ConvexSet::Box { lower, upper })
    }

    /// Box with the same scalar bounds on every coordinate.
    pub fn uniform_box(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new_box(vec![lower; dim], vec![upper; dim])
    }

    pub fn new_ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("invalid ball radius {radius} or center")));
        }
        Ok(ConvexSet::Ball { center, radius })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Box { lower, .. } => lower.len(),
            ConvexSet::Zero { dim } | ConvexSet::NonnegCone { dim } | ConvexSet::WholeSpace { dim } => *dim,
            ConvexSet::Ball { center, .. } => center.len(),
            ConvexSet::Product(blocks) => blocks.iter().map(ConvexSet::dim).sum(),
        }
    }

    pub fn is_cone(&self) -> bool {
        match self {
            ConvexSet::Zero { .. } | ConvexSet::NonnegCone { .. } | ConvexSet::WholeSpace { .. } => true,
            ConvexSet::Product(blocks) => blocks.iter().all(ConvexSet::is_cone),
            _ => false,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            ConvexSet::Box { .. } => "box",
            ConvexSet::Zero { .. } => "zero",
            ConvexSet::NonnegCone { .. } => "nonneg-cone",
            ConvexSet::Ball { .. } => "ball",
            ConvexSet::WholeSpace { .. } => "whole-space",
            ConvexSet::Product(_) => "product",
        }
    }

    fn check(&self, v: &[f64], space: &WeightedSpace) -> Result<()> {
        check_dim(self.dim(), space.dim())?;
        check_dim(self.dim(), v.len())
    }

    /// Weighted-norm projection `P_S(x)`.
    pub fn project(&self, x: &[f64], space: &WeightedSpace) -> Result<Vec<f64>> {
        self.check(x, space)?;
        let mut out = x.to_vec();
        self.project_in_place(&mut out, space.weights());
        Ok(out)
    }

    fn project_in_place(&self, x: &mut [f64], w: &[f64]) {
        match self {
            ConvexSet::Box { lower, upper } => {
                for ((xi, l), u) in x.iter_mut().zip(lower).zip(upper) {
                    *xi = xi.clamp(*l, *u);
                }
            }
            ConvexSet::Zero { .. } => x.iter_mut().for_each(|xi| *xi = 0.0),
            ConvexSet::NonnegCone { .. } => x.iter_mut().for_each(|xi| *xi = xi.max(0.0)),
            ConvexSet::WholeSpace { .. } => {}
            ConvexSet::Ball { center, radius } => {
                let r = weighted_norm_diff(x, center, w);
                if r > *radius {
                    let s = radius / r;
                    for (xi, c) in x.iter_mut().zip(center) {
                        *xi = c + s * (*xi - c);
                    }
                }
            }
            ConvexSet::Product(blocks) => {
                let mut off = 0;
                for b in blocks {
                    let n = b.dim();
                    b.project_in_place(&mut x[off..off + n], &w[off..off + n]);
                    off += n;
                }
            }
        }
    }

    /// Weighted distance from `x` to the set.
    pub fn dist(&self, x: &[f64], space: &WeightedSpace) -> Result<f64> {
        let p = self.project(x, space)?;
        Ok(weighted_norm_diff(x, &p, space.weights()))
    }

    pub fn contains(&self, x: &[f64], space: &WeightedSpace, tol: f64) -> Result<bool> {
        Ok(self.dist(x, space)? <= tol)
    }

    /// `sup_{y ∈ S} ⟨lam, y − z⟩`, returned as `+∞` when `lam` pairs
    /// positively with an unbounded direction of `S`.
    pub fn support_gap(&self, lam: &[f64], z: &[f64], space: &WeightedSpace) -> Result<f64> {
        self.check(lam, space)?;
        check_dim(self.dim(), z.len())?;
        Ok(self.support_gap_raw(lam, z, space.weights()))
    }

    fn support_gap_raw(&self, lam: &[f64], z: &[f64], w: &[f64]) -> f64 {
        let pair = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).zip(w).map(|((x, y), wi)| wi * x * y).sum() };
        match self {
            ConvexSet::Box { lower, upper } => {
                let mut total = 0.0;
                for i in 0..lam.len() {
                    let l = lam[i];
                    let term = if l > 0.0 {
                        if upper[i] == f64::INFINITY {
                            return f64::INFINITY;
                        }
                        l * (upper[i] - z[i])
                    } else if l < 0.0 {
                        if lower[i] == f64::NEG_INFINITY {
                            return f64::INFINITY;
                        }
                        l * (lower[i] - z[i])
                    } else {
                        0.0
                    };
                    total += w[i] * term;
                }
                total
            }
            ConvexSet::Zero { .. } => -pair(lam, z),
            ConvexSet::NonnegCone { .. } => {
                if lam.iter().any(|&l| l > 0.0) {
                    f64::INFINITY
                } else {
                    -pair(lam, z)
                }
            }
            ConvexSet::WholeSpace { .. } => {
                if lam.iter().any(|&l| l != 0.0) {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            ConvexSet::Ball { center, radius } => {
                let norm = pair(lam, lam).sqrt();
                pair(lam, center) + radius * norm - pair(lam, z)
            }
            ConvexSet::Product(blocks) => {
                let mut total = 0.0;
                let mut off = 0;
                for b in blocks {
                    let n = b.dim();
                    let r = off..off + n;
                    total += b.support_gap_raw(&lam[r.clone()], &z[r.clone()], &w[r]);
                    off += n;
                }
                total
            }
        }
    }

    /// Weighted distance of `−g` to the normal cone `N_S(x)`, i.e.
    /// `min_{μ ∈ N_S(x)} ‖g + μ‖`. Returns `+∞` when `x ∉ S` beyond the
    /// default feasibility tolerance (the normal cone is empty there).
    pub fn normal_cone_dist(&self, x: &[f64], g: &[f64], space: &WeightedSpace) -> Result<f64> {
        self.normal_cone_dist_tol(x, g, space, DEFAULT_FEAS_TOL)
    }

    pub fn normal_cone_dist_tol(&self, x: &[f64], g: &[f64], space: &WeightedSpace, feas_tol: f64) -> Result<f64> {
        self.check(x, space)?;
        check_dim(self.dim(), g.len())?;
        let p = self.project(x, space)?;
        if weighted_norm_diff(x, &p, space.weights()) > feas_tol {
            return Ok(f64::INFINITY);
        }
        Ok(self.normal_residual_sq(&p, g, space.weights()).sqrt())
    }

    /// Nearest element of `N_S(p)` to `−g` (the minimizing `μ`), for `p ∈ S`.
    pub fn normal_cone_element(&self, p: &[f64], g: &[f64], space: &WeightedSpace) -> Result<Vec<f64>> {
        self.check(p, space)?;
        check_dim(self.dim(), g.len())?;
        let mut mu = vec![0.0; g.len()];
        self.normal_element_raw(p, g, space.weights(), &mut mu);
        Ok(mu)
    }

    fn normal_residual_sq(&self, p: &[f64], g: &[f64], w: &[f64]) -> f64 {
        let mut mu = vec![0.0; g.len()];
        self.normal_element_raw(p, g, w, &mut mu);
        g.iter().zip(&mu).zip(w).map(|((gi, mi), wi)| wi * (gi + mi) * (gi + mi)).sum()
    }

    fn normal_element_raw(&self, p: &[f64], g: &[f64], w: &[f64], mu: &mut [f64]) {
        match self {
            ConvexSet::Box { lower, upper } => {
                for i in 0..p.len() {
                    let at_lower = p[i] <= lower[i];
                    let at_upper = p[i] >= upper[i];
                    // N = (-inf, 0] at the lower bound, [0, inf) at the upper bound.
                    mu[i] = match (at_lower, at_upper) {
                        (true, true) => -g[i],
                        (true, false) => (-g[i]).min(0.0),
                        (false, true) => (-g[i]).max(0.0),
                        (false, false) => 0.0,
                    };
                }
            }
            ConvexSet::Zero { .. } => {
                for (m, gi) in mu.iter_mut().zip(g) {
                    *m = -gi;
                }
            }
            ConvexSet::NonnegCone { .. } => {
                for i in 0..p.len() {
                    mu[i] = if p[i] <= 0.0 { (-g[i]).min(0.0) } else { 0.0 };
                }
            }
            ConvexSet::WholeSpace { .. } => mu.iter_mut().for_each(|m| *m = 0.0),
            ConvexSet::Ball { center, radius } => {
                if *radius == 0.0 {
                    for (m, gi) in mu.iter_mut().zip(g) {
                        *m = -gi;
                    }
                    return;
                }
                let r = weighted_norm_diff(p, center, w);
                if r < radius * (1.0 - BOUNDARY_REL_TOL) {
                    mu.iter_mut().for_each(|m| *m = 0.0);
                    return;
                }
                // N = {t (p - c) : t >= 0}
                let n: Vec<f64> = p.iter().zip(center).map(|(a, c)| (a - c) / r).collect();
                let s: f64 = -g.iter().zip(&n).zip(w).map(|((gi, ni), wi)| wi * gi * ni).sum::<f64>();
                let t = s.max(0.0);
                for (m, ni) in mu.iter_mut().zip(&n) {
                    *m = t * ni;
                }
            }
            ConvexSet::Product(blocks) => {
                let mut off = 0;
                for b in blocks {
                    let k = b.dim();
                    let r = off..off + k;
                    b.normal_element_raw(&p[r.clone()], &g[r.clone()], &w[r.clone()], &mut mu[r]);
                    off += k;
                }
            }
        }
    }

    /// Projection onto the polar cone `S°`; only defined for cone variants.
    pub fn polar_project(&self, x: &[f64], space: &WeightedSpace) -> Result<Vec<f64>> {
        self.check(x, space)?;
        let mut out = x.to_vec();
        self.polar_in_place(&mut out)?;
        Ok(out)
    }

    fn polar_in_place(&self, x: &mut [f64]) -> Result<()> {
        match self {
            ConvexSet::Zero { .. } => {}
            ConvexSet::NonnegCone { .. } => x.iter_mut().for_each(|xi| *xi = xi.min(0.0)),
            ConvexSet::WholeSpace { .. } => x.iter_mut().for_each(|xi| *xi = 0.0),
            ConvexSet::Product(blocks) => {
                let mut off = 0;
                for b in blocks {
                    let n = b.dim();
                    b.polar_in_place(&mut x[off..off + n])?;
                    off += n;
                }
            }
            other => return Err(Error::UnsupportedVariant(format!("polar of {}", other.variant_name()))),
        }
        Ok(())
    }

    /// Whether `d` lies in the recession cone `S_∞ = {d : d + S ⊂ S}`.
    pub fn recession_contains(&self, d: &[f64], tol: f64) -> bool {
        if d.len() != self.dim() {
            return false;
        }
        match self {
            ConvexSet::Box { lower, upper } => d.iter().zip(lower.iter().zip(upper)).all(|(&di, (&l, &u))| {
                match (l.is_finite(), u.is_finite()) {
                    (false, false) => true,
                    (true, false) => di >= -tol,
                    (false, true) => di <= tol,
                    (true, true) => di.abs() <= tol,
                }
            }),
            ConvexSet::Zero { .. } | ConvexSet::Ball { .. } => d.iter().all(|di| di.abs() <= tol),
            ConvexSet::NonnegCone { .. } => d.iter().all(|&di| di >= -tol),
            ConvexSet::WholeSpace { .. } => true,
            ConvexSet::Product(blocks) => {
                let mut off = 0;
                blocks.iter().all(|b| {
                    let n = b.dim();
                    let ok = b.recession_contains(&d[off..off + n], tol);
                    off += n;
                    ok
                })
            }
        }
    }

    /// Nearest point to `d` in the tangent cone `T_S(x)` (which for convex
    /// sets is the closure of the radial cone). `None` if `x ∉ S` beyond the
    /// feasibility tolerance.
    pub fn tangent_project(&self, x: &[f64], d: &[f64], space: &WeightedSpace, feas_tol: f64) -> Result<Option<Vec<f64>>> {
        self.check(x, space)?;
        check_dim(self.dim(), d.len())?;
        let p = self.project(x, space)?;
        if weighted_norm_diff(x, &p, space.weights()) > feas_tol {
            return Ok(None);
        }
        let mut out = d.to_vec();
        self.tangent_in_place(&p, &mut out, space.weights());
        Ok(Some(out))
    }

    fn tangent_in_place(&self, p: &[f64], d: &mut [f64], w: &[f64]) {
        match self {
            ConvexSet::Box { lower, upper } => {
                for i in 0..p.len() {
                    let at_lower = p[i] <= lower[i];
                    let at_upper = p[i] >= upper[i];
                    d[i] = match (at_lower, at_upper) {
                        (true, true) => 0.0,
                        (true, false) => d[i].max(0.0),
                        (false, true) => d[i].min(0.0),
                        (false, false) => d[i],
                    };
                }
            }
            ConvexSet::Zero { .. } => d.iter_mut().for_each(|di| *di = 0.0),
            ConvexSet::NonnegCone { .. } => {
                for i in 0..p.len() {
                    if p[i] <= 0.0 {
                        d[i] = d[i].max(0.0);
                    }
                }
            }
            ConvexSet::WholeSpace { .. } => {}
            ConvexSet::Ball { center, radius } => {
                if *radius == 0.0 {
                    d.iter_mut().for_each(|di| *di = 0.0);
                    return;
                }
                let r = weighted_norm_diff(p, center, w);
                if r < radius * (1.0 - BOUNDARY_REL_TOL) {
                    return;
                }
                // Halfspace {d : <d, p - c> <= 0}.
                let n: Vec<f64> = p.iter().zip(center).map(|(a, c)| (a - c) / r).collect();
                let s: f64 = d.iter().zip(&n).zip(w).map(|((di, ni), wi)| wi * di * ni).sum();
                if s > 0.0 {
                    for (di, ni) in d.iter_mut().zip(&n) {
                        *di -= s * ni;
                    }
                }
            }
            ConvexSet::Product(blocks) => {
                let mut off = 0;
                for b in blocks {
                    let k = b.dim();
                    let r = off..off + k;
                    b.tangent_in_place(&p[r.clone()], &mut d[r.clone()], &w[r]);
                    off += k;
                }
            }
        }
    }

    /// Weighted distance of `d` to `T_S(x)`; `+∞` if `x ∉ S`.
    pub fn tangent_dist(&self, x: &[f64], d: &[f64], space: &WeightedSpace, feas_tol: f64) -> Result<f64> {
        Ok(match self.tangent_project(x, d, space, feas_tol)? {
            Some(t) => weighted_norm_diff(d, &t, space.weights()),
            None => f64::INFINITY,
        })
    }
}

pub(crate) fn weighted_norm_diff(a: &[f64], b: &[f64], w: &[f64]) -> f64 {
    a.iter().zip(b).zip(w).map(|((x, y), wi)| wi * (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Membership of `d` in the linearization cone
/// `L(x̄) = {d ∈ T_C(x̄) : G′(x̄)d ∈ T_K(G(x̄))}`.
///
/// The violation is the sum of the two tangent-cone distances; the witness
/// is the projection of `d` onto `T_C(x̄)`.
pub fn lin_cone_membership(problem: &Problem, xbar: &[f64], d: &[f64], tol: f64) -> Result<ConeMembershipReport> {
    check_dim(problem.dim_x(), xbar.len())?;
    check_dim(problem.dim_x(), d.len())?;
    let feas_c = problem.set_c.dist(xbar, &problem.space_x)?;
    let g = problem.constraint_value(xbar);
    let feas_k = problem.set_k.dist(&g, &problem.space_y)?;
    let feas_tol = tol.max(DEFAULT_FEAS_TOL);
    if feas_c > feas_tol || feas_k > feas_tol {
        return Err(Error::Infeasible { distance: feas_c.max(feas_k), tolerance: feas_tol });
    }
    let tc = problem
        .set_c
        .tangent_project(xbar, d, &problem.space_x, feas_tol)?
        .expect("feasibility checked above");
    let viol_c = weighted_norm_diff(d, &tc, problem.space_x.weights());
    let jd = problem.jacobian_action(xbar, d);
    let viol_k = problem.set_k.tangent_dist(&g, &jd, &problem.space_y, feas_tol)?;
    let violation = viol_c + viol_k;
    Ok(ConeMembershipReport { member: violation <= tol, violation, witness: Some(tc) })
}
