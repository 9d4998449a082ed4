use serde::{Deserialize, Serialize};

use crate::convex::{ConvexSet, WeightedSpace, DEFAULT_FEAS_TOL};
use crate::error::{check_dim, Error, Result};
use crate::problem::Problem;
use crate::report::num;

pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-7;
pub const DEFAULT_MEMBERSHIP_MAX_ITER: usize = 20_000;
pub const DYKSTRA_MAX_ITER: usize = 10_000;

/// Outcome of a membership query `v ∈ M(x, r)`, where
/// `M(x, r) = {G′(x)*λ + μ : μ ∈ N_C(x), sup_{y ∈ K} ⟨λ, y − G(x)⟩ ≤ r}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipWitness {
    pub member: bool,
    #[serde(with = "num::vec")]
    pub lam: Vec<f64>,
    #[serde(with = "num::vec")]
    pub mu: Vec<f64>,
    /// `‖G′(x)*λ + μ − v‖_X`
    #[serde(with = "num")]
    pub residual: f64,
    /// False when the iteration cap was hit before either a witness or a
    /// stationary point of the residual was found.
    pub converged: bool,
    pub iterations: usize,
}

impl MembershipWitness {
    pub fn inconclusive(&self) -> bool {
        !self.member && !self.converged
    }
}

/// How `λ` is parametrized.
enum DualParam {
    /// `λ = p ∈ K°`, halfspace `−⟨λ, G⟩ ≤ r`.
    Cone { set: ConvexSet, coeff: Vec<f64> },
    /// `λ = a − b` with `a, b ≤ 0`, halfspace
    /// `−⟨b, u − G⟩ − ⟨a, G − l⟩ ≤ r`; infinite bounds pin the variable to 0.
    Split { free_a: Vec<bool>, free_b: Vec<bool>, coeff: Vec<f64> },
}

struct Setup<'a> {
    problem: &'a Problem,
    x: Vec<f64>,
    v: Vec<f64>,
    r: f64,
    param: DualParam,
    /// Weights of the `p` block.
    wp: Vec<f64>,
}

impl Setup<'_> {
    fn m(&self) -> usize {
        self.problem.dim_y()
    }

    fn lam(&self, p: &[f64]) -> Vec<f64> {
        match self.param {
            DualParam::Cone { .. } => p.to_vec(),
            DualParam::Split { .. } => {
                let m = self.m();
                (0..m).map(|i| p[i] - p[m + i]).collect()
            }
        }
    }

    /// Residual `s = G′(x)*λ + μ − v`.
    fn residual(&self, p: &[f64], mu: &[f64]) -> Vec<f64> {
        let lam = self.lam(p);
        let mut s = self.problem.adjoint_action(&self.x, &lam);
        for ((si, mi), vi) in s.iter_mut().zip(mu).zip(&self.v) {
            *si += mi - vi;
        }
        s
    }

    fn phi(&self, s: &[f64]) -> f64 {
        0.5 * self.problem.space_x.inner(s, s)
    }

    /// Riesz gradient of `φ` in the `p` and `μ` geometries.
    fn grad_p(&self, s: &[f64]) -> Vec<f64> {
        let js = self.problem.jacobian_action(&self.x, s);
        match self.param {
            DualParam::Cone { .. } => js,
            DualParam::Split { .. } => js.iter().copied().chain(js.iter().map(|v| -v)).collect(),
        }
    }

    fn project_mu(&self, mu: &[f64]) -> Vec<f64> {
        let neg: Vec<f64> = mu.iter().map(|v| -v).collect();
        self.problem.set_c.normal_cone_element(&self.x, &neg, &self.problem.space_x).expect("dimensions checked")
    }

    fn project_sign(&self, p: &mut [f64]) {
        match &self.param {
            DualParam::Cone { set, .. } => {
                let space = WeightedSpace::new(self.wp.clone()).expect("positive weights");
                let q = set.polar_project(p, &space).expect("cone checked");
                p.copy_from_slice(&q);
            }
            DualParam::Split { free_a, free_b, .. } => {
                let m = self.m();
                for i in 0..m {
                    p[i] = if free_a[i] { p[i].min(0.0) } else { 0.0 };
                    p[m + i] = if free_b[i] { p[m + i].min(0.0) } else { 0.0 };
                }
            }
        }
    }

    fn coeff(&self) -> &[f64] {
        match &self.param {
            DualParam::Cone { coeff, .. } | DualParam::Split { coeff, .. } => coeff,
        }
    }

    fn project_halfspace(&self, p: &mut [f64]) {
        let c = self.coeff();
        let cc: f64 = c.iter().zip(&self.wp).map(|(ci, w)| w * ci * ci).sum();
        if cc == 0.0 {
            return;
        }
        let viol: f64 = c.iter().zip(p.iter()).zip(&self.wp).map(|((ci, pi), w)| w * ci * pi).sum::<f64>() - self.r;
        if viol > 0.0 {
            let t = viol / cc;
            for (pi, ci) in p.iter_mut().zip(c) {
                *pi -= t * ci;
            }
        }
    }

    /// Dykstra's alternating projection onto halfspace ∩ sign set; the sign
    /// projection is applied last so the output is sign-feasible exactly.
    fn project_dual(&self, start: &[f64]) -> Vec<f64> {
        let n = start.len();
        let mut x = start.to_vec();
        let mut inc_h = vec![0.0; n];
        let mut inc_s = vec![0.0; n];
        let scale = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for _ in 0..DYKSTRA_MAX_ITER {
            let mut y: Vec<f64> = x.iter().zip(&inc_h).map(|(a, b)| a + b).collect();
            self.project_halfspace(&mut y);
            for i in 0..n {
                inc_h[i] = x[i] + inc_h[i] - y[i];
            }
            let mut z: Vec<f64> = y.iter().zip(&inc_s).map(|(a, b)| a + b).collect();
            self.project_sign(&mut z);
            for i in 0..n {
                inc_s[i] = y[i] + inc_s[i] - z[i];
            }
            let change = x.iter().zip(&z).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            x = z;
            if change <= 1e-15 * scale && self.halfspace_violation(&x) <= 1e-14 * scale {
                break;
            }
        }
        x
    }

    fn halfspace_violation(&self, p: &[f64]) -> f64 {
        let c = self.coeff();
        (c.iter().zip(p).zip(&self.wp).map(|((ci, pi), w)| w * ci * pi).sum::<f64>() - self.r).max(0.0)
    }
}

fn weighted_sq(w: &[f64], a: &[f64]) -> f64 {
    a.iter().zip(w).map(|(v, wi)| wi * v * v).sum()
}

/// Decides `v ∈ M(x, r)` by minimizing `φ(λ, μ) = ½‖G′(x)*λ + μ − v‖²`
/// over the admissible multipliers and `μ ∈ N_C(x)` with an accelerated
/// projected gradient method (adaptive restart, backtracked step). The
/// multiplier projection uses Dykstra's algorithm. `v` is a member when
/// `√(2φ) ≤ tol`.
pub fn m_membership(problem: &Problem, x: &[f64], r: f64, v: &[f64], tol: f64, max_iter: usize) -> Result<MembershipWitness> {
    check_dim(problem.dim_x(), x.len())?;
    check_dim(problem.dim_x(), v.len())?;
    if !(r >= 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("need r >= 0 and tol > 0, got r = {r}, tol = {tol}")));
    }
    let dist = problem.set_c.dist(x, &problem.space_x)?;
    if dist > DEFAULT_FEAS_TOL {
        return Err(Error::Infeasible { distance: dist, tolerance: DEFAULT_FEAS_TOL });
    }
    let xp = problem.set_c.project(x, &problem.space_x)?;
    let g = problem.constraint_value(&xp);
    let wy = problem.space_y.weights().to_vec();
    let (param, wp) = match &problem.set_k {
        ConvexSet::Box { lower, upper } => {
            let coeff_a = g.iter().zip(lower).map(|(gi, l)| if l.is_finite() { -(gi - l) } else { 0.0 });
            let coeff_b = g.iter().zip(upper).map(|(gi, u)| if u.is_finite() { -(u - gi) } else { 0.0 });
            let coeff = coeff_a.chain(coeff_b).collect();
            let param = DualParam::Split {
                free_a: lower.iter().map(|l| l.is_finite()).collect(),
                free_b: upper.iter().map(|u| u.is_finite()).collect(),
                coeff,
            };
            (param, wy.iter().chain(&wy).copied().collect::<Vec<_>>())
        }
        k if k.is_cone() => (DualParam::Cone { set: k.clone(), coeff: g.iter().map(|v| -v).collect() }, wy),
        other => return Err(Error::UnsupportedVariant(format!("membership for K = {}", other.variant_name()))),
    };
    let setup = Setup { problem, x: xp, v: v.to_vec(), r, param, wp };
    Ok(solve(&setup, tol, max_iter))
}

fn solve(s: &Setup, tol: f64, max_iter: usize) -> MembershipWitness {
    let np = s.wp.len();
    let wx = s.problem.space_x.weights().to_vec();
    let v_norm = s.problem.space_x.norm(&s.v);
    let stat_tol = 1e-10 * v_norm.max(1.0);

    let mut p = vec![0.0; np];
    let mut mu = vec![0.0; wx.len()];
    let mut res = s.residual(&p, &mu);
    let mut phi = s.phi(&res);
    let finish = |p: &[f64], mu: &[f64], phi: f64, member: bool, converged: bool, it: usize| MembershipWitness {
        member,
        lam: s.lam(p),
        mu: mu.to_vec(),
        residual: (2.0 * phi).sqrt(),
        converged,
        iterations: it,
    };
    if (2.0 * phi).sqrt() <= tol {
        return finish(&p, &mu, phi, true, true, 0);
    }

    let mut lip = 1.0;
    let (mut yp, mut ymu) = (p.clone(), mu.clone());
    let mut t = 1.0f64;
    for it in 1..=max_iter {
        let ys = s.residual(&yp, &ymu);
        let yphi = s.phi(&ys);
        let gp = s.grad_p(&ys);
        let gmu = ys;
        // Backtracking on the quadratic upper model.
        let (np_, nmu, nres, nphi) = loop {
            let trial_p: Vec<f64> = yp.iter().zip(&gp).map(|(a, g)| a - g / lip).collect();
            let cand_p = s.project_dual(&trial_p);
            let trial_mu: Vec<f64> = ymu.iter().zip(&gmu).map(|(a, g)| a - g / lip).collect();
            let cand_mu = s.project_mu(&trial_mu);
            let dp: Vec<f64> = cand_p.iter().zip(&yp).map(|(a, b)| a - b).collect();
            let dmu: Vec<f64> = cand_mu.iter().zip(&ymu).map(|(a, b)| a - b).collect();
            let lin = dp.iter().zip(&gp).zip(&s.wp).map(|((d, g), w)| w * d * g).sum::<f64>()
                + dmu.iter().zip(&gmu).zip(&wx).map(|((d, g), w)| w * d * g).sum::<f64>();
            let quad = weighted_sq(&s.wp, &dp) + weighted_sq(&wx, &dmu);
            let cres = s.residual(&cand_p, &cand_mu);
            let cphi = s.phi(&cres);
            if cphi <= yphi + lin + 0.5 * lip * quad + 1e-15 * yphi.max(1e-300) || lip > 1e30 {
                break (cand_p, cand_mu, cres, cphi);
            }
            lip *= 2.0;
        };

        // Gradient-based adaptive restart: drop momentum when the step
        // opposes the previous direction. Function values are not compared
        // because near the minimum their changes fall below rounding.
        let uphill = yp.iter().zip(&np_).zip(&p).zip(&s.wp).map(|(((y, n), o), w)| w * (y - n) * (n - o)).sum::<f64>()
            + ymu.iter().zip(&nmu).zip(&mu).zip(&wx).map(|(((y, n), o), w)| w * (y - n) * (n - o)).sum::<f64>();
        let t_next = if uphill > 0.0 { 1.0 } else { 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt()) };
        let beta = if uphill > 0.0 { 0.0 } else { (t - 1.0) / t_next };
        yp = np_.iter().zip(&p).map(|(a, b)| a + beta * (a - b)).collect();
        ymu = nmu.iter().zip(&mu).map(|(a, b)| a + beta * (a - b)).collect();
        t = t_next;
        p = np_;
        mu = nmu;
        res = nres;
        phi = nphi;

        if (2.0 * phi).sqrt() <= tol {
            return finish(&p, &mu, phi, true, true, it);
        }
        if it % 25 == 0 && gradient_mapping(s, &p, &mu, &res, lip, &wx) <= stat_tol {
            return finish(&p, &mu, phi, false, true, it);
        }
    }
    let converged = gradient_mapping(s, &p, &mu, &res, lip, &wx) <= stat_tol;
    finish(&p, &mu, phi, false, converged, max_iter)
}

/// `L ‖z − P(z − ∇φ(z)/L)‖`, zero exactly at minimizers.
fn gradient_mapping(s: &Setup, p: &[f64], mu: &[f64], res: &[f64], lip: f64, wx: &[f64]) -> f64 {
    let gp = s.grad_p(res);
    let trial_p: Vec<f64> = p.iter().zip(&gp).map(|(a, g)| a - g / lip).collect();
    let cand_p = s.project_dual(&trial_p);
    let trial_mu: Vec<f64> = mu.iter().zip(res).map(|(a, g)| a - g / lip).collect();
    let cand_mu = s.project_mu(&trial_mu);
    let dp: Vec<f64> = cand_p.iter().zip(p).map(|(a, b)| a - b).collect();
    let dmu: Vec<f64> = cand_mu.iter().zip(mu).map(|(a, b)| a - b).collect();
    lip * (weighted_sq(&s.wp, &dp) + weighted_sq(wx, &dmu)).sqrt()
}
