use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::convex::WeightedSpace;
use crate::report::num;

/// Barzilai–Borwein steps are clamped to this interval.
pub const BB_STEP_MIN: f64 = 1e-10;
pub const BB_STEP_MAX: f64 = 1e10;
/// Number of past objective values in the nonmonotone reference.
pub const NONMONOTONE_MEMORY: usize = 10;
/// Number of past BB2 steps whose minimum is taken when the short step is chosen.
pub const BB_SHORT_MEMORY: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerResult {
    #[serde(with = "num::vec")]
    pub x: Vec<f64>,
    #[serde(with = "num")]
    pub residual: f64,
    pub iterations: usize,
    /// Whether `residual ≤ tol` was reached.
    pub converged: bool,
}

/// Line-search parameters for [`projected_gradient`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct PgParams {
    pub tol: f64,
    pub max_iter: usize,
    pub sigma: f64,
    pub beta: f64,
    pub step0: f64,
}

/// Spectral projected gradient with nonmonotone Armijo backtracking along
/// the projection arc. Trial steps alternate between the long BB1 step and
/// the smallest of the recent BB2 steps, switching on their ratio against a
/// threshold that adapts after every step. A step `α` is
/// accepted when `F(x⁺) ≤ F_ref − σ/α ‖x⁺ − x‖²`, where `F_ref` is the largest of the last
/// [`NONMONOTONE_MEMORY`] accepted values. Stops once
/// `residual(x, ∇F(x)) ≤ tol` and otherwise returns the iterate with the
/// smallest residual seen.
pub(crate) fn projected_gradient(
    space: &WeightedSpace,
    x0: &[f64],
    params: PgParams,
    eval: impl Fn(&[f64]) -> (f64, Vec<f64>),
    project: impl Fn(&[f64]) -> Vec<f64>,
    residual: impl Fn(&[f64], &[f64]) -> f64,
) -> InnerResult {
    let mut x = project(x0);
    let (mut f, mut g) = eval(&x);
    let mut res = residual(&x, &g);
    let mut best = (x.clone(), res);
    if res <= params.tol {
        return InnerResult { x, residual: res, iterations: 0, converged: true };
    }
    let mut alpha = params.step0;
    let mut history = VecDeque::with_capacity(NONMONOTONE_MEMORY);
    history.push_back(f);
    let mut short_steps = VecDeque::with_capacity(BB_SHORT_MEMORY);
    let mut switch = 0.5;
    for it in 1..=params.max_iter {
        let f_ref = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut a = alpha;
        let (xp, fp, gp) = loop {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - a * gi).collect();
            let xp = project(&trial);
            let d2 = space.dist(&xp, &x).powi(2);
            let (fp, gp) = eval(&xp);
            if fp.is_finite() && decrease(space, f, fp, &g, &gp, &x, &xp) <= (f_ref - f) - params.sigma / a * d2 {
                break (xp, fp, gp);
            }
            a *= params.beta;
            if a < 1e-300 {
                // No decrease is representable any more.
                return InnerResult { x: best.0, residual: best.1, iterations: it, converged: false };
            }
        };
        let s: Vec<f64> = xp.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gp.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = space.inner(&s, &y);
        let ss = space.inner(&s, &s);
        alpha = if sy > 0.0 {
            // Coordinates held by the projection did not move; their
            // gradient change would only shorten the BB2 step.
            let y_moved: Vec<f64> = y.iter().zip(&s).map(|(yi, si)| if *si == 0.0 { 0.0 } else { *yi }).collect();
            let (long, short) = (ss / sy, sy / space.inner(&y_moved, &y_moved));
            if short_steps.len() == BB_SHORT_MEMORY {
                short_steps.pop_front();
            }
            short_steps.push_back(short);
            let step = if short / long < switch {
                switch *= 0.9;
                short_steps.iter().copied().fold(f64::INFINITY, f64::min)
            } else {
                switch *= 1.1;
                long
            };
            step.clamp(BB_STEP_MIN, BB_STEP_MAX)
        } else {
            (2.0 * a).clamp(BB_STEP_MIN, BB_STEP_MAX)
        };
        let stalled = ss == 0.0;
        x = xp;
        f = fp;
        g = gp;
        if history.len() == NONMONOTONE_MEMORY {
            history.pop_front();
        }
        history.push_back(f);
        res = residual(&x, &g);
        if res < best.1 {
            best = (x.clone(), res);
        }
        if res <= params.tol {
            return InnerResult { x, residual: res, iterations: it, converged: true };
        }
        if stalled {
            return InnerResult { x: best.0, residual: best.1, iterations: it, converged: false };
        }
    }
    InnerResult { x: best.0, residual: best.1, iterations: params.max_iter, converged: false }
}

/// `F(x⁺) − F(x)`. When the difference of the values is within rounding of
/// the values themselves, the trapezoid estimate `½⟨g + g⁺, x⁺ − x⟩` is used
/// instead; it is exact for quadratics and its error scales with the step
/// rather than with `|F|`.
fn decrease(space: &WeightedSpace, f: f64, fp: f64, g: &[f64], gp: &[f64], x: &[f64], xp: &[f64]) -> f64 {
    let diff = fp - f;
    if diff.abs() > 64.0 * f64::EPSILON * f.abs().max(fp.abs()) {
        return diff;
    }
    let d: Vec<f64> = xp.iter().zip(x).map(|(a, b)| a - b).collect();
    let gs: Vec<f64> = g.iter().zip(gp).map(|(a, b)| a + b).collect();
    0.5 * space.inner(&gs, &d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(tol: f64) -> PgParams {
        PgParams { tol, max_iter: 10_000, sigma: 1e-4, beta: 0.5, step0: 1.0 }
    }

    #[test]
    fn ill_conditioned_quadratic() {
        let space = WeightedSpace::euclidean(3);
        let d = [1.0, 100.0, 1e4];
        let c = [1.0, -2.0, 3.0];
        let r = projected_gradient(
            &space,
            &[0.0; 3],
            params(1e-10),
            |x| {
                let v = x.iter().zip(&d).zip(&c).map(|((x, d), c)| 0.5 * d * x * x - c * x).sum();
                (v, x.iter().zip(&d).zip(&c).map(|((x, d), c)| d * x - c).collect())
            },
            |x| x.to_vec(),
            |_, g| space.norm(g),
        );
        assert!(r.converged);
        for i in 0..3 {
            assert!((r.x[i] - c[i] / d[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn bound_constrained() {
        let space = WeightedSpace::euclidean(2);
        let clip = |x: &[f64]| x.iter().map(|v| v.clamp(0.0, 1.0)).collect::<Vec<_>>();
        let r = projected_gradient(
            &space,
            &[0.5, 0.5],
            params(1e-12),
            |x| ((x[0] - 2.0).powi(2) + (x[1] + 1.0).powi(2), vec![2.0 * (x[0] - 2.0), 2.0 * (x[1] + 1.0)]),
            clip,
            |x, g| {
                let p = clip(&[x[0] - g[0], x[1] - g[1]]);
                space.dist(x, &p)
            },
        );
        assert!(r.converged);
        assert_eq!(r.x, vec![1.0, 0.0]);
    }

    #[test]
    fn already_stationary() {
        let space = WeightedSpace::euclidean(1);
        let r = projected_gradient(&space, &[2.0], params(1e-8), |x| ((x[0] - 2.0).powi(2), vec![2.0 * (x[0] - 2.0)]), |x| x.to_vec(), |_, g| g[0].abs());
        assert_eq!((r.iterations, r.converged), (0, true));
    }
}
