//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero when any
//! criterion fails. Reference values are computed here independently of the
//! library wherever the library's own answer is under test.

use std::path::{Path, PathBuf};
use std::time::Instant;

use akkt_core::akkt::{
    akkt_residuals, build_example35, growth_exponent, lagrangian_grad_x, m_membership, quadratic_penalty_generator, Example35Discrete,
    Verdict, DEFAULT_MEMBERSHIP_MAX_ITER, DEFAULT_MEMBERSHIP_TOL,
};
use akkt_core::alm::{alm_solve, aug_lagrangian_grad, AlmTrace, InnerTolSchedule};
use akkt_core::convex::ConvexSet;
use akkt_core::linalg::{reduced_min_modulus, subspace_gap, Matrix, Subspace, DEFAULT_RANK_TOL};
use akkt_core::problem::{load_problem, Problem, ProblemSpec};
use akkt_core::suites::{affine, ball_problem, random_membership_instance, random_split_tuple, MembershipInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(bool, String), String>;

fn specs_dir() -> PathBuf {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../specs")).to_path_buf()
}

fn spec_problem(name: &str) -> Result<(ProblemSpec, Problem), String> {
    let spec = ProblemSpec::from_path(specs_dir().join(name)).map_err(|e| format!("{name}: {e}"))?;
    let problem = load_problem(&spec).map_err(|e| format!("{name}: {e}"))?;
    Ok((spec, problem))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn norm(w: &[f64], v: &[f64]) -> f64 {
    v.iter().zip(w).map(|(a, wi)| wi * a * a).sum::<f64>().sqrt()
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    0.5 * (a + b)
}

/// Dense sampling on `[a, b]` followed by golden refinement around the best
/// sample.
fn scan_min(f: impl Fn(f64) -> f64, a: f64, b: f64, samples: usize, tol: f64) -> f64 {
    let h = (b - a) / samples as f64;
    let best = (0..=samples).map(|i| a + h * i as f64).min_by(|x, y| f(*x).total_cmp(&f(*y))).expect("samples");
    golden(&f, (best - h).max(a), (best + h).min(b), tol)
}

// Criterion 1

fn ex35_exact() -> Check {
    let mut worst = 0.0f64;
    let mut exact = true;
    for k in [1u32, 2, 4, 8, 16, 64] {
        let e = build_example35(k).map_err(err)?;
        let kf = f64::from(k);
        worst = worst.max((e.exact_norm - 0.75 * kf).abs()).max((e.exact_gap + 0.25 / kf).abs());
        exact &= e.stationarity_alpha == 0.0 && e.stationarity_u == 0.0 && e.normality_gap == 0.0;
    }
    Ok((worst <= 1e-12 && exact, format!("max error {worst:.2e}, stationarity exact: {exact}")))
}

// Criterion 2

fn ex35_discrete() -> Check {
    let d = Example35Discrete::new(4096, 4.0, -1.0).map_err(err)?;
    let (mut ks, mut norms) = (Vec::new(), Vec::new());
    let (mut eps, mut r, mut gap_rel) = (0.0f64, 0.0f64, 0.0f64);
    for k in 1..=8u32 {
        let p = d.pair(k).map_err(err)?;
        let rec = akkt_residuals(&d.problem, &p.x, &p.lambda).map_err(err)?;
        let expected = -0.25 / f64::from(k);
        eps = eps.max(rec.eps_residual);
        r = r.max(rec.r_residual);
        gap_rel = gap_rel.max(((rec.support_gap - expected) / expected).abs());
        ks.push(f64::from(k));
        norms.push(rec.multiplier_norm);
    }
    let slope = growth_exponent(&ks, &norms).unwrap_or(f64::NAN);
    let pass = eps <= 1e-8 && r == 0.0 && gap_rel <= 0.02 && (0.9..=1.1).contains(&slope);
    Ok((pass, format!("eps {eps:.2e}, r {r:.1e}, gap rel err {gap_rel:.2e}, growth exponent {slope:.4}")))
}

// Criterion 3

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// KKT system of `min ½‖x‖²` subject to `x₁ + x₂ = 1`, by Cramer's rule.
fn qp2d_hand_solution() -> [f64; 2] {
    let m = [[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [1.0, 1.0, 0.0]];
    let rhs = [0.0, 0.0, 1.0];
    let d = det3(m);
    let mut sol = [0.0; 2];
    for (j, s) in sol.iter_mut().enumerate() {
        let mut mj = m;
        for i in 0..3 {
            mj[i][j] = rhs[i];
        }
        *s = det3(mj) / d;
    }
    sol
}

fn qp2d_alm() -> Check {
    let (spec, problem) = spec_problem("qp2d.json")?;
    let (cert, trace) = alm_solve(&problem, &spec.solver, spec.x0.as_deref(), spec.lambda0.as_deref()).map_err(err)?;
    let hand = qp2d_hand_solution();
    let rec = &cert.final_record;
    let dist = euclid(&[rec.x[0] - hand[0], rec.x[1] - hand[1]]);
    let outer = trace.outer_iterations();
    let pass = cert.verdict == Verdict::Kkt && dist <= 1e-6 && rec.eps_residual <= 1e-6 && rec.r_residual <= 1e-6 && outer <= 50;
    Ok((
        pass,
        format!(
            "verdict {}, |x - x*| {dist:.2e}, eps {:.2e}, r {:.2e}, {outer} outer iterations",
            cert.verdict, rec.eps_residual, rec.r_residual
        ),
    ))
}

// Criterion 4

fn infeasible() -> Check {
    let (spec, problem) = spec_problem("infeasible1d.json")?;
    let (cert, _) = alm_solve(&problem, &spec.solver, spec.x0.as_deref(), spec.lambda0.as_deref()).map_err(err)?;
    // Minimizer of the squared infeasibility ½x² over [1, 2].
    let oracle = scan_min(|x| 0.5 * x * x, 1.0, 2.0, 1000, 1e-12);
    let x = cert.final_record.x[0];
    let pass = cert.verdict == Verdict::InfeasibleStationary && (x - oracle).abs() <= 1e-6 && (oracle - 1.0).abs() <= 1e-6;
    Ok((pass, format!("verdict {}, x {x}, oracle {oracle}", cert.verdict)))
}

// Criterion 5

struct TraceAudit {
    r_bound: f64,
    eps: f64,
    identity: f64,
}

/// Recomputes the per-row bounds from the stored iterates.
fn audit(problem: &Problem, trace: &AlmTrace) -> Result<TraceAudit, String> {
    let wy = problem.space_y.weights();
    let mut a = TraceAudit { r_bound: f64::NEG_INFINITY, eps: f64::NEG_INFINITY, identity: 0.0 };
    for (prev, row) in trace.rows.iter().zip(&trace.rows[1..]) {
        let bound = norm(wy, &row.lambda) * row.v + norm(wy, &row.w).powi(2) / row.rho;
        a.r_bound = a.r_bound.max(row.r_residual - bound);
        let lhs = aug_lagrangian_grad(problem, &row.x, &prev.w, prev.rho).map_err(err)?;
        let rhs = lagrangian_grad_x(problem, &row.x, &row.lambda).map_err(err)?;
        let scale = rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        a.identity = a.identity.max(max_abs_diff(&lhs, &rhs) / scale);
    }
    for row in trace.rows.iter().filter(|r| r.accepted) {
        let rec = akkt_residuals(problem, &row.x, &row.lambda).map_err(err)?;
        a.eps = a.eps.max(rec.eps_residual - row.inner_tol);
    }
    Ok(a)
}

fn median_seconds(problem: &Problem, spec: &ProblemSpec, repeats: usize) -> Result<f64, String> {
    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        alm_solve(problem, &spec.solver, spec.x0.as_deref(), spec.lambda0.as_deref()).map_err(err)?;
        times.push(start.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    Ok(times[repeats / 2])
}

fn trace_bounds() -> Check {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(specs_dir())
        .map_err(err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut pass = !paths.is_empty();
    let mut notes = Vec::new();
    for path in &paths {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let (spec, problem) = spec_problem(&name)?;
        let (_, trace) = alm_solve(&problem, &spec.solver, spec.x0.as_deref(), spec.lambda0.as_deref()).map_err(err)?;
        let a = audit(&problem, &trace)?;
        let ok = a.r_bound <= 1e-10 && a.eps <= 0.0 && a.identity <= 1e-12;
        if !ok {
            notes.push(format!("{name}: r excess {:.2e}, eps excess {:.2e}, identity {:.2e}", a.r_bound, a.eps, a.identity));
        }
        pass &= ok;
    }
    for (name, budget) in [("qp-box-100.json", 1.0), ("control-4096.json", 30.0)] {
        let (spec, problem) = spec_problem(name)?;
        let t = median_seconds(&problem, &spec, 3)?;
        pass &= t < budget;
        notes.push(format!("{name} median {t:.3}s (budget {budget}s)"));
    }
    Ok((pass, format!("{} specs audited; {}", paths.len(), notes.join("; "))))
}

// Criterion 6

fn random_low_rank(rng: &mut ChaCha8Rng) -> Matrix {
    let rows = rng.gen_range(1..=20);
    let cols = rng.gen_range(1..=20);
    let rank = rng.gen_range(1..=rows.min(cols));
    let b: Vec<f64> = (0..rows * rank).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let c: Vec<f64> = (0..rank * cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut data = vec![0.0; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            data[i * cols + j] = (0..rank).map(|l| b[i * rank + l] * c[l * cols + j]).sum();
        }
    }
    Matrix::new(rows, cols, data).expect("finite")
}

/// Distance from `x` to `ker T`, which is the norm of the projection onto the
/// row space; the row space basis comes from Gram-Schmidt with
/// reorthogonalization.
fn kernel_distance(t: &Matrix, x: &[f64]) -> f64 {
    let scale = (0..t.rows()).map(|i| euclid(t.row(i))).fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..t.rows() {
        let mut v = t.row(i).to_vec();
        for _ in 0..2 {
            for q in &basis {
                let c: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
        }
        let n = euclid(&v);
        if n > 1e-9 * scale {
            basis.push(v.iter().map(|a| a / n).collect());
        }
    }
    basis.iter().map(|q| q.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().powi(2)).sum::<f64>().sqrt()
}

fn linalg_checks() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut transpose_err = 0.0f64;
    let mut ineq_excess = f64::NEG_INFINITY;
    for _ in 0..100 {
        let t = random_low_rank(&mut rng);
        let g = reduced_min_modulus(&t, DEFAULT_RANK_TOL).map_err(err)?;
        let gt = reduced_min_modulus(&t.transpose(), DEFAULT_RANK_TOL).map_err(err)?;
        transpose_err = transpose_err.max((g - gt).abs());

        let x: Vec<f64> = (0..t.cols()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let tx = t.matvec(&x);
        ineq_excess = ineq_excess.max(kernel_distance(&t, &x) - euclid(&tx) / g - 1e-10);
    }

    // Brute force over the unit circle: the kernel is trivial for e > 0.
    let mut diag_err = 0.0f64;
    for e in [1e-1, 1e-3, 1e-6] {
        let f = |th: f64| (th.cos().powi(2) + (e * th.sin()).powi(2)).sqrt();
        let th = scan_min(f, 0.0, std::f64::consts::PI, 10_000, 1e-15);
        let oracle = f(th);
        let g = reduced_min_modulus(&Matrix::from_diag(&[1.0, e]), DEFAULT_RANK_TOL).map_err(err)?;
        diag_err = diag_err.max((g - oracle).abs()).max((g - e).abs());
    }

    let mut gaps_exact = true;
    for _ in 0..20 {
        let t = random_low_rank(&mut rng);
        let u = Subspace::range_of(&t, DEFAULT_RANK_TOL).map_err(err)?;
        gaps_exact &= subspace_gap(&u, &u).map_err(err)? == 0.0;
        gaps_exact &= subspace_gap(&Subspace::trivial(u.ambient_dim()), &u).map_err(err)? == 0.0;
    }
    let pass = transpose_err <= 1e-10 && ineq_excess <= 0.0 && diag_err <= 1e-12 && gaps_exact;
    Ok((
        pass,
        format!(
            "transpose err {transpose_err:.2e}, inequality excess {ineq_excess:.2e}, diag err {diag_err:.2e}, gaps exact: {gaps_exact}"
        ),
    ))
}

// Criterion 7

/// Oracle residual `min √(2φ)` over admissible `(λ, μ)`. The sign
/// constraints and the support-gap budget enter as an exact L1 penalty, so
/// the searched function is convex. Random sampling picks the starts of a
/// pattern search with expanding steps and random directions.
struct MembershipOracle<'a> {
    inst: &'a MembershipInstance,
    adj: Vec<Vec<f64>>,
    g: Vec<f64>,
    /// `(coordinate, sign)` of each coordinate of `x` on a bound of `C`.
    active: Vec<(usize, f64)>,
}

impl<'a> MembershipOracle<'a> {
    fn new(inst: &'a MembershipInstance) -> Self {
        let p = &inst.problem;
        let (wx, wy) = (p.space_x.weights(), p.space_y.weights());
        let a = p.jacobian_dense(&inst.x);
        let adj = (0..p.dim_y()).map(|j| (0..p.dim_x()).map(|i| a[(j, i)] * wy[j] / wx[i]).collect()).collect();
        let active = match &p.set_c {
            ConvexSet::Box { lower, upper } => (0..p.dim_x())
                .filter_map(|i| {
                    if inst.x[i] == lower[i] {
                        Some((i, -1.0))
                    } else if inst.x[i] == upper[i] {
                        Some((i, 1.0))
                    } else {
                        None
                    }
                })
                .collect(),
            _ => Vec::new(),
        };
        Self { inst, adj, g: p.constraint_value(&inst.x), active }
    }

    fn dim(&self) -> usize {
        self.adj.len() + self.active.len()
    }

    fn gap(&self, lam: &[f64]) -> f64 {
        let wy = self.inst.problem.space_y.weights();
        match &self.inst.problem.set_k {
            ConvexSet::Box { lower, upper } => {
                (0..lam.len()).map(|i| wy[i] * ((lam[i] * lower[i]).max(lam[i] * upper[i]) - lam[i] * self.g[i])).sum()
            }
            _ => -(0..lam.len()).map(|i| wy[i] * lam[i] * self.g[i]).sum::<f64>(),
        }
    }

    /// `√(2φ)` plus `PENALTY` times the constraint violation.
    fn residual(&self, z: &[f64]) -> f64 {
        let m = self.adj.len();
        let lam = &z[..m];
        let mut violation = (self.gap(lam) - self.inst.r).max(0.0);
        if matches!(self.inst.problem.set_k, ConvexSet::NonnegCone { .. }) {
            violation += lam.iter().map(|l| l.max(0.0)).sum::<f64>();
        }
        let mut d: Vec<f64> = self.inst.v.iter().map(|v| -v).collect();
        for (j, l) in lam.iter().enumerate() {
            d.iter_mut().zip(&self.adj[j]).for_each(|(a, b)| *a += l * b);
        }
        for (&(i, sign), &zi) in self.active.iter().zip(&z[m..]) {
            d[i] += zi;
            violation += (-sign * zi).max(0.0);
        }
        norm(self.inst.problem.space_x.weights(), &d) + PENALTY * violation
    }

    fn pattern_search(&self, mut z: Vec<f64>, rng: &mut ChaCha8Rng) -> f64 {
        let n = z.len();
        let mut f = self.residual(&z);
        let mut step = 1.0;
        let mut evals = 0;
        while step > 1e-14 && evals < 40_000 {
            let mut dirs: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
            for _ in 0..n {
                let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let l = euclid(&d);
                dirs.push(d.iter().map(|a| a / l).collect());
            }
            let mut improved = false;
            for d in &dirs {
                for s in [step, -step] {
                    let trial: Vec<f64> = z.iter().zip(d).map(|(a, b)| a + s * b).collect();
                    let ft = self.residual(&trial);
                    evals += 1;
                    if ft < f {
                        z = trial;
                        f = ft;
                        improved = true;
                    }
                }
            }
            step *= if improved { 2.0 } else { 0.5 };
        }
        f
    }

    fn min_residual(&self, rng: &mut ChaCha8Rng) -> f64 {
        let n = self.dim();
        if n == 0 {
            return self.residual(&[]);
        }
        let mut samples: Vec<(f64, Vec<f64>)> = (0..4000)
            .map(|_| {
                let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-6.0..6.0)).collect();
                (self.residual(&z), z)
            })
            .collect();
        samples.push((self.residual(&vec![0.0; n]), vec![0.0; n]));
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        samples.into_iter().take(8).map(|(_, z)| self.pattern_search(z, rng)).fold(f64::INFINITY, f64::min)
    }
}

/// Weight of the constraint violation in the oracle objective.
const PENALTY: f64 = 1e3;

/// Oracle residuals at or below this count as members.
const ORACLE_MEMBER: f64 = 1e-3;
/// Oracle residuals at or above this count as non-members; in between the
/// instance is ambiguous and counts as a failure.
const ORACLE_NON_MEMBER: f64 = 1e-2;

fn membership() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut oracle_rng = ChaCha8Rng::seed_from_u64(77);
    let (mut agree, mut members, mut ambiguous, mut monotone_breaks) = (0, 0, 0, 0);
    let mut worst_member = 0.0f64;
    let mut closest_non_member = f64::INFINITY;
    let mut mismatches = Vec::new();
    for i in 0..50 {
        let inst = random_membership_instance(&mut rng).map_err(err)?;
        let p = &inst.problem;
        let w = m_membership(p, &inst.x, inst.r, &inst.v, DEFAULT_MEMBERSHIP_TOL, DEFAULT_MEMBERSHIP_MAX_ITER).map_err(err)?;
        let oracle = MembershipOracle::new(&inst).min_residual(&mut oracle_rng);
        let verdict = if oracle <= ORACLE_MEMBER {
            Some(true)
        } else if oracle >= ORACLE_NON_MEMBER {
            Some(false)
        } else {
            None
        };
        match verdict {
            None => ambiguous += 1,
            Some(v) if v == w.member && !w.inconclusive() => agree += 1,
            Some(_) => mismatches.push(format!("#{i}: library {} ({:.2e}), oracle {oracle:.2e}", w.member, w.residual)),
        }
        if w.member {
            members += 1;
            worst_member = worst_member.max(oracle);
        } else {
            closest_non_member = closest_non_member.min(oracle);
        }
        for r2 in [inst.r + 0.5, 2.0 * inst.r + 1.0, 10.0 * inst.r + 5.0] {
            let w2 = m_membership(p, &inst.x, r2, &inst.v, DEFAULT_MEMBERSHIP_TOL, DEFAULT_MEMBERSHIP_MAX_ITER).map_err(err)?;
            if w.member && !w2.member {
                monotone_breaks += 1;
            }
        }
    }
    let affine_checks = affine(20, 20).map_err(err)?;
    let affine_failed = affine_checks.iter().filter(|c| !c.pass).count();
    let pass = agree == 50 && monotone_breaks == 0 && affine_failed == 0;
    Ok((
        pass,
        format!(
            "{agree}/50 agree ({members} members, {ambiguous} ambiguous), oracle max on members {worst_member:.1e}, \
             min on non-members {closest_non_member:.2e}, monotonicity breaks {monotone_breaks}, \
             affine suite over 20 systems {}/{} checks pass{}{}",
            affine_checks.len() - affine_failed,
            affine_checks.len(),
            if mismatches.is_empty() { "" } else { "; " },
            mismatches.join("; ")
        ),
    ))
}

// Criterion 8

fn split_bound() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_slack = f64::INFINITY;
    let mut worst_norm_excess = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let t = random_split_tuple(&mut rng, 50);
        let w = t.space.weights();
        let lam: Vec<f64> = t.la.iter().zip(&t.lb).map(|(a, b)| a - b).collect();
        let sa: Vec<f64> = lam.iter().map(|l| if *l < 0.0 { *l } else { 0.0 }).collect();
        let sb: Vec<f64> = lam.iter().map(|l| if *l > 0.0 { -*l } else { 0.0 }).collect();
        let lhs: f64 = (0..50).map(|i| -w[i] * (sb[i] * (t.ub[i] - t.u[i]) + sa[i] * (t.u[i] - t.ua[i]))).sum();
        let report = akkt_core::akkt::split_bound_check(&t.space, &t.u, &t.ua, &t.ub, &t.la, &t.lb, t.r).map_err(err)?;
        if (report.split_lhs - lhs).abs() > 1e-10 * (1.0 + lhs.abs()) {
            return Ok((false, format!("library lhs {} differs from recomputed {lhs}", report.split_lhs)));
        }
        worst_slack = worst_slack.min(t.r - lhs);
        let ln = norm(w, &lam);
        worst_norm_excess = worst_norm_excess.max(norm(w, &sa) - ln).max(norm(w, &sb) - ln);
    }
    let pass = worst_slack >= -1e-10 && worst_norm_excess <= 0.0;
    Ok((pass, format!("min slack {worst_slack:.3e}, max norm excess {worst_norm_excess:.2e}")))
}

// Criterion 9

fn sample_k(set: &ConvexSet, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match set {
        ConvexSet::Zero { dim } => vec![0.0; *dim],
        ConvexSet::NonnegCone { dim } => (0..*dim).map(|_| -rng.gen_range(0.0f64..1.0).ln()).collect(),
        ConvexSet::WholeSpace { dim } => (0..*dim).map(|_| rng.gen_range(-10.0..10.0)).collect(),
        ConvexSet::Box { lower, upper } => lower
            .iter()
            .zip(upper)
            .map(|(l, u)| {
                let (a, b) = (if l.is_finite() { *l } else { u.min(0.0) - 10.0 }, if u.is_finite() { *u } else { l.max(0.0) + 10.0 });
                rng.gen_range(a..=b)
            })
            .collect(),
        _ => unreachable!("qp2d has K = {{0}}"),
    }
}

fn penalty_generator() -> Check {
    let (_, problem) = spec_problem("qp2d.json")?;
    let xbar = qp2d_hand_solution();
    let schedule = InnerTolSchedule::default();
    let seq = quadratic_penalty_generator(&problem, &xbar, 100, &schedule).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let wy = problem.space_y.weights();
    let mut eps_misses = 0;
    let mut worst_pairing = f64::NEG_INFINITY;
    for rec in &seq.records {
        if rec.record.eps_residual > schedule.at(rec.k) {
            eps_misses += 1;
        }
        let g = problem.constraint_value(&rec.record.x);
        for _ in 0..100 {
            let y = sample_k(&problem.set_k, &mut rng);
            let pairing: f64 = (0..y.len()).map(|i| wy[i] * rec.record.lambda[i] * (y[i] - g[i])).sum();
            worst_pairing = worst_pairing.max(pairing);
        }
    }
    let last = seq.records.last().ok_or("empty sequence")?;
    let dist = euclid(&[last.record.x[0] - xbar[0], last.record.x[1] - xbar[1]]);
    // Stationarity of x + 2(x − x̄) + 2k(x₁ + x₂ − 1)(1, 1) gives
    // x = x̄ − t(1, 1) with t = 1/(2(3 + 4k)).
    let closed_form = 2f64.sqrt() / (2.0 * (3.0 + 4.0 * last.k as f64));
    let pass = seq.records.len() == 100 && !seq.truncated && eps_misses == 0 && dist <= 1e-4 && worst_pairing <= 1e-10;
    Ok((
        pass,
        format!(
            "k = {}: |x - x*| {dist:.3e} (minimizer of the k-th penalty is at {closed_form:.3e}), \
             eps above schedule at {eps_misses}/{} iterations (last eps {:.2e}), max pairing {worst_pairing:.1e}",
            last.k,
            seq.records.len(),
            last.record.eps_residual
        ),
    ))
}

// Criterion 10

fn ball() -> Check {
    let n = 20;
    let problem = ball_problem(n).map_err(err)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut worst = 0.0f64;
    let mut all_members = true;
    for k in 1..=18 {
        let mut x = vec![0.0; n];
        x[0] = s;
        x[k] = s;
        // On the unit sphere the normal cone is the ray through x, so v = x
        // has oracle residual 0.
        let w = m_membership(&problem, &x, 0.0, &x, 1e-8, DEFAULT_MEMBERSHIP_MAX_ITER).map_err(err)?;
        all_members &= w.member;
        worst = worst.max(w.residual);
    }
    let mut xbar = vec![0.0; n];
    xbar[0] = s;
    // x̄ is interior: the normal cone is {0} and the oracle residual is |x̄|.
    let oracle = euclid(&xbar);
    let w = m_membership(&problem, &xbar, 0.0, &xbar, 1e-6, DEFAULT_MEMBERSHIP_MAX_ITER).map_err(err)?;
    let conclusive = !w.member && !w.inconclusive() && (w.residual - oracle).abs() <= 1e-6;
    let pass = all_members && worst <= 1e-8 && conclusive;
    Ok((pass, format!("max member residual {worst:.2e}, limit residual {:.6} (oracle {oracle:.6}), conclusive: {conclusive}", w.residual)))
}

fn main() {
    let criteria: [(u32, &str, f64, fn() -> Check); 10] = [
        (1, "analytic unbounded-multiplier iterates", 1.0, ex35_exact),
        (2, "discretized unbounded-multiplier iterates", 10.0, ex35_discrete),
        (3, "ALM on the two-variable QP", 1.0, qp2d_alm),
        (4, "infeasible stationary detection", 1.0, infeasible),
        (5, "ALM trace bounds and timing baselines", f64::INFINITY, trace_bounds),
        (6, "reduced minimum modulus and subspace gap", 5.0, linalg_checks),
        (7, "M-set membership against a sampling oracle", 30.0, membership),
        (8, "box multiplier splitting", 2.0, split_bound),
        (9, "quadratic penalty AKKT generator", 5.0, penalty_generator),
        (10, "unit ball normal cones", 5.0, ball),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok((pass, detail)) => (pass && secs < budget, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let budget = if budget.is_finite() { format!(" / {budget}s") } else { String::new() };
        println!("{} criterion {id:>2} {name} [{secs:.3}s{budget}]: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed += 1;
        }
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
