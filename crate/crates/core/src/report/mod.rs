//! Trace files, run metadata and run reports.
//!
//! A trace is one JSON object per line (see [`TraceRow`]); the metadata
//! document next to it echoes the configuration and a hash of the problem.

pub mod num;

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::akkt::{bounded_multiplier_diagnostic, Certificate, MultiplierDiagnostic, BOUNDED_TREND_EXPONENT};
use crate::alm::{alm_solve, AlmConfig, AlmTrace, TraceRow};
use crate::convex::ConvexSet;
use crate::error::{Error, Result};
use crate::problem::spec::FamilySpec;
use crate::problem::{load_problem, Problem, ProblemSpec};

/// SHA-256 of the normalized spec, or of the problem's name and dimensions
/// for problems built in code.
pub fn problem_hash(problem: &Problem) -> String {
    let text = match problem.spec() {
        Some(spec) => spec.to_json_pretty(),
        None => format!("{}:{}:{}", problem.name, problem.dim_x(), problem.dim_y()),
    };
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_trace(path: impl AsRef<Path>, trace: &AlmTrace) -> Result<()> {
    let file = fs::File::create(path.as_ref())?;
    let mut out = BufWriter::new(file);
    for row in &trace.rows {
        serde_json::to_writer(&mut out, row)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<AlmTrace> {
    let file = fs::File::open(path.as_ref())?;
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: TraceRow = serde_json::from_str(&line).map_err(|e| Error::Schema(format!("trace line {}: {e}", i + 1)))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Schema("trace has no rows".into()));
    }
    Ok(AlmTrace { rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub problem: String,
    pub family: Option<String>,
    pub problem_hash: String,
    pub seed: Option<u64>,
    pub config: AlmConfig,
    pub rows: usize,
    pub version: String,
}

impl TraceMeta {
    pub fn new(problem: &Problem, config: &AlmConfig, trace: &AlmTrace) -> Self {
        Self {
            problem: problem.name.clone(),
            family: problem.spec().map(|s| s.family.family_name().to_string()),
            problem_hash: problem_hash(problem),
            seed: problem.spec().map(|s| s.seed),
            config: config.clone(),
            rows: trace.rows.len(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// A named comparison of a computed value against a known one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperCheck {
    pub name: String,
    /// Where the expected value comes from.
    pub anchor: String,
    #[serde(with = "num")]
    pub expected: f64,
    #[serde(with = "num")]
    pub actual: f64,
    #[serde(with = "num")]
    pub tolerance: f64,
    pub pass: bool,
}

impl PaperCheck {
    /// Passes when `|actual − expected| ≤ tolerance`; equal infinities pass.
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        let pass = actual == expected || (actual - expected).abs() <= tolerance;
        Self { name: name.into(), anchor: anchor.into(), expected, actual, tolerance, pass }
    }

    /// A check on a boolean property, encoded as 1 (true) against 1.
    pub fn holds(name: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Self::new(name, anchor, 1.0, if ok { 1.0 } else { 0.0 }, 0.0)
    }

    /// Passes when `actual ≤ bound`.
    pub fn at_most(name: impl Into<String>, anchor: impl Into<String>, bound: f64, actual: f64) -> Self {
        Self { name: name.into(), anchor: anchor.into(), expected: bound, actual, tolerance: 0.0, pass: actual <= bound }
    }
}

/// Everything `solve` writes about one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: String,
    pub problem_hash: String,
    pub certificate: Certificate,
    pub trace_path: String,
    pub meta_path: String,
    #[serde(with = "num")]
    pub seconds: f64,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub config: AlmConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier_diagnostic: Option<MultiplierDiagnostic>,
    pub paper_checks: Vec<PaperCheck>,
}

impl RunReport {
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path.as_ref(), text + "\n")?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref())?;
        serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))
    }
}

/// Slack of the r-residual bound checked along every trace.
pub const TRACE_BOUND_SLACK: f64 = 1e-10;
/// Largest accepted gap between the two sides of the gradient identity.
pub const GRAD_IDENTITY_TOL: f64 = 1e-12;

const TRACE_R_BOUND: &str = "safeguarded ALM: r is at most the multiplier norm times V plus the squared safeguard over the penalty";
const TRACE_EPS: &str = "safeguarded ALM: accepted subproblems meet their inner tolerance";
const TRACE_IDENTITY: &str = "safeguarded ALM: the gradient of the augmented Lagrangian equals the Lagrangian gradient at the updated multiplier";
const EX35_GROWTH: &str = "unbounded multiplier fixture: the multiplier sequence is unbounded";

/// Largest violation of `r ≤ ‖λ‖V + ‖w‖²/ρ` over the rows after the first.
/// `w` and `ρ` are those stored in the same row.
pub fn trace_r_bound_violation(problem: &Problem, trace: &AlmTrace) -> f64 {
    trace.rows[1..]
        .iter()
        .map(|row| row.r_residual - (row.multiplier_norm * row.v + problem.space_y.inner(&row.w, &row.w) / row.rho))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Largest `eps_residual − tol` over the accepted rows.
pub fn trace_eps_violation(trace: &AlmTrace) -> f64 {
    trace.rows.iter().filter(|r| r.accepted).map(|r| r.eps_residual - r.inner_tol).fold(f64::NEG_INFINITY, f64::max)
}

pub fn trace_identity_error(trace: &AlmTrace) -> f64 {
    trace.rows.iter().map(|r| r.grad_identity_error).fold(0.0, f64::max)
}

/// Checks every run report carries: the trace properties of the method and,
/// for the unbounded-multiplier family, multiplier growth.
pub fn run_checks(problem: &Problem, trace: &AlmTrace, diagnostic: Option<&MultiplierDiagnostic>) -> Vec<PaperCheck> {
    let mut checks = Vec::new();
    if trace.rows.len() > 1 {
        checks.push(PaperCheck::at_most("trace r bound", TRACE_R_BOUND, TRACE_BOUND_SLACK, trace_r_bound_violation(problem, trace)));
    }
    if trace.rows.iter().any(|r| r.accepted) {
        checks.push(PaperCheck::at_most("trace inner tolerance", TRACE_EPS, 0.0, trace_eps_violation(trace)));
    }
    checks.push(PaperCheck::at_most("trace gradient identity", TRACE_IDENTITY, GRAD_IDENTITY_TOL, trace_identity_error(trace)));
    if matches!(problem.spec().map(|s| &s.family), Some(FamilySpec::Example35(_))) {
        let growth = diagnostic.and_then(|d| d.growth_exponent);
        checks.push(PaperCheck::holds("ex35 multiplier growth", EX35_GROWTH, growth.is_some_and(|g| g > BOUNDED_TREND_EXPONENT)));
    }
    checks
}

/// Growth diagnostics over the rows after the starting point; `None` with
/// fewer than three such rows. Bound ratios use the final iterate as `x̄`.
pub fn trace_diagnostic(problem: &Problem, trace: &AlmTrace) -> Result<Option<MultiplierDiagnostic>> {
    let rows = &trace.rows[1..];
    if rows.len() < 3 {
        return Ok(None);
    }
    let ks: Vec<f64> = rows.iter().map(|r| r.k as f64).collect();
    let records: Vec<_> = rows.iter().map(TraceRow::record).collect();
    let xbar = trace.last().x.clone();
    let equality_only = matches!(problem.set_k, ConvexSet::Zero { .. }) && matches!(problem.set_c, ConvexSet::WholeSpace { .. });
    let reference = equality_only.then_some((problem, xbar.as_slice()));
    bounded_multiplier_diagnostic(&ks, &records, reference).map(Some)
}

/// Loads `spec`, runs the solver from the spec's starting point and writes
/// `trace.jsonl`, `meta.json` and `report.json` into `out_dir`.
pub fn solve_spec(spec: &ProblemSpec, out_dir: impl AsRef<Path>) -> Result<(RunReport, AlmTrace)> {
    let out_dir = out_dir.as_ref();
    let problem = load_problem(spec)?;
    let start = std::time::Instant::now();
    let (certificate, trace) = alm_solve(&problem, &spec.solver, spec.x0.as_deref(), spec.lambda0.as_deref())?;
    let seconds = start.elapsed().as_secs_f64();
    fs::create_dir_all(out_dir)?;
    let trace_path = out_dir.join("trace.jsonl");
    let meta_path = out_dir.join("meta.json");
    write_trace(&trace_path, &trace)?;
    let meta = TraceMeta::new(&problem, &spec.solver, &trace);
    fs::write(&meta_path, serde_json::to_string_pretty(&meta)? + "\n")?;
    let diagnostic = trace_diagnostic(&problem, &trace)?;
    let report = RunReport {
        problem: problem.name.clone(),
        problem_hash: meta.problem_hash,
        certificate,
        trace_path: trace_path.display().to_string(),
        meta_path: meta_path.display().to_string(),
        seconds,
        outer_iterations: trace.outer_iterations(),
        inner_iterations: trace.inner_iterations(),
        config: spec.solver.clone(),
        paper_checks: run_checks(&problem, &trace, diagnostic.as_ref()),
        multiplier_diagnostic: diagnostic,
    };
    report.write(out_dir.join("report.json"))?;
    Ok((report, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::akkt::akkt_residuals;

    #[test]
    fn trace_round_trip_reproduces_residuals() {
        let spec = ProblemSpec::from_json_str(
            r#"{"name": "qp2d", "family": "qp-box", "params": {"hessian": [[1, 0], [0, 1]],
                "lower": -10, "upper": 10, "eq_matrix": [[1, 1]], "eq_rhs": [1]}}"#,
        )
        .unwrap();
        let p = load_problem(&spec).unwrap();
        let (_, trace) = alm_solve(&p, &AlmConfig::default(), Some(&[2.0, -3.0]), None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.jsonl");
        write_trace(&path, &trace).unwrap();
        let back = read_trace(&path).unwrap();
        assert_eq!(back.rows.len(), trace.rows.len());
        for (a, b) in back.rows.iter().zip(&trace.rows) {
            assert_eq!(a.x, b.x);
            assert_eq!(a.lambda, b.lambda);
            let rec = akkt_residuals(&p, &a.x, &a.lambda).unwrap();
            assert!((rec.eps_residual - a.eps_residual).abs() <= 1e-12);
            assert!((rec.r_residual - a.r_residual).abs() <= 1e-12);
            assert!((rec.feasibility - a.feasibility).abs() <= 1e-12);
        }
        // Row 0 carries NaN inner data, written as a string.
        let first = std::fs::read_to_string(&path).unwrap();
        assert!(first.lines().next().unwrap().contains("\"inner_residual\":\"nan\""));
    }

    #[test]
    fn hash_is_stable() {
        let text = r#"{"name": "a", "family": "affine-equality", "params": {"a": [[1, 1]], "b": [1]}}"#;
        let p1 = load_problem(&ProblemSpec::from_json_str(text).unwrap()).unwrap();
        let p2 = load_problem(&ProblemSpec::from_json_str(text).unwrap()).unwrap();
        assert_eq!(problem_hash(&p1), problem_hash(&p2));
        assert_eq!(problem_hash(&p1).len(), 64);
    }

    #[test]
    fn checks() {
        assert!(PaperCheck::new("a", "b", 1.0, 1.0 + 1e-13, 1e-12).pass);
        assert!(!PaperCheck::new("a", "b", 1.0, 1.1, 1e-12).pass);
        assert!(PaperCheck::new("a", "b", f64::INFINITY, f64::INFINITY, 0.0).pass);
        assert!(PaperCheck::holds("a", "b", true).pass);
        assert!(!PaperCheck::at_most("a", "b", 1.0, 2.0).pass);
    }

    #[test]
    fn solve_writes_all_files() {
        let spec = ProblemSpec::from_json_str(
            r#"{"name": "qp2d", "family": "qp-box", "params": {"hessian": [[1, 0], [0, 1]],
                "lower": -10, "upper": 10, "eq_matrix": [[1, 1]], "eq_rhs": [1]}}"#,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (report, trace) = solve_spec(&spec, dir.path()).unwrap();
        assert_eq!(report.certificate.verdict, crate::akkt::Verdict::Kkt);
        assert!(report.paper_checks.iter().all(|c| c.pass), "{:?}", report.paper_checks);
        assert_eq!(RunReport::read(dir.path().join("report.json")).unwrap(), report);
        // Row 0 holds NaN, so compare serialized forms.
        let back = read_trace(&report.trace_path).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), serde_json::to_string(&trace).unwrap());
        let meta: TraceMeta = serde_json::from_str(&std::fs::read_to_string(&report.meta_path).unwrap()).unwrap();
        assert_eq!(meta.rows, trace.rows.len());
    }
}
