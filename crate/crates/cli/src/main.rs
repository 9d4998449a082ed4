//! `akkt`: solve, certify, reproduce and benchmark.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use akkt_core::akkt::{akkt_residuals, Verdict};
use akkt_core::problem::{load_problem, ProblemSpec};
use akkt_core::report::num::format_f64;
use akkt_core::report::{solve_spec, PaperCheck};
use akkt_core::suites::Suite;
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;

const EXIT_KKT: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_TRENDING: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "akkt", version, about = "Safeguarded augmented Lagrangian solver with AKKT certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem spec and write trace.jsonl, meta.json and report.json.
    Solve {
        spec: PathBuf,
        /// Output directory [default: runs/<spec name>]
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol_kkt: Option<f64>,
        #[arg(long)]
        tol_feas: Option<f64>,
        #[arg(long)]
        max_outer: Option<usize>,
        /// Replaces the spec's seed (affects randomly generated families).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate the residuals of a point document {"x": [...], "lambda": [...]}.
    Certify {
        spec: PathBuf,
        point: PathBuf,
        /// Tolerance on eps, r and feasibility.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run reproduction suites and print expected against actual values.
    Examples {
        #[arg(default_value = "all", value_parser = ["all", "ex35", "box-split", "affine", "gamma", "ball"])]
        which: String,
        #[arg(long, default_value_t = akkt_core::problem::spec::DEFAULT_SEED)]
        seed: u64,
    },
    /// Solve every spec matching a glob pattern and print a timing table.
    Bench {
        pattern: String,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        /// Worker threads [default: one per spec, capped by the CPU count]
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { spec, out, tol_kkt, tol_feas, max_outer, seed } => {
            solve(&spec, out, Overrides { tol_kkt, tol_feas, max_outer, seed })
        }
        Command::Certify { spec, point, tol } => certify(&spec, &point, tol),
        Command::Examples { which, seed } => examples(&which, seed),
        Command::Bench { pattern, repeats, jobs } => bench(&pattern, repeats, jobs),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

type CliResult = Result<u8, Box<dyn std::error::Error>>;

struct Overrides {
    tol_kkt: Option<f64>,
    tol_feas: Option<f64>,
    max_outer: Option<usize>,
    seed: Option<u64>,
}

fn load_spec(path: &Path, o: &Overrides) -> Result<ProblemSpec, Box<dyn std::error::Error>> {
    let mut spec = ProblemSpec::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(v) = o.tol_kkt {
        spec.solver.outer_tol_kkt = v;
    }
    if let Some(v) = o.tol_feas {
        spec.solver.outer_tol_feas = v;
    }
    if let Some(v) = o.max_outer {
        spec.solver.max_outer = v;
    }
    if let Some(v) = o.seed {
        spec.seed = v;
    }
    spec.solver.validate()?;
    Ok(spec)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Kkt => EXIT_KKT,
        Verdict::InfeasibleStationary => EXIT_INFEASIBLE,
        Verdict::AkktTrending => EXIT_TRENDING,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn solve(path: &Path, out: Option<PathBuf>, overrides: Overrides) -> CliResult {
    let spec = load_spec(path, &overrides)?;
    let out = out.unwrap_or_else(|| Path::new("runs").join(&spec.name));
    let (report, _) = solve_spec(&spec, &out)?;
    let rec = &report.certificate.final_record;
    println!("problem            {}", report.problem);
    println!("verdict            {}", report.certificate.verdict);
    println!("outer iterations   {}", report.outer_iterations);
    println!("inner iterations   {}", report.inner_iterations);
    println!("eps_residual       {}", format_f64(rec.eps_residual));
    println!("r_residual         {}", format_f64(rec.r_residual));
    println!("feasibility        {}", format_f64(rec.feasibility));
    println!("multiplier_norm    {}", format_f64(rec.multiplier_norm));
    if let Some(d) = &report.multiplier_diagnostic {
        let g = d.growth_exponent.map_or_else(|| "n/a".to_string(), format_f64);
        println!("multiplier growth  exponent {g}, bounded trend {}", d.bounded_trend);
    }
    println!("seconds            {:.3}", report.seconds);
    println!("report             {}", out.join("report.json").display());
    for c in report.paper_checks.iter().filter(|c| !c.pass) {
        println!("check failed       {}: expected {}, actual {}", c.name, format_f64(c.expected), format_f64(c.actual));
    }
    Ok(verdict_code(report.certificate.verdict))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointDoc {
    x: Vec<f64>,
    lambda: Vec<f64>,
}

/// Exit 0 when the point meets `tol` in all three residuals, 4 otherwise.
fn certify(spec_path: &Path, point_path: &Path, tol: f64) -> CliResult {
    if !(tol > 0.0) {
        return Err(format!("--tol must be positive, got {tol}").into());
    }
    let spec = ProblemSpec::from_path(spec_path).map_err(|e| format!("{}: {e}", spec_path.display()))?;
    let problem = load_problem(&spec)?;
    let text = std::fs::read_to_string(point_path).map_err(|e| format!("{}: {e}", point_path.display()))?;
    let point: PointDoc = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", point_path.display()))?;
    let rec = akkt_residuals(&problem, &point.x, &point.lambda)?;
    let kkt = rec.is_kkt(tol, tol);
    println!("eps_residual     {}", format_f64(rec.eps_residual));
    println!("r_residual       {}", format_f64(rec.r_residual));
    println!("support_gap      {}", format_f64(rec.support_gap));
    println!("feasibility      {}", format_f64(rec.feasibility));
    println!("multiplier_norm  {}", format_f64(rec.multiplier_norm));
    println!("kkt              {kkt}");
    Ok(if kkt { EXIT_KKT } else { EXIT_INCONCLUSIVE })
}

fn examples(which: &str, seed: u64) -> CliResult {
    let suites: Vec<Suite> = if which == "all" { Suite::ALL.to_vec() } else { vec![Suite::parse(which)?] };
    let mut rows: Vec<(&str, PaperCheck)> = Vec::new();
    for suite in suites {
        rows.extend(suite.run(seed)?.into_iter().map(|c| (suite.name(), c)));
    }
    let width = rows.iter().map(|(_, c)| c.name.len()).max().unwrap_or(4).max(4);
    println!("{:<10} {:<width$} {:>24} {:>24} {:>10}  result  anchor", "suite", "name", "expected", "actual", "tol");
    for (suite, c) in &rows {
        println!(
            "{:<10} {:<width$} {:>24} {:>24} {:>10.1e}  {:<6}  {}",
            suite,
            c.name,
            format_f64(c.expected),
            format_f64(c.actual),
            c.tolerance,
            if c.pass { "PASS" } else { "FAIL" },
            c.anchor
        );
    }
    let failed = rows.iter().filter(|(_, c)| !c.pass).count();
    println!("{} checks, {failed} failed", rows.len());
    Ok(if failed == 0 { EXIT_KKT } else { EXIT_ERROR })
}

struct BenchRow {
    spec: String,
    median_seconds: f64,
    outer: usize,
    inner: usize,
    verdict: Verdict,
    eps: f64,
    r: f64,
    feasibility: f64,
}

fn bench_one(path: &Path, repeats: usize) -> Result<BenchRow, String> {
    let spec = ProblemSpec::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let problem = load_problem(&spec).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut times = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats {
        let start = Instant::now();
        let run = akkt_core::alm::alm_solve(&problem, &spec.solver, spec.x0.as_deref(), spec.lambda0.as_deref())
            .map_err(|e| format!("{}: {e}", path.display()))?;
        times.push(start.elapsed().as_secs_f64());
        last = Some(run);
    }
    let (cert, trace) = last.expect("repeats is positive");
    times.sort_by(f64::total_cmp);
    let median = if repeats % 2 == 1 { times[repeats / 2] } else { 0.5 * (times[repeats / 2 - 1] + times[repeats / 2]) };
    Ok(BenchRow {
        spec: path.display().to_string(),
        median_seconds: median,
        outer: trace.outer_iterations(),
        inner: trace.inner_iterations(),
        verdict: cert.verdict,
        eps: cert.final_record.eps_residual,
        r: cert.final_record.r_residual,
        feasibility: cert.final_record.feasibility,
    })
}

/// Tab-separated output, one header line and one line per spec.
fn bench(pattern: &str, repeats: usize, jobs: Option<usize>) -> CliResult {
    if repeats == 0 {
        return Err("--repeats must be positive".into());
    }
    let mut paths: Vec<PathBuf> = glob::glob(pattern)?.collect::<Result<_, _>>()?;
    paths.sort();
    if paths.is_empty() {
        return Err(format!("no spec matches {pattern}").into());
    }
    let threads = jobs.unwrap_or_else(|| paths.len().min(std::thread::available_parallelism().map_or(1, |n| n.get())));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?;
    let rows: Vec<Result<BenchRow, String>> = pool.install(|| paths.par_iter().map(|p| bench_one(p, repeats)).collect());
    println!("spec\tmedian_seconds\touter_iters\tinner_iters\tverdict\teps_residual\tr_residual\tfeasibility");
    let mut failed = false;
    for row in rows {
        match row {
            Ok(r) => println!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.spec,
                format_f64(r.median_seconds),
                r.outer,
                r.inner,
                r.verdict,
                format_f64(r.eps),
                format_f64(r.r),
                format_f64(r.feasibility)
            ),
            Err(e) => {
                eprintln!("error: {e}");
                failed = true;
            }
        }
    }
    Ok(if failed { EXIT_ERROR } else { EXIT_KKT })
}
