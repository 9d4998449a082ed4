use serde::{Deserialize, Serialize};

use super::diagnostic::growth_exponent;
use super::record::AkktRecord;
use crate::error::Result;
use crate::problem::Problem;
use crate::report::num;

/// Minimum number of trailing records used for trend fits.
const MIN_TREND_POINTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Kkt,
    AkktTrending,
    InfeasibleStationary,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Kkt => "kkt",
            Verdict::AkktTrending => "akkt-trending",
            Verdict::InfeasibleStationary => "infeasible-stationary",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Decay and growth rates over the trailing half of a record history.
/// Rates are least-squares slopes of `log₁₀` values against the iteration
/// index; `None` when fewer than three finite positive values exist.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HistorySummary {
    pub records: usize,
    #[serde(with = "num::opt")]
    pub eps_rate: Option<f64>,
    #[serde(with = "num::opt")]
    pub r_rate: Option<f64>,
    #[serde(with = "num::opt")]
    pub feasibility_rate: Option<f64>,
    #[serde(with = "num::opt")]
    pub combined_rate: Option<f64>,
    /// Slope of `ln ‖λᵏ‖` against `ln k`.
    #[serde(with = "num::opt")]
    pub multiplier_growth_exponent: Option<f64>,
    #[serde(with = "num")]
    pub sup_multiplier_norm: f64,
    /// `dist(−∇(d_K² ∘ G)(x), N_C(x))` at the final iterate.
    #[serde(with = "num")]
    pub infeasibility_stationarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub final_record: AkktRecord,
    pub history_summary: HistorySummary,
}

/// Riesz gradient of `x ↦ d_K²(G(x))`, i.e. `2 G′(x)*(G(x) − P_K(G(x)))`.
pub fn infeasibility_gradient(problem: &Problem, x: &[f64]) -> Result<Vec<f64>> {
    let g = problem.constraint_value(x);
    let p = problem.set_k.project(&g, &problem.space_y)?;
    let diff: Vec<f64> = g.iter().zip(&p).map(|(a, b)| 2.0 * (a - b)).collect();
    Ok(problem.adjoint_action(x, &diff))
}

/// Least-squares slope of `ys` against `xs`.
pub(crate) fn ls_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

fn log_rate(ks: &[f64], values: &[f64]) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        ks.iter().zip(values).filter(|(_, v)| v.is_finite() && **v > 0.0).map(|(k, v)| (*k, v.log10())).unzip();
    if xs.len() < MIN_TREND_POINTS {
        return None;
    }
    ls_slope(&xs, &ys)
}

impl Certificate {
    /// Classifies a record history (indexed by `ks`, oldest first).
    ///
    /// * KKT: the final record meets all three tolerances.
    /// * infeasible-stationary: the final iterate is infeasible and
    ///   stationary for `d_K² ∘ G` over `C`, relative to its infeasibility:
    ///   `dist(−∇(d_K²∘G), N_C) ≤ tol_kkt · d_K(G(x))`.
    /// * AKKT-trending: over the trailing half of the history the combined
    ///   residual `max(eps, r, feasibility)` has a negative log-slope and
    ///   ends below its value at the start of that window.
    /// * inconclusive otherwise.
    pub fn classify(problem: &Problem, ks: &[f64], records: &[AkktRecord], tol_kkt: f64, tol_feas: f64) -> Result<Self> {
        let last = records.last().expect("history must not be empty").clone();
        let infeas_grad = infeasibility_gradient(problem, &last.x)?;
        let stationarity = problem.set_c.normal_cone_dist(&last.x, &infeas_grad, &problem.space_x)?;

        let start = records.len() / 2;
        let window = &records[start..];
        let wk = &ks[start..];
        let series = |f: fn(&AkktRecord) -> f64| -> Vec<f64> { window.iter().map(f).collect() };
        let combined = series(AkktRecord::combined_residual);
        let summary = HistorySummary {
            records: records.len(),
            eps_rate: log_rate(wk, &series(|r| r.eps_residual)),
            r_rate: log_rate(wk, &series(|r| r.r_residual)),
            feasibility_rate: log_rate(wk, &series(|r| r.feasibility)),
            combined_rate: log_rate(wk, &combined),
            multiplier_growth_exponent: growth_exponent(ks, &records.iter().map(|r| r.multiplier_norm).collect::<Vec<_>>()),
            sup_multiplier_norm: records.iter().map(|r| r.multiplier_norm).fold(0.0, f64::max),
            infeasibility_stationarity: stationarity,
        };

        let verdict = if last.is_kkt(tol_kkt, tol_feas) {
            Verdict::Kkt
        } else if last.feasibility > tol_feas && stationarity <= tol_kkt * last.feasibility {
            Verdict::InfeasibleStationary
        } else if window.len() >= MIN_TREND_POINTS
            && summary.combined_rate.is_some_and(|s| s < 0.0)
            && combined.last().expect("nonempty") < combined.first().expect("nonempty")
        {
            Verdict::AkktTrending
        } else {
            Verdict::Inconclusive
        };
        Ok(Self { verdict, final_record: last, history_summary: summary })
    }
}
