use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometric inner tolerance `tol(k) = max(floor, base · ratioᵏ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InnerTolSchedule {
    pub base: f64,
    pub ratio: f64,
    pub floor: f64,
}

impl Default for InnerTolSchedule {
    fn default() -> Self {
        Self { base: 1.0, ratio: 0.5, floor: 1e-8 }
    }
}

impl InnerTolSchedule {
    pub fn at(&self, k: usize) -> f64 {
        let exp = i32::try_from(k).unwrap_or(i32::MAX);
        (self.base * self.ratio.powi(exp)).max(self.floor)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base > 0.0 && self.floor > 0.0 && self.ratio > 0.0 && self.ratio <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "inner tolerance schedule needs base > 0, floor > 0, ratio in (0, 1], got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Parameters of the safeguarded augmented Lagrangian method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlmConfig {
    pub rho0: f64,
    /// Penalty growth factor, `> 1`.
    pub gamma: f64,
    /// Required decrease factor of the V-measure, in `(0, 1)`.
    pub tau: f64,
    /// Radius of the weighted-norm ball the safeguarded multiplier lives in.
    pub safeguard_bound: f64,
    pub inner_tol_schedule: InnerTolSchedule,
    pub outer_tol_kkt: f64,
    pub outer_tol_feas: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub armijo_sigma: f64,
    pub armijo_beta: f64,
    /// First trial step of the inner solver.
    pub step0: f64,
    /// The penalty is never increased beyond this value.
    pub rho_max: f64,
}

impl Default for AlmConfig {
    fn default() -> Self {
        Self {
            rho0: 10.0,
            gamma: 10.0,
            tau: 0.5,
            safeguard_bound: 1e6,
            inner_tol_schedule: InnerTolSchedule::default(),
            outer_tol_kkt: 1e-6,
            outer_tol_feas: 1e-8,
            max_outer: 100,
            max_inner: 20_000,
            armijo_sigma: 1e-4,
            armijo_beta: 0.5,
            step0: 1.0,
            rho_max: 1e20,
        }
    }
}

impl AlmConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidInput(format!("solver config: {what}")));
        if !(self.rho0 > 0.0 && self.rho0.is_finite()) {
            return bad("rho0 must be positive");
        }
        if !(self.gamma > 1.0) {
            return bad("gamma must exceed 1");
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return bad("tau must lie in (0, 1)");
        }
        if !(self.safeguard_bound > 0.0) {
            return bad("safeguard_bound must be positive");
        }
        if !(self.outer_tol_kkt > 0.0 && self.outer_tol_feas > 0.0) {
            return bad("outer tolerances must be positive");
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return bad("iteration limits must be positive");
        }
        if !(self.armijo_sigma > 0.0 && self.armijo_sigma < 1.0) {
            return bad("armijo_sigma must lie in (0, 1)");
        }
        if !(self.armijo_beta > 0.0 && self.armijo_beta < 1.0) {
            return bad("armijo_beta must lie in (0, 1)");
        }
        if !(self.step0 > 0.0 && self.step0.is_finite()) {
            return bad("step0 must be positive");
        }
        if !(self.rho_max >= self.rho0) {
            return bad("rho_max must be at least rho0");
        }
        self.inner_tol_schedule.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_defaults() {
        let s = InnerTolSchedule::default();
        assert_eq!(s.at(0), 1.0);
        assert_eq!(s.at(3), 0.125);
        assert_eq!(s.at(40), 1e-8);
        assert_eq!(s.at(usize::MAX), 1e-8);
        assert!((1..60).all(|k| s.at(k) <= s.at(k - 1)));
    }

    #[test]
    fn config_validation() {
        assert!(AlmConfig::default().validate().is_ok());
        assert!(AlmConfig { gamma: 1.0, ..Default::default() }.validate().is_err());
        assert!(AlmConfig { tau: 1.0, ..Default::default() }.validate().is_err());
        let partial: AlmConfig = serde_json::from_str(r#"{"rho0": 2.0}"#).unwrap();
        assert_eq!(partial.rho0, 2.0);
        assert_eq!(partial.gamma, 10.0);
        assert!(serde_json::from_str::<AlmConfig>(r#"{"rho": 2.0}"#).is_err());
    }
}
