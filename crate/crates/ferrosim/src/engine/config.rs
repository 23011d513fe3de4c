//! Solver tolerances and integration selection.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Integration {
    BackwardEuler,
    Trapezoidal,
}

/// Tolerances and step control for the transient solver.
///
/// `dt_init`/`dt_min`/`dt_max` left as `None` are resolved from the
/// analysis: `dt_init = dt_max = tstep` of the `.tran` directive (so a
/// bench's requested resolution bounds the step) and
/// `dt_min = 1e-12·tstop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub reltol: f64,
    pub abstol_v: f64,
    pub abstol_i: f64,
    pub max_newton_iters: usize,
    pub dt_init: Option<f64>,
    pub dt_min: Option<f64>,
    pub dt_max: Option<f64>,
    /// Largest polarization change per accepted step, as a fraction of pr
    /// (the spec default pr/20 is 0.05).
    pub dp_max_frac: f64,
    pub integration: Integration,
    /// Leak conductance from every node to ground (S).
    pub gmin: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            reltol: 1e-3,
            abstol_v: 1e-6,
            abstol_i: 1e-12,
            max_newton_iters: 50,
            dt_init: None,
            dt_min: None,
            dt_max: None,
            dp_max_frac: 0.05,
            integration: Integration::BackwardEuler,
            gmin: 1e-12,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("reltol", self.reltol),
            ("abstol_v", self.abstol_v),
            ("abstol_i", self.abstol_i),
            ("dp_max_frac", self.dp_max_frac),
            ("gmin", self.gmin),
        ] {
            if !(v > 0.0) {
                return Err(format!("{name} must be > 0"));
            }
        }
        if let (Some(lo), Some(init)) = (self.dt_min, self.dt_init) {
            if lo > init {
                return Err("dt_min must be <= dt_init".into());
            }
        }
        if let (Some(init), Some(hi)) = (self.dt_init, self.dt_max) {
            if init > hi {
                return Err("dt_init must be <= dt_max".into());
            }
        }
        Ok(())
    }
}
