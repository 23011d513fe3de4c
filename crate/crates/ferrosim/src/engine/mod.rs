//! Nonlinear circuit solver: modified nodal analysis, Newton–Raphson per
//! timestep, implicit integration, and companion models for capacitors,
//! MOSFETs, and FTJ elements. Dense direct linear algebra throughout; the
//! target circuits have well under twenty nodes.

mod config;
mod mosfet;
mod solver;
mod trace;

pub use config::{Integration, SolverConfig};
pub use mosfet::{bias_for_current, mosfet_current, mosfet_current_derivs, MosfetModel, Polarity};
pub use solver::{
    dc_operating_point, dc_operating_point_with_variants, dc_sweep, ftj_companion, transient,
    transient_with_variants, SolveStats, SolverError, TransientResult,
};
pub use trace::{Trace, TraceError};
