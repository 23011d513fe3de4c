//! Virtual-instrument protocols and figure-of-merit extraction.
//!
//! The protocols reproduce the measurement conditions the device data came
//! from: bipolar triangle sweeps at programmable slew rates (IV/PV loops,
//! switching peaks, displacement plateaus) and a staircase read that
//! samples current only after each 50 mV step has settled, which removes
//! the displacement contribution of the device self-capacitance. Sweeps
//! drive the compact model directly through an ideal source; the circuit
//! engine reproduces the same traces through its FTJ companion model.

mod extract;
mod staircase;
mod sweep;

pub use extract::{
    extract_pv, extract_switching_peaks, extract_ter, program_energy, BaselineMode, ExtractError,
    PeakPolarity, PeakReport, PvCurve,
};
pub use staircase::{run_staircase_read, ReadCurve, ReadState};
pub use sweep::{
    frequency_scaling_report, last_cycle_window, run_triangle_sweep, FreqScaleReport, FreqScaleRow,
};
