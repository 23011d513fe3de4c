//! ferrosim — compact-model and circuit-simulation toolkit for
//! hafnium-zirconium-oxide ferroelectric tunneling junctions (FTJs).
//!
//! The crate is organized around six modules:
//!
//! - [`ftj`] — behavioral compact model of a double-layer FTJ: stack
//!   electrostatics, nucleation-limited polarization switching,
//!   polarization-dependent tunneling, and model calibration.
//! - [`netlist`] — a small SPICE-like netlist dialect: data model, parser,
//!   serializer, and stimulus evaluation.
//! - [`engine`] — nonlinear transient solver: modified nodal analysis with
//!   Newton–Raphson per timestep and implicit integration.
//! - [`characterization`] — virtual-instrument protocols (triangle sweeps,
//!   staircase reads) and figure-of-merit extraction (Pr, Vc, peak width,
//!   TER, plateau current, energy).
//! - [`cells`] — prebuilt benches for the 2T1C read cell, the differential
//!   synaptic weighting pair, and the non-volatile SRAM cell.
//! - [`cli`] — command-line front end emitting CSV traces and `key=value`
//!   metric summaries.
//!
//! Units are CGS-practical throughout: lengths in cm, fields in V/cm,
//! charge densities in C/cm², current densities in A/cm², capacitance
//! densities in F/cm². Terminal quantities are SI (V, A, s, F).
//!
//! See the `examples/` directory for one runnable program per major
//! capability.

// Validation guards use `!(x > 0.0)` deliberately: unlike `x <= 0.0`, the
// negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cells;
pub mod characterization;
pub mod cli;
pub mod engine;
pub mod ftj;
pub mod netlist;
pub mod units;
