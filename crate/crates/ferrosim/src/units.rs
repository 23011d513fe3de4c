//! Physical constants and unit conventions.
//!
//! Geometry is kept in cm so that permittivity, fields, and current
//! densities line up with the device literature (MV/cm, µC/cm², A/cm²).

/// Vacuum permittivity in F/cm.
pub const EPS0_F_PER_CM: f64 = 8.854e-14;

/// Thermal voltage kT/q at 300 K, in volts.
pub const UT_300K: f64 = 0.02585;

/// Centimeters per nanometer.
pub const CM_PER_NM: f64 = 1e-7;
