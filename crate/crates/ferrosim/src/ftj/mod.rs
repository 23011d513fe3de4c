//! Behavioral compact model of a double-layer ferroelectric tunneling
//! junction.
//!
//! The device is a ferroelectric layer (thickness `d_fe`, permittivity
//! `k_fe`) in series with a dielectric tunneling layer (`d_de`, `k_de`).
//! Polarization reversal follows nucleation-limited switching: the film is
//! split into independent domains, each with its own activation field drawn
//! deterministically from a Gaussian, and each domain accumulates switching
//! progress `u += dt/τ(E)` with a Merz-type field-acceleration law
//! `τ = τ0·exp((E_a/|E|)^n)`. The terminal current is the sum of a linear
//! background displacement current, the switching current dP/dt, and a
//! polarization-weighted diode-like tunneling current.

mod calibrate;
mod model;
mod nls;
mod presets;
mod stack;
mod state;

pub use calibrate::{calibrate_nls, ramp_peak_voltage, CalibrationError, CalibrationTarget};
pub use model::{
    read_time, terminal_current_step, tunneling_current_density, FtjDevice, FtjOptions,
    FtjStepPlan, ReadTimeError,
};
pub use nls::{nls_tau, DomainThresholds};
pub use presets::{apply_device_overlay, builtin_variant, load_variants_toml, DeviceVariant, PresetError, VariantName};
pub use stack::{FtjStack, NlsParams, StackError, TunnelParams};
pub use state::{step_polarization, FtjState};
