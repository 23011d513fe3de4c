//! Static stack parameters and double-layer electrostatics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::EPS0_F_PER_CM;

/// Nucleation-limited-switching kinetics parameters.
///
/// Domain activation fields are sampled deterministically from a Gaussian
/// N(`ea_mean`, σ²) at the mid-quantiles (i + 0.5)/n_domains, so two devices
/// with the same parameters always carry the same thresholds. The spread σ
/// may differ per switching polarity (`ea_sigma_pos` acts on −1→+1
/// switching, `ea_sigma_neg` on +1→−1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NlsParams {
    /// Number of independently switching domains (≥ 1).
    pub n_domains: usize,
    /// Attempt time τ0 (s).
    pub tau0: f64,
    /// Mean activation field (V/cm).
    pub ea_mean: f64,
    /// Activation-field spread for positive-going switching (V/cm).
    pub ea_sigma_pos: f64,
    /// Activation-field spread for negative-going switching (V/cm).
    pub ea_sigma_neg: f64,
    /// Exponent n of the field-acceleration law τ = τ0·exp((E_a/|E|)^n).
    pub merz_exp: f64,
}

impl NlsParams {
    pub fn validate(&self) -> Result<(), StackError> {
        if self.n_domains < 1 {
            return Err(StackError::Invalid("n_domains must be >= 1"));
        }
        if !(self.tau0 > 0.0) || !self.tau0.is_finite() {
            return Err(StackError::Invalid("tau0 must be finite and > 0"));
        }
        if !(self.ea_mean > 0.0) {
            return Err(StackError::Invalid("ea_mean must be > 0"));
        }
        if self.ea_sigma_pos < 0.0 || self.ea_sigma_neg < 0.0 {
            return Err(StackError::Invalid("ea_sigma must be >= 0"));
        }
        if !(self.merz_exp > 0.0) {
            return Err(StackError::Invalid("merz_exp must be > 0"));
        }
        Ok(())
    }
}

/// Behavioral tunneling-law parameters.
///
/// Each resistance branch is an asymmetric diode-like exponential,
/// `J(v) = j_amp·(exp(v/v_shape_pos) − 1)` for v ≥ 0 and the mirrored
/// expression with `v_shape_neg` for v < 0. The LRS/HRS prefactor ratio
/// fixes the tunneling electro-resistance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelParams {
    /// LRS current-density prefactor (A/cm²).
    pub j_on_amp: f64,
    /// HRS current-density prefactor (A/cm²).
    pub j_off_amp: f64,
    /// Shape voltage of the positive branch (V).
    pub v_shape_pos: f64,
    /// Shape voltage of the negative branch (V).
    pub v_shape_neg: f64,
}

impl TunnelParams {
    pub fn validate(&self) -> Result<(), StackError> {
        if !(self.j_off_amp > 0.0) || self.j_on_amp < self.j_off_amp {
            return Err(StackError::Invalid("need j_on_amp >= j_off_amp > 0"));
        }
        if !(self.v_shape_pos > 0.0) || !(self.v_shape_neg > 0.0) {
            return Err(StackError::Invalid("shape voltages must be > 0"));
        }
        Ok(())
    }
}

/// Static parameters of one FTJ stack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FtjStack {
    /// Ferroelectric thickness (cm).
    pub d_fe: f64,
    /// Relative permittivity of the ferroelectric layer.
    pub k_fe: f64,
    /// Dielectric (tunneling-layer) thickness (cm); 0 for a single layer.
    pub d_de: f64,
    /// Relative permittivity of the dielectric layer.
    pub k_de: f64,
    /// Device area (cm²).
    pub area: f64,
    /// Remnant polarization (C/cm²).
    pub pr: f64,
    /// Top-electrode workfunction (eV).
    pub phi_top: f64,
    /// Bottom-electrode workfunction (eV).
    pub phi_bottom: f64,
    pub nls: NlsParams,
    pub tun: TunnelParams,
}

#[derive(Debug, Error, PartialEq)]
pub enum StackError {
    #[error("invalid stack parameter: {0}")]
    Invalid(&'static str),
}

impl FtjStack {
    pub fn validate(&self) -> Result<(), StackError> {
        if !(self.d_fe > 0.0) {
            return Err(StackError::Invalid("d_fe must be > 0"));
        }
        if self.d_de < 0.0 {
            return Err(StackError::Invalid("d_de must be >= 0"));
        }
        if !(self.k_fe > 1.0) || !(self.k_de > 1.0) {
            return Err(StackError::Invalid("relative permittivities must be > 1"));
        }
        if !(self.area > 0.0) {
            return Err(StackError::Invalid("area must be > 0"));
        }
        if !(self.pr > 0.0) {
            return Err(StackError::Invalid("pr must be > 0"));
        }
        if !self.built_in_voltage().is_finite() {
            return Err(StackError::Invalid("built-in voltage must be finite"));
        }
        self.nls.validate()?;
        self.tun.validate()
    }

    /// Background (non-ferroelectric) capacitance per area, F/cm²:
    /// the series connection of the two layers,
    /// `ε0 / (d_fe/k_fe + d_de/k_de)`.
    pub fn background_capacitance_per_area(&self) -> f64 {
        EPS0_F_PER_CM / (self.d_fe / self.k_fe + self.d_de / self.k_de)
    }

    /// Workfunction built-in voltage `phi_bottom − phi_top` (V). A positive
    /// value shifts the whole hysteresis toward positive applied voltages.
    pub fn built_in_voltage(&self) -> f64 {
        self.phi_bottom - self.phi_top
    }

    /// Thickness-equivalent of the stack seen by the ferroelectric field,
    /// `d_fe + d_de·k_fe/k_de` (cm). The zero-polarization field split is
    /// `e_fe = (v − v_bi)/effective_thickness`.
    pub fn effective_thickness(&self) -> f64 {
        self.d_fe + self.d_de * self.k_fe / self.k_de
    }

    /// Splits the applied voltage into layer fields (V/cm) for a given
    /// polarization charge `p_charge` (C/cm²), solving displacement
    /// continuity `ε0·k_fe·e_fe + P = ε0·k_de·e_de` together with the
    /// voltage loop `e_fe·d_fe + e_de·d_de = v_applied − v_bi`.
    ///
    /// For `d_de = 0` the second equation alone fixes `e_fe`; the returned
    /// `e_de` is then the field a vanishing dielectric layer would carry.
    pub fn partition_fields(&self, v_applied: f64, p_charge: f64) -> (f64, f64) {
        let v_eff = v_applied - self.built_in_voltage();
        let e_fe = (v_eff - self.d_de * p_charge / (EPS0_F_PER_CM * self.k_de))
            / self.effective_thickness();
        let e_de = (EPS0_F_PER_CM * self.k_fe * e_fe + p_charge) / (EPS0_F_PER_CM * self.k_de);
        (e_fe, e_de)
    }

    /// Ferroelectric field driving the switching kinetics (V/cm).
    ///
    /// Polarization charge at the internal interface is treated as screened
    /// by compensating interface charge on switching timescales, so the
    /// kinetic field is the zero-P partition of the applied voltage. The
    /// unscreened field (including the depolarizing term) is available
    /// through [`FtjStack::partition_fields`].
    pub fn switching_field(&self, v_applied: f64) -> f64 {
        self.partition_fields(v_applied, 0.0).0
    }
}
