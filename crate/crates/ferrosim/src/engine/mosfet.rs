//! EKV-style MOSFET model: a single continuous expression interpolating
//! between subthreshold exponential and strong-inversion square law.
//!
//! ```text
//! I_D = I_spec · [ ln²(1 + exp((v_gs − v_t)/(2·n·u_t)))
//!                − ln²(1 + exp((v_gs − v_t − n·v_ds)/(2·n·u_t))) ]
//! I_spec = 2·n·β·u_t²
//! ```
//!
//! Source-referenced, smooth and monotone in v_gs, saturating in v_ds;
//! p-channel devices by sign symmetry. No body effect and no capacitances:
//! gate current is identically zero, so circuit node dynamics come from
//! explicit capacitors.

use serde::{Deserialize, Serialize};

use crate::units::UT_300K;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarity {
    N,
    P,
}

/// Transistor model card.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MosfetModel {
    pub polarity: Polarity,
    /// Threshold-voltage magnitude (V), positive for both polarities.
    pub v_t: f64,
    /// Transconductance factor µ·Cox·W/L (A/V²) at W/L = 1.
    pub beta: f64,
    /// Subthreshold slope factor n (≥ 1).
    pub n_slope: f64,
    /// Thermal voltage (V).
    pub u_t: f64,
}

impl MosfetModel {
    pub fn nmos(v_t: f64, beta: f64) -> Self {
        Self {
            polarity: Polarity::N,
            v_t,
            beta,
            n_slope: 1.3,
            u_t: UT_300K,
        }
    }

    pub fn pmos(v_t: f64, beta: f64) -> Self {
        Self {
            polarity: Polarity::P,
            ..Self::nmos(v_t, beta)
        }
    }
}

/// ln(1 + e^x) without overflow.
fn softplus(x: f64) -> f64 {
    if x > 34.0 {
        x
    } else {
        x.exp().ln_1p()
    }
}

/// Logistic function, the derivative of softplus.
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn ekv_n(model: &MosfetModel, beta_eff: f64, v_t_eff: f64, vgs: f64, vds: f64) -> (f64, f64, f64) {
    let n = model.n_slope;
    let ut = model.u_t;
    let i_spec = 2.0 * n * beta_eff * ut * ut;
    let denom = 2.0 * n * ut;
    let xf = (vgs - v_t_eff) / denom;
    let xr = (vgs - v_t_eff - n * vds) / denom;
    let sf = softplus(xf);
    let sr = softplus(xr);
    let i = i_spec * (sf * sf - sr * sr);
    let gm = i_spec * (sf * sigmoid(xf) - sr * sigmoid(xr)) / (n * ut);
    let gds = i_spec * sr * sigmoid(xr) / ut;
    (i, gm, gds)
}

/// Drain current (A) and its derivatives w.r.t. v_gs and v_ds (S).
/// Positive current flows drain → source for an n-channel device with
/// v_ds > 0; p-channel devices mirror both voltages and the current.
pub fn mosfet_current_derivs(
    model: &MosfetModel,
    beta_eff: f64,
    v_t_delta: f64,
    v_gs: f64,
    v_ds: f64,
) -> (f64, f64, f64) {
    let v_t_eff = model.v_t + v_t_delta;
    match model.polarity {
        Polarity::N => ekv_n(model, beta_eff, v_t_eff, v_gs, v_ds),
        Polarity::P => {
            let (i, gm, gds) = ekv_n(model, beta_eff, v_t_eff, -v_gs, -v_ds);
            (-i, gm, gds)
        }
    }
}

/// Drain current (A) of the model at unit W/L.
pub fn mosfet_current(model: &MosfetModel, v_gs: f64, v_ds: f64) -> f64 {
    mosfet_current_derivs(model, model.beta, 0.0, v_gs, v_ds).0
}

/// Gate voltage that makes an n-channel device carry `i_target` at
/// `v_ds_ref` (bisection; the current is monotone in v_gs).
pub fn bias_for_current(model: &MosfetModel, i_target: f64, v_ds_ref: f64) -> f64 {
    let mut lo = -1.0;
    let mut hi = model.v_t + 5.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let i = mosfet_current(model, mid, v_ds_ref).abs();
        if i < i_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
