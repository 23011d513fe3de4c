//! Prebuilt circuit benches: 2T1C read cell, differential synaptic
//! weighting pair, and non-volatile SRAM.
//!
//! All three share the same sensing concept: the tiny FTJ read current
//! integrates on a femtofarad-scale node capacitance and a transistor
//! gate amplifies the developed voltage. The differential pair normalizes
//! two complementary weights against a tail current; the NV-SRAM replaces
//! the pair with a cross-coupled inverter that amplifies the developed
//! differential to full rail on power-up.

mod diff_pair;
mod nvsram;
mod schedule;
mod two_t_one_c;

use serde::{Deserialize, Serialize};

use crate::engine::MosfetModel;
use crate::ftj::{builtin_variant, DeviceVariant, VariantName};

pub use diff_pair::{
    build_diff_pair, program_pulse_response, run_diff_pair_program, run_diff_pair_read,
    DiffPairProgram, ProgramKnobs,
};
pub use nvsram::{
    build_nvsram, run_nvsram_restore, run_nvsram_restore_mc, run_nvsram_store, run_sram_read,
    McReport, StoreResult, VtMismatch,
};
pub use schedule::{Phase, PhaseDrive, PhaseName, PhaseSchedule, ScheduleError, EDGE_TIME};
pub use two_t_one_c::{build_2t1c, run_2t1c_read};

/// Shared bench parameters. The FTJ geometry and transistor sizing of the
/// measured circuits are unpublished; these defaults are solved so the
/// quoted node-split and differential-current targets are met.
#[derive(Debug, Clone, PartialEq)]
pub struct CellConfig {
    /// FTJ preset used by the cell devices.
    pub variant: DeviceVariant,
    /// Cell FTJ area (cm²); 1 µm².
    pub ftj_area: f64,
    /// 2T1C cell FTJ area (cm²), small enough that its self-capacitance
    /// stays below the sensing-node capacitance.
    pub t2c_ftj_area: f64,
    /// Tunneling current-density scale factor. The cell devices carry
    /// roughly ten times the reference read current density of
    /// 1 pA/µm²; against the preset's 6 nA-anchored density that is a
    /// factor of ~150 at the cell read bias.
    pub current_scale: f64,
    /// Explicit node capacitance standing in for the read-transistor gate
    /// (F).
    pub c_node: f64,
    pub nmos: MosfetModel,
    pub pmos: MosfetModel,
    /// Differential-pair tail current target (A).
    pub i_bias: f64,
    /// Supply rail (V).
    pub v_dd: f64,
    /// Pre-charge level of the gate nodes before a differential read (V);
    /// sets the pair's operating point while leaving the tail saturated.
    pub v_precharge: f64,
    /// FTJ read bias during the develop phase (V). Kept below the
    /// staircase read point: a develop phase exposes the device for
    /// hundreds of microseconds, so the bias must sit where the
    /// voltage-time trade-off makes even the most vulnerable domain's
    /// switching time milliseconds long.
    pub v_read: f64,
    /// Gap between write and pre-charge operations (s).
    pub write_gap: f64,
    /// Partial-switching programming pulses: amplitude (V), flat-top
    /// width (s), period (s).
    pub prog_amplitude: f64,
    pub prog_width: f64,
    pub prog_period: f64,
}

impl Default for CellConfig {
    fn default() -> Self {
        Self {
            variant: builtin_variant(VariantName::A),
            ftj_area: 1e-8,
            t2c_ftj_area: 2e-10,
            current_scale: 150.0,
            c_node: 2e-15,
            nmos: MosfetModel::nmos(0.5, 1e-4),
            pmos: MosfetModel::pmos(0.5, 1e-4),
            i_bias: 500e-9,
            v_dd: 5.0,
            v_precharge: 0.75,
            v_read: 1.6,
            write_gap: 10e-6,
            prog_amplitude: 3.2,
            prog_width: 0.15e-6,
            prog_period: 1e-6,
        }
    }
}

/// Figures of merit extracted from a cell run. Fields not meaningful for
/// a given bench are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellMetrics {
    /// Gate-node split v(n1) − v(n2) at the report time (V).
    pub dv_n1n2_at_t: f64,
    /// Differential-pair current split I1 − I2 (A).
    pub di_pair: f64,
    /// Worst relative |I1 + I2 − I_b|/I_b over the read window.
    pub i_sum_error: f64,
    /// Restore landed on the stored state with full swing.
    pub restore_correct: Option<bool>,
    /// Final |v(Q) − v(Qn)| (V).
    pub q_qn_swing: Option<f64>,
}
