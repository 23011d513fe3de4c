//! Differential synaptic weighting pair: two FTJs with complementary
//! weights feeding a tail-normalized subthreshold pair.
//!
//! Per branch, T_ip connects BL to the FTJ top plate and T_in connects the
//! FTJ bottom node n_i to PL; the read transistor gate sits at n_i. The
//! p-side gates share one line (WLP) so that during read the n-side
//! selectors WL1/WL2 can open while the BL path stays closed — the nodes
//! float and integrate the FTJ read current, and the pair splits the tail
//! current by tanh(Δv/2nUt). Programming pulses BL against PL with the
//! branch's WL aligned to the BL pulses; the pulse order decides which FTJ
//! sets and which resets, and the pulse count programs intermediate
//! weights through the accumulative NLS kinetics.

use crate::engine::{bias_for_current, transient, SolverConfig, SolverError, Trace};
use crate::ftj::{FtjDevice, FtjOptions, FtjStack};
use crate::netlist::{fmt_sci, parse_netlist, Netlist};

use super::schedule::{PhaseDrive, PhaseName, PhaseSchedule, EDGE_TIME};
use super::{CellConfig, CellMetrics};

/// Partial-switching pulse-train knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProgramKnobs {
    /// Pulse amplitude on BL (V).
    pub amplitude: f64,
    /// Flat-top pulse width (s).
    pub width: f64,
    /// Pulse period (s).
    pub period: f64,
    /// Delay of the WL gate pulse against the BL pulse (s); shrinks the
    /// conduction overlap and with it the per-pulse update.
    pub wl_delay: f64,
}

impl ProgramKnobs {
    pub fn from_config(config: &CellConfig) -> Self {
        Self {
            amplitude: config.prog_amplitude,
            width: config.prog_width,
            period: config.prog_period,
            wl_delay: 0.0,
        }
    }
}

fn scaled_stack(config: &CellConfig) -> FtjStack {
    let mut stack = config.variant.stack;
    stack.area = config.ftj_area;
    stack.tun.j_on_amp *= config.current_scale;
    stack.tun.j_off_amp *= config.current_scale;
    stack
}

/// Normalized polarization reached after `count` set pulses from full
/// reset, on the standalone compact model (edges included). The weight
/// update per pulse shrinks with reduced amplitude or increased WL delay.
pub fn program_pulse_response(config: &CellConfig, knobs: &ProgramKnobs, count: u32) -> f64 {
    let stack = scaled_stack(config);
    let mut device = FtjDevice::new(stack, -1.0).with_options(FtjOptions {
        switching: true,
        tunneling: false,
        displacement: false,
    });
    let overlap = (knobs.width - knobs.wl_delay).max(0.0);
    let edge_steps = 8;
    for _ in 0..count {
        // Rising edge, flat top (gated by the WL overlap), falling edge.
        for k in 1..=edge_steps {
            let v = knobs.amplitude * k as f64 / edge_steps as f64;
            device.step(v, 0.0, EDGE_TIME / edge_steps as f64);
        }
        if overlap > 0.0 {
            device.step(knobs.amplitude, 0.0, overlap);
        }
        for k in (0..edge_steps).rev() {
            let v = knobs.amplitude * k as f64 / edge_steps as f64;
            device.step(v, 0.0, EDGE_TIME / edge_steps as f64);
        }
    }
    device.p()
}

fn v_bias(config: &CellConfig) -> f64 {
    bias_for_current(&config.nmos, config.i_bias, 0.2)
}

fn pair_netlist(config: &CellConfig, p1: f64, p2: f64, tstep: f64, tstop: f64) -> Netlist {
    let m = &config.nmos;
    let text = format!(
        "differential synaptic weighting pair\n\
         .model dp_nmos nmos vt={vt} beta={beta} n={n}\n\
         vbl bl 0 DC 0\n\
         vpl pl 0 DC 0\n\
         vwlp wlp 0 DC 0\n\
         vwl1 wl1 0 DC 0\n\
         vwl2 wl2 0 DC 0\n\
         vdd vdd 0 DC {vdd}\n\
         vbias nbias 0 DC {vb}\n\
         vd1 vdd d1 DC 0\n\
         vd2 vdd d2 DC 0\n\
         m1p bl wlp ft1 0 dp_nmos\n\
         f1 ft1 n1 VARIANT={var} AREA={area} SCALE={scale} P0={p1}\n\
         m1n n1 wl1 pl 0 dp_nmos\n\
         cn1 n1 0 {cn}\n\
         m3 d1 n1 tail 0 dp_nmos W=50\n\
         m2p bl wlp ft2 0 dp_nmos\n\
         f2 ft2 n2 VARIANT={var} AREA={area} SCALE={scale} P0={p2}\n\
         m2n n2 wl2 pl 0 dp_nmos\n\
         cn2 n2 0 {cn}\n\
         m4 d2 n2 tail 0 dp_nmos W=50\n\
         mb tail nbias 0 0 dp_nmos\n\
         .tran {tstep} {tstop}\n\
         .end\n",
        vt = fmt_sci(m.v_t),
        beta = fmt_sci(m.beta),
        n = fmt_sci(m.n_slope),
        vdd = fmt_sci(config.v_dd),
        vb = fmt_sci(v_bias(config)),
        var = config.variant.name,
        area = fmt_sci(config.ftj_area),
        scale = fmt_sci(config.current_scale),
        p1 = fmt_sci(p1),
        p2 = fmt_sci(p2),
        cn = fmt_sci(config.c_node),
        tstep = fmt_sci(tstep),
        tstop = fmt_sci(tstop),
    );
    parse_netlist(&text).expect("generated pair netlist parses")
}

/// Result of programming a weight onto the pair.
#[derive(Debug, Clone)]
pub struct DiffPairProgram {
    pub trace: Trace,
    pub p1: f64,
    pub p2: f64,
    pub pulses_1: u32,
    pub pulses_2: u32,
    pub requested_w: f64,
    /// Weight the pulse table could actually reach.
    pub achieved_w: f64,
}

const MAX_PULSES: u32 = 80;

fn reset_phase(_config: &CellConfig) -> (PhaseName, f64, Vec<(&'static str, PhaseDrive)>) {
    (
        PhaseName::Erase,
        26e-6,
        vec![
            ("vwlp", PhaseDrive::Level(5.0)),
            ("vwl1", PhaseDrive::Level(5.0)),
            ("vwl2", PhaseDrive::Level(5.0)),
            ("vbl", PhaseDrive::Level(0.0)),
            (
                "vpl",
                PhaseDrive::PulseTrain {
                    base: 0.0,
                    amplitude: 4.5,
                    delay: 1e-6,
                    width: 10e-6,
                    period: 12e-6,
                    count: 2,
                },
            ),
        ],
    )
}

fn pulse_train_phase(
    _config: &CellConfig,
    knobs: &ProgramKnobs,
    branch_wl: &'static str,
    other_wl: &'static str,
    count: u32,
) -> (PhaseName, f64, Vec<(&'static str, PhaseDrive)>) {
    let duration = count as f64 * knobs.period + 2e-6;
    (
        PhaseName::Write,
        duration,
        vec![
            ("vwlp", PhaseDrive::Level(5.0)),
            (
                branch_wl,
                PhaseDrive::PulseTrain {
                    base: 0.0,
                    amplitude: 5.0,
                    delay: 1e-6 + knobs.wl_delay,
                    width: knobs.width,
                    period: knobs.period,
                    count,
                },
            ),
            (other_wl, PhaseDrive::Level(0.0)),
            ("vpl", PhaseDrive::Level(0.0)),
            (
                "vbl",
                PhaseDrive::PulseTrain {
                    base: 0.0,
                    amplitude: knobs.amplitude,
                    delay: 1e-6,
                    width: knobs.width,
                    period: knobs.period,
                    count,
                },
            ),
        ],
    )
}

/// Builds the in-circuit pulse table: polarization of FTJ 1 after each set
/// pulse of a `MAX_PULSES`-long train, taken from one calibration
/// transient.
fn circuit_pulse_table(config: &CellConfig, knobs: &ProgramKnobs) -> Result<Vec<f64>, SolverError> {
    let mut schedule = PhaseSchedule::default();
    let reset = reset_phase(config);
    schedule.push(reset.0, reset.1, reset.2);
    let train = pulse_train_phase(config, knobs, "vwl1", "vwl2", MAX_PULSES);
    let write_start = schedule.total_duration();
    schedule.push(train.0, train.1, train.2);
    let total = schedule.total_duration();
    let mut netlist = pair_netlist(config, -1.0, -1.0, 0.5e-6, total);
    schedule.apply(&mut netlist).expect("schedule matches netlist");
    let result = transient(&netlist, total, &SolverConfig::default())?;
    let mut table = Vec::with_capacity(MAX_PULSES as usize + 1);
    table.push(-1.0);
    for k in 1..=MAX_PULSES {
        let t = write_start + 1e-6 + k as f64 * knobs.period;
        table.push(result.trace.sample("p(f1)", t)?);
    }
    Ok(table)
}

impl From<crate::engine::TraceError> for SolverError {
    fn from(e: crate::engine::TraceError) -> Self {
        SolverError::Compile(e.to_string())
    }
}

fn pulses_for_target(table: &[f64], target: f64) -> (u32, f64) {
    let mut best = 0usize;
    let mut best_err = f64::MAX;
    for (k, &p) in table.iter().enumerate() {
        let err = (p - target).abs();
        if err < best_err {
            best_err = err;
            best = k;
        }
    }
    (best as u32, table[best])
}

/// Programs complementary weights (w, 1−w): both FTJs are first fully
/// reset, then each branch receives the pulse count that lands its
/// polarization on 2w−1 (branch 1) and 1−2w (branch 2) per the calibrated
/// in-circuit pulse table.
pub fn run_diff_pair_program(
    config: &CellConfig,
    w: f64,
) -> Result<DiffPairProgram, SolverError> {
    assert!((0.0..=1.0).contains(&w), "weight must be in [0, 1]");
    let knobs = ProgramKnobs::from_config(config);
    let table = circuit_pulse_table(config, &knobs)?;
    let (k1, p1_target) = pulses_for_target(&table, 2.0 * w - 1.0);
    let (k2, _) = pulses_for_target(&table, 1.0 - 2.0 * w);

    let mut schedule = PhaseSchedule::default();
    let reset = reset_phase(config);
    schedule.push(reset.0, reset.1, reset.2);
    if k1 > 0 {
        let ph = pulse_train_phase(config, &knobs, "vwl1", "vwl2", k1);
        schedule.push(ph.0, ph.1, ph.2);
    }
    if k2 > 0 {
        let ph = pulse_train_phase(config, &knobs, "vwl2", "vwl1", k2);
        schedule.push(ph.0, ph.1, ph.2);
    }
    schedule.push(PhaseName::Idle, 1e-6, vec![("vwlp", PhaseDrive::Level(0.0))]);

    let total = schedule.total_duration();
    let mut netlist = pair_netlist(config, -1.0, -1.0, 0.5e-6, total);
    schedule.apply(&mut netlist).expect("schedule matches netlist");
    let result = transient(&netlist, total, &SolverConfig::default())?;
    let p1 = *result.trace.signal("p(f1)")?.last().expect("nonempty trace");
    let p2 = *result.trace.signal("p(f2)")?.last().expect("nonempty trace");
    Ok(DiffPairProgram {
        trace: result.trace,
        p1,
        p2,
        pulses_1: k1,
        pulses_2: k2,
        requested_w: w,
        achieved_w: (p1_target + 1.0) / 2.0,
    })
}

/// Builds the demo bench: program w = 1, idle gap, pre-charge, read.
pub fn build_diff_pair(config: &CellConfig) -> (Netlist, PhaseSchedule) {
    let knobs = ProgramKnobs::from_config(config);
    let mut schedule = PhaseSchedule::default();
    let reset = reset_phase(config);
    schedule.push(reset.0, reset.1, reset.2);
    let ph = pulse_train_phase(config, &knobs, "vwl1", "vwl2", 40);
    schedule.push(ph.0, ph.1, ph.2);
    schedule.push(PhaseName::Idle, config.write_gap, vec![("vwlp", PhaseDrive::Level(0.0))]);
    push_read_phases(config, &mut schedule, 100e-6);
    let total = schedule.total_duration();
    let mut netlist = pair_netlist(config, -1.0, -1.0, 0.5e-6, total);
    schedule.apply(&mut netlist).expect("schedule matches netlist");
    (netlist, schedule)
}

fn push_read_phases(config: &CellConfig, schedule: &mut PhaseSchedule, develop: f64) {
    // BL already carries the read level while the nodes are still pinned
    // through the n-side transistors; only the n-side gates drop to start
    // the develop phase, so no displacement edge reaches the floating
    // nodes.
    schedule.push(
        PhaseName::PreCharge,
        5e-6,
        vec![
            ("vwlp", PhaseDrive::Level(5.0)),
            ("vwl1", PhaseDrive::Level(5.0)),
            ("vwl2", PhaseDrive::Level(5.0)),
            ("vpl", PhaseDrive::Level(config.v_precharge)),
            ("vbl", PhaseDrive::Level(config.v_precharge + config.v_read)),
        ],
    );
    schedule.push(
        PhaseName::Read,
        develop,
        vec![
            ("vwl1", PhaseDrive::Level(0.0)),
            ("vwl2", PhaseDrive::Level(0.0)),
        ],
    );
}

/// Floats the gate nodes of a programmed pair and lets the FTJ currents
/// develop a differential for `develop_time`; reports the node split, the
/// pair-current split, and the worst tail-normalization error.
pub fn run_diff_pair_read(
    config: &CellConfig,
    p1: f64,
    p2: f64,
    develop_time: f64,
) -> Result<(CellMetrics, Trace), SolverError> {
    let mut schedule = PhaseSchedule::default();
    push_read_phases(config, &mut schedule, develop_time);
    let total = schedule.total_duration();
    let mut netlist = pair_netlist(config, p1, p2, develop_time / 400.0, total);
    schedule.apply(&mut netlist).expect("schedule matches netlist");
    let result = transient(&netlist, total, &SolverConfig::default())?;
    let trace = result.trace;

    let read = schedule.window(PhaseName::Read).expect("read phase");
    let t_report = read.1;
    let dv = trace.sample("v(n1)", t_report)? - trace.sample("v(n2)", t_report)?;
    let di = trace.sample("i(vd1)", t_report)? - trace.sample("i(vd2)", t_report)?;

    let i1 = trace.signal("i(vd1)")?;
    let i2 = trace.signal("i(vd2)")?;
    let mut i_sum_error = 0.0f64;
    for (k, &t) in trace.time.iter().enumerate() {
        if t >= read.0 + 1e-6 && t <= read.1 {
            let err = ((i1[k] + i2[k] - config.i_bias) / config.i_bias).abs();
            i_sum_error = i_sum_error.max(err);
        }
    }

    Ok((
        CellMetrics {
            dv_n1n2_at_t: dv,
            di_pair: di,
            i_sum_error,
            restore_correct: None,
            q_qn_swing: None,
        },
        trace,
    ))
}
