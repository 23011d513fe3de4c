//! Non-volatile SRAM: a 6T cell with one FTJ from each internal node to a
//! shared plate line.
//!
//! Store drives the plate with a bipolar pulse pair while the latch holds:
//! the FTJ at the high node sets, the FTJ at the low node resets. Restore
//! develops a differential on the discharged internal nodes through the
//! FTJ read currents while the gated supply V_up is held at 0 V (all four
//! inverter transistors off), then ramps V_up to V_dd and lets the
//! cross-coupled pair amplify the differential to full swing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::engine::{transient, SolverConfig, SolverError, Trace};
use crate::netlist::{fmt_sci, parse_netlist, Netlist};

use super::schedule::{PhaseDrive, PhaseName, PhaseSchedule};
use super::{CellConfig, CellMetrics};

/// Per-transistor threshold shifts (V), in netlist order:
/// mp1, mn1, mp2, mn2, ma1, ma2.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VtMismatch(pub [f64; 6]);

#[allow(clippy::too_many_arguments)]
fn sram_netlist(
    config: &CellConfig,
    p1: f64,
    p2: f64,
    node_ic: Option<(f64, f64)>,
    bl_ic: Option<f64>,
    mismatch: &VtMismatch,
    tstep: f64,
    tstop: f64,
) -> Netlist {
    let n = &config.nmos;
    let p = &config.pmos;
    let d = &mismatch.0;
    let ic = |v: Option<f64>| v.map(|x| format!(" IC={}", fmt_sci(x))).unwrap_or_default();
    let text = format!(
        "nv-sram cell\n\
         .model nv_nmos nmos vt={nvt} beta={nbeta} n={nn}\n\
         .model nv_pmos pmos vt={pvt} beta={pbeta} n={pn}\n\
         vup vup 0 DC 0\n\
         vplf plf 0 DC 0\n\
         vwl wl 0 DC 0\n\
         mp1 q qn vup vup nv_pmos DVT={d0}\n\
         mn1 q qn 0 0 nv_nmos W=2 DVT={d1}\n\
         mp2 qn q vup vup nv_pmos DVT={d2}\n\
         mn2 qn q 0 0 nv_nmos W=2 DVT={d3}\n\
         ma1 bl wl q 0 nv_nmos DVT={d4}\n\
         ma2 bln wl qn 0 nv_nmos DVT={d5}\n\
         f1 q plf VARIANT={var} AREA={area} SCALE={scale} P0={p1}\n\
         f2 qn plf VARIANT={var} AREA={area} SCALE={scale} P0={p2}\n\
         cq q 0 {cn}{icq}\n\
         cqn qn 0 {cn}{icqn}\n\
         cbl bl 0 20f{icbl}\n\
         cbln bln 0 20f{icbln}\n\
         .tran {tstep} {tstop}\n\
         .end\n",
        nvt = fmt_sci(n.v_t),
        nbeta = fmt_sci(n.beta),
        nn = fmt_sci(n.n_slope),
        pvt = fmt_sci(p.v_t),
        pbeta = fmt_sci(p.beta),
        pn = fmt_sci(p.n_slope),
        d0 = fmt_sci(d[0]),
        d1 = fmt_sci(d[1]),
        d2 = fmt_sci(d[2]),
        d3 = fmt_sci(d[3]),
        d4 = fmt_sci(d[4]),
        d5 = fmt_sci(d[5]),
        var = config.variant.name,
        area = fmt_sci(config.ftj_area),
        scale = fmt_sci(config.current_scale),
        p1 = fmt_sci(p1),
        p2 = fmt_sci(p2),
        cn = fmt_sci(config.c_node),
        icq = ic(node_ic.map(|x| x.0)),
        icqn = ic(node_ic.map(|x| x.1)),
        icbl = ic(bl_ic),
        icbln = ic(bl_ic),
        tstep = fmt_sci(tstep),
        tstop = fmt_sci(tstop),
    );
    parse_netlist(&text).expect("generated NV-SRAM netlist parses")
}

/// Builds the restore bench (stored pattern per `logic`), with the
/// develop/amplify schedule attached.
pub fn build_nvsram(config: &CellConfig, logic: bool, develop: f64) -> (Netlist, PhaseSchedule) {
    let (p1, p2) = stored_pattern(logic);
    let schedule = restore_schedule(config, develop);
    let total = schedule.total_duration();
    let mut netlist = sram_netlist(
        config,
        p1,
        p2,
        Some((0.0, 0.0)),
        None,
        &VtMismatch::default(),
        1e-6,
        total,
    );
    schedule.apply(&mut netlist).expect("schedule matches netlist");
    (netlist, schedule)
}

fn stored_pattern(logic: bool) -> (f64, f64) {
    if logic {
        (1.0, -1.0)
    } else {
        (-1.0, 1.0)
    }
}

#[derive(Debug, Clone)]
pub struct StoreResult {
    pub trace: Trace,
    pub p1: f64,
    pub p2: f64,
    /// Raised when either device ended only weakly programmed (|p| < 0.5).
    pub weak_programming: bool,
}

/// Stores the latched state into the FTJs with a bipolar plate sequence;
/// the cell stays powered and latched throughout.
pub fn run_nvsram_store(config: &CellConfig, logic: bool) -> Result<StoreResult, SolverError> {
    let (q0, qn0) = if logic { (config.v_dd, 0.0) } else { (0.0, config.v_dd) };
    // Worst case: the devices hold the inverse pattern before the store.
    let (want1, want2) = stored_pattern(logic);

    let mut schedule = PhaseSchedule::default();
    schedule.push(
        PhaseName::Store,
        23e-6,
        vec![
            ("vup", PhaseDrive::Level(config.v_dd)),
            (
                "vplf",
                PhaseDrive::PulseTrain {
                    base: 0.0,
                    amplitude: config.v_dd,
                    delay: 11e-6,
                    width: 10e-6,
                    period: 22e-6,
                    count: 1,
                },
            ),
        ],
    );
    // Plate low for the first 11 µs (high-node FTJ sets), then one V_dd
    // pulse (low-node FTJ resets).
    let total = schedule.total_duration();
    let mut netlist = sram_netlist(
        config,
        -want1,
        -want2,
        Some((q0, qn0)),
        None,
        &VtMismatch::default(),
        0.5e-6,
        total,
    );
    schedule.apply(&mut netlist).expect("schedule matches netlist");
    let result = transient(&netlist, total, &SolverConfig::default())?;
    let p1 = *result.trace.signal("p(f1)")?.last().expect("nonempty");
    let p2 = *result.trace.signal("p(f2)")?.last().expect("nonempty");
    Ok(StoreResult {
        trace: result.trace,
        p1,
        p2,
        weak_programming: p1.abs() < 0.5 || p2.abs() < 0.5,
    })
}

fn restore_schedule(config: &CellConfig, develop: f64) -> PhaseSchedule {
    let mut schedule = PhaseSchedule::default();
    // Plate held at the read level from t = 0; the nodes start discharged
    // (ICs), so no displacement edge ever reaches them.
    schedule.push(
        PhaseName::Restore,
        develop,
        vec![
            ("vplf", PhaseDrive::Level(config.v_read)),
            ("vup", PhaseDrive::Level(0.0)),
        ],
    );
    // Amplify with the plate still at the read level; the plate returns
    // to rest only once the latch has locked and can absorb the edge.
    schedule.push(
        PhaseName::Idle,
        10e-6,
        vec![(
            "vup",
            PhaseDrive::Ramp {
                to: config.v_dd,
                duration: 8e-6,
            },
        )],
    );
    schedule.push(
        PhaseName::Idle,
        10e-6,
        vec![("vplf", PhaseDrive::Level(0.0))],
    );
    schedule
}

/// Power-up restore: develop for `develop` seconds with V_up at 0, then
/// ramp V_up to V_dd and latch. `stored` is the polarization pattern the
/// store left behind.
pub fn run_nvsram_restore(
    config: &CellConfig,
    stored: (f64, f64),
    develop: f64,
    mismatch: &VtMismatch,
) -> Result<(CellMetrics, Trace), SolverError> {
    let schedule = restore_schedule(config, develop);
    let total = schedule.total_duration();
    let mut netlist = sram_netlist(
        config,
        stored.0,
        stored.1,
        Some((0.0, 0.0)),
        None,
        mismatch,
        1e-6,
        total,
    );
    schedule.apply(&mut netlist).expect("schedule matches netlist");
    let result = transient(&netlist, total, &SolverConfig::default())?;
    let trace = result.trace;

    let develop_end = develop;
    let dv_develop = trace.sample("v(q)", develop_end)? - trace.sample("v(qn)", develop_end)?;
    let q_end = trace.sample("v(q)", total)?;
    let qn_end = trace.sample("v(qn)", total)?;
    let swing = (q_end - qn_end).abs();
    let full_swing = swing > 0.9 * config.v_dd;
    let polarity_ok = (q_end > qn_end) == (stored.0 > stored.1);
    Ok((
        CellMetrics {
            dv_n1n2_at_t: dv_develop,
            di_pair: 0.0,
            i_sum_error: 0.0,
            restore_correct: Some(full_swing && polarity_ok),
            q_qn_swing: Some(swing),
        },
        trace,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub trials: usize,
    pub correct: usize,
    /// Indices of failed trials.
    pub failures: Vec<usize>,
}

/// Monte-Carlo restore under per-transistor threshold mismatch
/// N(0, sigma_vt). Trial `k` uses a ChaCha stream seeded with `k` and the
/// stored state alternates with the trial parity, so runs are
/// reproducible and thread-order independent.
pub fn run_nvsram_restore_mc(
    config: &CellConfig,
    trials: usize,
    sigma_vt: f64,
    develop: f64,
) -> Result<McReport, SolverError> {
    let results: Vec<Result<bool, SolverError>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial as u64);
            let normal = Normal::new(0.0, sigma_vt).expect("valid sigma");
            let mut mismatch = VtMismatch::default();
            for slot in &mut mismatch.0 {
                *slot = normal.sample(&mut rng);
            }
            let stored = stored_pattern(trial % 2 == 0);
            let (metrics, _) = run_nvsram_restore(config, stored, develop, &mismatch)?;
            Ok(metrics.restore_correct.unwrap_or(false))
        })
        .collect();
    let mut correct = 0;
    let mut failures = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        if r? {
            correct += 1;
        } else {
            failures.push(k);
        }
    }
    Ok(McReport {
        trials,
        correct,
        failures,
    })
}

/// Latched read: bitlines precharged to V_dd/2 float onto the wordline;
/// reports the bitline differential and whether the latch survived.
pub fn run_sram_read(
    config: &CellConfig,
    latched: bool,
) -> Result<(CellMetrics, Trace), SolverError> {
    let (q0, qn0) = if latched {
        (config.v_dd, 0.0)
    } else {
        (0.0, config.v_dd)
    };
    let (p1, p2) = stored_pattern(latched);
    let mut schedule = PhaseSchedule::default();
    schedule.push(
        PhaseName::SramRead,
        3e-6,
        vec![
            ("vup", PhaseDrive::Level(config.v_dd)),
            (
                "vwl",
                PhaseDrive::PulseTrain {
                    base: 0.0,
                    amplitude: config.v_dd,
                    delay: 0.5e-6,
                    width: 2e-6,
                    period: 3e-6,
                    count: 1,
                },
            ),
        ],
    );
    let total = schedule.total_duration();
    let mut netlist = sram_netlist(
        config,
        p1,
        p2,
        Some((q0, qn0)),
        Some(config.v_dd / 2.0),
        &VtMismatch::default(),
        20e-9,
        total,
    );
    schedule.apply(&mut netlist).expect("schedule matches netlist");
    let result = transient(&netlist, total, &SolverConfig::default())?;
    let trace = result.trace;

    let dv_bl = trace.sample("v(bl)", total)? - trace.sample("v(bln)", total)?;
    let q_end = trace.sample("v(q)", total)?;
    let qn_end = trace.sample("v(qn)", total)?;
    let non_destructive = (q_end > qn_end) == latched && (q_end - qn_end).abs() > 0.9 * config.v_dd;
    Ok((
        CellMetrics {
            dv_n1n2_at_t: dv_bl,
            di_pair: 0.0,
            i_sum_error: 0.0,
            restore_correct: Some(non_destructive),
            q_qn_swing: Some((q_end - qn_end).abs()),
        },
        trace,
    ))
}
