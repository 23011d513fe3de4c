//! 2T1C read cell: access transistor, FTJ, sensing node, read transistor.
//!
//! The FTJ hangs between the access transistor (BL side) and the internal
//! node n, which carries the explicit node capacitor c_n (far terminal on
//! the plate line PL) and the read-transistor gate. During read the BL
//! step is compensated by an opposite step on PL sized to cancel the
//! displacement kick the FTJ self-capacitance would otherwise couple onto
//! the floating node.

use crate::engine::{transient, SolverConfig, TransientResult};
use crate::netlist::{fmt_sci, parse_netlist, Netlist};

use super::schedule::{PhaseDrive, PhaseName, PhaseSchedule};
use super::CellConfig;

fn cell_netlist(config: &CellConfig, p0: f64, tstep: f64, tstop: f64) -> Netlist {
    let m = &config.nmos;
    let text = format!(
        "2t1c ftj read cell\n\
         .model cell_nmos nmos vt={vt} beta={beta} n={n}\n\
         vbl bl 0 DC 0\n\
         vwl wl 0 DC 0\n\
         vpl pl 0 DC 0\n\
         vrd rail 0 DC 1\n\
         vsns rail sl DC 0\n\
         macc bl wl ft 0 cell_nmos\n\
         f1 ft n VARIANT={var} AREA={area} SCALE={scale} P0={p0}\n\
         cn n pl {cn}\n\
         mrd sl n 0 0 cell_nmos\n\
         .tran {tstep} {tstop}\n\
         .end\n",
        vt = fmt_sci(m.v_t),
        beta = fmt_sci(m.beta),
        n = fmt_sci(m.n_slope),
        var = config.variant.name,
        area = fmt_sci(config.t2c_ftj_area),
        scale = fmt_sci(config.current_scale),
        p0 = fmt_sci(p0),
        cn = fmt_sci(config.c_node),
        tstep = fmt_sci(tstep),
        tstop = fmt_sci(tstop),
    );
    parse_netlist(&text).expect("generated 2T1C netlist parses")
}

/// PL compensation level cancelling the BL read edge coupled through the
/// FTJ background capacitance.
fn pl_compensation(config: &CellConfig) -> f64 {
    let c_ftj = config.t2c_ftj_area * config.variant.stack.background_capacitance_per_area();
    -config.v_read * c_ftj / config.c_node
}

/// Builds the 2T1C bench: write (access on, BL/PL pulse), an idle gap, and
/// a compensated read during which n floats and integrates the FTJ
/// current.
pub fn build_2t1c(config: &CellConfig) -> (Netlist, PhaseSchedule) {
    let read_time = 100e-6;
    let mut schedule = PhaseSchedule::default();
    schedule.push(
        PhaseName::Write,
        14e-6,
        vec![
            ("vwl", PhaseDrive::Level(config.v_dd)),
            (
                "vbl",
                PhaseDrive::PulseTrain {
                    base: 0.0,
                    amplitude: 4.5,
                    delay: 1e-6,
                    width: 10e-6,
                    period: 12e-6,
                    count: 1,
                },
            ),
            ("vpl", PhaseDrive::Level(0.0)),
        ],
    );
    schedule.push(
        PhaseName::Idle,
        config.write_gap,
        vec![("vwl", PhaseDrive::Level(0.0)), ("vbl", PhaseDrive::Level(0.0))],
    );
    schedule.push(
        PhaseName::Read,
        read_time,
        vec![
            ("vwl", PhaseDrive::Level(config.v_dd)),
            ("vbl", PhaseDrive::Level(config.v_read)),
            ("vpl", PhaseDrive::Level(pl_compensation(config))),
        ],
    );
    let total = schedule.total_duration();
    let mut netlist = cell_netlist(config, -1.0, 0.2e-6, total);
    schedule.apply(&mut netlist).expect("schedule matches netlist");
    (netlist, schedule)
}

/// Runs only the compensated read phase on a cell whose FTJ starts in the
/// given state (`p0` = +1 for LRS, −1 for HRS). Returns the transient and
/// the read window.
pub fn run_2t1c_read(
    config: &CellConfig,
    p0: f64,
    read_time: f64,
) -> Result<(TransientResult, (f64, f64)), crate::engine::SolverError> {
    let mut schedule = PhaseSchedule::default();
    // Rest phase first: the node must start discharged so the read edge
    // (and its PL compensation) actually fires.
    schedule.push(
        PhaseName::Idle,
        1e-6,
        vec![
            ("vwl", PhaseDrive::Level(config.v_dd)),
            ("vbl", PhaseDrive::Level(0.0)),
            ("vpl", PhaseDrive::Level(0.0)),
        ],
    );
    schedule.push(
        PhaseName::Read,
        read_time,
        vec![
            ("vbl", PhaseDrive::Level(config.v_read)),
            ("vpl", PhaseDrive::Level(pl_compensation(config))),
        ],
    );
    let total = schedule.total_duration();
    let mut netlist = cell_netlist(config, p0, read_time / 500.0, total);
    schedule.apply(&mut netlist).expect("schedule matches netlist");
    let result = transient(&netlist, total, &SolverConfig::default())?;
    let window = schedule.window(PhaseName::Read).expect("read phase");
    Ok((result, window))
}
