//! Canonical netlist text emission: `parse(serialize(n))` structurally
//! equals `n` for any netlist whose values carry at most 9 significant
//! digits (numbers are re-emitted in scientific notation at that width).

use std::fmt::Write;

use crate::engine::Polarity;

use super::types::{AnalysisDirective, Element, ElementKind, Netlist, Stimulus};

/// Scientific notation, 9 significant digits.
pub fn fmt_sci(x: f64) -> String {
    format!("{x:.8e}")
}

fn write_stimulus(out: &mut String, s: &Stimulus) {
    match s {
        Stimulus::Dc(v) => {
            let _ = write!(out, "DC {}", fmt_sci(*v));
        }
        Stimulus::Pwl(points) => {
            let _ = write!(out, "PWL(");
            for (i, (t, v)) in points.iter().enumerate() {
                if i > 0 {
                    let _ = write!(out, " ");
                }
                let _ = write!(out, "{} {}", fmt_sci(*t), fmt_sci(*v));
            }
            let _ = write!(out, ")");
        }
        Stimulus::Pulse {
            v0,
            v1,
            delay,
            rise,
            width,
            fall,
            period,
        } => {
            let _ = write!(
                out,
                "PULSE({} {} {} {} {} {} {})",
                fmt_sci(*v0),
                fmt_sci(*v1),
                fmt_sci(*delay),
                fmt_sci(*rise),
                fmt_sci(*width),
                fmt_sci(*fall),
                fmt_sci(*period)
            );
        }
        Stimulus::Triangle {
            amplitude,
            frequency,
            cycles,
            bipolar,
        } => {
            let _ = write!(
                out,
                "TRIANGLE({} {} {} {})",
                fmt_sci(*amplitude),
                fmt_sci(*frequency),
                cycles,
                if *bipolar { "BIPOLAR" } else { "UNIPOLAR" }
            );
        }
    }
}

fn write_element(out: &mut String, e: &Element) {
    let _ = write!(out, "{}", e.name);
    for node in &e.nodes {
        let _ = write!(out, " {node}");
    }
    match &e.kind {
        ElementKind::Vsource(s) => {
            let _ = write!(out, " ");
            write_stimulus(out, s);
        }
        ElementKind::Resistor(r) => {
            let _ = write!(out, " {}", fmt_sci(*r));
        }
        ElementKind::Capacitor { farads, ic } => {
            let _ = write!(out, " {}", fmt_sci(*farads));
            if let Some(ic) = ic {
                let _ = write!(out, " IC={}", fmt_sci(*ic));
            }
        }
        ElementKind::Mosfet { model, w, l, dvt } => {
            let _ = write!(out, " {model} W={} L={}", fmt_sci(*w), fmt_sci(*l));
            if *dvt != 0.0 {
                let _ = write!(out, " DVT={}", fmt_sci(*dvt));
            }
        }
        ElementKind::Ftj(card) => {
            let _ = write!(out, " VARIANT={} P0={}", card.variant, fmt_sci(card.p0));
            if let Some(area) = card.area {
                let _ = write!(out, " AREA={}", fmt_sci(area));
            }
            if card.scale != 1.0 {
                let _ = write!(out, " SCALE={}", fmt_sci(card.scale));
            }
            if let Some(n) = card.n_domains {
                let _ = write!(out, " N_DOMAINS={n}");
            }
            if !card.switching {
                let _ = write!(out, " SWITCHING=0");
            }
            if !card.tunneling {
                let _ = write!(out, " TUNNELING=0");
            }
        }
    }
    out.push('\n');
}

/// Emits canonical netlist text (title, models, elements, analyses, `.end`).
pub fn serialize_netlist(netlist: &Netlist) -> String {
    let mut out = String::new();
    out.push_str(&netlist.title);
    out.push('\n');
    for (name, m) in &netlist.models {
        let kind = match m.polarity {
            Polarity::N => "nmos",
            Polarity::P => "pmos",
        };
        let _ = writeln!(
            out,
            ".model {name} {kind} vt={} beta={} n={} ut={}",
            fmt_sci(m.v_t),
            fmt_sci(m.beta),
            fmt_sci(m.n_slope),
            fmt_sci(m.u_t)
        );
    }
    for e in &netlist.elements {
        write_element(&mut out, e);
    }
    for a in &netlist.analyses {
        match a {
            AnalysisDirective::Tran { tstep, tstop } => {
                let _ = writeln!(out, ".tran {} {}", fmt_sci(*tstep), fmt_sci(*tstop));
            }
            AnalysisDirective::DcSweep {
                source,
                start,
                stop,
                step,
            } => {
                let _ = writeln!(
                    out,
                    ".dc {source} {} {} {}",
                    fmt_sci(*start),
                    fmt_sci(*stop),
                    fmt_sci(*step)
                );
            }
        }
    }
    out.push_str(".end\n");
    out
}
