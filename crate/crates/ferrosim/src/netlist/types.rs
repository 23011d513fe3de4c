//! Netlist data model and stimulus evaluation.

use std::collections::BTreeMap;

use crate::engine::MosfetModel;
use crate::ftj::VariantName;

/// Independent-source waveform.
#[derive(Debug, Clone, PartialEq)]
pub enum Stimulus {
    Dc(f64),
    /// Piecewise-linear (t, V) with strictly increasing t; clamped to the
    /// endpoint values outside the covered range.
    Pwl(Vec<(f64, f64)>),
    /// v0 → v1 pulse: delay, rise, width, fall, period (period 0 = one-shot).
    Pulse {
        v0: f64,
        v1: f64,
        delay: f64,
        rise: f64,
        width: f64,
        fall: f64,
        period: f64,
    },
    /// Triangle burst starting at 0 V; bipolar visits ±amplitude per cycle.
    /// Holds 0 V after `cycles` full periods.
    Triangle {
        amplitude: f64,
        frequency: f64,
        cycles: u32,
        bipolar: bool,
    },
}

/// Evaluates a stimulus at time `t` ≥ 0 (V). Exact at breakpoints.
pub fn eval_stimulus(stimulus: &Stimulus, t: f64) -> f64 {
    match stimulus {
        Stimulus::Dc(v) => *v,
        Stimulus::Pwl(points) => {
            if points.is_empty() {
                return 0.0;
            }
            if t <= points[0].0 {
                return points[0].1;
            }
            if t >= points[points.len() - 1].0 {
                return points[points.len() - 1].1;
            }
            let k = points.partition_point(|&(tp, _)| tp <= t);
            let (t0, v0) = points[k - 1];
            let (t1, v1) = points[k];
            v0 + (v1 - v0) * (t - t0) / (t1 - t0)
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
            let mut tl = t - delay;
            if tl < 0.0 {
                return *v0;
            }
            if *period > 0.0 {
                tl %= period;
            }
            if tl < *rise {
                v0 + (v1 - v0) * tl / rise
            } else if tl < rise + width {
                *v1
            } else if tl < rise + width + fall {
                v1 + (v0 - v1) * (tl - rise - width) / fall
            } else {
                *v0
            }
        }
        Stimulus::Triangle {
            amplitude,
            frequency,
            cycles,
            bipolar,
        } => {
            let cycle = t * frequency;
            if cycle >= *cycles as f64 || cycle < 0.0 {
                return 0.0;
            }
            let phase = cycle.fract();
            if *bipolar {
                if phase < 0.25 {
                    4.0 * phase * amplitude
                } else if phase < 0.75 {
                    (2.0 - 4.0 * phase) * amplitude
                } else {
                    (4.0 * phase - 4.0) * amplitude
                }
            } else if phase < 0.5 {
                2.0 * phase * amplitude
            } else {
                (2.0 - 2.0 * phase) * amplitude
            }
        }
    }
}

impl Stimulus {
    /// Time points where the waveform has corners; the transient solver
    /// never steps across one.
    pub fn breakpoints(&self, tstop: f64) -> Vec<f64> {
        let mut out = Vec::new();
        match self {
            Stimulus::Dc(_) => {}
            Stimulus::Pwl(points) => {
                out.extend(points.iter().map(|&(t, _)| t).filter(|&t| t <= tstop));
            }
            Stimulus::Pulse {
                delay,
                rise,
                width,
                fall,
                period,
                ..
            } => {
                let mut start = *delay;
                loop {
                    for c in [0.0, *rise, rise + width, rise + width + fall] {
                        let t = start + c;
                        if t <= tstop {
                            out.push(t);
                        }
                    }
                    if *period <= 0.0 {
                        break;
                    }
                    start += period;
                    if start > tstop {
                        break;
                    }
                }
            }
            Stimulus::Triangle {
                frequency, cycles, ..
            } => {
                let quarter = 0.25 / frequency;
                let n_quarters = 4 * *cycles as u64;
                for k in 0..=n_quarters {
                    let t = k as f64 * quarter;
                    if t <= tstop {
                        out.push(t);
                    }
                }
            }
        }
        out
    }
}

/// An FTJ element card: preset variant plus inline overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct FtjCard {
    pub variant: VariantName,
    /// Initial normalized polarization in [−1, 1].
    pub p0: f64,
    /// Device-area override (cm²).
    pub area: Option<f64>,
    /// Current-density scale factor applied to the tunneling prefactors.
    pub scale: f64,
    /// Domain-count override.
    pub n_domains: Option<usize>,
    pub switching: bool,
    pub tunneling: bool,
}

impl FtjCard {
    pub fn variant(name: VariantName) -> Self {
        Self {
            variant: name,
            p0: -1.0,
            area: None,
            scale: 1.0,
            n_domains: None,
            switching: true,
            tunneling: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElementKind {
    Vsource(Stimulus),
    Resistor(f64),
    Capacitor { farads: f64, ic: Option<f64> },
    Mosfet { model: String, w: f64, l: f64, dvt: f64 },
    Ftj(FtjCard),
}

/// One netlist element: canonical lowercase name, terminal node names
/// (2 for V/R/C/FTJ, 4 for MOSFET: d g s b), and the kind-specific data.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub name: String,
    pub nodes: Vec<String>,
    pub kind: ElementKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisDirective {
    Tran { tstep: f64, tstop: f64 },
    DcSweep { source: String, start: f64, stop: f64, step: f64 },
}

/// A parsed, validated circuit description.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Netlist {
    pub title: String,
    pub elements: Vec<Element>,
    pub models: BTreeMap<String, MosfetModel>,
    pub analyses: Vec<AnalysisDirective>,
}

impl Netlist {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn element(&self, name: &str) -> Option<&Element> {
        let lname = name.to_ascii_lowercase();
        self.elements.iter().find(|e| e.name == lname)
    }

    pub fn element_mut(&mut self, name: &str) -> Option<&mut Element> {
        let lname = name.to_ascii_lowercase();
        self.elements.iter_mut().find(|e| e.name == lname)
    }

    /// Replaces the stimulus of voltage source `name`.
    pub fn set_stimulus(&mut self, name: &str, stimulus: Stimulus) -> bool {
        if let Some(Element {
            kind: ElementKind::Vsource(s),
            ..
        }) = self.element_mut(name)
        {
            *s = stimulus;
            true
        } else {
            false
        }
    }
}
