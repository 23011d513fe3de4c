//! Named operation phases compiled into per-source piecewise-linear
//! stimuli.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{ElementKind, Netlist, Stimulus};

/// Edge time used for every level transition and pulse flank (s).
pub const EDGE_TIME: f64 = 50e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseName {
    Write,
    Erase,
    PreCharge,
    Read,
    Store,
    Restore,
    SramRead,
    Idle,
}

/// Drive of one source during one phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PhaseDrive {
    /// Hold a DC level for the phase (reached through one edge ramp).
    Level(f64),
    /// A train of flat-top pulses riding on `base`.
    PulseTrain {
        base: f64,
        amplitude: f64,
        delay: f64,
        width: f64,
        period: f64,
        count: u32,
    },
    /// Linear ramp to `to` over `duration`, emitted as many PWL knots so
    /// the solver resolves the crossing dynamics (regenerative latches
    /// must not be stepped over in one implicit stride).
    Ramp { to: f64, duration: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub name: PhaseName,
    pub duration: f64,
    /// (source element name, drive); sources not mentioned hold their
    /// previous level.
    pub drives: Vec<(String, PhaseDrive)>,
}

/// Ordered operation phases mapped to per-source stimuli.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseSchedule {
    pub phases: Vec<Phase>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ScheduleError {
    #[error("phase `{0:?}` has non-positive duration")]
    BadDuration(PhaseName),
    #[error("schedule drives `{0}`, which is not a voltage source in the netlist")]
    UnknownSource(String),
}

impl PhaseSchedule {
    pub fn push(&mut self, name: PhaseName, duration: f64, drives: Vec<(&str, PhaseDrive)>) {
        self.phases.push(Phase {
            name,
            duration,
            drives: drives
                .into_iter()
                .map(|(s, d)| (s.to_string(), d))
                .collect(),
        });
    }

    pub fn total_duration(&self) -> f64 {
        self.phases.iter().map(|p| p.duration).sum()
    }

    /// Time window of the first phase with the given name.
    pub fn window(&self, name: PhaseName) -> Option<(f64, f64)> {
        let mut t = 0.0;
        for phase in &self.phases {
            if phase.name == name {
                return Some((t, t + phase.duration));
            }
            t += phase.duration;
        }
        None
    }

    pub fn validate(&self, netlist: &Netlist) -> Result<(), ScheduleError> {
        for phase in &self.phases {
            if !(phase.duration > 0.0) {
                return Err(ScheduleError::BadDuration(phase.name));
            }
            for (source, _) in &phase.drives {
                match netlist.element(source) {
                    Some(e) if matches!(e.kind, ElementKind::Vsource(_)) => {}
                    _ => return Err(ScheduleError::UnknownSource(source.clone())),
                }
            }
        }
        Ok(())
    }

    /// Compiles the schedule to one PWL stimulus per driven source.
    pub fn compile(&self) -> Vec<(String, Stimulus)> {
        let mut sources: Vec<String> = Vec::new();
        for phase in &self.phases {
            for (s, _) in &phase.drives {
                if !sources.contains(s) {
                    sources.push(s.clone());
                }
            }
        }
        sources
            .iter()
            .map(|source| (source.clone(), self.compile_source(source)))
            .collect()
    }

    fn compile_source(&self, source: &str) -> Stimulus {
        // The source starts at its first-phase level: benches assume the
        // operating point already reflects the opening drive, so no edge
        // fires at t = 0.
        let initial = self
            .phases
            .first()
            .and_then(|p| p.drives.iter().find(|(s, _)| s == source))
            .map(|(_, d)| match d {
                PhaseDrive::Level(v) => *v,
                PhaseDrive::PulseTrain { base, .. } => *base,
                PhaseDrive::Ramp { .. } => 0.0,
            })
            .unwrap_or(0.0);
        let mut points: Vec<(f64, f64)> = vec![(0.0, initial)];
        let mut level = initial;
        let mut t0 = 0.0;
        let push = |points: &mut Vec<(f64, f64)>, t: f64, v: f64| {
            if let Some(&(tp, vp)) = points.last() {
                if t <= tp {
                    if v != vp {
                        points.push((tp + EDGE_TIME * 1e-3, v));
                    }
                    return;
                }
            }
            points.push((t, v));
        };
        for phase in &self.phases {
            let drive = phase.drives.iter().find(|(s, _)| s == source).map(|(_, d)| d);
            match drive {
                Some(PhaseDrive::Level(v)) => {
                    if *v != level {
                        push(&mut points, t0, level);
                        push(&mut points, t0 + EDGE_TIME, *v);
                        level = *v;
                    }
                }
                Some(PhaseDrive::Ramp { to, duration }) => {
                    // Knots every few tens of mV: the solver never strides
                    // across more than one knot, so a regenerative latch
                    // tracks its seeded branch instead of snapping to the
                    // metastable root.
                    let knots = 256usize;
                    let from = level;
                    push(&mut points, t0, from);
                    for k in 1..=knots {
                        let f = k as f64 / knots as f64;
                        push(&mut points, t0 + f * duration, from + f * (to - from));
                    }
                    level = *to;
                }
                Some(PhaseDrive::PulseTrain {
                    base,
                    amplitude,
                    delay,
                    width,
                    period,
                    count,
                }) => {
                    if *base != level {
                        push(&mut points, t0, level);
                        push(&mut points, t0 + EDGE_TIME, *base);
                        level = *base;
                    }
                    for k in 0..*count {
                        let start = t0 + delay + k as f64 * period;
                        if start + width + 2.0 * EDGE_TIME > t0 + phase.duration {
                            break;
                        }
                        push(&mut points, start, *base);
                        push(&mut points, start + EDGE_TIME, base + amplitude);
                        push(&mut points, start + EDGE_TIME + width, base + amplitude);
                        push(&mut points, start + 2.0 * EDGE_TIME + width, *base);
                    }
                }
                None => {}
            }
            t0 += phase.duration;
        }
        push(&mut points, t0, level);
        Stimulus::Pwl(points)
    }

    /// Applies the compiled stimuli onto the netlist's sources.
    pub fn apply(&self, netlist: &mut Netlist) -> Result<(), ScheduleError> {
        self.validate(netlist)?;
        for (source, stimulus) in self.compile() {
            netlist.set_stimulus(&source, stimulus);
        }
        Ok(())
    }
}
