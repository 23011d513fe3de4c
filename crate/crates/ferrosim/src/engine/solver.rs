//! Modified nodal analysis with Newton–Raphson per timestep.
//!
//! Unknowns are the non-ground node voltages plus one branch current per
//! voltage source (per IC-holding capacitor too during the operating
//! point). Each Newton iteration assembles the KCL residual vector and its
//! Jacobian from element stamps and solves the dense linear system; a
//! timestep is accepted only when the voltage update and the KCL residual
//! meet their tolerances, and is rejected and halved when Newton fails or
//! any FTJ would move its polarization by more than the per-step limit.
//! Rejected trials never touch device state.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::ftj::{builtin_variant, DeviceVariant, FtjDevice, FtjOptions, FtjStepPlan};
use crate::netlist::{eval_stimulus, AnalysisDirective, ElementKind, Netlist, Stimulus};

use super::config::{Integration, SolverConfig};
use super::mosfet::{mosfet_current_derivs, MosfetModel};
use super::trace::Trace;

/// Largest voltage update applied per Newton iteration (V); larger solves
/// are damped to keep the exponential device laws in range.
const V_LIMIT: f64 = 1.0;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("cannot simulate netlist: {0}")]
    Compile(String),
    #[error("singular MNA system at t = {t:.6e} s")]
    Singular { t: f64 },
    #[error("Newton did not converge at t = {t:.6e} s (worst node `{node}`, residual {residual:.3e} A)")]
    NonConvergence { t: f64, node: String, residual: f64 },
    #[error("timestep underflow at t = {t:.6e} s near device `{device}`")]
    DtUnderflow { t: f64, device: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveStats {
    pub steps: usize,
    pub rejected: usize,
    pub newton_iters: usize,
    /// Worst KCL node residual over all accepted steps (A).
    pub max_kcl_residual: f64,
}

#[derive(Debug, Clone)]
pub struct TransientResult {
    pub trace: Trace,
    pub stats: SolveStats,
}

enum ElemKind {
    Source {
        stim: Stimulus,
        branch: usize,
    },
    Res {
        g: f64,
    },
    Cap {
        c: f64,
        ic: Option<f64>,
        op_branch: Option<usize>,
        v_prev: f64,
        i_prev: f64,
    },
    Mos {
        model: MosfetModel,
        beta_eff: f64,
        dvt: f64,
    },
    Ftj {
        device: FtjDevice,
        v_prev: f64,
        i_last: f64,
    },
}

struct Elem {
    name: String,
    nodes: Vec<Option<usize>>,
    kind: ElemKind,
}

struct Circuit {
    node_names: Vec<String>,
    elements: Vec<Elem>,
    n_nodes: usize,
    /// Unknown count for transient solves (nodes + source branches).
    n_tr: usize,
    /// Unknown count for operating-point solves (adds IC-cap branches).
    n_op: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    /// DC operating point at time `t`: capacitors open (or pinned to their
    /// IC), FTJs contribute tunneling only.
    Op,
    /// One implicit transient step of size `dt`.
    Tr { dt: f64 },
}

fn compile(netlist: &Netlist, variants: &[DeviceVariant]) -> Result<Circuit, SolverError> {
    let mut node_names: Vec<String> = Vec::new();
    let mut node_index: HashMap<String, usize> = HashMap::new();
    let mut resolve = |name: &str, node_names: &mut Vec<String>| -> Option<usize> {
        if name == "0" {
            return None;
        }
        if let Some(&i) = node_index.get(name) {
            return Some(i);
        }
        let i = node_names.len();
        node_names.push(name.to_string());
        node_index.insert(name.to_string(), i);
        Some(i)
    };

    let mut elements = Vec::new();
    let mut n_branches = 0usize;
    for e in &netlist.elements {
        let nodes: Vec<Option<usize>> = e
            .nodes
            .iter()
            .map(|n| resolve(n, &mut node_names))
            .collect();
        let kind = match &e.kind {
            ElementKind::Vsource(stim) => {
                let branch = n_branches;
                n_branches += 1;
                ElemKind::Source {
                    stim: stim.clone(),
                    branch,
                }
            }
            ElementKind::Resistor(r) => {
                if *r == 0.0 {
                    return Err(SolverError::Compile(format!("resistor `{}` is zero", e.name)));
                }
                ElemKind::Res { g: 1.0 / r }
            }
            ElementKind::Capacitor { farads, ic } => ElemKind::Cap {
                c: *farads,
                ic: *ic,
                op_branch: None,
                v_prev: 0.0,
                i_prev: 0.0,
            },
            ElementKind::Mosfet { model, w, l, dvt } => {
                let card = netlist
                    .models
                    .get(model)
                    .ok_or_else(|| SolverError::Compile(format!("unresolved model `{model}`")))?;
                ElemKind::Mos {
                    model: *card,
                    beta_eff: card.beta * w / l,
                    dvt: *dvt,
                }
            }
            ElementKind::Ftj(card) => {
                let variant = variants
                    .iter()
                    .find(|v| v.name == card.variant)
                    .cloned()
                    .unwrap_or_else(|| builtin_variant(card.variant));
                let mut stack = variant.stack;
                if let Some(area) = card.area {
                    stack.area = area;
                }
                if let Some(n) = card.n_domains {
                    stack.nls.n_domains = n;
                }
                stack.tun.j_on_amp *= card.scale;
                stack.tun.j_off_amp *= card.scale;
                stack
                    .validate()
                    .map_err(|err| SolverError::Compile(format!("FTJ `{}`: {err}", e.name)))?;
                let device = FtjDevice::new(stack, card.p0).with_options(FtjOptions {
                    switching: card.switching,
                    tunneling: card.tunneling,
                    displacement: true,
                });
                ElemKind::Ftj {
                    device,
                    v_prev: 0.0,
                    i_last: 0.0,
                }
            }
        };
        elements.push(Elem {
            name: e.name.clone(),
            nodes,
            kind,
        });
    }

    let n_nodes = node_names.len();
    let n_tr = n_nodes + n_branches;
    // IC capacitors get a constraint branch during the operating point.
    let mut n_op = n_tr;
    for e in &mut elements {
        if let ElemKind::Cap { ic: Some(_), op_branch, .. } = &mut e.kind {
            *op_branch = Some(n_op - n_nodes);
            n_op += 1;
        }
    }
    Ok(Circuit {
        node_names,
        elements,
        n_nodes,
        n_tr,
        n_op,
    })
}

/// First-order companion model of an FTJ around `v_guess`: the numeric
/// small-signal conductance (central difference with perturbation
/// `max(1e-6 V, 1e-6·|v|)`, entering state held fixed) and the equivalent
/// current source `i(v_guess) − G·v_guess`. The switching charge of the
/// step is planned from the entry voltage `v_prev`, so the linearized
/// current is smooth in `v_guess` even across domain flips.
pub fn ftj_companion(device: &FtjDevice, v_prev: f64, v_guess: f64, dt: f64) -> (f64, f64) {
    let plan = device.plan_step(v_prev, dt);
    let h = (1e-6f64).max(1e-6 * v_guess.abs());
    let eval = |v: f64| device.plan_current(&plan, v, v_prev, dt);
    let g = (eval(v_guess + h) - eval(v_guess - h)) / (2.0 * h);
    let i = eval(v_guess);
    (g, i - g * v_guess)
}

impl Circuit {
    fn v_at(x: &DVector<f64>, node: Option<usize>) -> f64 {
        node.map_or(0.0, |i| x[i])
    }

    /// Assembles the residual f(x) and Jacobian J(x) for the given mode.
    fn assemble(
        &self,
        x: &DVector<f64>,
        t: f64,
        mode: Mode,
        integration: Integration,
        gmin: f64,
    ) -> (DVector<f64>, DMatrix<f64>) {
        let n = match mode {
            Mode::Op => self.n_op,
            Mode::Tr { .. } => self.n_tr,
        };
        let mut f = DVector::zeros(n);
        let mut j = DMatrix::zeros(n, n);

        for i in 0..self.n_nodes {
            f[i] += gmin * x[i];
            j[(i, i)] += gmin;
        }

        let add_pair = |f: &mut DVector<f64>,
                            j: &mut DMatrix<f64>,
                            a: Option<usize>,
                            b: Option<usize>,
                            current: f64,
                            g: f64| {
            if let Some(ia) = a {
                f[ia] += current;
                j[(ia, ia)] += g;
                if let Some(ib) = b {
                    j[(ia, ib)] -= g;
                }
            }
            if let Some(ib) = b {
                f[ib] -= current;
                j[(ib, ib)] += g;
                if let Some(ia) = a {
                    j[(ib, ia)] -= g;
                }
            }
        };

        for e in &self.elements {
            match &e.kind {
                ElemKind::Source { stim, branch } => {
                    let (a, b) = (e.nodes[0], e.nodes[1]);
                    let row = self.n_nodes + branch;
                    let i_br = x[row];
                    if let Some(ia) = a {
                        f[ia] += i_br;
                        j[(ia, row)] += 1.0;
                        j[(row, ia)] += 1.0;
                    }
                    if let Some(ib) = b {
                        f[ib] -= i_br;
                        j[(ib, row)] -= 1.0;
                        j[(row, ib)] -= 1.0;
                    }
                    f[row] += Self::v_at(x, a) - Self::v_at(x, b) - eval_stimulus(stim, t);
                }
                ElemKind::Res { g } => {
                    let (a, b) = (e.nodes[0], e.nodes[1]);
                    let v = Self::v_at(x, a) - Self::v_at(x, b);
                    add_pair(&mut f, &mut j, a, b, g * v, *g);
                }
                ElemKind::Cap {
                    c,
                    ic,
                    op_branch,
                    v_prev,
                    i_prev,
                } => {
                    let (a, b) = (e.nodes[0], e.nodes[1]);
                    match mode {
                        Mode::Op => {
                            if let (Some(ic), Some(br)) = (ic, op_branch) {
                                let row = self.n_nodes + br;
                                let i_br = x[row];
                                if let Some(ia) = a {
                                    f[ia] += i_br;
                                    j[(ia, row)] += 1.0;
                                    j[(row, ia)] += 1.0;
                                }
                                if let Some(ib) = b {
                                    f[ib] -= i_br;
                                    j[(ib, row)] -= 1.0;
                                    j[(row, ib)] -= 1.0;
                                }
                                f[row] += Self::v_at(x, a) - Self::v_at(x, b) - ic;
                            }
                            // Without an IC the capacitor is open at DC.
                        }
                        Mode::Tr { dt } => {
                            let v = Self::v_at(x, a) - Self::v_at(x, b);
                            let (geq, i) = match integration {
                                Integration::BackwardEuler => {
                                    let geq = c / dt;
                                    (geq, geq * (v - v_prev))
                                }
                                Integration::Trapezoidal => {
                                    let geq = 2.0 * c / dt;
                                    (geq, geq * (v - v_prev) - i_prev)
                                }
                            };
                            add_pair(&mut f, &mut j, a, b, i, geq);
                        }
                    }
                }
                ElemKind::Mos {
                    model,
                    beta_eff,
                    dvt,
                } => {
                    let (d, g, s) = (e.nodes[0], e.nodes[1], e.nodes[2]);
                    let vgs = Self::v_at(x, g) - Self::v_at(x, s);
                    let vds = Self::v_at(x, d) - Self::v_at(x, s);
                    let (i_d, gm, gds) = mosfet_current_derivs(model, *beta_eff, *dvt, vgs, vds);
                    if let Some(id) = d {
                        f[id] += i_d;
                        j[(id, id)] += gds;
                        if let Some(ig) = g {
                            j[(id, ig)] += gm;
                        }
                        if let Some(is) = s {
                            j[(id, is)] -= gm + gds;
                        }
                    }
                    if let Some(is) = s {
                        f[is] -= i_d;
                        j[(is, is)] += gm + gds;
                        if let Some(id) = d {
                            j[(is, id)] -= gds;
                        }
                        if let Some(ig) = g {
                            j[(is, ig)] -= gm;
                        }
                    }
                }
                ElemKind::Ftj { device, v_prev, .. } => {
                    let (a, b) = (e.nodes[0], e.nodes[1]);
                    let v = Self::v_at(x, a) - Self::v_at(x, b);
                    let (i, g) = match mode {
                        Mode::Op => {
                            // Static: polarization frozen, tunneling only.
                            let h = (1e-6f64).max(1e-6 * v.abs());
                            let stat = |vv: f64| {
                                device.stack.area
                                    * crate::ftj::tunneling_current_density(
                                        &device.stack,
                                        vv,
                                        device.p(),
                                    )
                            };
                            let i = if device.opts.tunneling { stat(v) } else { 0.0 };
                            let g = if device.opts.tunneling {
                                (stat(v + h) - stat(v - h)) / (2.0 * h)
                            } else {
                                0.0
                            };
                            (i, g)
                        }
                        Mode::Tr { dt } => {
                            let (g, i_eq) = ftj_companion(device, *v_prev, v, dt);
                            (i_eq + g * v, g)
                        }
                    };
                    add_pair(&mut f, &mut j, a, b, i, g);
                }
            }
        }
        (f, j)
    }

    fn worst_node(&self, f: &DVector<f64>) -> (String, f64) {
        let mut worst = 0usize;
        let mut max = 0.0f64;
        for i in 0..self.n_nodes {
            if f[i].abs() > max {
                max = f[i].abs();
                worst = i;
            }
        }
        (
            self.node_names.get(worst).cloned().unwrap_or_else(|| "0".into()),
            max,
        )
    }

    /// Newton iteration at fixed time/step. Returns the solution and the
    /// final KCL residual.
    fn newton(
        &self,
        x0: &DVector<f64>,
        t: f64,
        mode: Mode,
        config: &SolverConfig,
        gmin: f64,
        iters_used: &mut usize,
    ) -> Result<(DVector<f64>, f64), SolverError> {
        let mut x = x0.clone();
        for _ in 0..config.max_newton_iters {
            *iters_used += 1;
            let (f, j) = self.assemble(&x, t, mode, config.integration, gmin);
            let lu = j.lu();
            let dx = match lu.solve(&(-&f)) {
                Some(dx) => dx,
                None => return Err(SolverError::Singular { t }),
            };
            let mut max_dv = 0.0f64;
            for i in 0..self.n_nodes {
                max_dv = max_dv.max(dx[i].abs());
            }
            let factor = if max_dv > V_LIMIT { V_LIMIT / max_dv } else { 1.0 };
            x += factor * &dx;
            if factor < 1.0 {
                continue;
            }
            let mut converged = true;
            for i in 0..self.n_nodes {
                if dx[i].abs() > config.reltol * x[i].abs() + config.abstol_v {
                    converged = false;
                    break;
                }
            }
            if !converged {
                continue;
            }
            let (f2, _) = self.assemble(&x, t, mode, config.integration, gmin);
            let (_, residual) = self.worst_node(&f2);
            if residual < config.abstol_i {
                return Ok((x, residual));
            }
        }
        let (f, _) = self.assemble(&x, t, mode, config.integration, gmin);
        let (node, residual) = self.worst_node(&f);
        Err(SolverError::NonConvergence { t, node, residual })
    }

    /// Operating-point solve with gmin stepping fallback: on failure the
    /// leak conductance starts at 1e-3 S and is reduced tenfold per stage
    /// down to the configured target.
    fn solve_op(
        &self,
        t: f64,
        config: &SolverConfig,
        iters: &mut usize,
    ) -> Result<DVector<f64>, SolverError> {
        let x0 = DVector::zeros(self.n_op);
        match self.newton(&x0, t, Mode::Op, config, config.gmin, iters) {
            Ok((x, _)) => Ok(x),
            Err(first_err) => {
                let mut x = x0;
                let mut gmin = 1e-3;
                while gmin > config.gmin {
                    x = self
                        .newton(&x, t, Mode::Op, config, gmin, iters)
                        .map_err(|_| match &first_err {
                            SolverError::NonConvergence { t, node, residual } => {
                                SolverError::NonConvergence {
                                    t: *t,
                                    node: node.clone(),
                                    residual: *residual,
                                }
                            }
                            _ => SolverError::Singular { t },
                        })?
                        .0;
                    gmin /= 10.0;
                }
                Ok(self
                    .newton(&x, t, Mode::Op, config, config.gmin, iters)?
                    .0)
            }
        }
    }

    fn signal_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.node_names.iter().map(|n| format!("v({n})")).collect();
        for e in &self.elements {
            if matches!(e.kind, ElemKind::Source { .. }) {
                names.push(format!("i({})", e.name));
            }
        }
        for e in &self.elements {
            if matches!(e.kind, ElemKind::Ftj { .. }) {
                names.push(format!("i({})", e.name));
                names.push(format!("p({})", e.name));
            }
        }
        names
    }

    fn record_row(&self, x: &DVector<f64>) -> Vec<f64> {
        let mut row: Vec<f64> = (0..self.n_nodes).map(|i| x[i]).collect();
        for e in &self.elements {
            if let ElemKind::Source { branch, .. } = &e.kind {
                row.push(x[self.n_nodes + branch]);
            }
        }
        for e in &self.elements {
            if let ElemKind::Ftj { device, i_last, .. } = &e.kind {
                row.push(*i_last);
                row.push(device.p());
            }
        }
        row
    }
}

fn tran_tstep(netlist: &Netlist, tstop: f64) -> f64 {
    netlist
        .analyses
        .iter()
        .find_map(|a| match a {
            AnalysisDirective::Tran { tstep, .. } => Some(*tstep),
            _ => None,
        })
        .unwrap_or(tstop / 1000.0)
}

fn breakpoints(netlist: &Netlist, tstop: f64) -> Vec<f64> {
    let mut bps = vec![tstop];
    for e in &netlist.elements {
        if let ElementKind::Vsource(stim) = &e.kind {
            bps.extend(stim.breakpoints(tstop));
        }
    }
    bps.retain(|&t| t > 0.0 && t <= tstop);
    bps.sort_by(f64::total_cmp);
    bps.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * tstop);
    bps
}

/// DC operating point: node voltages with every source at its t = 0 value.
pub fn dc_operating_point(
    netlist: &Netlist,
    config: &SolverConfig,
) -> Result<BTreeMap<String, f64>, SolverError> {
    dc_operating_point_with_variants(netlist, config, &[])
}

pub fn dc_operating_point_with_variants(
    netlist: &Netlist,
    config: &SolverConfig,
    variants: &[DeviceVariant],
) -> Result<BTreeMap<String, f64>, SolverError> {
    config.validate().map_err(SolverError::Compile)?;
    let circuit = compile(netlist, variants)?;
    let mut iters = 0usize;
    let x = circuit.solve_op(0.0, config, &mut iters)?;
    Ok(circuit
        .node_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), x[i]))
        .collect())
}

/// Transient analysis to `tstop` with adaptive implicit stepping.
pub fn transient(
    netlist: &Netlist,
    tstop: f64,
    config: &SolverConfig,
) -> Result<TransientResult, SolverError> {
    transient_with_variants(netlist, tstop, config, &[])
}

pub fn transient_with_variants(
    netlist: &Netlist,
    tstop: f64,
    config: &SolverConfig,
    variants: &[DeviceVariant],
) -> Result<TransientResult, SolverError> {
    config.validate().map_err(SolverError::Compile)?;
    if !(tstop > 0.0) {
        return Err(SolverError::Compile("tstop must be > 0".into()));
    }
    let mut circuit = compile(netlist, variants)?;
    let tstep = tran_tstep(netlist, tstop);
    let dt_max = config.dt_max.unwrap_or(tstep);
    let dt_init = config.dt_init.unwrap_or(dt_max).min(dt_max);
    let dt_min = config.dt_min.unwrap_or(1e-12 * tstop);
    let bps = breakpoints(netlist, tstop);

    let mut stats = SolveStats::default();

    // Initial condition: operating point at t = 0.
    let x_op = circuit.solve_op(0.0, config, &mut stats.newton_iters)?;
    let mut x = DVector::zeros(circuit.n_tr);
    for i in 0..circuit.n_tr.min(x_op.len()) {
        x[i] = x_op[i];
    }
    // Devices pick up their initial branch voltages.
    for e in &mut circuit.elements {
        let va = Circuit::v_at(&x_op, e.nodes[0]);
        let vb = Circuit::v_at(&x_op, e.nodes.get(1).copied().flatten());
        match &mut e.kind {
            ElemKind::Cap { v_prev, i_prev, .. } => {
                *v_prev = va - vb;
                *i_prev = 0.0;
            }
            ElemKind::Ftj { device, v_prev, i_last } => {
                *v_prev = va - vb;
                *i_last = if device.opts.tunneling {
                    device.stack.area
                        * crate::ftj::tunneling_current_density(&device.stack, va - vb, device.p())
                } else {
                    0.0
                };
            }
            _ => {}
        }
    }

    let mut trace = Trace::new(circuit.signal_names());
    trace.push_row(0.0, &circuit.record_row(&x));

    let mut t = 0.0f64;
    let mut dt = dt_init;
    let t_end = tstop * (1.0 - 1e-12);
    // Accumulated time can drift a few ulps past a breakpoint; anything
    // closer than this is treated as already reached, never stepped to.
    let bp_tol = 1e-7 * dt_max;
    while t < t_end {
        // Never step across a waveform corner.
        let next_bp = bps
            .iter()
            .copied()
            .find(|&b| b > t + bp_tol)
            .unwrap_or(tstop);
        let step_dt = dt.min(dt_max).min(tstop - t).min(next_bp - t);
        let mut t_next = t + step_dt;
        if (next_bp - t_next).abs() <= bp_tol {
            t_next = next_bp;
        }
        let step_dt = t_next - t;

        // Polarization-change accuracy limiter: the switching charge of the
        // step is known up front (it is planned from the entry voltage), so
        // an oversized step is rejected before the Newton solve.
        let mut dp_violation = None;
        let mut plans: Vec<(usize, FtjStepPlan)> = Vec::new();
        for (idx, e) in circuit.elements.iter().enumerate() {
            if let ElemKind::Ftj { device, v_prev, .. } = &e.kind {
                let plan = device.plan_step(*v_prev, step_dt);
                // A single domain flip (2·pr/n) is the smallest possible
                // change; no step size can subdivide it further.
                let quantum = 2.0 * device.stack.pr / device.stack.nls.n_domains as f64;
                let limit = (config.dp_max_frac * device.stack.pr).max(quantum);
                if plan.dp_charge.abs() > limit + 1e-30 {
                    dp_violation = Some(e.name.clone());
                    break;
                }
                plans.push((idx, plan));
            }
        }
        if let Some(device) = dp_violation {
            stats.rejected += 1;
            dt = step_dt / 2.0;
            if dt < dt_min {
                return Err(SolverError::DtUnderflow { t: t_next, device });
            }
            continue;
        }

        let attempt = circuit.newton(
            &x,
            t_next,
            Mode::Tr { dt: step_dt },
            config,
            config.gmin,
            &mut stats.newton_iters,
        );
        let (x_new, residual) = match attempt {
            Ok(ok) => ok,
            Err(SolverError::Singular { .. }) | Err(SolverError::NonConvergence { .. }) => {
                stats.rejected += 1;
                dt = step_dt / 2.0;
                if dt < dt_min {
                    let (node, _) = {
                        let (f, _) = circuit.assemble(
                            &x,
                            t_next,
                            Mode::Tr { dt: step_dt },
                            config.integration,
                            config.gmin,
                        );
                        circuit.worst_node(&f)
                    };
                    return Err(SolverError::DtUnderflow { t: t_next, device: node });
                }
                continue;
            }
            Err(e) => return Err(e),
        };

        // Commit: device states advance exactly once, on acceptance.
        for (idx, plan) in plans {
            let e = &mut circuit.elements[idx];
            let va = Circuit::v_at(&x_new, e.nodes[0]);
            let vb = Circuit::v_at(&x_new, e.nodes[1]);
            if let ElemKind::Ftj { device, v_prev, i_last } = &mut e.kind {
                *i_last = device.plan_current(&plan, va - vb, *v_prev, step_dt);
                device.commit(plan);
                *v_prev = va - vb;
            }
        }
        for e in &mut circuit.elements {
            let va = Circuit::v_at(&x_new, e.nodes[0]);
            let vb = Circuit::v_at(&x_new, e.nodes.get(1).copied().flatten());
            if let ElemKind::Cap { c, v_prev, i_prev, .. } = &mut e.kind {
                let v = va - vb;
                let i = match config.integration {
                    Integration::BackwardEuler => *c / step_dt * (v - *v_prev),
                    Integration::Trapezoidal => 2.0 * *c / step_dt * (v - *v_prev) - *i_prev,
                };
                *v_prev = v;
                *i_prev = i;
            }
        }

        x = x_new;
        t = t_next;
        stats.steps += 1;
        stats.max_kcl_residual = stats.max_kcl_residual.max(residual);
        trace.push_row(t, &circuit.record_row(&x));
        dt = (dt * 1.5).min(dt_max);
    }

    Ok(TransientResult { trace, stats })
}

/// `.dc` sweep: a sequence of operating points with one source stepped;
/// the sweep value takes the trace's time axis.
pub fn dc_sweep(
    netlist: &Netlist,
    source: &str,
    start: f64,
    stop: f64,
    step: f64,
    config: &SolverConfig,
    variants: &[DeviceVariant],
) -> Result<Trace, SolverError> {
    config.validate().map_err(SolverError::Compile)?;
    if !(step > 0.0) || stop < start {
        return Err(SolverError::Compile("bad sweep bounds".into()));
    }
    let mut sweep_netlist = netlist.clone();
    let n_points = ((stop - start) / step).round() as usize + 1;
    let mut trace: Option<Trace> = None;
    for k in 0..n_points {
        let v = start + k as f64 * step;
        if !sweep_netlist.set_stimulus(source, Stimulus::Dc(v)) {
            return Err(SolverError::Compile(format!("no source `{source}` to sweep")));
        }
        let circuit = compile(&sweep_netlist, variants)?;
        let mut iters = 0usize;
        let x = circuit.solve_op(0.0, config, &mut iters)?;
        let tr = trace.get_or_insert_with(|| Trace::new(circuit.signal_names()));
        tr.push_row(v, &circuit.record_row(&x));
    }
    Ok(trace.expect("at least one sweep point"))
}
