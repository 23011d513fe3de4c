//! Terminal-current assembly: background displacement, switching current,
//! and polarization-dependent tunneling.

use thiserror::Error;

use super::nls::DomainThresholds;
use super::stack::FtjStack;
use super::state::FtjState;

/// Per-branch diode-like current density (A/cm²).
fn branch_density(j_amp: f64, v: f64, v_shape_pos: f64, v_shape_neg: f64) -> f64 {
    if v >= 0.0 {
        j_amp * ((v / v_shape_pos).exp() - 1.0)
    } else {
        -j_amp * ((-v / v_shape_neg).exp() - 1.0)
    }
}

/// Polarization-dependent tunneling current density (A/cm²):
/// `J = f·J_on(v) + (1−f)·J_off(v)` with LRS fraction `f = (1 + p)/2`.
/// Continuous, zero at v = 0, and sign(J) = sign(v).
pub fn tunneling_current_density(stack: &FtjStack, v_applied: f64, p: f64) -> f64 {
    debug_assert!((-1.0..=1.0).contains(&p));
    let t = &stack.tun;
    let f = (1.0 + p) / 2.0;
    f * branch_density(t.j_on_amp, v_applied, t.v_shape_pos, t.v_shape_neg)
        + (1.0 - f) * branch_density(t.j_off_amp, v_applied, t.v_shape_pos, t.v_shape_neg)
}

/// Model-term toggles used by characterization protocols and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FtjOptions {
    pub switching: bool,
    pub tunneling: bool,
    /// Background C0·dv/dt displacement term.
    pub displacement: bool,
}

impl Default for FtjOptions {
    fn default() -> Self {
        Self {
            switching: true,
            tunneling: true,
            displacement: true,
        }
    }
}

/// One implicit step of the terminal current:
///
/// ```text
/// i = area · [ C0·dv/dt + dP/dt + J(v, p') ]
/// ```
///
/// where `C0` is the background capacitance per area, dP comes from the
/// domain accumulators driven by the switching field of `v`, and the
/// tunneling term uses the end-of-step polarization. Returns the terminal
/// current (A) and the advanced state.
pub fn terminal_current_step(
    stack: &FtjStack,
    state: &FtjState,
    v: f64,
    dv_dt: f64,
    dt: f64,
    opts: FtjOptions,
) -> (f64, FtjState) {
    let thresholds = DomainThresholds::new(&stack.nls);
    let mut next = state.clone();
    let i = terminal_current_advance(stack, &mut next, &thresholds, v, dv_dt, dt, opts);
    (i, next)
}

/// In-place variant with caller-provided thresholds; the hot path for
/// sweep runners and the circuit engine.
pub(crate) fn terminal_current_advance(
    stack: &FtjStack,
    state: &mut FtjState,
    thresholds: &DomainThresholds,
    v: f64,
    dv_dt: f64,
    dt: f64,
    opts: FtjOptions,
) -> f64 {
    let displacement = if opts.displacement {
        stack.background_capacitance_per_area() * dv_dt
    } else {
        0.0
    };
    let dp = if opts.switching {
        let e_fe = stack.switching_field(v);
        if e_fe == 0.0 {
            0.0
        } else {
            state.advance(e_fe, dt, stack, thresholds)
        }
    } else {
        0.0
    };
    let j = if opts.tunneling {
        tunneling_current_density(stack, v, state.p())
    } else {
        0.0
    };
    stack.area * (displacement + dp / dt + j)
}

/// One planned polarization advance: the state and switched charge a step
/// will commit. Inside the circuit engine the plan is decided from the
/// field at the step's entry voltage and held fixed across Newton
/// iterations, keeping the per-iteration branch current smooth in v.
#[derive(Debug, Clone)]
pub struct FtjStepPlan {
    pub state: FtjState,
    /// Switched polarization charge dP (C/cm²).
    pub dp_charge: f64,
}

/// An FTJ instance: stack, state, toggles, and cached domain thresholds.
#[derive(Debug, Clone)]
pub struct FtjDevice {
    pub stack: FtjStack,
    pub state: FtjState,
    pub opts: FtjOptions,
    thresholds: DomainThresholds,
}

impl FtjDevice {
    pub fn new(stack: FtjStack, p0: f64) -> Self {
        let thresholds = DomainThresholds::new(&stack.nls);
        let state = FtjState::with_polarization(stack.nls.n_domains, p0);
        Self {
            stack,
            state,
            opts: FtjOptions::default(),
            thresholds,
        }
    }

    pub fn with_options(mut self, opts: FtjOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn p(&self) -> f64 {
        self.state.p()
    }

    /// Advances the device one step and returns the terminal current (A).
    pub fn step(&mut self, v: f64, dv_dt: f64, dt: f64) -> f64 {
        terminal_current_advance(
            &self.stack,
            &mut self.state,
            &self.thresholds,
            v,
            dv_dt,
            dt,
            self.opts,
        )
    }

    /// Terminal current a step would produce, without committing the state.
    pub fn trial_step(&self, v: f64, dv_dt: f64, dt: f64) -> (f64, FtjState) {
        let mut state = self.state.clone();
        let i = terminal_current_advance(
            &self.stack,
            &mut state,
            &self.thresholds,
            v,
            dv_dt,
            dt,
            self.opts,
        );
        (i, state)
    }

    /// Plans one switching advance of length `dt`, driving the kinetics
    /// with the field of `v_pol`. The device itself is untouched.
    pub fn plan_step(&self, v_pol: f64, dt: f64) -> FtjStepPlan {
        let mut state = self.state.clone();
        let dp_charge = if self.opts.switching {
            let e_fe = self.stack.switching_field(v_pol);
            if e_fe == 0.0 {
                0.0
            } else {
                state.advance(e_fe, dt, &self.stack, &self.thresholds)
            }
        } else {
            0.0
        };
        FtjStepPlan { state, dp_charge }
    }

    /// Terminal current of a planned step evaluated at terminal voltage
    /// `v`: smooth in `v` because the switching charge is fixed by the
    /// plan.
    pub fn plan_current(&self, plan: &FtjStepPlan, v: f64, v_prev: f64, dt: f64) -> f64 {
        let displacement = if self.opts.displacement {
            self.stack.background_capacitance_per_area() * (v - v_prev) / dt
        } else {
            0.0
        };
        let j = if self.opts.tunneling {
            tunneling_current_density(&self.stack, v, plan.state.p())
        } else {
            0.0
        };
        self.stack.area * (displacement + plan.dp_charge / dt + j)
    }

    /// Commits a planned advance.
    pub fn commit(&mut self, plan: FtjStepPlan) {
        self.state = plan.state;
    }

    /// Advances one step with the switching field lagged to the step-entry
    /// voltage `v_prev` (the circuit engine's splitting); returns the
    /// terminal current at `v`.
    pub fn step_lagged(&mut self, v: f64, v_prev: f64, dt: f64) -> f64 {
        let plan = self.plan_step(v_prev, dt);
        let i = self.plan_current(&plan, v, v_prev, dt);
        self.commit(plan);
        i
    }

    pub fn thresholds(&self) -> &DomainThresholds {
        &self.thresholds
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ReadTimeError {
    #[error("current density must be > 0 (got {0})")]
    NonPositiveCurrent(f64),
    #[error("self-capacitance must be > 0 (got {0})")]
    NonPositiveCapacitance(f64),
    #[error("voltage difference must be >= 0 (got {0})")]
    NegativeVoltage(f64),
}

/// Charging time needed to develop `dv` volts on a node whose capacitance
/// is dominated by the FTJ itself: `t_read = dv·c0/j`, with `c0` in F/cm²
/// and `j` in A/cm².
pub fn read_time(dv: f64, c0: f64, j: f64) -> Result<f64, ReadTimeError> {
    if dv < 0.0 {
        return Err(ReadTimeError::NegativeVoltage(dv));
    }
    if !(c0 > 0.0) {
        return Err(ReadTimeError::NonPositiveCapacitance(c0));
    }
    if !(j > 0.0) {
        return Err(ReadTimeError::NonPositiveCurrent(j));
    }
    Ok(dv * c0 / j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ftj::{builtin_variant, VariantName};
    use approx::assert_relative_eq;

    fn device_a() -> FtjStack {
        builtin_variant(VariantName::A).stack
    }

    #[test]
    fn tunneling_zero_at_zero_volts() {
        let stack = device_a();
        for &p in &[-1.0, -0.3, 0.0, 0.7, 1.0] {
            assert_eq!(tunneling_current_density(&stack, 0.0, p), 0.0);
        }
    }

    #[test]
    fn lrs_read_anchor_is_6_na_at_2_volts() {
        let stack = device_a();
        let i = stack.area * tunneling_current_density(&stack, 2.0, 1.0);
        assert_relative_eq!(i, 6.0e-9, max_relative = 1e-3);
    }

    #[test]
    fn hrs_read_current_is_ter_smaller() {
        let stack = device_a();
        let i_lrs = tunneling_current_density(&stack, 2.0, 1.0);
        let i_hrs = tunneling_current_density(&stack, 2.0, -1.0);
        assert_relative_eq!(i_lrs / i_hrs, 10.0, max_relative = 1e-9);
        assert_relative_eq!(stack.area * i_hrs, 0.6e-9, max_relative = 1e-3);
    }

    #[test]
    fn tunneling_sign_follows_voltage_and_is_continuous() {
        let stack = device_a();
        for &p in &[-1.0, 0.0, 1.0] {
            assert!(tunneling_current_density(&stack, 1.5, p) > 0.0);
            assert!(tunneling_current_density(&stack, -1.5, p) < 0.0);
            let eps = 1e-9;
            let left = tunneling_current_density(&stack, -eps, p);
            let right = tunneling_current_density(&stack, eps, p);
            assert!((right - left).abs() < 1e-12);
        }
    }

    #[test]
    fn write_mode_current_density_in_paper_range() {
        // 10²–10³ µA/cm² at the ±4.5 V programming level.
        let stack = device_a();
        let j = tunneling_current_density(&stack, 4.5, 1.0);
        assert!(j > 1e-4 && j < 1e-3, "J(4.5 V) = {j:.3e} A/cm²");
    }

    #[test]
    fn static_read_is_pure_tunneling() {
        let stack = device_a();
        let state = FtjState::saturated(stack.nls.n_domains, 1);
        let (i, next) = terminal_current_step(&stack, &state, 1.0, 0.0, 1e-6, FtjOptions::default());
        assert_eq!(next, state, "sub-threshold read must not advance domains past 1");
        let expect = stack.area * tunneling_current_density(&stack, 1.0, 1.0);
        assert_relative_eq!(i, expect, max_relative = 1e-12);
    }

    #[test]
    fn displacement_plateau_matches_area_c0_slew() {
        let stack = device_a();
        let state = FtjState::saturated(stack.nls.n_domains, -1);
        let opts = FtjOptions {
            switching: false,
            tunneling: false,
            ..Default::default()
        };
        let slew = 1.1e4;
        let (i, _) = terminal_current_step(&stack, &state, 1.0, slew, 1e-6, opts);
        let c0 = stack.background_capacitance_per_area();
        assert_relative_eq!(i, stack.area * c0 * slew, max_relative = 1e-12);
        // Device-A preset was solved from the 20 µA plateau anchor.
        assert_relative_eq!(i, 20e-6, max_relative = 0.01);
    }

    #[test]
    fn plateau_scales_linearly_with_slew() {
        let stack = device_a();
        let state = FtjState::saturated(stack.nls.n_domains, -1);
        let opts = FtjOptions {
            switching: false,
            tunneling: false,
            ..Default::default()
        };
        let (i1, _) = terminal_current_step(&stack, &state, 0.5, 1.1e4, 1e-6, opts);
        let (i2, _) = terminal_current_step(&stack, &state, 0.5, 50.0 * 1.1e4, 1e-6, opts);
        assert_relative_eq!(i2 / i1, 50.0, max_relative = 1e-9);
    }

    #[test]
    fn read_time_formula() {
        assert_eq!(read_time(0.0, 1.3e-6, 1e-4).unwrap(), 0.0);
        // ΔV = 50 mV, C0 = 1.3 µF/cm², J = 1 pA/µm² = 1e-4 A/cm² → 0.65 ms.
        let t = read_time(0.05, 1.3e-6, 1e-4).unwrap();
        assert_relative_eq!(t, 6.5e-4, max_relative = 1e-12);
        // Doubling J halves the result.
        let t2 = read_time(0.05, 1.3e-6, 2e-4).unwrap();
        assert_relative_eq!(t / t2, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn read_time_domain_errors() {
        assert!(matches!(
            read_time(0.05, 1.3e-6, 0.0),
            Err(ReadTimeError::NonPositiveCurrent(_))
        ));
        assert!(matches!(
            read_time(0.05, 1.3e-6, -1.0),
            Err(ReadTimeError::NonPositiveCurrent(_))
        ));
        assert!(matches!(
            read_time(0.05, 0.0, 1e-4),
            Err(ReadTimeError::NonPositiveCapacitance(_))
        ));
        assert!(matches!(
            read_time(-0.01, 1.3e-6, 1e-4),
            Err(ReadTimeError::NegativeVoltage(_))
        ));
    }
}
