//! Multi-domain polarization state and the switching-progress update.

use super::nls::{nls_tau, DomainThresholds};
use super::stack::FtjStack;

/// Dynamic polarization state of one FTJ: per-domain signs and switching
/// accumulators. Domain `i` corresponds to the i-th threshold quantile, so
/// lower-index domains switch first on the positive-going branch.
#[derive(Debug, Clone, PartialEq)]
pub struct FtjState {
    /// Domain signs, each −1 or +1.
    pub s: Vec<i8>,
    /// Switching-progress accumulators, each in [0, 1).
    pub u: Vec<f64>,
}

impl FtjState {
    /// Fully polarized state, `sign` = ±1.
    pub fn saturated(n_domains: usize, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1);
        Self {
            s: vec![sign; n_domains],
            u: vec![0.0; n_domains],
        }
    }

    /// State with normalized polarization closest to `p0` ∈ [−1, 1].
    ///
    /// The lowest-threshold domains are set to +1 first, matching the state
    /// a partial positive-going switch from saturation would produce.
    pub fn with_polarization(n_domains: usize, p0: f64) -> Self {
        let p0 = p0.clamp(-1.0, 1.0);
        let n_up = ((p0 + 1.0) / 2.0 * n_domains as f64).round() as usize;
        let n_up = n_up.min(n_domains);
        let mut s = vec![-1i8; n_domains];
        for sign in s.iter_mut().take(n_up) {
            *sign = 1;
        }
        Self {
            s,
            u: vec![0.0; n_domains],
        }
    }

    pub fn n_domains(&self) -> usize {
        self.s.len()
    }

    /// Normalized polarization p = (Σ sᵢ)/n ∈ [−1, 1].
    pub fn p(&self) -> f64 {
        let sum: i64 = self.s.iter().map(|&x| x as i64).sum();
        sum as f64 / self.s.len() as f64
    }

    /// Advances the accumulators one step under field `e_fe` for duration
    /// `dt`, flipping domains whose progress reaches 1. Only domains whose
    /// sign opposes the field accumulate; aligned domains hold, and so does
    /// everything at zero field. Returns the polarization-charge change
    /// dP = pr·(p' − p) in C/cm².
    pub fn advance(&mut self, e_fe: f64, dt: f64, stack: &FtjStack, thresholds: &DomainThresholds) -> f64 {
        debug_assert!(dt > 0.0);
        debug_assert_eq!(self.s.len(), thresholds.len());
        if e_fe == 0.0 {
            return 0.0;
        }
        let mut flipped: i64 = 0;
        if e_fe > 0.0 {
            for i in 0..self.s.len() {
                if self.s[i] == -1 {
                    self.u[i] += dt / nls_tau(e_fe, thresholds.pos[i], &stack.nls);
                    if self.u[i] >= 1.0 {
                        self.s[i] = 1;
                        self.u[i] = 0.0;
                        flipped += 2;
                    }
                }
            }
        } else {
            for i in 0..self.s.len() {
                if self.s[i] == 1 {
                    self.u[i] += dt / nls_tau(e_fe, thresholds.neg[i], &stack.nls);
                    if self.u[i] >= 1.0 {
                        self.s[i] = -1;
                        self.u[i] = 0.0;
                        flipped -= 2;
                    }
                }
            }
        }
        stack.pr * flipped as f64 / self.s.len() as f64
    }
}

/// Functional form of the accumulator update: returns the advanced state and
/// the polarization-charge change dP (C/cm²) without touching the input.
pub fn step_polarization(state: &FtjState, e_fe: f64, dt: f64, stack: &FtjStack) -> (FtjState, f64) {
    let thresholds = DomainThresholds::new(&stack.nls);
    let mut next = state.clone();
    let dp = next.advance(e_fe, dt, stack, &thresholds);
    (next, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ftj::{builtin_variant, VariantName};
    use approx::assert_relative_eq;

    fn single_domain_stack() -> FtjStack {
        let mut stack = builtin_variant(VariantName::A).stack;
        stack.nls.n_domains = 1;
        stack.nls.ea_sigma_pos = 0.0;
        stack.nls.ea_sigma_neg = 0.0;
        stack.nls.merz_exp = 1.0;
        stack.nls.tau0 = 1e-9;
        stack.nls.ea_mean = 3e6;
        stack
    }

    #[test]
    fn zero_field_changes_nothing() {
        let stack = builtin_variant(VariantName::A).stack;
        let state = FtjState::with_polarization(stack.nls.n_domains, 0.25);
        let (next, dp) = step_polarization(&state, 0.0, 1e-6, &stack);
        assert_eq!(next, state);
        assert_eq!(dp, 0.0);
    }

    #[test]
    fn accumulator_arithmetic_three_partial_pulses() {
        // Single domain, s=−1, τ = 1 µs: two 0.4 µs steps accumulate to
        // u = 0.8 without flipping; the third flips and dP = 2·pr.
        let stack = single_domain_stack();
        // Field such that tau = 1 µs: tau0·exp(ea/e) = 1e-6 → ea/e = ln(1e3).
        let e = 3e6 / (1e3f64).ln();
        let tau = nls_tau(e, 3e6, &stack.nls);
        assert_relative_eq!(tau, 1e-6, max_relative = 1e-12);

        let state = FtjState::saturated(1, -1);
        let (s1, dp1) = step_polarization(&state, e, 0.4e-6, &stack);
        assert_eq!(dp1, 0.0);
        assert_relative_eq!(s1.u[0], 0.4, max_relative = 1e-9);
        let (s2, dp2) = step_polarization(&s1, e, 0.4e-6, &stack);
        assert_eq!(dp2, 0.0);
        assert_relative_eq!(s2.u[0], 0.8, max_relative = 1e-9);
        let (s3, dp3) = step_polarization(&s2, e, 0.4e-6, &stack);
        assert_eq!(s3.s[0], 1);
        assert_eq!(s3.u[0], 0.0);
        assert_relative_eq!(dp3, 2.0 * stack.pr, max_relative = 1e-12);
    }

    #[test]
    fn saturation_under_large_field() {
        let stack = builtin_variant(VariantName::A).stack;
        let mut state = FtjState::saturated(stack.nls.n_domains, -1);
        let thresholds = DomainThresholds::new(&stack.nls);
        // Strong field: tau ≈ tau0 for every domain, so any dt ≫ tau0 flips all.
        let mut total_dp = 0.0;
        for _ in 0..4 {
            total_dp += state.advance(1e8, 1e-3, &stack, &thresholds);
        }
        assert_eq!(state.p(), 1.0);
        assert_relative_eq!(total_dp, 2.0 * stack.pr, max_relative = 1e-12);
    }

    #[test]
    fn aligned_domains_hold_under_field_reversal() {
        let stack = single_domain_stack();
        let state = FtjState::saturated(1, -1);
        // Negative field on an all-down state: nothing accumulates.
        let (next, dp) = step_polarization(&state, -2e6, 1e-3, &stack);
        assert_eq!(dp, 0.0);
        assert_eq!(next, state);
    }

    #[test]
    fn accumulators_hold_not_decay_on_reversal() {
        let stack = single_domain_stack();
        let e = 3e6 / (1e3f64).ln();
        let state = FtjState::saturated(1, -1);
        let (s1, _) = step_polarization(&state, e, 0.5e-6, &stack);
        assert_relative_eq!(s1.u[0], 0.5, max_relative = 1e-9);
        // Reverse field: the domain is aligned with it, so u holds.
        let (s2, _) = step_polarization(&s1, -e, 10e-6, &stack);
        assert_relative_eq!(s2.u[0], 0.5, max_relative = 1e-9);
        // Back to the positive field: progress resumes where it left off.
        let (s3, dp) = step_polarization(&s2, e, 0.6e-6, &stack);
        assert_eq!(s3.s[0], 1);
        assert!(dp > 0.0);
    }

    #[test]
    fn with_polarization_hits_requested_levels() {
        for &(p0, expect) in &[(-1.0, -1.0), (1.0, 1.0), (0.0, 0.0), (0.5, 0.5)] {
            let state = FtjState::with_polarization(64, p0);
            assert_relative_eq!(state.p(), expect, epsilon = 1.0 / 64.0);
        }
    }

    #[test]
    fn pulse_train_additivity_matches_single_long_pulse() {
        // N pulses of width w flip the same domain set as one pulse of N·w.
        let stack = builtin_variant(VariantName::A).stack;
        let thresholds = DomainThresholds::new(&stack.nls);
        let e = stack.switching_field(3.4);
        let w = 2e-7;
        let n = 25;

        let mut pulsed = FtjState::saturated(stack.nls.n_domains, -1);
        for _ in 0..n {
            pulsed.advance(e, w, &stack, &thresholds);
        }
        let mut single = FtjState::saturated(stack.nls.n_domains, -1);
        single.advance(e, n as f64 * w, &stack, &thresholds);
        assert_eq!(pulsed.s, single.s);
    }
}
