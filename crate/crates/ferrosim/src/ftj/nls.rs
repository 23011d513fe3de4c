//! Nucleation-limited switching kinetics: the Merz-type time–field law and
//! deterministic domain-threshold sampling.

use statrs::distribution::{ContinuousCDF, Normal};

use super::stack::NlsParams;

/// Characteristic switching time (s) of one domain with activation field
/// `ea` under ferroelectric field `e_fe`:
///
/// ```text
/// τ = τ0 · exp((ea / |e_fe|)^n)
/// ```
///
/// Strictly decreasing in |e_fe|; zero field is defined as τ = +∞ (no
/// switching progress).
pub fn nls_tau(e_fe: f64, ea: f64, nls: &NlsParams) -> f64 {
    if e_fe == 0.0 {
        return f64::INFINITY;
    }
    nls.tau0 * (ea / e_fe.abs()).powf(nls.merz_exp).exp()
}

/// Per-domain activation fields, one set per switching polarity, sampled at
/// the Gaussian mid-quantiles (i + 0.5)/n. Sampling is deterministic: no
/// RNG, so every device built from the same `NlsParams` is identical.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainThresholds {
    /// Activation fields for −1 → +1 switching (ascending, V/cm).
    pub pos: Vec<f64>,
    /// Activation fields for +1 → −1 switching (ascending, V/cm).
    pub neg: Vec<f64>,
}

impl DomainThresholds {
    pub fn new(nls: &NlsParams) -> Self {
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        let n = nls.n_domains;
        let mut pos = Vec::with_capacity(n);
        let mut neg = Vec::with_capacity(n);
        for i in 0..n {
            let q = (i as f64 + 0.5) / n as f64;
            let z = normal.inverse_cdf(q);
            // Keep thresholds strictly positive even for wide spreads.
            let floor = 1e-3 * nls.ea_mean;
            pos.push((nls.ea_mean + nls.ea_sigma_pos * z).max(floor));
            neg.push((nls.ea_mean + nls.ea_sigma_neg * z).max(floor));
        }
        Self { pos, neg }
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(n: f64) -> NlsParams {
        NlsParams {
            n_domains: 64,
            tau0: 1e-9,
            ea_mean: 3e6,
            ea_sigma_pos: 1e5,
            ea_sigma_neg: 1e5,
            merz_exp: n,
        }
    }

    #[test]
    fn tau_approaches_tau0_at_infinite_field() {
        let nls = params(3.0);
        let tau = nls_tau(1e30, 3e6, &nls);
        assert_relative_eq!(tau, nls.tau0, max_relative = 1e-12);
    }

    #[test]
    fn tau_at_unit_field_ratio_and_unit_exponent_is_tau0_e() {
        let nls = params(1.0);
        let tau = nls_tau(3e6, 3e6, &nls);
        assert_relative_eq!(tau, nls.tau0 * std::f64::consts::E, max_relative = 1e-12);
    }

    #[test]
    fn tau_direct_evaluation() {
        // tau0=1 ns, ea=3 MV/cm, e=1.5 MV/cm, n=1 → 1 ns·e² ≈ 7.39 ns.
        let nls = params(1.0);
        let tau = nls_tau(1.5e6, 3e6, &nls);
        assert_relative_eq!(tau, 1e-9 * std::f64::consts::E.powi(2), max_relative = 1e-12);
    }

    #[test]
    fn zero_field_gives_infinite_tau() {
        assert!(nls_tau(0.0, 3e6, &params(3.0)).is_infinite());
    }

    #[test]
    fn tau_strictly_decreasing_in_field_magnitude() {
        let nls = params(3.0);
        let mut prev = f64::INFINITY;
        for k in 4..40 {
            let e = 1e5 * k as f64;
            let tau = nls_tau(e, 3e6, &nls);
            assert!(tau.is_finite());
            assert!(tau < prev, "tau must decrease with |e|");
            prev = tau;
        }
        // Sign of the field is irrelevant.
        assert_eq!(nls_tau(-2e6, 3e6, &nls), nls_tau(2e6, 3e6, &nls));
    }

    #[test]
    fn thresholds_are_sorted_symmetric_and_deterministic() {
        let nls = params(3.0);
        let th = DomainThresholds::new(&nls);
        assert_eq!(th.len(), 64);
        assert!(th.pos.windows(2).all(|w| w[0] <= w[1]));
        // Mid-quantile sampling is symmetric about the mean.
        let mean: f64 = th.pos.iter().sum::<f64>() / 64.0;
        assert_relative_eq!(mean, 3e6, max_relative = 1e-6);
        assert_eq!(th, DomainThresholds::new(&nls));
    }

    #[test]
    fn single_domain_threshold_is_the_mean() {
        let mut nls = params(3.0);
        nls.n_domains = 1;
        let th = DomainThresholds::new(&nls);
        assert_relative_eq!(th.pos[0], 3e6, max_relative = 1e-12);
    }
}
