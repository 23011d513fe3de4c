//! Triangle-sweep protocols on a single device under an ideal source.

use crate::engine::Trace;
use crate::ftj::{DeviceVariant, FtjDevice};
use crate::netlist::{eval_stimulus, Stimulus};

use super::extract::{extract_switching_peaks, BaselineMode, PeakPolarity};

/// Voltage resolution of the sweep stepper (V).
const DV_STEP: f64 = 0.002;

/// Window of the last full sweep cycle (s); extraction discards everything
/// before it, treating earlier cycles as wake-up.
pub fn last_cycle_window(amplitude: f64, slew: f64, cycles: u32) -> (f64, f64) {
    let period = 4.0 * amplitude / slew;
    ((cycles as f64 - 1.0) * period, cycles as f64 * period)
}

/// Simulates a bipolar triangular sweep of ±`amplitude` at `slew` on a
/// fresh device initialized fully negative. The first cycle serves as the
/// wake-up/initialization cycle. Signals: `v(dev)`, `i(dev)`, `p(dev)`.
pub fn run_triangle_sweep(
    variant: &DeviceVariant,
    amplitude: f64,
    slew: f64,
    cycles: u32,
) -> Trace {
    assert!(cycles >= 1, "at least one sweep cycle required");
    assert!(amplitude > 0.0 && slew > 0.0);
    let mut device = FtjDevice::new(variant.stack, -1.0);
    let frequency = slew / (4.0 * amplitude);
    let drive = Stimulus::Triangle {
        amplitude,
        frequency,
        cycles,
        bipolar: true,
    };
    let dt = DV_STEP / slew;
    let steps = (cycles as f64 / frequency / dt).round() as usize;

    let mut trace = Trace::new(vec!["v(dev)", "i(dev)", "p(dev)"]);
    let mut v_prev = 0.0;
    trace.push_row(0.0, &[0.0, 0.0, device.p()]);
    for k in 1..=steps {
        let t = k as f64 * dt;
        let v = eval_stimulus(&drive, t);
        let i = device.step_lagged(v, v_prev, dt);
        trace.push_row(t, &[v, i, device.p()]);
        v_prev = v;
    }
    trace
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqScaleRow {
    pub slew: f64,
    /// Displacement plateau current (A), measured in a switching-free
    /// window of the ascending branch.
    pub plateau: f64,
    /// Positive switching-peak voltage (V), when a peak exists in range.
    pub vc_plus: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreqScaleReport {
    pub rows: Vec<FreqScaleRow>,
    /// Worst relative residual of the proportional fit plateau ∝ slew.
    pub linear_fit_residual: f64,
}

/// Sweeps the device at each slew rate and reports the displacement
/// plateau and effective coercive voltage per row, plus the residual of a
/// straight-through-origin fit of plateau versus slew.
pub fn frequency_scaling_report(
    variant: &DeviceVariant,
    amplitude: f64,
    slews: &[f64],
) -> FreqScaleReport {
    let mut rows = Vec::with_capacity(slews.len());
    for &slew in slews {
        let trace = run_triangle_sweep(variant, amplitude, slew, 2);
        let window = last_cycle_window(amplitude, slew, 2);
        let v = trace.signal("v(dev)").expect("sweep signal");
        let i = trace.signal("i(dev)").expect("sweep signal");
        let t = &trace.time;

        // Ascending branch, below any positive switching: every domain is
        // already down here, so the current is pure displacement (plus a
        // negligible tunneling term).
        let mut sum = 0.0;
        let mut count = 0usize;
        for k in 1..t.len() {
            if t[k] < window.0 || t[k] > window.1 {
                continue;
            }
            let ascending = v[k] > v[k - 1];
            if ascending && v[k] > -0.6 * amplitude.min(2.0) && v[k] < -0.2 {
                sum += i[k];
                count += 1;
            }
        }
        let plateau = sum / count.max(1) as f64;

        let peaks = extract_switching_peaks(
            &trace,
            &variant.stack,
            "v(dev)",
            "i(dev)",
            window,
            BaselineMode::ModelC0,
        );
        let vc_plus = peaks
            .iter()
            .find(|p| p.polarity == PeakPolarity::Positive)
            .map(|p| p.v_peak);
        rows.push(FreqScaleRow {
            slew,
            plateau,
            vc_plus,
        });
    }

    // Proportional least squares: plateau = a·slew.
    let num: f64 = rows.iter().map(|r| r.plateau * r.slew).sum();
    let den: f64 = rows.iter().map(|r| r.slew * r.slew).sum();
    let a = if den > 0.0 { num / den } else { 0.0 };
    let linear_fit_residual = rows
        .iter()
        .map(|r| {
            let fit = a * r.slew;
            if fit != 0.0 {
                ((r.plateau - fit) / fit).abs()
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);

    FreqScaleReport {
        rows,
        linear_fit_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ftj::{builtin_variant, VariantName};

    #[test]
    fn sweep_switches_and_returns_to_negative_saturation() {
        let variant = builtin_variant(VariantName::A);
        let trace = run_triangle_sweep(&variant, 5.5, 1.1e4, 2);
        let p = trace.signal("p(dev)").unwrap();
        // Saturates positive at the top of each cycle and returns.
        let max_p = p.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(max_p, 1.0);
        assert_eq!(*p.last().unwrap(), -1.0);
    }

    #[test]
    fn sub_coercive_drive_is_a_pure_capacitor_ellipse() {
        let variant = builtin_variant(VariantName::A);
        let trace = run_triangle_sweep(&variant, 1.0, 1.1e4, 2);
        let p = trace.signal("p(dev)").unwrap();
        assert!(p.iter().all(|&x| x == -1.0), "no switching below threshold");
    }

    #[test]
    fn plateau_ratio_tracks_slew_ratio() {
        let variant = builtin_variant(VariantName::A);
        let report = frequency_scaling_report(&variant, 5.5, &[1.1e4, 5.5e5]);
        let ratio = report.rows[1].plateau / report.rows[0].plateau;
        assert!((ratio / 50.0 - 1.0).abs() < 0.05, "ratio = {ratio}");
        assert!(report.linear_fit_residual < 0.05);
        // Effective coercive voltage is non-decreasing in slew.
        let vc0 = report.rows[0].vc_plus.unwrap();
        let vc1 = report.rows[1].vc_plus.unwrap();
        assert!(vc1 >= vc0);
    }

    #[test]
    fn single_slew_duplicated_gives_unit_ratio() {
        let variant = builtin_variant(VariantName::A);
        let report = frequency_scaling_report(&variant, 5.5, &[1.1e4]);
        assert_eq!(report.rows.len(), 1);
        assert!(report.linear_fit_residual < 1e-12);
    }
}
