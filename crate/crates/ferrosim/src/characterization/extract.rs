//! Figure-of-merit extraction from sweep traces: PV loops, switching
//! peaks, TER, and pulse energy.

use thiserror::Error;

use crate::engine::Trace;
use crate::ftj::{tunneling_current_density, FtjStack};

use super::staircase::ReadCurve;

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("trace is missing required samples in the analysis window")]
    EmptyWindow,
    #[error("HRS current is zero at the requested read voltage")]
    ZeroHrsCurrent,
    #[error(transparent)]
    Trace(#[from] crate::engine::TraceError),
}

/// How the displacement baseline is removed before integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMode {
    /// Subtract `area·C0·dv/dt` using the model's known self-capacitance.
    ModelC0,
    /// Fit the capacitive slope to a sub-coercive window of the trace
    /// itself (for externally measured data where C0 is not trusted).
    FittedLinear,
}

/// Polarization–voltage loop with extracted remanence and coercivity.
#[derive(Debug, Clone, PartialEq)]
pub struct PvCurve {
    pub v: Vec<f64>,
    /// Polarization (C/cm²), centered so max and min are symmetric.
    pub p: Vec<f64>,
    pub pr_plus: f64,
    pub pr_minus: f64,
    pub vc_plus: f64,
    pub vc_minus: f64,
    /// False when the loop fails to close within 5% of 2·pr.
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakPolarity {
    Positive,
    Negative,
}

/// One switching-current peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakReport {
    pub polarity: PeakPolarity,
    /// Peak position (V).
    pub v_peak: f64,
    /// Full width at half maximum, in volts along the sweep.
    pub fwhm: f64,
    /// Peak residual current (A) after baseline subtraction.
    pub i_peak: f64,
}

struct WindowSamples {
    t: Vec<f64>,
    v: Vec<f64>,
    /// Current with displacement baseline and tunneling estimate removed:
    /// the switching current.
    residual: Vec<f64>,
    /// Integrated polarization (C/cm²), centered.
    p: Vec<f64>,
}

/// Shared two-pass reduction: subtracts the displacement baseline, then
/// estimates the tunneling current from the first-pass polarization and
/// integrates again.
fn reduce(
    trace: &Trace,
    stack: &FtjStack,
    v_signal: &str,
    i_signal: &str,
    window: (f64, f64),
    mode: BaselineMode,
) -> Result<WindowSamples, ExtractError> {
    let v_all = trace.signal(v_signal)?;
    let i_all = trace.signal(i_signal)?;
    let mut t = Vec::new();
    let mut v = Vec::new();
    let mut i = Vec::new();
    for k in 0..trace.time.len() {
        if trace.time[k] >= window.0 - 1e-15 && trace.time[k] <= window.1 + 1e-15 {
            t.push(trace.time[k]);
            v.push(v_all[k]);
            i.push(i_all[k]);
        }
    }
    if t.len() < 8 {
        return Err(ExtractError::EmptyWindow);
    }
    let n = t.len();

    // Backward-difference slew matches the implicit displacement term.
    let mut dvdt = vec![0.0; n];
    for k in 1..n {
        dvdt[k] = (v[k] - v[k - 1]) / (t[k] - t[k - 1]);
    }
    dvdt[0] = dvdt[1];

    let c_eff = match mode {
        BaselineMode::ModelC0 => stack.area * stack.background_capacitance_per_area(),
        BaselineMode::FittedLinear => {
            // Sub-coercive samples: |v| below 40% of the window's peak.
            let v_max = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            let mut num = 0.0;
            let mut den = 0.0;
            for k in 1..n {
                if v[k].abs() < 0.4 * v_max {
                    num += i[k] * dvdt[k];
                    den += dvdt[k] * dvdt[k];
                }
            }
            if den > 0.0 {
                num / den
            } else {
                0.0
            }
        }
    };

    let corrected: Vec<f64> = (0..n).map(|k| i[k] - c_eff * dvdt[k]).collect();

    // First pass: raw polarization for the tunneling estimate.
    let mut p_raw = vec![0.0; n];
    for k in 1..n {
        p_raw[k] = p_raw[k - 1]
            + 0.5 * (corrected[k] + corrected[k - 1]) * (t[k] - t[k - 1]) / stack.area;
    }
    let (lo, hi) = p_raw
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let mid = 0.5 * (lo + hi);

    // Second pass: subtract the estimated tunneling current and re-integrate.
    let mut residual = Vec::with_capacity(n);
    for k in 0..n {
        let p_est = ((p_raw[k] - mid) / stack.pr).clamp(-1.0, 1.0);
        let i_tun = stack.area * tunneling_current_density(stack, v[k], p_est);
        residual.push(corrected[k] - i_tun);
    }
    let mut p = vec![0.0; n];
    for k in 1..n {
        p[k] = p[k - 1] + 0.5 * (residual[k] + residual[k - 1]) * (t[k] - t[k - 1]) / stack.area;
    }
    let (lo, hi) = p
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let mid = 0.5 * (lo + hi);
    for x in &mut p {
        *x -= mid;
    }

    Ok(WindowSamples { t, v, residual, p })
}

/// Integrates the switched polarization over one steady-state cycle and
/// extracts remanent polarizations (P at the v = 0 crossings) and coercive
/// voltages (positions of the dP/dv extrema).
pub fn extract_pv(
    trace: &Trace,
    stack: &FtjStack,
    v_signal: &str,
    i_signal: &str,
    window: (f64, f64),
    mode: BaselineMode,
) -> Result<PvCurve, ExtractError> {
    let w = reduce(trace, stack, v_signal, i_signal, window, mode)?;
    let n = w.t.len();

    let closed = (w.p[n - 1] - w.p[0]).abs() <= 0.05 * 2.0 * stack.pr;

    // Remanence at the zero-voltage crossings.
    let mut pr_plus = f64::NAN;
    let mut pr_minus = f64::NAN;
    for k in 1..n {
        let (v0, v1) = (w.v[k - 1], w.v[k]);
        if v0 > 0.0 && v1 <= 0.0 {
            // Descending through zero: remanence after positive saturation.
            let f = v0 / (v0 - v1);
            pr_plus = w.p[k - 1] + f * (w.p[k] - w.p[k - 1]);
        } else if v0 < 0.0 && v1 >= 0.0 {
            let f = -v0 / (v1 - v0);
            pr_minus = w.p[k - 1] + f * (w.p[k] - w.p[k - 1]);
        }
    }

    let peaks = peaks_from_samples(&w);
    let vc_plus = peaks
        .iter()
        .find(|p| p.polarity == PeakPolarity::Positive)
        .map(|p| p.v_peak)
        .unwrap_or(f64::NAN);
    let vc_minus = peaks
        .iter()
        .find(|p| p.polarity == PeakPolarity::Negative)
        .map(|p| p.v_peak)
        .unwrap_or(f64::NAN);

    Ok(PvCurve {
        v: w.v,
        p: w.p,
        pr_plus,
        pr_minus,
        vc_plus,
        vc_minus,
        closed,
    })
}

fn half_max_width(v: &[f64], y: &[f64], peak_idx: usize) -> f64 {
    let half = 0.5 * y[peak_idx];
    let mut lo_v = v[0];
    let mut k = peak_idx;
    while k > 0 {
        if y[k - 1] < half {
            let f = (y[k] - half) / (y[k] - y[k - 1]);
            lo_v = v[k] + f * (v[k - 1] - v[k]);
            break;
        }
        k -= 1;
        lo_v = v[k];
    }
    let mut hi_v = v[v.len() - 1];
    let mut k = peak_idx;
    while k + 1 < v.len() {
        if y[k + 1] < half {
            let f = (y[k] - half) / (y[k] - y[k + 1]);
            hi_v = v[k] + f * (v[k + 1] - v[k]);
            break;
        }
        k += 1;
        hi_v = v[k];
    }
    (hi_v - lo_v).abs()
}

fn branch_peak(
    v: &[f64],
    y: &[f64],
    polarity: PeakPolarity,
) -> Option<PeakReport> {
    if v.len() < 5 {
        return None;
    }
    // Moving-average smoothing over a fixed voltage span.
    let dv = {
        let mut spans: Vec<f64> = v.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        spans.sort_by(f64::total_cmp);
        spans[spans.len() / 2].max(1e-9)
    };
    let half = ((0.06 / dv / 2.0).round() as usize).max(1);
    let n = v.len();
    let smooth: Vec<f64> = (0..n)
        .map(|m| {
            let lo = m.saturating_sub(half);
            let hi = (m + half).min(n - 1);
            y[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect();

    // Noise floor: median of the absolute smoothed residual.
    let mut mags: Vec<f64> = smooth.iter().map(|x| x.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let floor = mags[mags.len() / 2].max(1e-12);

    let (best, &best_y) = smooth
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    if best_y <= 3.0 * floor || !(best_y > 0.0) {
        return None;
    }

    // Half-max centroid for the position.
    let half_max = 0.5 * best_y;
    let (mut lo, mut hi) = (best, best);
    while lo > 0 && smooth[lo - 1] >= half_max {
        lo -= 1;
    }
    while hi + 1 < n && smooth[hi + 1] >= half_max {
        hi += 1;
    }
    let wsum: f64 = smooth[lo..=hi].iter().sum();
    let v_peak: f64 = smooth[lo..=hi]
        .iter()
        .zip(&v[lo..=hi])
        .map(|(w, vv)| w * vv)
        .sum::<f64>()
        / wsum;

    Some(PeakReport {
        polarity,
        v_peak,
        fwhm: half_max_width(v, &smooth, best),
        i_peak: best_y,
    })
}

fn peaks_from_samples(w: &WindowSamples) -> Vec<PeakReport> {
    let n = w.t.len();
    // Split into ascending and descending branches.
    let mut asc_v = Vec::new();
    let mut asc_y = Vec::new();
    let mut desc_v = Vec::new();
    let mut desc_y = Vec::new();
    for k in 1..n {
        if w.v[k] > w.v[k - 1] {
            asc_v.push(w.v[k]);
            asc_y.push(w.residual[k]);
        } else if w.v[k] < w.v[k - 1] {
            desc_v.push(w.v[k]);
            desc_y.push(-w.residual[k]);
        }
    }
    desc_v.reverse();
    desc_y.reverse();

    let mut out = Vec::new();
    if let Some(p) = branch_peak(&asc_v, &asc_y, PeakPolarity::Positive) {
        out.push(p);
    }
    if let Some(mut p) = branch_peak(&desc_v, &desc_y, PeakPolarity::Negative) {
        p.i_peak = -p.i_peak;
        out.push(p);
    }
    out
}

/// Locates the per-polarity switching-current peaks of a sweep trace after
/// removing the displacement baseline and the tunneling estimate. Returns
/// an empty list when nothing rises above 3× the residual noise floor.
pub fn extract_switching_peaks(
    trace: &Trace,
    stack: &FtjStack,
    v_signal: &str,
    i_signal: &str,
    window: (f64, f64),
    mode: BaselineMode,
) -> Vec<PeakReport> {
    match reduce(trace, stack, v_signal, i_signal, window, mode) {
        Ok(w) => peaks_from_samples(&w),
        Err(_) => Vec::new(),
    }
}

/// Tunneling electro-resistance at `v_read`: the LRS/HRS current ratio.
pub fn extract_ter(lrs: &ReadCurve, hrs: &ReadCurve, v_read: f64) -> Result<f64, ExtractError> {
    let i_lrs = lrs.current_at(v_read);
    let i_hrs = hrs.current_at(v_read);
    if i_hrs == 0.0 {
        return Err(ExtractError::ZeroHrsCurrent);
    }
    Ok(i_lrs / i_hrs)
}

/// Energy delivered through `v_signal`/`i_signal` over the window (J),
/// trapezoid rule.
pub fn program_energy(
    trace: &Trace,
    v_signal: &str,
    i_signal: &str,
    window: (f64, f64),
) -> Result<f64, ExtractError> {
    let v = trace.signal(v_signal)?;
    let i = trace.signal(i_signal)?;
    let t = &trace.time;
    let mut energy = 0.0;
    let mut any = false;
    for k in 1..t.len() {
        if t[k] < window.0 || t[k] > window.1 {
            continue;
        }
        any = true;
        energy += 0.5 * (v[k] * i[k] + v[k - 1] * i[k - 1]) * (t[k] - t[k - 1]);
    }
    if !any {
        return Err(ExtractError::EmptyWindow);
    }
    Ok(energy)
}
