//! Fits the switching kinetics (attempt time and mean activation field)
//! to two (slew, Vc) anchor points and verifies the fitted model
//! reproduces both peak positions.
//!
//! ```bash
//! cargo run --release -p ferrosim --example calibrate_kinetics
//! ```

use ferrosim::ftj::{builtin_variant, calibrate_nls, ramp_peak_voltage, CalibrationTarget, VariantName};

fn main() {
    let stack = builtin_variant(VariantName::A).stack;
    let targets = [
        CalibrationTarget { slew: 1.1e4, vc: 2.5 },
        CalibrationTarget { slew: 5.5e5, vc: 4.0 },
    ];
    println!("anchors: Vc(11 mV/µs) = 2.5 V, Vc(0.55 V/µs) = 4.0 V");
    match calibrate_nls(&targets, &stack) {
        Ok(params) => {
            println!("fitted: tau0 = {:.4e} s, ea_mean = {:.4e} V/cm", params.tau0, params.ea_mean);
            let mut fitted = stack;
            fitted.nls = params;
            for t in &targets {
                let vc = ramp_peak_voltage(&fitted, t.slew, 5.5).expect("switching peak");
                println!(
                    "  check: Vc({:.2e} V/s) = {:.3} V (target {:.1}, residual {:+.0} mV)",
                    t.slew,
                    vc,
                    t.vc,
                    (vc - t.vc) * 1e3
                );
            }
        }
        Err(e) => println!("calibration failed: {e}"),
    }

    // The time-voltage trade-off the fit encodes: effective coercive
    // voltage grows with slew rate.
    let preset = builtin_variant(VariantName::A).stack;
    println!("time-voltage trade-off of the shipped preset:");
    for slew in [2e3, 1.1e4, 5e4, 2e5, 5.5e5, 2e6] {
        if let Some(vc) = ramp_peak_voltage(&preset, slew, 6.5) {
            println!("  slew {slew:9.2e} V/s -> Vc+ = {vc:.3} V");
        }
    }
}
