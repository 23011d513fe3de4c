//! Triangular IV sweep of device A at the two reference slew rates:
//! displacement plateau, switching peaks, and the extracted PV loop.
//!
//! ```bash
//! cargo run --release -p ferrosim --example iv_sweep
//! ```

use ferrosim::characterization::{
    extract_pv, extract_switching_peaks, last_cycle_window, run_triangle_sweep, BaselineMode,
};
use ferrosim::cli::write_trace_csv;
use ferrosim::ftj::{builtin_variant, VariantName};

fn main() {
    let variant = builtin_variant(VariantName::A);
    for slew in [1.1e4, 5.5e5] {
        let trace = run_triangle_sweep(&variant, 5.5, slew, 2);
        let window = last_cycle_window(5.5, slew, 2);
        let pv = extract_pv(
            &trace,
            &variant.stack,
            "v(dev)",
            "i(dev)",
            window,
            BaselineMode::ModelC0,
        )
        .expect("steady-state cycle");
        let peaks = extract_switching_peaks(
            &trace,
            &variant.stack,
            "v(dev)",
            "i(dev)",
            window,
            BaselineMode::ModelC0,
        );

        println!("slew {:.2e} V/s:", slew);
        println!("  Pr+ = {:.2} µC/cm², Pr− = {:.2} µC/cm²", pv.pr_plus * 1e6, pv.pr_minus * 1e6);
        println!("  Vc+ = {:.3} V, Vc− = {:.3} V", pv.vc_plus, pv.vc_minus);
        for p in &peaks {
            println!(
                "  {:?} peak: {:.3} V, FWHM {:.0} mV, height {:.1} µA",
                p.polarity,
                p.v_peak,
                p.fwhm * 1e3,
                p.i_peak.abs() * 1e6
            );
        }

        let out = std::env::temp_dir().join(format!("ferrosim_iv_{slew:.0}.csv"));
        write_trace_csv(&trace, &out).expect("write CSV");
        println!("  trace -> {}", out.display());
    }
}
