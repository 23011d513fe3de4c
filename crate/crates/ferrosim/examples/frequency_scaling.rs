//! Displacement-current scaling: the background-capacitance plateau grows
//! linearly with slew rate while the effective coercive voltage creeps up
//! through the switching-time trade-off.
//!
//! ```bash
//! cargo run --release -p ferrosim --example frequency_scaling
//! ```

use ferrosim::characterization::frequency_scaling_report;
use ferrosim::ftj::{builtin_variant, VariantName};

fn main() {
    let variant = builtin_variant(VariantName::A);
    let slews = [5.5e3, 1.1e4, 5.5e4, 1.1e5, 5.5e5];
    let report = frequency_scaling_report(&variant, 5.5, &slews);
    println!("slew (V/s)   plateau (A)   Vc+ (V)");
    for row in &report.rows {
        println!(
            "{:9.2e}   {:9.3e}   {}",
            row.slew,
            row.plateau,
            row.vc_plus.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into())
        );
    }
    println!(
        "proportional-fit residual: {:.2e} (plateau ∝ slew)",
        report.linear_fit_residual
    );
}
