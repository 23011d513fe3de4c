//! Staircase read of device A: the step-and-settle protocol samples the
//! current after the displacement transient has died, isolating the
//! polarization-dependent tunneling current. Prints the LRS/HRS curves
//! and the tunneling electro-resistance.
//!
//! ```bash
//! cargo run --release -p ferrosim --example staircase_read
//! ```

use ferrosim::characterization::{extract_ter, run_staircase_read, ReadState};
use ferrosim::ftj::{builtin_variant, VariantName};

fn main() {
    let variant = builtin_variant(VariantName::A);
    let lrs = run_staircase_read(&variant, variant.read_vmax, 0.05, 10e-6, ReadState::Lrs);
    let hrs = run_staircase_read(&variant, variant.read_vmax, 0.05, 10e-6, ReadState::Hrs);

    println!("  V      I_LRS        I_HRS");
    for k in (7..lrs.v.len()).step_by(8) {
        println!(
            "{:5.2} V  {:.3e} A  {:.3e} A",
            lrs.v[k], lrs.i[k], hrs.i[k]
        );
    }
    let ter = extract_ter(&lrs, &hrs, variant.read_vmax).expect("finite HRS current");
    println!("read current at {:.1} V: {:.2} nA (LRS)", variant.read_vmax, lrs.current_at(variant.read_vmax) * 1e9);
    println!("TER = {ter:.2}");
    println!(
        "polarization disturb over the whole staircase: {:.2e} of 2·Pr (flagged: {})",
        lrs.disturb, lrs.disturbed
    );
}
