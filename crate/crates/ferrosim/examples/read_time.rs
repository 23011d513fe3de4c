//! The read-time law t = ΔV·C0/J: developing a voltage on a node whose
//! capacitance the FTJ itself dominates is limited by the ratio of
//! self-capacitance to read current density, independent of device area.
//!
//! ```bash
//! cargo run --release -p ferrosim --example read_time
//! ```

use ferrosim::ftj::{builtin_variant, read_time, tunneling_current_density, VariantName};

fn main() {
    let stack = builtin_variant(VariantName::A).stack;
    let c0 = stack.background_capacitance_per_area();
    println!("device-A self-capacitance: {:.3} µF/cm²", c0 * 1e6);

    println!("time to develop 50 mV vs read current density:");
    for j in [1e-6, 1e-5, 1e-4, 1e-3, 1e-2] {
        let t = read_time(0.05, c0, j).unwrap();
        println!("  J = {j:.0e} A/cm² -> t_read = {:.3e} s", t);
    }

    // At the preset's own read point the density is low and reads are slow;
    // that is the trade the low-power read current buys.
    let j_read = tunneling_current_density(&stack, 2.0, 1.0);
    let t = read_time(0.05, c0, j_read).unwrap();
    println!(
        "preset LRS density at 2.0 V: {:.2e} A/cm² -> t_read(50 mV) = {:.1} ms",
        j_read,
        t * 1e3
    );
    println!("parallel restore amortizes this: every cell develops simultaneously");
}
