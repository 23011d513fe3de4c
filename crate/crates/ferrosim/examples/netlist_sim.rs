//! Parses a netlist from text, validates it, runs a transient, and writes
//! the trace as CSV — the same path the `ferrosim sim` subcommand takes.
//!
//! ```bash
//! cargo run --release -p ferrosim --example netlist_sim
//! ```

use ferrosim::cli::write_trace_csv;
use ferrosim::engine::{transient, SolverConfig};
use ferrosim::netlist::{parse_netlist, serialize_netlist, validate_netlist};

const BENCH: &str = "\
ftj pulse bench
* set pulse, relax, then a staircase-free read level
VDRV in 0 PWL(0 0 1u 0 1.05u 4.5 11u 4.5 11.05u 0 16u 0 16.05u 1.6 60u 1.6)
R1 in top 10k
F1 top 0 VARIANT=A AREA=1e-8 SCALE=100 P0=-1
.tran 0.2u 60u
.end
";

fn main() {
    let netlist = parse_netlist(BENCH).expect("bench parses");
    for d in validate_netlist(&netlist) {
        println!("diagnostic: {d}");
    }
    println!("canonical form:\n{}", serialize_netlist(&netlist));

    let result = transient(&netlist, 60e-6, &SolverConfig::default()).expect("transient converges");
    println!(
        "steps = {}, rejected = {}, worst KCL residual = {:.2e} A",
        result.stats.steps, result.stats.rejected, result.stats.max_kcl_residual
    );
    let p_end = result.trace.sample("p(f1)", 60e-6).unwrap();
    let i_read = result.trace.sample("i(f1)", 60e-6).unwrap();
    println!("final polarization p = {p_end:.3} (set pulse switched the device)");
    println!("read-level current = {:.3e} A", i_read);

    let out = std::env::temp_dir().join("ferrosim_netlist_sim.csv");
    write_trace_csv(&result.trace, &out).expect("write CSV");
    println!("trace -> {}", out.display());
}
