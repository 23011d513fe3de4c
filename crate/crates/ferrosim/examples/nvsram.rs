//! Non-volatile SRAM: stores the latched state into the two FTJs, powers
//! down, and restores it on power-up through the develop-then-amplify
//! sequence; then a Monte-Carlo over transistor threshold mismatch.
//!
//! ```bash
//! cargo run --release -p ferrosim --example nvsram
//! ```

use ferrosim::cells::{
    run_nvsram_restore, run_nvsram_restore_mc, run_nvsram_store, run_sram_read, CellConfig,
    VtMismatch,
};

fn main() {
    let config = CellConfig::default();
    for logic in [true, false] {
        let store = run_nvsram_store(&config, logic).expect("store converges");
        let (metrics, _) = run_nvsram_restore(
            &config,
            (store.p1, store.p2),
            200e-6,
            &VtMismatch::default(),
        )
        .expect("restore converges");
        println!(
            "logic {}: stored (p1, p2) = ({:+.0}, {:+.0}); develop Δv = {:.1} mV; swing {:.2} V; correct = {}",
            logic as u8,
            store.p1,
            store.p2,
            metrics.dv_n1n2_at_t * 1e3,
            metrics.q_qn_swing.unwrap_or(0.0),
            metrics.restore_correct.unwrap_or(false)
        );
    }

    let (read, _) = run_sram_read(&config, true).expect("read converges");
    println!(
        "latched read: bitline split {:+.2} V, non-destructive = {}",
        read.dv_n1n2_at_t,
        read.restore_correct.unwrap_or(false)
    );

    let trials = 100;
    let report = run_nvsram_restore_mc(&config, trials, 5e-3, 200e-6).expect("MC converges");
    println!(
        "Monte-Carlo restore with σ(vt) = 5 mV: {}/{} correct (failures: {:?})",
        report.correct, report.trials, report.failures
    );
}
