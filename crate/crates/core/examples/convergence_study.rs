//! Runs the convergence study of a config file and prints the rate table.
//!
//! `cargo run --release --example convergence_study -- [config.toml]`

use std::path::PathBuf;

use gpc_surrogate::harness::run_study;
use gpc_surrogate::StudyConfig;

fn main() -> gpc_surrogate::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/torus_d1.toml"));
    let cfg = StudyConfig::load(&path)?;
    let result = run_study(&cfg)?;
    println!(
        "{:>6} {:>6} {:>8} {:>7} {:>11} {:>11}",
        "N", "cost", "outputs", "solves", "wc error", "rms"
    );
    for r in &result.rows {
        println!(
            "{:>6} {:>6} {:>8} {:>7} {:>11.3e} {:>11.3e}",
            r.budget,
            r.realized_cost,
            r.outputs,
            r.solves,
            r.wc_error,
            r.mse.sqrt()
        );
    }
    for s in &result.slopes {
        println!(
            "{}: fitted slope {:.3}, predicted {:.3}",
            s.quantity, s.slope, -s.theory
        );
    }
    Ok(())
}
