//! The whole pipeline in one call: synthesize the built-in 100-event
//! benchmark, filter, calibrate, classify, map commands and evaluate,
//! leaving every artifact in a directory.
//!
//! Run with `cargo run --release --example full_pipeline`.

use eogkit::pipeline::{artifacts, run_pipeline};

fn main() {
    let out_dir = std::env::temp_dir().join("eogkit_full_pipeline");
    let _ = std::fs::remove_dir_all(&out_dir);

    let started = std::time::Instant::now();
    let matrix = run_pipeline(None, false, &out_dir).expect("pipeline runs");
    let elapsed = started.elapsed();

    println!(
        "accuracy {:.3} ({}/{} events, {} false positives) in {:.2?}",
        matrix.accuracy(),
        matrix.correct(),
        matrix.total_truth(),
        matrix.total_false_positives(),
        elapsed
    );
    println!("\nartifacts in {}:", out_dir.display());
    for name in [
        artifacts::SCENARIO,
        artifacts::SESSION,
        artifacts::SWEEP,
        artifacts::SWEEP_FILTERED,
        artifacts::FILTERED,
        artifacts::PROFILE,
        artifacts::EVENTS,
        artifacts::COMMANDS,
        artifacts::EVAL,
    ] {
        let size = std::fs::metadata(out_dir.join(name))
            .map(|m| m.len())
            .unwrap_or(0);
        println!("  {name:20} {size:>9} bytes");
    }
    println!("\nsame flow, stage by stage: see the `eogkit` binary's subcommands.");
}
