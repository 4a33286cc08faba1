//! End-to-end batch run from files on disk.
//!
//! Writes a small set of labeled patches as CSV bands plus a JSON manifest,
//! classifies the whole batch in parallel, and reads back the JSONL records.
//! This is the same path the `classify` subcommand takes.
//!
//! Run with `cargo run --release --example batch_manifest`.

use otsr::pipeline::write_patch_fixtures;
use otsr::synth::classification_fixture;
use otsr::{run_batch, ClassificationRecord, Connectivity, Method, SinkhornConfig, SolverConfig};

fn main() {
    let dir = tempfile::tempdir().expect("create temp dir");
    let patches = classification_fixture(10, 4, 0.01, None, 9).unwrap();
    let manifest = write_patch_fixtures(dir.path(), &patches).unwrap();
    println!("manifest: {}", manifest.display());

    let cfg = SolverConfig {
        lambda: 1.0,
        initial_step: 0.001,
        step_cap: 0.01,
        max_steps: 50,
        convergence_tol: 1e-6,
        sinkhorn: SinkhornConfig {
            epsilon: 1.0,
            max_iters: 20_000,
            tolerance: 1e-6,
            stabilized: true,
        },
    };
    let output = dir.path().join("records.jsonl");
    let summary = run_batch(
        &manifest,
        &cfg,
        Method::Sparse,
        0.75,
        Connectivity::Eight,
        &output,
        None,
    )
    .unwrap();
    println!(
        "summary: {} cluster, {} not-cluster, {} errored",
        summary.cluster, summary.not_cluster, summary.errored
    );
    println!();

    let text = std::fs::read_to_string(&output).unwrap();
    for line in text.lines() {
        let record: ClassificationRecord = serde_json::from_str(line).unwrap();
        println!(
            "{:<12} peaks {:?} -> {}",
            record.id,
            record.per_band_peaks,
            if record.label { "cluster" } else { "not-cluster" }
        );
    }
}
