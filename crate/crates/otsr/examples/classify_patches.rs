//! Single-source versus multi-source patch classification.
//!
//! Generates labeled 10x10 patches (one Gaussian blob or two), adds salt
//! speckles and pixel noise, then classifies each patch twice: once through
//! the sparse approximation and once by thresholding the raw patch. Salt
//! pixels survive a raw threshold and break the naive peak count, while the
//! sparse route strips them because an isolated bright pixel is cheap to
//! move and expensive in entropy.
//!
//! Run with `cargo run --release --example classify_patches`.

use otsr::synth::{classification_fixture, LabeledPatch, SaltSpec};
use otsr::{classify_band, classify_band_naive, Connectivity, SinkhornConfig, SolverConfig};

fn accuracy(
    patches: &[LabeledPatch],
    judge: impl Fn(&LabeledPatch) -> bool,
) -> f64 {
    let hits = patches.iter().filter(|p| judge(p) == p.is_cluster).count();
    hits as f64 / patches.len() as f64
}

fn main() {
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
    let fraction = 0.75;
    let conn = Connectivity::Eight;

    let clean = classification_fixture(10, 6, 0.01, None, 41).unwrap();
    let salted = classification_fixture(10, 6, 0.01, Some(SaltSpec::default()), 42).unwrap();

    let sparse = |p: &LabeledPatch| classify_band(&p.pixels, &cfg, fraction, conn).unwrap().1;
    let naive = |p: &LabeledPatch| classify_band_naive(&p.pixels, fraction, conn).unwrap().1;

    println!("{} clean patches, {} salted patches", clean.len(), salted.len());
    println!();
    println!("{:<22} {:>8} {:>8}", "", "sparse", "naive");
    println!(
        "{:<22} {:>7.0}% {:>7.0}%",
        "accuracy on clean",
        100.0 * accuracy(&clean, sparse),
        100.0 * accuracy(&clean, naive)
    );
    println!(
        "{:<22} {:>7.0}% {:>7.0}%",
        "accuracy on salted",
        100.0 * accuracy(&salted, sparse),
        100.0 * accuracy(&salted, naive)
    );

    println!();
    println!("per-patch peak counts on the salted set:");
    for p in &salted {
        let (sp, _) = classify_band(&p.pixels, &cfg, fraction, conn).unwrap();
        let (np, _) = classify_band_naive(&p.pixels, fraction, conn).unwrap();
        let truth = if p.is_cluster { 1 } else { 2 };
        println!("  {:<12} true {truth}  sparse {sp}  naive {np}", p.id);
    }
}
