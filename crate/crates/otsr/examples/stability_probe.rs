//! How stable is the brute-force retrieval under measurement noise?
//!
//! Perturbs the measurement inside transport balls of shrinking radius and
//! reruns the retrieval each time, recording the worst L1 change of the
//! minimizer. On this instance the minimizer sits strictly inside the
//! feasible region, so small perturbations do not move it at all and the
//! worst change drops to zero with the radius.
//!
//! Run with `cargo run --example stability_probe`.

use otsr::oracle::{sparse_retrieval_bruteforce, stability_probe};
use otsr::{CostMatrix, ProbVec};

fn main() {
    let nu = ProbVec::new(&[0.44, 0.08, 0.48]).unwrap();
    let cost = CostMatrix::lattice_1d(3);
    let lambda_prime = 0.1;
    let trials = 40;

    let base = sparse_retrieval_bruteforce(&nu, &cost, lambda_prime).unwrap();
    println!("measurement {:?}", nu.values());
    println!(
        "unperturbed minimizer {:?} on support {:?}",
        base.values(),
        base.support()
    );
    println!();
    println!("{:>12}  {:>14}", "radius", "worst L1 move");

    let mut previous = f64::INFINITY;
    for radius in [0.05, 0.02, 0.01, 0.005, 0.001] {
        let worst = stability_probe(&nu, &cost, lambda_prime, radius, trials, 7).unwrap();
        println!("{radius:>12}  {worst:>14.6}");
        assert!(worst <= previous + 1e-12);
        previous = worst;
    }
}
