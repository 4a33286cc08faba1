//! Monte Carlo check of the assignment bound on the empirical distance.
//!
//! Each trial draws Gaussian samples around k random centers and compares
//! two numbers: the mean squared deviation of samples from their own centers
//! (the bound) and the exact transport distance between the uniform measure
//! on centers and the uniform measure on samples. Sending every sample back
//! to its center is one feasible plan, so the bound always dominates. Across
//! trials the bound concentrates around `d sigma^2` with variance
//! `2 d sigma^4 / N`.
//!
//! Run with `cargo run --release --example noise_bound`.

use ndarray::Array2;
use otsr::oracle::{center_assignment_cost, empirical_ot_distance, generate_noisy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let d = 2;
    let k = 3;
    let samples_per_point = 10;
    let sigma = 0.5;
    let trials = 300;

    let n_total = (k * samples_per_point) as f64;
    let expected_mean = d as f64 * sigma * sigma;
    let expected_var = 2.0 * d as f64 * sigma.powi(4) / n_total;

    let mut bounds = Vec::with_capacity(trials);
    let mut violations = 0usize;
    for trial in 0..trials {
        let seed = 1000 + trial as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let centers =
            Array2::from_shape_fn((k, d), |_| rng.random_range(0.0..10.0));
        let set = generate_noisy(&centers, sigma, samples_per_point, seed).unwrap();

        let bound = center_assignment_cost(&set);
        let exact = empirical_ot_distance(&set).unwrap();
        if exact > bound + 1e-9 {
            violations += 1;
        }
        bounds.push(bound);
    }

    let mean = bounds.iter().sum::<f64>() / trials as f64;
    let var = bounds
        .iter()
        .map(|b| (b - mean) * (b - mean))
        .sum::<f64>()
        / (trials - 1) as f64;

    println!("{trials} trials, d = {d}, k = {k}, {samples_per_point} samples per center");
    println!();
    println!("bound >= exact distance in {}/{trials} trials", trials - violations);
    println!("bound mean     {mean:.6}  (theory {expected_mean:.6})");
    println!("bound variance {var:.6}  (theory {expected_var:.6})");

    let se = (expected_var / trials as f64).sqrt();
    println!("mean is {:.2} standard errors from theory", (mean - expected_mean).abs() / se);
    assert_eq!(violations, 0);
}
