//! Sparse recovery of a blurred 1-D signal at three sparsity weights.
//!
//! The measurement spreads mass over two humps on a 10-site lattice. With no
//! entropy penalty the minimizer is the measurement itself. A moderate
//! penalty collapses each hump onto a single site, and a heavy penalty
//! collapses everything onto one site.
//!
//! Run with `cargo run --example sparse_signal_1d`.

use otsr::{sparse_approx, CostMatrix, ProbVec, SolverConfig};

fn print_vec(tag: &str, v: &[f64]) {
    let cells: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    println!("{tag} [{}]", cells.join(", "));
}

fn main() {
    let nu = ProbVec::new(&[0.2, 0.15, 0.0, 0.0, 0.0, 0.1, 0.15, 0.2, 0.15, 0.1]).unwrap();
    let cost = CostMatrix::lattice_1d_squared(nu.len());

    print_vec("measurement:    ", nu.values());
    println!();

    for lambda in [0.0, 10.0, 100.0] {
        let cfg = SolverConfig {
            lambda,
            ..SolverConfig::signal_defaults()
        };
        let trace = sparse_approx(&nu, &cost, &cfg).unwrap();
        trace.check_invariants().unwrap();

        println!(
            "lambda = {lambda}: {} accepted steps, stopped on {:?}",
            trace.steps, trace.stop
        );
        print_vec("  final iterate:", trace.final_iterate.values());
        println!(
            "  support {:?}, entropy {:.4}, objective {:.6}",
            trace.final_iterate.support(),
            trace.final_iterate.entropy(),
            trace.objectives.last().unwrap()
        );
        println!();
    }

    println!("objective per step at lambda = 10:");
    let cfg = SolverConfig {
        lambda: 10.0,
        ..SolverConfig::signal_defaults()
    };
    let trace = sparse_approx(&nu, &cost, &cfg).unwrap();
    for (step, objective) in trace.objectives.iter().enumerate() {
        println!("  step {step:>2}: {objective:.8}");
    }
}
