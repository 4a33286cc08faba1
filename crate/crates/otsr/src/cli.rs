//! Command-line front end: a 1-D sparse-approximation demo, batch patch
//! classification (sparse and naive), and two verification sweeps that double
//! as CI gates. Exit codes: 0 success, 1 solver or assertion failure, 2 bad
//! input or I/O failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::CostMatrix;
use crate::error::{Error, Result};
use crate::oracle::{
    center_assignment_cost, empirical_ot_distance, exact_ot_1d, exact_ot_lp, generate_noisy,
};
use crate::pipeline::{run_batch, Method};
use crate::simplex::ProbVec;
use crate::sinkhorn::{sinkhorn, SinkhornConfig};
use crate::solver::{sparse_approx, SolverConfig};
use crate::topology::Connectivity;

/// Stream separator so per-trial center and noise draws never share a seed.
const CENTER_SEED_SPLIT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Parser)]
#[command(
    name = "otsr",
    version,
    about = "Sparse super-resolution of nonnegative signals and images via entropic optimal transport"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the 1-D lattice demo: sparse approximation of a 10-bin signal.
    Demo1d(Demo1dArgs),
    /// Classify a manifest of image patches and write JSON-lines records.
    Classify(ClassifyArgs),
    /// Classify without sparsification (threshold the raw bands).
    ClassifyNaive(ClassifyNaiveArgs),
    /// Monte Carlo check of the noise transport bound; CSV per trial.
    NoiseBench(NoiseBenchArgs),
    /// Sweep Sinkhorn against the exact OT oracles; CSV per instance.
    OracleCheck(OracleCheckArgs),
}

#[derive(Args)]
struct Demo1dArgs {
    /// Sparsity weight on the entropy term.
    #[arg(long, default_value_t = 10.0)]
    lambda: f64,
    /// Entropic regularization of the inner transport solves.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Upper bound on the line-search step; also the starting trial step.
    #[arg(long, default_value_t = 0.01)]
    step_cap: f64,
    #[arg(long, default_value_t = 50)]
    max_steps: usize,
    #[arg(long, default_value_t = 100_000)]
    sinkhorn_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    sinkhorn_tol: f64,
    /// Ground cost on the lattice: plain distance or its square.
    #[arg(long, value_parser = ["linear", "squared"], default_value = "squared")]
    cost: String,
    /// CSV vector to approximate instead of the built-in 10-bin signal.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Trace CSV: one row per accepted step (step, entries, objective).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.001)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.01)]
    step_cap: f64,
    #[arg(long, default_value_t = 50)]
    max_steps: usize,
    #[arg(long, default_value_t = 500)]
    sinkhorn_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    sinkhorn_tol: f64,
    /// Superlevel threshold as a fraction of each band's maximum.
    #[arg(long, default_value_t = 0.75)]
    threshold: f64,
    /// Pixel adjacency for peak counting: 4 or 8.
    #[arg(long, default_value_t = 8)]
    connectivity: u8,
    #[arg(long, value_parser = ["sparse", "naive"], default_value = "sparse")]
    method: String,
    /// JSON manifest of images: [{id, bands: [{name, path}]}].
    #[arg(long)]
    input: PathBuf,
    /// JSON-lines output, one record per image.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct ClassifyNaiveArgs {
    #[arg(long, default_value_t = 0.75)]
    threshold: f64,
    #[arg(long, default_value_t = 8)]
    connectivity: u8,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct NoiseBenchArgs {
    /// Ambient dimension of the sampled points.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Noise standard deviation per component.
    #[arg(long, default_value_t = 0.5)]
    sigma: f64,
    /// Samples drawn around each center.
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Number of centers per trial.
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// CSV output (trial, bound, exact).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleCheckArgs {
    /// Largest instance size; each instance draws its size from 2..=n.
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, default_value_t = 200_000)]
    sinkhorn_iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    sinkhorn_tol: f64,
    #[arg(long, default_value_t = 11)]
    seed: u64,
    /// CSV output (instance, n, sinkhorn, exact, gap, bound).
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parses arguments from the process environment and runs one command,
/// returning the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Demo1d(args) => cmd_demo1d(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::ClassifyNaive(args) => cmd_classify_naive(&args),
        Command::NoiseBench(args) => cmd_noise_bench(&args),
        Command::OracleCheck(args) => cmd_oracle_check(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::InvalidInput(_) => 2,
                _ => 1,
            }
        }
    }
}

fn demo_signal() -> ProbVec {
    ProbVec::new(&[0.2, 0.15, 0.0, 0.0, 0.0, 0.1, 0.15, 0.2, 0.15, 0.1])
        .expect("built-in demo signal is valid")
}

fn read_vector_csv(path: &Path) -> Result<ProbVec> {
    let text = std::fs::read_to_string(path)?;
    let values: Vec<f64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad number {s:?} in {}", path.display())))
        })
        .collect::<Result<_>>()?;
    if values.is_empty() {
        return Err(Error::InvalidInput(format!("{} is empty", path.display())));
    }
    ProbVec::new(&values).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn cmd_demo1d(args: &Demo1dArgs) -> Result<i32> {
    let nu = match &args.input {
        Some(path) => read_vector_csv(path)?,
        None => demo_signal(),
    };
    let n = nu.len();
    let cost = match args.cost.as_str() {
        "linear" => CostMatrix::lattice_1d(n),
        _ => CostMatrix::lattice_1d_squared(n),
    };
    let cfg = SolverConfig {
        lambda: args.lambda,
        initial_step: args.step_cap,
        step_cap: args.step_cap,
        max_steps: args.max_steps,
        convergence_tol: 1e-6,
        sinkhorn: SinkhornConfig {
            epsilon: args.epsilon,
            max_iters: args.sinkhorn_iters,
            tolerance: args.sinkhorn_tol,
            stabilized: true,
        },
    };
    let trace = sparse_approx(&nu, &cost, &cfg)?;

    if let Some(path) = &args.output {
        let mut out = String::new();
        let cols: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        out.push_str(&format!("step,{},objective\n", cols.join(",")));
        for (step, (iterate, objective)) in
            trace.iterates.iter().zip(&trace.objectives).enumerate()
        {
            let vals: Vec<String> = iterate.values().iter().map(|v| format!("{v}")).collect();
            out.push_str(&format!("{step},{},{objective}\n", vals.join(",")));
        }
        std::fs::write(path, out)?;
    }

    let final_vals: Vec<String> = trace
        .final_iterate
        .values()
        .iter()
        .map(|v| format!("{v}"))
        .collect();
    println!("{}", final_vals.join(","));
    eprintln!(
        "steps: {}, converged: {}, objective: {}",
        trace.steps,
        trace.converged,
        trace.objectives.last().expect("trace is never empty")
    );
    Ok(0)
}

fn parse_connectivity(value: u8) -> Result<Connectivity> {
    match value {
        4 => Ok(Connectivity::Four),
        8 => Ok(Connectivity::Eight),
        other => Err(Error::InvalidInput(format!(
            "connectivity must be 4 or 8, got {other}"
        ))),
    }
}

fn batch_threads() -> Result<Option<usize>> {
    match std::env::var("OT_SR_THREADS") {
        Ok(raw) => raw
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Error::InvalidInput(format!("OT_SR_THREADS must be an integer, got {raw:?}"))),
        Err(_) => Ok(None),
    }
}

fn print_summary(summary: &crate::pipeline::BatchSummary) {
    if summary.errored > 0 {
        println!(
            "cluster: {}, not-cluster: {}, errored: {}",
            summary.cluster, summary.not_cluster, summary.errored
        );
    } else {
        println!(
            "cluster: {}, not-cluster: {}",
            summary.cluster, summary.not_cluster
        );
    }
}

fn cmd_classify(args: &ClassifyArgs) -> Result<i32> {
    let connectivity = parse_connectivity(args.connectivity)?;
    let method = match args.method.as_str() {
        "naive" => Method::Naive,
        _ => Method::Sparse,
    };
    let cfg = SolverConfig {
        lambda: args.lambda,
        initial_step: 0.001,
        step_cap: args.step_cap,
        max_steps: args.max_steps,
        convergence_tol: 1e-6,
        sinkhorn: SinkhornConfig {
            epsilon: args.epsilon,
            max_iters: args.sinkhorn_iters,
            tolerance: args.sinkhorn_tol,
            stabilized: true,
        },
    };
    let summary = run_batch(
        &args.input,
        &cfg,
        method,
        args.threshold,
        connectivity,
        &args.output,
        batch_threads()?,
    )?;
    print_summary(&summary);
    Ok(0)
}

fn cmd_classify_naive(args: &ClassifyNaiveArgs) -> Result<i32> {
    let connectivity = parse_connectivity(args.connectivity)?;
    let cfg = SolverConfig::imaging_defaults();
    let summary = run_batch(
        &args.input,
        &cfg,
        Method::Naive,
        args.threshold,
        connectivity,
        &args.output,
        batch_threads()?,
    )?;
    print_summary(&summary);
    Ok(0)
}

fn cmd_noise_bench(args: &NoiseBenchArgs) -> Result<i32> {
    if args.d == 0 || args.n == 0 || args.k == 0 || args.trials == 0 {
        return Err(Error::InvalidInput(
            "d, n, k and trials must all be positive".into(),
        ));
    }
    let total = args.k * args.n;
    if args.k * total > 4096 {
        return Err(Error::InvalidInput(format!(
            "k*(k*n) = {} exceeds the exact-LP budget of 4096 cells",
            args.k * total
        )));
    }
    if !(args.sigma >= 0.0 && args.sigma.is_finite()) {
        return Err(Error::InvalidInput(format!("bad sigma {}", args.sigma)));
    }

    let mut rows = String::from("trial,bound,exact\n");
    let mut bounds = Vec::with_capacity(args.trials);
    let mut violations = 0usize;
    for t in 0..args.trials {
        let trial_seed = args.seed + t as u64;
        let mut center_rng = ChaCha8Rng::seed_from_u64(trial_seed ^ CENTER_SEED_SPLIT);
        let mut centers = Array2::<f64>::zeros((args.k, args.d));
        for v in centers.iter_mut() {
            *v = center_rng.random_range(0.0..10.0);
        }
        let set = generate_noisy(&centers, args.sigma, args.n, trial_seed)?;
        let bound = center_assignment_cost(&set);
        let exact = empirical_ot_distance(&set)?;
        if exact > bound + 1e-9 {
            violations += 1;
        }
        bounds.push(bound);
        rows.push_str(&format!("{t},{bound},{exact}\n"));
    }
    if let Some(path) = &args.output {
        std::fs::write(path, rows)?;
    }

    let trials = args.trials as f64;
    let mean = bounds.iter().sum::<f64>() / trials;
    let mut ok = violations == 0;
    if violations > 0 {
        eprintln!("FAIL: exact distance exceeded the bound in {violations} trials");
    }

    if args.sigma == 0.0 {
        if bounds.iter().any(|&b| b != 0.0) {
            eprintln!("FAIL: zero-noise trials must have exactly zero bound");
            ok = false;
        }
        println!("trials: {}, mean bound: {mean} (noiseless)", args.trials);
    } else {
        let d = args.d as f64;
        let big_n = total as f64;
        let target_mean = d * args.sigma.powi(2);
        let target_var = 2.0 * d * args.sigma.powi(4) / big_n;
        let se = (target_var / trials).sqrt();
        println!(
            "trials: {}, mean bound: {mean}, target: {target_mean}, standard error: {se}",
            args.trials
        );
        if args.trials >= 30 && (mean - target_mean).abs() > 3.0 * se {
            eprintln!(
                "FAIL: mean bound {mean} is more than 3 standard errors from {target_mean}"
            );
            ok = false;
        }
        if args.trials >= 100 && total >= 30 {
            let var = bounds
                .iter()
                .map(|b| (b - mean) * (b - mean))
                .sum::<f64>()
                / (trials - 1.0);
            println!("sample variance: {var}, target: {target_var}");
            if (var - target_var).abs() > 0.2 * target_var {
                eprintln!("FAIL: sample variance {var} is outside 20% of {target_var}");
                ok = false;
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_oracle_check(args: &OracleCheckArgs) -> Result<i32> {
    if args.n < 2 || args.n > 10 || args.instances == 0 {
        return Err(Error::InvalidInput(
            "need 2 <= n <= 10 and at least one instance".into(),
        ));
    }
    if !(args.epsilon > 0.0 && args.epsilon.is_finite()) {
        return Err(Error::InvalidInput(format!("bad epsilon {}", args.epsilon)));
    }
    let sink = SinkhornConfig {
        epsilon: args.epsilon,
        max_iters: args.sinkhorn_iters,
        tolerance: args.sinkhorn_tol,
        stabilized: true,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut rows = String::from("instance,n,sinkhorn,exact,gap,bound\n");
    let mut ok = true;
    let mut max_gap: f64 = 0.0;
    for t in 0..args.instances {
        let n = rng.random_range(2..=args.n);
        let mu = random_positive(n, &mut rng);
        let nu = random_positive(n, &mut rng);
        let cost = CostMatrix::lattice_1d(n);
        let res = sinkhorn(&mu, &nu, &cost, &sink)?;
        let exact_cdf = exact_ot_1d(&mu, &nu)?;
        let exact_lp = exact_ot_lp(&mu, &nu, &cost)?;
        let gap = (res.distance - exact_cdf).abs();
        let bound = 2.0 * args.epsilon * (n as f64).ln();
        max_gap = max_gap.max(gap);
        rows.push_str(&format!(
            "{t},{n},{},{exact_cdf},{gap},{bound}\n",
            res.distance
        ));
        if !res.converged {
            eprintln!("FAIL: instance {t} did not converge in {} iterations", res.iterations);
            ok = false;
        }
        if (exact_cdf - exact_lp).abs() > 1e-9 {
            eprintln!(
                "FAIL: instance {t}: oracles disagree, cdf {exact_cdf} vs lp {exact_lp}"
            );
            ok = false;
        }
        if gap > bound + 1e-6 {
            eprintln!("FAIL: instance {t}: gap {gap} exceeds bound {bound}");
            ok = false;
        }
    }
    if let Some(path) = &args.output {
        std::fs::write(path, rows)?;
    }
    println!(
        "instances: {}, max gap: {max_gap}, bound at n={}: {}",
        args.instances,
        args.n,
        2.0 * args.epsilon * (args.n as f64).ln()
    );
    Ok(if ok { 0 } else { 1 })
}

fn random_positive(n: usize, rng: &mut ChaCha8Rng) -> ProbVec {
    let vals: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    ProbVec::new(&vals).expect("strictly positive entries form a distribution")
}
