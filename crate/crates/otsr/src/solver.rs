//! Projected gradient descent for the entropy-sparsified transport objective
//! `J(mu) = d_W^eps(mu, nu) + lambda H(mu)` over the probability simplex.
//!
//! Each step composes the transport gradient (from the Sinkhorn dual
//! potential) with the entropy gradient on the current support, projects the
//! sum onto the tangent space of the support sub-simplex, and line-searches a
//! step size by halving. Negative entries of a trial point are clamped to
//! zero and the rest renormalized, so the support can only shrink, and once
//! an entry hits zero its gradient is pinned to zero for the rest of the run.
//!
//! A line-search trial counts as a success only if the inner Sinkhorn solve
//! converged and the objective strictly decreased. Unconverged solves
//! understate the transport cost near kinks of the objective, and accepting
//! one would poison the monotone bookkeeping with a value no converged
//! evaluation can beat, stalling the walk at a fake minimum. Rejecting them
//! keeps every stored objective honest at the cost of extra trials.

use crate::cost::CostMatrix;
use crate::error::{Error, Result};
use crate::simplex::ProbVec;
use crate::sinkhorn::{grad_wrt_first, sinkhorn, sinkhorn_with_warm, SinkhornConfig};

/// Number of halvings tried from the starting step before giving up.
const LINE_SEARCH_TRIALS: u32 = 21;

/// Gradient magnitudes below this count as a flat (converged) direction.
const FLAT_GRADIENT_TOL: f64 = 1e-15;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Sparsity weight on the entropy term.
    pub lambda: f64,
    /// First line-search trial of the first step, capped by `step_cap`.
    pub initial_step: f64,
    /// Upper bound on every trial step size.
    pub step_cap: f64,
    pub max_steps: usize,
    /// L1 change in the iterate below which the walk stops.
    pub convergence_tol: f64,
    pub sinkhorn: SinkhornConfig,
}

impl SolverConfig {
    pub fn epsilon(&self) -> f64 {
        self.sinkhorn.epsilon
    }

    /// Defaults for 1-D signal demos: strong smoothing, a generous Sinkhorn
    /// budget so the inner solves converge even near objective kinks.
    pub fn signal_defaults() -> Self {
        Self {
            lambda: 10.0,
            initial_step: 0.01,
            step_cap: 0.01,
            max_steps: 50,
            convergence_tol: 1e-6,
            sinkhorn: SinkhornConfig {
                epsilon: 0.1,
                max_iters: 100_000,
                tolerance: 1e-8,
                stabilized: true,
            },
        }
    }

    /// Defaults for pixel-grid classification: small epsilon, short Sinkhorn
    /// budget, small initial step.
    pub fn imaging_defaults() -> Self {
        Self {
            lambda: 1.0,
            initial_step: 0.001,
            step_cap: 0.01,
            max_steps: 50,
            convergence_tol: 1e-6,
            sinkhorn: SinkhornConfig {
                epsilon: 0.001,
                max_iters: 500,
                tolerance: 1e-8,
                stabilized: true,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        if self.lambda < 0.0
            || !self.lambda.is_finite()
            || self.initial_step <= 0.0
            || self.step_cap <= 0.0
            || self.max_steps == 0
            || self.convergence_tol <= 0.0
        {
            return Err(Error::InvalidInput(
                "solver config requires lambda >= 0, positive steps and tolerance, max_steps >= 1"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Why the descent loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// L1 change of an accepted step fell below `convergence_tol`.
    IterateConverged,
    /// The projected gradient vanished, typically on a single-point support.
    FlatGradient,
    /// Step budget exhausted.
    MaxSteps,
    /// No trial step decreased the objective with a converged inner solve.
    LineSearchStalled,
}

/// Full record of a descent run: every accepted iterate and objective value.
#[derive(Debug, Clone)]
pub struct SparseSolveTrace {
    /// Accepted iterates, starting with the initial point.
    pub iterates: Vec<ProbVec>,
    /// Objective values aligned with `iterates`.
    pub objectives: Vec<f64>,
    pub final_iterate: ProbVec,
    /// Number of accepted steps.
    pub steps: usize,
    pub converged: bool,
    pub stop: StopReason,
}

impl SparseSolveTrace {
    /// Checks the trace contract: objectives non-increasing, every iterate on
    /// the simplex, support never growing. Returns the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.iterates.len() != self.objectives.len() {
            return Err("iterates and objectives length mismatch".into());
        }
        for (t, w) in self.objectives.windows(2).enumerate() {
            // NaN objectives must flag too, hence the explicit check.
            if w[1] > w[0] || w[0].is_nan() || w[1].is_nan() {
                return Err(format!("objective rose at step {}: {} -> {}", t + 1, w[0], w[1]));
            }
        }
        for (t, it) in self.iterates.iter().enumerate() {
            let sum: f64 = it.values().iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(format!("iterate {t} off the simplex: sum = {sum}"));
            }
            if it.values().iter().any(|&v| v < 0.0) {
                return Err(format!("iterate {t} has a negative entry"));
            }
        }
        for (t, pair) in self.iterates.windows(2).enumerate() {
            let (prev, next) = (&pair[0], &pair[1]);
            for i in 0..prev.len() {
                if prev.values()[i] == 0.0 && next.values()[i] != 0.0 {
                    return Err(format!("support grew at step {} (index {i})", t + 1));
                }
            }
        }
        Ok(())
    }
}

/// The sparsified objective `d_W^eps(mu, nu) + lambda H(mu)`.
///
/// Fails with `NotConverged` when the Sinkhorn budget cannot price the
/// instance, rather than returning a cost the plan does not support.
pub fn objective(
    mu: &ProbVec,
    nu: &ProbVec,
    cost: &CostMatrix,
    lambda: f64,
    sink: &SinkhornConfig,
) -> Result<f64> {
    let r = sinkhorn(mu, nu, cost, sink)?;
    if !r.converged {
        return Err(Error::NotConverged {
            iterations: r.iterations,
            marginal_error: r.marginal_error,
        });
    }
    Ok(r.distance + lambda * mu.entropy())
}

/// Zeroes entries outside `support` and removes the mean over `support`, so
/// the result sums to zero and moves along the support sub-simplex.
pub fn project_tangent(w: &[f64], support: &[usize]) -> Result<Vec<f64>> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mean: f64 = support.iter().map(|&i| w[i]).sum::<f64>() / support.len() as f64;
    let mut out = vec![0.0; w.len()];
    for &i in support {
        out[i] = w[i] - mean;
    }
    Ok(out)
}

/// Minimizes the sparsified objective starting from `nu` itself.
pub fn sparse_approx(nu: &ProbVec, cost: &CostMatrix, cfg: &SolverConfig) -> Result<SparseSolveTrace> {
    cfg.validate()?;
    if cost.n() != nu.len() {
        return Err(Error::DimensionMismatch(nu.len(), cost.n()));
    }
    let eps = cfg.sinkhorn.epsilon;

    let mut v = nu.clone();
    let mut res = sinkhorn(&v, nu, cost, &cfg.sinkhorn)?;
    if !res.converged {
        return Err(Error::NotConverged {
            iterations: res.iterations,
            marginal_error: res.marginal_error,
        });
    }
    let mut j = res.distance + cfg.lambda * v.entropy();
    let mut psi = res.log_scaling_psi(eps);

    let mut iterates = vec![v.clone()];
    let mut objectives = vec![j];
    let mut next_start = cfg.initial_step.min(cfg.step_cap);
    let mut stop = StopReason::MaxSteps;

    for _ in 0..cfg.max_steps {
        let support = v.support();
        let transport = grad_wrt_first(&res, &v)?;
        let entropy = v.entropy_grad();
        let mut w = vec![0.0; v.len()];
        for &i in &support {
            w[i] = transport[i] + cfg.lambda * entropy[i];
        }
        let w = project_tangent(&w, &support)?;

        let grad_max = w.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
        if grad_max < FLAT_GRADIENT_TOL {
            stop = StopReason::FlatGradient;
            break;
        }

        let mut alpha = next_start;
        let mut accepted = None;
        for _ in 0..LINE_SEARCH_TRIALS {
            let raw: Vec<f64> = v
                .values()
                .iter()
                .zip(&w)
                .map(|(&x, &g)| (x - alpha * g).max(0.0))
                .collect();
            if raw.iter().sum::<f64>() > 0.0 {
                let cand = ProbVec::new(&raw)?;
                let rc = sinkhorn_with_warm(&cand, nu, cost, &cfg.sinkhorn, Some(&psi))?;
                if rc.converged {
                    let jc = rc.distance + cfg.lambda * cand.entropy();
                    if jc < j {
                        accepted = Some((cand, jc, rc, alpha));
                        break;
                    }
                }
            }
            alpha *= 0.5;
        }

        match accepted {
            None => {
                stop = StopReason::LineSearchStalled;
                break;
            }
            Some((cand, jc, rc, step)) => {
                let moved = cand.l1_distance(&v);
                psi = rc.log_scaling_psi(eps);
                v = cand;
                j = jc;
                res = rc;
                iterates.push(v.clone());
                objectives.push(j);
                next_start = (2.0 * step).min(cfg.step_cap);
                if moved <= cfg.convergence_tol {
                    stop = StopReason::IterateConverged;
                    break;
                }
            }
        }
    }

    let converged = matches!(stop, StopReason::IterateConverged | StopReason::FlatGradient);
    Ok(SparseSolveTrace {
        final_iterate: v,
        steps: iterates.len() - 1,
        iterates,
        objectives,
        converged,
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn demo_measurement() -> ProbVec {
        ProbVec::new(&[0.2, 0.15, 0.0, 0.0, 0.0, 0.1, 0.15, 0.2, 0.15, 0.1]).unwrap()
    }

    #[test]
    fn project_tangent_known_cases() {
        let full: Vec<usize> = (0..3).collect();
        assert_eq!(project_tangent(&[1.0, 1.0, 1.0], &full).unwrap(), vec![0.0; 3]);
        assert_eq!(
            project_tangent(&[2.0, 0.0], &[0, 1]).unwrap(),
            vec![1.0, -1.0]
        );
        assert_eq!(
            project_tangent(&[3.0, 5.0, 7.0], &[0, 2]).unwrap(),
            vec![-2.0, 0.0, 2.0]
        );
        assert!(matches!(
            project_tangent(&[1.0], &[]),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn project_tangent_sums_to_zero() {
        let w = [0.3, -1.2, 4.5, 0.0, 2.2];
        let support = [0, 2, 4];
        let p = project_tangent(&w, &support).unwrap();
        assert!(p.iter().sum::<f64>().abs() < 1e-12);
        assert_eq!(p[1], 0.0);
        assert_eq!(p[3], 0.0);
    }

    #[test]
    fn objective_at_measurement_matches_entropy_plus_self_distance() {
        let nu = demo_measurement();
        let c = CostMatrix::lattice_1d(10);
        let sink = SinkhornConfig {
            epsilon: 0.1,
            max_iters: 200_000,
            tolerance: 1e-9,
            stabilized: true,
        };
        let obj = objective(&nu, &nu, &c, 10.0, &sink).unwrap();
        // 10 * H(nu) = 19.135484..., plus a self-distance of about 6.6e-5.
        assert_abs_diff_eq!(obj, 19.13555039276484, epsilon = 1e-5);
        let point = ProbVec::point_mass(10, 7);
        let obj_point = objective(&point, &nu, &c, 10.0, &sink).unwrap();
        let dist_only = objective(&point, &nu, &c, 0.0, &sink).unwrap();
        // A point mass has zero entropy, so lambda drops out.
        assert_abs_diff_eq!(obj_point, dist_only, epsilon = 1e-12);
    }

    #[test]
    fn objective_propagates_non_convergence() {
        let nu = demo_measurement();
        let c = CostMatrix::lattice_1d(10);
        let sink = SinkhornConfig {
            epsilon: 0.1,
            max_iters: 2,
            tolerance: 1e-12,
            stabilized: true,
        };
        assert!(matches!(
            objective(&nu, &nu, &c, 1.0, &sink),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn heavy_sparsity_collapses_to_point_mass() {
        let nu = demo_measurement();
        let c = CostMatrix::lattice_1d_squared(10);
        let mut cfg = SolverConfig::signal_defaults();
        cfg.lambda = 100.0;
        let trace = sparse_approx(&nu, &c, &cfg).unwrap();
        trace.check_invariants().unwrap();
        assert!(trace.converged);
        let f = trace.final_iterate.values();
        for (i, &x) in f.iter().enumerate() {
            let target = if i == 7 { 1.0 } else { 0.0 };
            assert!(
                (x - target).abs() <= 0.01,
                "entry {i} = {x} vs point mass at 7"
            );
        }
    }

    #[test]
    fn zero_sparsity_keeps_the_measurement() {
        let nu = demo_measurement();
        let c = CostMatrix::lattice_1d_squared(10);
        let mut cfg = SolverConfig::signal_defaults();
        cfg.lambda = 0.0;
        let trace = sparse_approx(&nu, &c, &cfg).unwrap();
        trace.check_invariants().unwrap();
        assert!(trace.final_iterate.l1_distance(&nu) <= 0.01);
    }

    #[test]
    fn point_mass_input_is_already_optimal() {
        let point = ProbVec::point_mass(6, 2);
        let c = CostMatrix::lattice_1d_squared(6);
        let cfg = SolverConfig::signal_defaults();
        let trace = sparse_approx(&point, &c, &cfg).unwrap();
        assert_eq!(trace.steps, 0);
        assert_eq!(trace.stop, StopReason::FlatGradient);
        assert!(trace.converged);
        assert_eq!(trace.final_iterate.values(), point.values());
    }

    #[test]
    fn sparsity_is_monotone_in_lambda() {
        let nu = demo_measurement();
        let c = CostMatrix::lattice_1d_squared(10);
        let mut sizes = Vec::new();
        for lambda in [100.0, 0.0] {
            let mut cfg = SolverConfig::signal_defaults();
            cfg.lambda = lambda;
            let trace = sparse_approx(&nu, &c, &cfg).unwrap();
            sizes.push(trace.final_iterate.support_size());
        }
        assert!(sizes[0] <= sizes[1]);
        assert_eq!(sizes[0], 1);
        assert_eq!(sizes[1], nu.support_size());
    }

    #[test]
    fn support_stays_absorbed_once_clamped() {
        let nu = demo_measurement();
        let c = CostMatrix::lattice_1d_squared(10);
        let mut cfg = SolverConfig::signal_defaults();
        cfg.lambda = 100.0;
        let trace = sparse_approx(&nu, &c, &cfg).unwrap();
        for pair in trace.iterates.windows(2) {
            for i in 0..10 {
                if pair[0].values()[i] == 0.0 {
                    assert_eq!(pair[1].values()[i], 0.0);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_config() {
        let nu = demo_measurement();
        let c = CostMatrix::lattice_1d(10);
        let mut cfg = SolverConfig::signal_defaults();
        cfg.max_steps = 0;
        assert!(matches!(
            sparse_approx(&nu, &c, &cfg),
            Err(Error::InvalidInput(_))
        ));
        let mut cfg = SolverConfig::signal_defaults();
        cfg.lambda = -1.0;
        assert!(matches!(
            sparse_approx(&nu, &c, &cfg),
            Err(Error::InvalidInput(_))
        ));
    }
}
