//! Entropic-regularized optimal transport by Sinkhorn matrix scaling.
//!
//! Two modes share one convergence contract. The stabilized mode updates dual
//! variables additively in log space and stays finite for any positive
//! epsilon, which matters on pixel grids where `C/epsilon` reaches thousands.
//! The direct mode scales the kernel `exp(-C/epsilon)` literally and exists to
//! cross-validate the log-domain code on instances where it does not
//! underflow.
//!
//! Convergence is declared when the implied plan's worst marginal violation,
//! measured in mass units, drops to the configured tolerance. After a column
//! update the column marginals are exact by construction, so the check only
//! has to price the rows, and it reuses the row log-sum that the next update
//! needs anyway. Each iteration therefore costs exactly two `n^2` sweeps.

use ndarray::Array2;

use crate::cost::CostMatrix;
use crate::error::{Error, Result};
use crate::simplex::ProbVec;

#[derive(Debug, Clone)]
pub struct SinkhornConfig {
    /// Regularization strength, in cost units.
    pub epsilon: f64,
    pub max_iters: usize,
    /// Convergence threshold on the max marginal violation of the plan.
    pub tolerance: f64,
    /// Log-domain updates when true, direct kernel scaling when false.
    pub stabilized: bool,
}

impl Default for SinkhornConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            max_iters: 10_000,
            tolerance: 1e-8,
            stabilized: true,
        }
    }
}

/// A coupling of two probability vectors.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    entries: Array2<f64>,
    row_marginal: ProbVec,
    col_marginal: ProbVec,
}

impl TransportPlan {
    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn row_marginal(&self) -> &ProbVec {
        &self.row_marginal
    }

    pub fn col_marginal(&self) -> &ProbVec {
        &self.col_marginal
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.sum()
    }

    /// Entropy of the joint plan with the `0 ln 0 = 0` convention.
    pub fn entropy(&self) -> f64 {
        self.entries
            .iter()
            .map(|&p| if p > 0.0 { -p * p.ln() } else { 0.0 })
            .sum()
    }

    /// Worst absolute row or column sum violation against the stored
    /// marginals.
    pub fn max_marginal_violation(&self) -> f64 {
        let n = self.entries.nrows();
        let mut err: f64 = 0.0;
        let mut bump = |term: f64| {
            // f64::max drops NaN, which would hide a corrupted plan.
            err = if term.is_nan() { f64::INFINITY } else { err.max(term) };
        };
        for i in 0..n {
            let row: f64 = self.entries.row(i).sum();
            bump((row - self.row_marginal.values()[i]).abs());
        }
        for j in 0..self.entries.ncols() {
            let col: f64 = self.entries.column(j).sum();
            bump((col - self.col_marginal.values()[j]).abs());
        }
        err
    }
}

#[derive(Debug, Clone)]
pub struct SinkhornResult {
    /// Transport cost of the regularized plan, `sum C_ij P_ij`.
    pub distance: f64,
    /// Dual potential for the first marginal, `-epsilon ln f`, with a `+inf`
    /// sentinel wherever `mu_i = 0`.
    pub potential_f: Vec<f64>,
    /// Dual potential for the second marginal, same convention.
    pub potential_g: Vec<f64>,
    pub plan: TransportPlan,
    pub iterations: usize,
    pub converged: bool,
    /// Max marginal violation of the returned plan.
    pub marginal_error: f64,
}

impl SinkhornResult {
    /// Value of the regularized objective at the returned plan: transport
    /// cost minus `epsilon` times the plan entropy.
    ///
    /// The `distance` field reports the plan's transport cost alone. This
    /// value is the quantity whose gradient with respect to the marginals the
    /// dual potentials encode, so finite-difference checks must difference
    /// this, not `distance`.
    pub fn regularized_value(&self, epsilon: f64) -> f64 {
        self.distance - epsilon * self.plan.entropy()
    }

    /// Log-domain column scaling, used to warm-start a neighboring solve.
    pub(crate) fn log_scaling_psi(&self, epsilon: f64) -> Vec<f64> {
        self.potential_g.iter().map(|&g| -g / epsilon).collect()
    }
}

/// Runs Sinkhorn scaling until the marginals match within tolerance.
pub fn sinkhorn(
    mu: &ProbVec,
    nu: &ProbVec,
    cost: &CostMatrix,
    cfg: &SinkhornConfig,
) -> Result<SinkhornResult> {
    sinkhorn_with_warm(mu, nu, cost, cfg, None)
}

/// As [`sinkhorn`], optionally seeding the column scaling from a previous
/// solve of a nearby instance.
pub(crate) fn sinkhorn_with_warm(
    mu: &ProbVec,
    nu: &ProbVec,
    cost: &CostMatrix,
    cfg: &SinkhornConfig,
    warm_psi: Option<&[f64]>,
) -> Result<SinkhornResult> {
    if cfg.epsilon <= 0.0 || cfg.tolerance <= 0.0 || cfg.max_iters == 0 {
        return Err(Error::InvalidInput(
            "sinkhorn config requires epsilon > 0, tolerance > 0, max_iters >= 1".into(),
        ));
    }
    let n = mu.len();
    if nu.len() != n {
        return Err(Error::DimensionMismatch(n, nu.len()));
    }
    if cost.n() != n {
        return Err(Error::DimensionMismatch(n, cost.n()));
    }
    if let Some(w) = warm_psi {
        if w.len() != n {
            return Err(Error::DimensionMismatch(n, w.len()));
        }
    }
    if cfg.stabilized {
        solve_log(mu, nu, cost, cfg, warm_psi)
    } else {
        solve_direct(mu, nu, cost, cfg, warm_psi)
    }
}

fn solve_log(
    mu: &ProbVec,
    nu: &ProbVec,
    cost: &CostMatrix,
    cfg: &SinkhornConfig,
    warm_psi: Option<&[f64]>,
) -> Result<SinkhornResult> {
    let n = mu.len();
    let eps = cfg.epsilon;
    // k = -C/eps, plus a transposed copy so both sweeps walk contiguous rows.
    let k = cost.entries().mapv(|c| -c / eps);
    let kt = k.t().as_standard_layout().to_owned();
    let ln_mu: Vec<f64> = mu.values().iter().map(|&x| x.ln()).collect();
    let ln_nu: Vec<f64> = nu.values().iter().map(|&x| x.ln()).collect();

    let mut phi = vec![f64::NEG_INFINITY; n];
    let mut psi = match warm_psi {
        Some(w) => w.to_vec(),
        None => vec![0.0; n],
    };
    let mut s = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    for it in 1..=cfg.max_iters {
        for (i, si) in s.iter_mut().enumerate() {
            *si = lse_pair(k.row(i).to_slice().unwrap(), &psi);
        }
        if it > 1 {
            let mut err: f64 = 0.0;
            for i in 0..n {
                err = err.max(((phi[i] + s[i]).exp() - mu.values()[i]).abs());
            }
            if err <= cfg.tolerance {
                converged = true;
                iterations = it - 1;
                break;
            }
        }
        iterations = it;
        for i in 0..n {
            phi[i] = ln_mu[i] - s[i];
        }
        for j in 0..n {
            let t = lse_pair(kt.row(j).to_slice().unwrap(), &phi);
            psi[j] = ln_nu[j] - t;
        }
    }

    let mut plan = Array2::zeros((n, n));
    let mut distance = 0.0;
    for i in 0..n {
        let krow = k.row(i);
        let crow = cost.entries().row(i);
        for j in 0..n {
            let p = (phi[i] + psi[j] + krow[j]).exp();
            plan[[i, j]] = p;
            distance += p * crow[j];
        }
    }
    let plan = TransportPlan {
        entries: plan,
        row_marginal: mu.clone(),
        col_marginal: nu.clone(),
    };
    let marginal_error = plan.max_marginal_violation();
    Ok(SinkhornResult {
        distance,
        potential_f: phi.iter().map(|&p| -eps * p).collect(),
        potential_g: psi.iter().map(|&p| -eps * p).collect(),
        plan,
        iterations,
        converged,
        marginal_error,
    })
}

/// `ln sum_j exp(a_j + b_j)` over two equal-length slices.
fn lse_pair(a: &[f64], b: &[f64]) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for (x, y) in a.iter().zip(b) {
        let t = x + y;
        if t > m {
            m = t;
        }
    }
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        sum += (x + y - m).exp();
    }
    m + sum.ln()
}

fn solve_direct(
    mu: &ProbVec,
    nu: &ProbVec,
    cost: &CostMatrix,
    cfg: &SinkhornConfig,
    warm_psi: Option<&[f64]>,
) -> Result<SinkhornResult> {
    let n = mu.len();
    let eps = cfg.epsilon;
    let kernel = cost.entries().mapv(|c| (-c / eps).exp());
    let kernel_t = kernel.t().as_standard_layout().to_owned();

    let mut f = vec![0.0; n];
    let mut g = match warm_psi {
        Some(w) => w.iter().map(|&p| p.exp()).collect(),
        None => vec![1.0; n],
    };
    let mut kg = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    for it in 1..=cfg.max_iters {
        for (i, kgi) in kg.iter_mut().enumerate() {
            *kgi = dot(kernel.row(i).to_slice().unwrap(), &g);
        }
        if it > 1 {
            let mut err: f64 = 0.0;
            for i in 0..n {
                let term = (f[i] * kg[i] - mu.values()[i]).abs();
                // f64::max drops NaN, which would report overflow as success.
                err = if term.is_nan() { f64::INFINITY } else { err.max(term) };
            }
            if err <= cfg.tolerance {
                converged = true;
                iterations = it - 1;
                break;
            }
        }
        iterations = it;
        // Scalings must stay positive and finite. Dividing by a subnormal can
        // overflow to inf, whose 0 * inf products then poison the dot
        // products as NaN, so non-finite values are treated as underflow too.
        for i in 0..n {
            let m_i = mu.values()[i];
            if !kg[i].is_finite() || kg[i] <= 0.0 {
                if m_i > 0.0 {
                    return Err(Error::NumericalUnderflow(i));
                }
                f[i] = 0.0;
            } else {
                f[i] = m_i / kg[i];
                if !f[i].is_finite() {
                    return Err(Error::NumericalUnderflow(i));
                }
            }
        }
        for (j, gj) in g.iter_mut().enumerate() {
            let ktf = dot(kernel_t.row(j).to_slice().unwrap(), &f);
            let n_j = nu.values()[j];
            if !ktf.is_finite() || ktf <= 0.0 {
                if n_j > 0.0 {
                    return Err(Error::NumericalUnderflow(j));
                }
                *gj = 0.0;
            } else {
                *gj = n_j / ktf;
                if !gj.is_finite() {
                    return Err(Error::NumericalUnderflow(j));
                }
            }
        }
    }

    let mut plan = Array2::zeros((n, n));
    let mut distance = 0.0;
    for i in 0..n {
        let krow = kernel.row(i);
        let crow = cost.entries().row(i);
        for j in 0..n {
            let p = f[i] * krow[j] * g[j];
            plan[[i, j]] = p;
            distance += p * crow[j];
        }
    }
    let plan = TransportPlan {
        entries: plan,
        row_marginal: mu.clone(),
        col_marginal: nu.clone(),
    };
    let marginal_error = plan.max_marginal_violation();
    Ok(SinkhornResult {
        distance,
        potential_f: f.iter().map(|&x| -eps * x.ln()).collect(),
        potential_g: g.iter().map(|&x| -eps * x.ln()).collect(),
        plan,
        iterations,
        converged,
        marginal_error,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gradient of the regularized distance with respect to the first marginal,
/// projected onto the tangent space of the support sub-simplex.
///
/// The dual potential determines this gradient up to an additive constant,
/// which the mean subtraction removes. Entries outside the support of `mu`
/// are returned as 0, so a solver that has clamped an entry to zero never
/// receives a pull back onto it. The sign is fixed empirically by the
/// finite-difference tests against [`SinkhornResult::regularized_value`].
pub fn grad_wrt_first(result: &SinkhornResult, mu: &ProbVec) -> Result<Vec<f64>> {
    if !result.converged {
        return Err(Error::NotConverged {
            iterations: result.iterations,
            marginal_error: result.marginal_error,
        });
    }
    let n = result.potential_f.len();
    if mu.len() != n {
        return Err(Error::DimensionMismatch(n, mu.len()));
    }
    let support = mu.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mean: f64 =
        support.iter().map(|&i| -result.potential_f[i]).sum::<f64>() / support.len() as f64;
    let mut out = vec![0.0; n];
    for &i in &support {
        out[i] = -result.potential_f[i] - mean;
    }
    Ok(out)
}
