//! Exact small-instance oracles and Monte Carlo harnesses used to verify the
//! approximate solvers: a closed-form 1-D Wasserstein distance, an exact
//! transportation-simplex LP, a noisy-sample generator with its realized
//! transport bound, a brute-force entropy minimizer over an OT ball, and a
//! perturbation probe for the stability of that minimizer.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cost::CostMatrix;
use crate::error::{Error, Result};
use crate::simplex::ProbVec;

/// Largest n for the square exact LP oracle.
const LP_SQUARE_CAP: usize = 12;

/// Largest row*column product for the rectangular transportation LP.
const LP_CELL_CAP: usize = 4096;

/// Largest n for brute-force enumeration over the simplex grid.
const BRUTE_FORCE_CAP: usize = 8;

/// Simplex grid resolution for brute force: coordinates are multiples of 1/50.
const GRID_STEPS: u32 = 50;

/// Feasibility slack turning the open ball `d < r` into a closed check.
const BALL_SLACK: f64 = 1e-12;

/// Reduced costs above this negative threshold count as optimal.
const REDUCED_COST_TOL: f64 = 1e-10;

/// Exact 1-Wasserstein distance on the unit-spaced 1-D lattice,
/// `sum_i |CDF_mu(i) - CDF_nu(i)|`.
pub fn exact_ot_1d(mu: &ProbVec, nu: &ProbVec) -> Result<f64> {
    if mu.len() != nu.len() {
        return Err(Error::DimensionMismatch(mu.len(), nu.len()));
    }
    let mut cdf_gap = 0.0;
    let mut total = 0.0;
    for (a, b) in mu.values().iter().zip(nu.values()) {
        cdf_gap += a - b;
        total += cdf_gap.abs();
    }
    Ok(total)
}

/// Exact unregularized OT distance for square instances, capped at n = 12.
pub fn exact_ot_lp(mu: &ProbVec, nu: &ProbVec, cost: &CostMatrix) -> Result<f64> {
    let n = mu.len();
    if nu.len() != n || cost.n() != n {
        return Err(Error::DimensionMismatch(n, nu.len().max(cost.n())));
    }
    if n > LP_SQUARE_CAP {
        return Err(Error::TooLarge {
            size: n,
            cap: LP_SQUARE_CAP,
        });
    }
    transport_lp(mu.values(), nu.values(), cost.entries())
}

/// Exact transportation problem `min sum C_ij x_ij` subject to row sums `a`
/// and column sums `b`, solved by the transportation simplex: a northwest
/// corner starting basis, tree duals, and Bland's rule for both entering and
/// leaving arcs so degenerate pivots cannot cycle.
pub fn transport_lp(a: &[f64], b: &[f64], cost: &Array2<f64>) -> Result<f64> {
    let m = a.len();
    let n = b.len();
    if cost.shape() != [m, n] {
        return Err(Error::DimensionMismatch(m * n, cost.len()));
    }
    if m * n > LP_CELL_CAP {
        return Err(Error::TooLarge {
            size: m * n,
            cap: LP_CELL_CAP,
        });
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("empty marginal".into()));
    }
    for (i, &v) in a.iter().chain(b.iter()).enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite(i));
        }
        if v < 0.0 {
            return Err(Error::NegativeEntry(i));
        }
    }
    if let Some(pos) = cost.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(pos));
    }
    let mass_a: f64 = a.iter().sum();
    let mass_b: f64 = b.iter().sum();
    if mass_a <= 0.0 || mass_b <= 0.0 {
        return Err(Error::ZeroMass);
    }
    if (mass_a - mass_b).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "marginal masses differ: {mass_a} vs {mass_b}"
        )));
    }

    let mut flow = Array2::<f64>::zeros((m, n));
    let mut basic = Array2::<bool>::from_elem((m, n), false);

    // Northwest corner start. Exactly one index advances per cell, so the
    // basis has m + n - 1 cells and forms a spanning tree even when some
    // cells carry zero flow.
    {
        let mut ra = a.to_vec();
        let mut rb = b.to_vec();
        let (mut i, mut j) = (0, 0);
        loop {
            let t = ra[i].min(rb[j]).max(0.0);
            flow[(i, j)] = t;
            basic[(i, j)] = true;
            ra[i] -= t;
            rb[j] -= t;
            if i == m - 1 && j == n - 1 {
                break;
            }
            if i == m - 1 {
                j += 1;
            } else if j == n - 1 || ra[i] <= rb[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
    }

    // Node ids: rows are 0..m, columns are m..m+n.
    let mut u = vec![0.0; m];
    let mut v = vec![0.0; n];
    let max_pivots = 1000 + 50 * (m + n) * (m + n);
    let mut pivots = 0;
    loop {
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::InvalidInput(
                "transportation simplex failed to terminate".into(),
            ));
        }

        let mut adjacency = vec![Vec::new(); m + n];
        for i in 0..m {
            for j in 0..n {
                if basic[(i, j)] {
                    adjacency[i].push(m + j);
                    adjacency[m + j].push(i);
                }
            }
        }

        // Duals from the basis tree, anchored at row 0.
        let mut seen = vec![false; m + n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        u[0] = 0.0;
        while let Some(node) = queue.pop_front() {
            for &next in &adjacency[node] {
                if seen[next] {
                    continue;
                }
                seen[next] = true;
                if node < m {
                    v[next - m] = cost[(node, next - m)] - u[node];
                } else {
                    u[next] = cost[(next, node - m)] - v[node - m];
                }
                queue.push_back(next);
            }
        }

        // Entering arc: first non-basic cell in row-major order with a
        // negative reduced cost (Bland's entering rule).
        let mut entering = None;
        'scan: for i in 0..m {
            for j in 0..n {
                if !basic[(i, j)] && cost[(i, j)] - u[i] - v[j] < -REDUCED_COST_TOL {
                    entering = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((ei, ej)) = entering else {
            let mut value = 0.0;
            for i in 0..m {
                for j in 0..n {
                    if basic[(i, j)] {
                        value += cost[(i, j)] * flow[(i, j)];
                    }
                }
            }
            return Ok(value);
        };

        // The unique tree path from row ei to column ej closes the cycle.
        let mut parent = vec![usize::MAX; m + n];
        let mut seen = vec![false; m + n];
        let mut queue = std::collections::VecDeque::from([ei]);
        seen[ei] = true;
        while let Some(node) = queue.pop_front() {
            if node == m + ej {
                break;
            }
            for &next in &adjacency[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = node;
                    queue.push_back(next);
                }
            }
        }
        let mut path_nodes = vec![m + ej];
        while *path_nodes.last().unwrap() != ei {
            path_nodes.push(parent[*path_nodes.last().unwrap()]);
        }
        path_nodes.reverse();

        // Walking from row ei, edges alternate minus, plus, minus, ...
        let mut minus = Vec::new();
        let mut plus = vec![(ei, ej)];
        for (step, pair) in path_nodes.windows(2).enumerate() {
            let cell = if pair[0] < m {
                (pair[0], pair[1] - m)
            } else {
                (pair[1], pair[0] - m)
            };
            if step % 2 == 0 {
                minus.push(cell);
            } else {
                plus.push(cell);
            }
        }

        let theta = minus
            .iter()
            .map(|&c| flow[c])
            .fold(f64::INFINITY, f64::min);
        let leaving = *minus
            .iter()
            .filter(|&&c| flow[c] <= theta)
            .min()
            .expect("cycle has a leaving arc");

        for &c in &plus {
            flow[c] += theta;
        }
        for &c in &minus {
            flow[c] = (flow[c] - theta).max(0.0);
        }
        flow[leaving] = 0.0;
        basic[leaving] = false;
        basic[(ei, ej)] = true;
    }
}

/// Gaussian point clouds around k true centers.
#[derive(Debug, Clone)]
pub struct NoisySampleSet {
    /// k x d matrix of true centers.
    pub true_points: Array2<f64>,
    pub sigma: f64,
    pub samples_per_point: usize,
    /// N x d matrix, N = k * samples_per_point, grouped by center: rows
    /// `c*samples_per_point .. (c+1)*samples_per_point` came from center c.
    pub samples: Array2<f64>,
    pub seed: u64,
}

impl NoisySampleSet {
    pub fn k(&self) -> usize {
        self.true_points.nrows()
    }

    pub fn d(&self) -> usize {
        self.true_points.ncols()
    }

    pub fn total_samples(&self) -> usize {
        self.samples.nrows()
    }
}

/// Draws `samples_per_point` Gaussian samples around each center:
/// `x = p + sigma * z` with z standard normal per component. Deterministic
/// given the seed.
pub fn generate_noisy(
    true_points: &Array2<f64>,
    sigma: f64,
    samples_per_point: usize,
    seed: u64,
) -> Result<NoisySampleSet> {
    let k = true_points.nrows();
    let d = true_points.ncols();
    if k == 0 || d == 0 || samples_per_point == 0 {
        return Err(Error::InvalidInput(
            "need at least one center, one dimension, one sample per center".into(),
        ));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidInput(format!("bad sigma {sigma}")));
    }
    if let Some(pos) = true_points.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(pos));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Array2::<f64>::zeros((k * samples_per_point, d));
    for c in 0..k {
        for s in 0..samples_per_point {
            for dim in 0..d {
                let z: f64 = rng.sample(StandardNormal);
                samples[(c * samples_per_point + s, dim)] = true_points[(c, dim)] + sigma * z;
            }
        }
    }
    Ok(NoisySampleSet {
        true_points: true_points.clone(),
        sigma,
        samples_per_point,
        samples,
        seed,
    })
}

/// Mean squared deviation of each sample from its generating center,
/// `(1/N) sum |x - p|^2`. This is the cost of the plan that sends every
/// sample home, hence an upper bound on the exact OT distance between the
/// uniform measures on centers and samples under squared-Euclidean cost.
pub fn center_assignment_cost(s: &NoisySampleSet) -> f64 {
    let n_total = s.total_samples();
    let mut sum = 0.0;
    for c in 0..s.k() {
        for i in 0..s.samples_per_point {
            let row = c * s.samples_per_point + i;
            for dim in 0..s.d() {
                let diff = s.samples[(row, dim)] - s.true_points[(c, dim)];
                sum += diff * diff;
            }
        }
    }
    sum / n_total as f64
}

/// Exact squared-Euclidean OT distance between the uniform measure on the
/// true centers and the empirical measure on the samples.
pub fn empirical_ot_distance(s: &NoisySampleSet) -> Result<f64> {
    let k = s.k();
    let n_total = s.total_samples();
    let mut cost = Array2::<f64>::zeros((k, n_total));
    for c in 0..k {
        for row in 0..n_total {
            let mut sq = 0.0;
            for dim in 0..s.d() {
                let diff = s.true_points[(c, dim)] - s.samples[(row, dim)];
                sq += diff * diff;
            }
            cost[(c, row)] = sq;
        }
    }
    let a = vec![1.0 / k as f64; k];
    let b = vec![1.0 / n_total as f64; n_total];
    transport_lp(&a, &b, &cost)
}

fn check_brute_force_inputs(nubar: &ProbVec, cost: &CostMatrix, lambda_prime: f64) -> Result<()> {
    if cost.n() != nubar.len() {
        return Err(Error::DimensionMismatch(nubar.len(), cost.n()));
    }
    if nubar.len() > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            size: nubar.len(),
            cap: BRUTE_FORCE_CAP,
        });
    }
    if !(lambda_prime > 0.0 && lambda_prime.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "ball radius must be positive, got {lambda_prime}"
        )));
    }
    Ok(())
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = vec![0u8; parts];
    fn rec(total: u32, idx: usize, current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if idx == current.len() - 1 {
            current[idx] = total as u8;
            out.push(current.clone());
            return;
        }
        for take in 0..=total {
            current[idx] = take as u8;
            rec(total - take, idx + 1, current, out);
        }
    }
    rec(total, 0, &mut current, &mut out);
    out
}

fn grid_point(counts: &[u8]) -> ProbVec {
    let vals: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / GRID_STEPS as f64)
        .collect();
    ProbVec::new(&vals).expect("grid point is a valid distribution")
}

/// Entropy minimizer over the grid points of the simplex (resolution 1/50)
/// inside the OT ball of radius `lambda_prime` around `nubar`. The open
/// constraint `d < lambda_prime` is implemented as `d <= lambda_prime - 1e-12`
/// so the search set is closed. Candidates are ranked by entropy, then by
/// support size, then lexicographically, and checked against the exact LP in
/// that order, so the first feasible candidate is the minimizer.
///
/// Memory and LP work grow combinatorially with n; n up to about 6 is
/// practical, and the hard cap is 8.
pub fn sparse_retrieval_bruteforce(
    nubar: &ProbVec,
    cost: &CostMatrix,
    lambda_prime: f64,
) -> Result<ProbVec> {
    check_brute_force_inputs(nubar, cost, lambda_prime)?;
    let n = nubar.len();
    let mut candidates: Vec<(f64, usize, Vec<u8>)> = compositions(GRID_STEPS, n)
        .into_iter()
        .map(|counts| {
            let p = grid_point(&counts);
            (p.entropy(), p.support_size(), counts)
        })
        .collect();
    candidates.sort_unstable_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .expect("entropy is finite")
            .then(x.1.cmp(&y.1))
            .then(x.2.cmp(&y.2))
    });
    for (_, _, counts) in &candidates {
        let p = grid_point(counts);
        if exact_ot_lp(&p, nubar, cost)? <= lambda_prime - BALL_SLACK {
            return Ok(p);
        }
    }
    Err(Error::EmptyFeasibleSet)
}

/// Checks the support-identification hypothesis by brute force: every grid
/// point within OT distance 2*delta of `nubar` must have support at least as
/// large as `nu`'s, with equality only when the supports coincide. When this
/// holds, the retrieval at radius delta returns a minimizer supported exactly
/// on `nu`'s support.
pub fn support_identification_hypothesis(
    nu: &ProbVec,
    nubar: &ProbVec,
    cost: &CostMatrix,
    delta: f64,
) -> Result<bool> {
    check_brute_force_inputs(nubar, cost, delta)?;
    if nu.len() != nubar.len() {
        return Err(Error::DimensionMismatch(nu.len(), nubar.len()));
    }
    let target_support = nu.support();
    let target_size = target_support.len();
    for counts in compositions(GRID_STEPS, nu.len()) {
        let p = grid_point(&counts);
        if exact_ot_lp(&p, nubar, cost)? > 2.0 * delta - BALL_SLACK {
            continue;
        }
        let size = p.support_size();
        if size < target_size || (size == target_size && p.support() != target_support) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Perturbs `nu` within the given OT radius `trials` times, reruns the
/// brute-force retrieval, and reports the largest L1 change of the minimizer
/// relative to the unperturbed run. Per-trial seeds are `seed + trial`.
pub fn stability_probe(
    nu: &ProbVec,
    cost: &CostMatrix,
    lambda_prime: f64,
    perturbation_size: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    check_brute_force_inputs(nu, cost, lambda_prime)?;
    if !(perturbation_size >= 0.0 && perturbation_size.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "bad perturbation size {perturbation_size}"
        )));
    }
    let base = sparse_retrieval_bruteforce(nu, cost, lambda_prime)?;
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + t as u64);
        let perturbed = perturb_within_ball(nu, cost, perturbation_size, &mut rng)?;
        let out = sparse_retrieval_bruteforce(&perturbed, cost, lambda_prime)?;
        worst = worst.max(out.l1_distance(&base));
    }
    Ok(worst)
}

/// Random zero-sum direction scaled by `size`, halved until the perturbed
/// point lies inside the OT ball of radius `size` around `nu`.
fn perturb_within_ball(
    nu: &ProbVec,
    cost: &CostMatrix,
    size: f64,
    rng: &mut ChaCha8Rng,
) -> Result<ProbVec> {
    let n = nu.len();
    let mut direction: Vec<f64> = (0..n).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
    let mean = direction.iter().sum::<f64>() / n as f64;
    for d in &mut direction {
        *d -= mean;
    }
    let mut scale = size;
    for _ in 0..60 {
        let raw: Vec<f64> = nu
            .values()
            .iter()
            .zip(&direction)
            .map(|(&x, &d)| (x + scale * d).max(0.0))
            .collect();
        if raw.iter().sum::<f64>() > 0.0 {
            let candidate = ProbVec::new(&raw)?;
            if exact_ot_lp(&candidate, nu, cost)? <= size {
                return Ok(candidate);
            }
        }
        scale *= 0.5;
    }
    Ok(nu.clone())
}
