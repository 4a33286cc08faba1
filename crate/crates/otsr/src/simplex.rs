//! Probability vectors on the simplex, their entropy, and its gradient.

use crate::error::{Error, Result};

/// Tolerance on `|sum - 1|` below which a vector counts as normalized.
///
/// Construction skips the dividing pass inside this band, so renormalizing an
/// already normalized vector is an exact no-op and repeated renormalization in
/// the solver loop cannot drift.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// A dense probability vector: finite nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVec {
    values: Vec<f64>,
}

impl ProbVec {
    /// Builds a probability vector by normalizing `raw` to unit mass.
    pub fn new(raw: &[f64]) -> Result<Self> {
        for (i, &x) in raw.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if x < 0.0 {
                return Err(Error::NegativeEntry(i));
            }
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(Error::ZeroMass);
        }
        let values = if (sum - 1.0).abs() <= NORMALIZATION_TOL {
            raw.to_vec()
        } else {
            raw.iter().map(|x| x / sum).collect()
        };
        Ok(Self { values })
    }

    /// A point mass at `index`.
    pub fn point_mass(n: usize, index: usize) -> Self {
        assert!(index < n, "point mass index out of range");
        let mut values = vec![0.0; n];
        values[index] = 1.0;
        Self { values }
    }

    /// The uniform distribution over `n` entries.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one entry");
        Self {
            values: vec![1.0 / n as f64; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Indices carrying strictly positive mass.
    pub fn support(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Number of strictly positive entries.
    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v > 0.0).count()
    }

    /// Shannon entropy `-sum p_i ln p_i` with the `0 ln 0 = 0` convention.
    pub fn entropy(&self) -> f64 {
        self.values
            .iter()
            .map(|&p| if p > 0.0 { -p * p.ln() } else { 0.0 })
            .sum()
    }

    /// Gradient of the entropy: `-(ln p_i + 1)` on the support, and 0 where
    /// `p_i = 0`.
    ///
    /// The analytic derivative is unbounded at the boundary; the zero
    /// convention matches the solver, which never moves mass back onto an
    /// index that has been clamped to zero.
    pub fn entropy_grad(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|&p| if p > 0.0 { -(p.ln() + 1.0) } else { 0.0 })
            .collect()
    }

    /// L1 distance to another vector of the same length.
    pub fn l1_distance(&self, other: &ProbVec) -> f64 {
        assert_eq!(self.len(), other.len(), "l1_distance length mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn normalizes_and_preserves_ratios() {
        let p = ProbVec::new(&[2.0, 2.0]).unwrap();
        assert_eq!(p.values(), &[0.5, 0.5]);
        let q = ProbVec::new(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(q.values(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn ten_point_measurement_normalizes_to_unit_mass() {
        // The two-peak demo measurement has raw mass 1.05, so construction
        // must rescale it.
        let raw = [0.2, 0.15, 0.0, 0.0, 0.0, 0.1, 0.15, 0.2, 0.15, 0.1];
        let p = ProbVec::new(&raw).unwrap();
        assert_abs_diff_eq!(p.values().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.values()[0], 0.2 / 1.05, epsilon = 1e-15);
        assert_abs_diff_eq!(p.values()[7], 0.2 / 1.05, epsilon = 1e-15);
        assert_eq!(p.support(), vec![0, 1, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            ProbVec::new(&[0.5, -0.1]),
            Err(Error::NegativeEntry(1))
        ));
        assert!(matches!(ProbVec::new(&[0.0, 0.0]), Err(Error::ZeroMass)));
        assert!(matches!(ProbVec::new(&[]), Err(Error::ZeroMass)));
        assert!(matches!(
            ProbVec::new(&[1.0, f64::NAN]),
            Err(Error::NonFinite(1))
        ));
        assert!(matches!(
            ProbVec::new(&[f64::INFINITY]),
            Err(Error::NonFinite(0))
        ));
    }

    #[test]
    fn entropy_known_values() {
        let u = ProbVec::uniform(4);
        assert_abs_diff_eq!(u.entropy(), 4.0_f64.ln(), epsilon = 1e-12);
        let d = ProbVec::point_mass(3, 0);
        assert_eq!(d.entropy(), 0.0);
        let h = ProbVec::new(&[0.5, 0.5, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(h.entropy(), 2.0_f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn entropy_of_demo_measurement() {
        let p = ProbVec::new(&[0.2, 0.15, 0.0, 0.0, 0.0, 0.1, 0.15, 0.2, 0.15, 0.1]).unwrap();
        assert_abs_diff_eq!(p.entropy(), 1.9135484277609518, epsilon = 1e-12);
    }

    #[test]
    fn entropy_grad_known_values() {
        let u = ProbVec::uniform(4);
        for g in u.entropy_grad() {
            assert_abs_diff_eq!(g, -(0.25_f64.ln() + 1.0), epsilon = 1e-12);
        }
        let d = ProbVec::new(&[1.0, 0.0]).unwrap();
        assert_eq!(d.entropy_grad(), vec![-1.0, 0.0]);
        let p = ProbVec::new(&[0.3, 0.7]).unwrap();
        let g = p.entropy_grad();
        assert_abs_diff_eq!(g[0], 0.20397280432593612, epsilon = 1e-12);
        assert_abs_diff_eq!(g[1], -0.6433250560612676, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn construction_lands_on_simplex(raw in proptest::collection::vec(0.0_f64..10.0, 1..20)) {
            prop_assume!(raw.iter().sum::<f64>() > 1e-12);
            let p = ProbVec::new(&raw).unwrap();
            prop_assert!((p.values().iter().sum::<f64>() - 1.0).abs() <= NORMALIZATION_TOL);
            prop_assert!(p.values().iter().all(|&v| v >= 0.0));
        }

        #[test]
        fn normalization_is_idempotent(raw in proptest::collection::vec(0.0_f64..10.0, 1..20)) {
            prop_assume!(raw.iter().sum::<f64>() > 1e-12);
            let once = ProbVec::new(&raw).unwrap();
            let twice = ProbVec::new(once.values()).unwrap();
            prop_assert_eq!(once.values(), twice.values());
        }

        #[test]
        fn entropy_bounds(raw in proptest::collection::vec(0.0_f64..10.0, 1..20)) {
            prop_assume!(raw.iter().sum::<f64>() > 1e-12);
            let p = ProbVec::new(&raw).unwrap();
            let h = p.entropy();
            prop_assert!(h >= -1e-15);
            prop_assert!(h <= (p.len() as f64).ln() + 1e-12);
        }

        #[test]
        fn entropy_grad_matches_finite_differences(
            raw in proptest::collection::vec(1e-3_f64..1.0, 2..10),
        ) {
            let p = ProbVec::new(&raw).unwrap();
            prop_assume!(p.values().iter().all(|&v| v >= 1e-3));
            let grad = p.entropy_grad();
            let h = 1e-6;
            for i in 0..p.len() {
                let mut plus = p.values().to_vec();
                let mut minus = p.values().to_vec();
                plus[i] += h;
                minus[i] -= h;
                // Finite differences of the raw entropy formula, off the simplex,
                // probe the partial derivative directly.
                let ent = |v: &[f64]| -> f64 {
                    v.iter().map(|&q| if q > 0.0 { -q * q.ln() } else { 0.0 }).sum()
                };
                let fd = (ent(&plus) - ent(&minus)) / (2.0 * h);
                prop_assert!((grad[i] - fd).abs() / grad[i].abs().max(1.0) < 1e-5);
            }
        }
    }

    #[test]
    fn entropy_extremes_are_characterized() {
        let n = 6;
        let u = ProbVec::uniform(n);
        assert_abs_diff_eq!(u.entropy(), (n as f64).ln(), epsilon = 1e-12);
        for i in 0..n {
            let d = ProbVec::point_mass(n, i);
            assert_eq!(d.entropy(), 0.0);
        }
        let mid = ProbVec::new(&[0.4, 0.3, 0.1, 0.1, 0.05, 0.05]).unwrap();
        assert!(mid.entropy() > 0.0);
        assert!(mid.entropy() < (n as f64).ln());
    }
}
