//! Synthetic star-field patches: Gaussian blobs for point sources, pixel
//! noise, and salt speckles placed away from the sources. Used by the tests,
//! the examples, and the fixture generator behind the classification demo.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// An isotropic Gaussian bump evaluated on the pixel grid.
pub fn gaussian_blob(m: usize, center: (f64, f64), sigma: f64, amplitude: f64) -> Array2<f64> {
    let mut img = Array2::zeros((m, m));
    for r in 0..m {
        for c in 0..m {
            let dy = r as f64 - center.0;
            let dx = c as f64 - center.1;
            img[(r, c)] = amplitude * (-(dy * dy + dx * dx) / (2.0 * sigma * sigma)).exp();
        }
    }
    img
}

/// Adds independent Gaussian noise per pixel and clamps the result at zero,
/// mimicking background-subtracted nonnegative intensities.
pub fn add_gaussian_noise(img: &mut Array2<f64>, sigma: f64, rng: &mut ChaCha8Rng) {
    use rand_distr::StandardNormal;
    for v in img.iter_mut() {
        let z: f64 = rng.sample(StandardNormal);
        *v = (*v + sigma * z).max(0.0);
    }
}

/// Picks `count` salt pixels at least `min_center_dist` away from every entry
/// of `keep_away` and at least `min_mutual_dist` away from each other, so the
/// speckles merge with neither the sources nor one another.
pub fn salt_positions(
    m: usize,
    count: usize,
    keep_away: &[(f64, f64)],
    min_center_dist: f64,
    min_mutual_dist: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, usize)>> {
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(count);
    let mut attempts = 0;
    while chosen.len() < count {
        attempts += 1;
        if attempts > 10_000 {
            return Err(Error::InvalidInput(format!(
                "could not place {count} salt pixels with the requested separations"
            )));
        }
        let r = rng.random_range(0..m);
        let c = rng.random_range(0..m);
        let far_from_sources = keep_away.iter().all(|&(cy, cx)| {
            let d = ((r as f64 - cy).powi(2) + (c as f64 - cx).powi(2)).sqrt();
            d >= min_center_dist
        });
        let far_from_salt = chosen.iter().all(|&(pr, pc)| {
            let d = (((r as f64) - pr as f64).powi(2) + ((c as f64) - pc as f64).powi(2)).sqrt();
            d >= min_mutual_dist
        });
        if far_from_sources && far_from_salt {
            chosen.push((r, c));
        }
    }
    Ok(chosen)
}

/// Salt-speckle settings for the degraded fixture set.
#[derive(Debug, Clone, Copy)]
pub struct SaltSpec {
    pub count: usize,
    pub min_amplitude: f64,
    pub max_amplitude: f64,
}

impl Default for SaltSpec {
    fn default() -> Self {
        Self {
            count: 4,
            min_amplitude: 0.7,
            max_amplitude: 1.0,
        }
    }
}

/// A single-band patch with its ground-truth label.
#[derive(Debug, Clone)]
pub struct LabeledPatch {
    pub id: String,
    pub pixels: Array2<f64>,
    /// True when the patch holds exactly one source.
    pub is_cluster: bool,
}

/// Builds `per_class` single-source and `per_class` double-source patches of
/// side `m`, with optional salt speckles and Gaussian pixel noise, all
/// deterministic in the seed. Blob centers are jittered fractions of the
/// side length so the same recipe works at any patch size.
pub fn classification_fixture(
    m: usize,
    per_class: usize,
    noise_sigma: f64,
    salt: Option<SaltSpec>,
    seed: u64,
) -> Result<Vec<LabeledPatch>> {
    if m < 8 {
        return Err(Error::InvalidInput(format!(
            "patches need side at least 8, got {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = m as f64;
    let blob_sigma = 0.13 * side;
    let mut patches = Vec::with_capacity(2 * per_class);

    for i in 0..per_class {
        let center = (
            0.45 * side + rng.random_range(-0.05..0.05) * side,
            0.48 * side + rng.random_range(-0.05..0.05) * side,
        );
        let mut img = gaussian_blob(m, center, blob_sigma, 1.0);
        decorate(&mut img, m, &[center], salt, noise_sigma, &mut rng)?;
        patches.push(LabeledPatch {
            id: format!("single-{i:03}"),
            pixels: img,
            is_cluster: true,
        });
    }
    for i in 0..per_class {
        let a = (
            0.27 * side + rng.random_range(-0.04..0.04) * side,
            0.27 * side + rng.random_range(-0.04..0.04) * side,
        );
        let b = (
            0.70 * side + rng.random_range(-0.04..0.04) * side,
            0.69 * side + rng.random_range(-0.04..0.04) * side,
        );
        let amp_b = rng.random_range(0.85..0.95);
        let mut img = gaussian_blob(m, a, 0.92 * blob_sigma, 1.0);
        img += &gaussian_blob(m, b, 0.92 * blob_sigma, amp_b);
        decorate(&mut img, m, &[a, b], salt, noise_sigma, &mut rng)?;
        patches.push(LabeledPatch {
            id: format!("double-{i:03}"),
            pixels: img,
            is_cluster: false,
        });
    }
    Ok(patches)
}

fn decorate(
    img: &mut Array2<f64>,
    m: usize,
    centers: &[(f64, f64)],
    salt: Option<SaltSpec>,
    noise_sigma: f64,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    if let Some(spec) = salt {
        let side = m as f64;
        let positions = salt_positions(m, spec.count, centers, 0.3 * side, 0.2 * side, rng)?;
        for (r, c) in positions {
            img[(r, c)] += rng.random_range(spec.min_amplitude..spec.max_amplitude);
        }
    }
    if noise_sigma > 0.0 {
        add_gaussian_noise(img, noise_sigma, rng);
    }
    Ok(())
}
