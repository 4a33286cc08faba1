//! Superlevel-set thresholding and connected-component counting on pixel
//! grids. The component count of the superlevel set is the peak count used to
//! classify a patch.

use ndarray::Array2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    /// Edge-adjacent neighbors only.
    Four,
    /// Edge- and corner-adjacent neighbors.
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(i64, i64)] {
        match self {
            Connectivity::Four => &[(-1, 0), (1, 0), (0, -1), (0, 1)],
            Connectivity::Eight => &[
                (-1, -1),
                (-1, 0),
                (-1, 1),
                (0, -1),
                (0, 1),
                (1, -1),
                (1, 0),
                (1, 1),
            ],
        }
    }
}

/// A boolean mask over a pixel grid.
#[derive(Debug, Clone)]
pub struct BinaryImage {
    mask: Array2<bool>,
}

impl BinaryImage {
    pub fn new(mask: Array2<bool>) -> Self {
        Self { mask }
    }

    pub fn shape(&self) -> (usize, usize) {
        let s = self.mask.shape();
        (s[0], s[1])
    }

    pub fn mask(&self) -> &Array2<bool> {
        &self.mask
    }

    pub fn count_true(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Number of connected components of the `true` pixels.
    pub fn h0_rank(&self, connectivity: Connectivity) -> usize {
        let (rows, cols) = self.shape();
        let mut seen = Array2::from_elem((rows, cols), false);
        let mut components = 0;
        let mut queue = std::collections::VecDeque::new();
        for r in 0..rows {
            for c in 0..cols {
                if !self.mask[(r, c)] || seen[(r, c)] {
                    continue;
                }
                components += 1;
                seen[(r, c)] = true;
                queue.push_back((r, c));
                while let Some((qr, qc)) = queue.pop_front() {
                    for &(dr, dc) in connectivity.offsets() {
                        let nr = qr as i64 + dr;
                        let nc = qc as i64 + dc;
                        if nr < 0 || nc < 0 || nr >= rows as i64 || nc >= cols as i64 {
                            continue;
                        }
                        let idx = (nr as usize, nc as usize);
                        if self.mask[idx] && !seen[idx] {
                            seen[idx] = true;
                            queue.push_back(idx);
                        }
                    }
                }
            }
        }
        components
    }
}

/// Pixels with `value >= fraction * max(image)` form the superlevel set.
/// The fraction must lie in (0, 1].
pub fn threshold_superlevel(image: &Array2<f64>, fraction: f64) -> Result<BinaryImage> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "threshold fraction must be in (0, 1], got {fraction}"
        )));
    }
    for (pos, &v) in image.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite(pos));
        }
        if v < 0.0 {
            return Err(Error::NegativeEntry(pos));
        }
    }
    let max = image.iter().cloned().fold(0.0_f64, f64::max);
    if max <= 0.0 {
        return Err(Error::AllZeroImage);
    }
    Ok(BinaryImage::new(image.mapv(|v| v >= fraction * max)))
}

/// Convenience wrapper: threshold at `fraction` and count components.
pub fn count_peaks(
    image: &Array2<f64>,
    fraction: f64,
    connectivity: Connectivity,
) -> Result<usize> {
    Ok(threshold_superlevel(image, fraction)?.h0_rank(connectivity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn two_separated_blobs_are_two_components() {
        let img = array![
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.9],
            [0.0, 0.0, 0.9, 0.9],
        ];
        assert_eq!(count_peaks(&img, 0.75, Connectivity::Four).unwrap(), 2);
        assert_eq!(count_peaks(&img, 0.75, Connectivity::Eight).unwrap(), 2);
    }

    #[test]
    fn diagonal_touch_distinguishes_connectivities() {
        let img = array![
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0],
        ];
        assert_eq!(count_peaks(&img, 0.5, Connectivity::Four).unwrap(), 2);
        assert_eq!(count_peaks(&img, 0.5, Connectivity::Eight).unwrap(), 1);
    }

    #[test]
    fn threshold_is_relative_to_the_max() {
        let img = array![[0.2, 0.0], [0.0, 0.05]];
        // max = 0.2, cut at 0.15: only the top-left pixel survives.
        let mask = threshold_superlevel(&img, 0.75).unwrap();
        assert_eq!(mask.count_true(), 1);
        assert!(mask.mask()[(0, 0)]);
    }

    #[test]
    fn all_zero_image_is_rejected() {
        let img = Array2::zeros((5, 5));
        assert!(matches!(
            threshold_superlevel(&img, 0.75),
            Err(crate::error::Error::AllZeroImage)
        ));
    }

    #[test]
    fn single_positive_pixel_survives_alone() {
        let mut img = Array2::zeros((3, 3));
        img[(1, 2)] = 0.4;
        let mask = threshold_superlevel(&img, 0.75).unwrap();
        assert_eq!(mask.count_true(), 1);
        assert!(mask.mask()[(1, 2)]);
        assert_eq!(mask.h0_rank(Connectivity::Four), 1);
    }

    #[test]
    fn closed_threshold_keeps_boundary_pixels() {
        let img = array![[1.0, 0.8], [0.7, 0.2]];
        let mask = threshold_superlevel(&img, 0.75).unwrap();
        assert!(mask.mask()[(0, 0)]);
        assert!(mask.mask()[(0, 1)]);
        assert!(!mask.mask()[(1, 0)]);
        assert!(!mask.mask()[(1, 1)]);
    }

    #[test]
    fn uniform_positive_image_is_one_component() {
        let img = Array2::from_elem((6, 6), 0.3);
        assert_eq!(count_peaks(&img, 0.75, Connectivity::Four).unwrap(), 1);
    }

    #[test]
    fn checkerboard_component_counts() {
        let mut img = Array2::zeros((4, 4));
        for r in 0..4 {
            for c in 0..4 {
                if (r + c) % 2 == 0 {
                    img[(r, c)] = 1.0;
                }
            }
        }
        // Four-connectivity isolates every lit pixel; eight joins them all.
        assert_eq!(count_peaks(&img, 0.5, Connectivity::Four).unwrap(), 8);
        assert_eq!(count_peaks(&img, 0.5, Connectivity::Eight).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_fraction_and_non_finite() {
        let img = Array2::from_elem((2, 2), 1.0);
        assert!(threshold_superlevel(&img, 0.0).is_err());
        assert!(threshold_superlevel(&img, 1.5).is_err());
        let bad = array![[1.0, f64::NAN], [0.0, 0.0]];
        assert!(threshold_superlevel(&bad, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn component_count_bounded_by_lit_pixels(
            pixels in proptest::collection::vec(0.0f64..1.0, 36),
            eight in any::<bool>(),
        ) {
            prop_assume!(pixels.iter().any(|&p| p > 0.0));
            let img = Array2::from_shape_vec((6, 6), pixels).unwrap();
            let conn = if eight { Connectivity::Eight } else { Connectivity::Four };
            let mask = threshold_superlevel(&img, 0.75).unwrap();
            let comps = mask.h0_rank(conn);
            prop_assert!(comps <= mask.count_true());
            prop_assert!(comps >= 1);
        }

        #[test]
        fn eight_connectivity_never_exceeds_four(
            pixels in proptest::collection::vec(0.0f64..1.0, 25),
        ) {
            prop_assume!(pixels.iter().any(|&p| p > 0.0));
            let img = Array2::from_shape_vec((5, 5), pixels).unwrap();
            let mask = threshold_superlevel(&img, 0.6).unwrap();
            prop_assert!(mask.h0_rank(Connectivity::Eight) <= mask.h0_rank(Connectivity::Four));
        }

        #[test]
        fn scaling_the_image_preserves_the_mask(
            pixels in proptest::collection::vec(0.0f64..1.0, 16),
            scale in 0.1f64..100.0,
        ) {
            prop_assume!(pixels.iter().any(|&p| p > 0.0));
            let img = Array2::from_shape_vec((4, 4), pixels).unwrap();
            let scaled = img.mapv(|v| v * scale);
            let a = threshold_superlevel(&img, 0.75).unwrap();
            let b = threshold_superlevel(&scaled, 0.75).unwrap();
            prop_assert_eq!(a.mask(), b.mask());
        }

        #[test]
        fn component_count_survives_transpose_and_rotation(
            pixels in proptest::collection::vec(0.0f64..1.0, 25),
            eight in any::<bool>(),
        ) {
            prop_assume!(pixels.iter().any(|&p| p > 0.0));
            let img = Array2::from_shape_vec((5, 5), pixels).unwrap();
            let conn = if eight { Connectivity::Eight } else { Connectivity::Four };
            let base = threshold_superlevel(&img, 0.75).unwrap().h0_rank(conn);
            let transposed = threshold_superlevel(&img.t().to_owned(), 0.75).unwrap().h0_rank(conn);
            prop_assert_eq!(base, transposed);
            let mut rotated = Array2::zeros((5, 5));
            for r in 0..5 {
                for c in 0..5 {
                    rotated[(c, 4 - r)] = img[(r, c)];
                }
            }
            let turned = threshold_superlevel(&rotated, 0.75).unwrap().h0_rank(conn);
            prop_assert_eq!(base, turned);
        }
    }
}
