//! Counting peaks in an image by superlevel thresholding.
//!
//! Builds a two-blob synthetic patch, keeps the pixels above a fraction of
//! the maximum, and counts connected components of the mask. Also shows the
//! one configuration where 4- and 8-connectivity disagree.
//!
//! Run with `cargo run --example peak_counting`.

use ndarray::array;
use otsr::synth::gaussian_blob;
use otsr::{count_peaks, threshold_superlevel, Connectivity};

fn render(mask: &otsr::BinaryImage) {
    for i in 0..mask.shape().0 {
        let row: String = (0..mask.shape().1)
            .map(|j| if mask.mask()[[i, j]] { '#' } else { '.' })
            .collect();
        println!("  {row}");
    }
}

fn main() {
    let m = 12;
    let mut img = gaussian_blob(m, (3.0, 3.0), 1.2, 1.0);
    img += &gaussian_blob(m, (8.0, 8.0), 1.2, 0.9);

    for fraction in [0.25, 0.5, 0.75] {
        let mask = threshold_superlevel(&img, fraction).unwrap();
        let peaks = mask.h0_rank(Connectivity::Eight);
        println!(
            "threshold {fraction}: {} pixels kept, {peaks} peak(s)",
            mask.count_true()
        );
        render(&mask);
        println!();
    }

    // A diagonal pair of pixels touches under 8-connectivity only.
    let diagonal = array![[1.0, 0.0], [0.0, 1.0]];
    let four = count_peaks(&diagonal, 0.5, Connectivity::Four).unwrap();
    let eight = count_peaks(&diagonal, 0.5, Connectivity::Eight).unwrap();
    println!("diagonal pixels: 4-connectivity sees {four}, 8-connectivity sees {eight}");

    let err = threshold_superlevel(&array![[0.0, 0.0], [0.0, 0.0]], 0.5).unwrap_err();
    println!("all-zero image is rejected: {err}");
}
