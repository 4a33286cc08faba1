//! Star-cluster classification of multi-band image patches. Each band is
//! normalized to a probability vector, sparsely approximated (or left raw for
//! the naive baseline), thresholded at a fraction of its maximum, and counted
//! for peaks; the per-band single-peak votes are combined by strict majority.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::{CostMatrix, Metric};
use crate::error::{Error, Result};
use crate::simplex::ProbVec;
use crate::solver::{sparse_approx, SolverConfig};
use crate::synth::LabeledPatch;
use crate::topology::{threshold_superlevel, Connectivity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sparse,
    Naive,
}

/// A stack of same-sized square intensity grids, one per frequency band.
/// Negative intensities are clamped to zero on construction.
#[derive(Debug, Clone)]
pub struct MultiBandImage {
    pub id: String,
    pub band_names: Vec<String>,
    pub bands: Vec<Array2<f64>>,
    pub m: usize,
}

impl MultiBandImage {
    pub fn new(id: String, band_names: Vec<String>, bands: Vec<Array2<f64>>) -> Result<Self> {
        if bands.is_empty() || bands.len() != band_names.len() {
            return Err(Error::InvalidInput(format!(
                "image {id}: need matching non-empty band and name lists"
            )));
        }
        let m = bands[0].nrows();
        for band in &bands {
            if band.nrows() != m || band.ncols() != m {
                return Err(Error::InvalidInput(format!(
                    "image {id}: bands must all be {m}x{m} squares"
                )));
            }
            if let Some(pos) = band.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite(pos));
            }
        }
        let bands = bands
            .into_iter()
            .map(|b| b.mapv(|v| v.max(0.0)))
            .collect();
        Ok(Self {
            id,
            band_names,
            bands,
            m,
        })
    }
}

/// One classified image, shaped for JSON-lines output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationRecord {
    pub id: String,
    pub method: Method,
    pub per_band_peaks: Vec<usize>,
    pub per_band_votes: Vec<bool>,
    /// True = star cluster; strict majority of the band votes.
    pub label: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Counts per label across a batch. Records that carried an error are tallied
/// by their label as well (a failed image defaults to not-cluster) and
/// additionally counted in `errored`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchSummary {
    pub cluster: usize,
    pub not_cluster: usize,
    pub errored: usize,
}

/// Sparse route for one band: normalize, sparse-approximate on the L2 pixel
/// grid, threshold, count peaks. The vote is "exactly one peak".
pub fn classify_band(
    band: &Array2<f64>,
    cfg: &SolverConfig,
    fraction: f64,
    connectivity: Connectivity,
) -> Result<(usize, bool)> {
    let m = square_side(band)?;
    let cost = CostMatrix::grid_2d(m, Metric::L2);
    classify_band_with_cost(band, &cost, cfg, fraction, connectivity)
}

fn square_side(band: &Array2<f64>) -> Result<usize> {
    let m = band.nrows();
    if band.ncols() != m || m == 0 {
        return Err(Error::InvalidInput(format!(
            "band must be square and non-empty, got {}x{}",
            band.nrows(),
            band.ncols()
        )));
    }
    Ok(m)
}

fn normalize_band(band: &Array2<f64>) -> Result<ProbVec> {
    let flat: Vec<f64> = band.iter().map(|&v| v.max(0.0)).collect();
    if flat.iter().sum::<f64>() <= 0.0 {
        return Err(Error::ZeroBand);
    }
    ProbVec::new(&flat)
}

fn classify_band_with_cost(
    band: &Array2<f64>,
    cost: &CostMatrix,
    cfg: &SolverConfig,
    fraction: f64,
    connectivity: Connectivity,
) -> Result<(usize, bool)> {
    let m = square_side(band)?;
    let nu = normalize_band(band)?;
    let trace = sparse_approx(&nu, cost, cfg)?;
    let sparse_img =
        Array2::from_shape_vec((m, m), trace.final_iterate.values().to_vec()).expect("m*m values");
    let peaks = threshold_superlevel(&sparse_img, fraction)?.h0_rank(connectivity);
    Ok((peaks, peaks == 1))
}

/// Naive route: threshold the normalized band directly, no sparsification.
pub fn classify_band_naive(
    band: &Array2<f64>,
    fraction: f64,
    connectivity: Connectivity,
) -> Result<(usize, bool)> {
    let m = square_side(band)?;
    let nu = normalize_band(band)?;
    let img = Array2::from_shape_vec((m, m), nu.values().to_vec()).expect("m*m values");
    let peaks = threshold_superlevel(&img, fraction)?.h0_rank(connectivity);
    Ok((peaks, peaks == 1))
}

fn strict_majority(votes: &[bool]) -> bool {
    2 * votes.iter().filter(|&&v| v).count() > votes.len()
}

fn classify_common<F>(image: &MultiBandImage, method: Method, band_fn: F) -> Result<ClassificationRecord>
where
    F: Fn(&Array2<f64>) -> Result<(usize, bool)>,
{
    if image.bands.iter().all(|b| b.iter().sum::<f64>() <= 0.0) {
        return Err(Error::AllBandsZero);
    }
    let mut peaks = Vec::with_capacity(image.bands.len());
    let mut votes = Vec::with_capacity(image.bands.len());
    let mut errors = Vec::new();
    for (name, band) in image.band_names.iter().zip(&image.bands) {
        match band_fn(band) {
            Ok((p, v)) => {
                peaks.push(p);
                votes.push(v);
            }
            Err(e) => {
                peaks.push(0);
                votes.push(false);
                errors.push(format!("band {name}: {e}"));
            }
        }
    }
    Ok(ClassificationRecord {
        id: image.id.clone(),
        method,
        label: strict_majority(&votes),
        per_band_peaks: peaks,
        per_band_votes: votes,
        error: if errors.is_empty() {
            None
        } else {
            Some(errors.join("; "))
        },
    })
}

/// Classifies every band by the sparse route and votes. Per-band failures
/// become recorded false votes; only an image with no positive band is fatal.
pub fn classify(
    image: &MultiBandImage,
    cfg: &SolverConfig,
    fraction: f64,
    connectivity: Connectivity,
) -> Result<ClassificationRecord> {
    let cost = CostMatrix::grid_2d(image.m, Metric::L2);
    classify_common(image, Method::Sparse, |band| {
        classify_band_with_cost(band, &cost, cfg, fraction, connectivity)
    })
}

/// The no-sparsification baseline with the same voting rule.
pub fn classify_naive(
    image: &MultiBandImage,
    fraction: f64,
    connectivity: Connectivity,
) -> Result<ClassificationRecord> {
    classify_common(image, Method::Naive, |band| {
        classify_band_naive(band, fraction, connectivity)
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BandRef {
    pub name: String,
    pub path: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub bands: Vec<BandRef>,
}

/// Reads a JSON manifest: an array of `{id, bands: [{name, path}]}`.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let file = File::open(path)?;
    Ok(serde_json::from_reader(file)?)
}

/// Reads one band: m rows of m comma-separated finite reals, no header.
pub fn read_band_csv(path: &Path) -> Result<Array2<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row: Vec<f64> = record
            .iter()
            .map(|cell| {
                cell.parse::<f64>().map_err(|_| {
                    Error::InvalidInput(format!("bad number {cell:?} in {}", path.display()))
                })
            })
            .collect::<Result<_>>()?;
        if let Some(pos) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(rows.len() * row.len() + pos));
        }
        rows.push(row);
    }
    let m = rows.len();
    if m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidInput(format!(
            "{} must be a square grid",
            path.display()
        )));
    }
    Array2::from_shape_vec((m, m), rows.into_iter().flatten().collect())
        .map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Writes a band in the same CSV format `read_band_csv` accepts.
pub fn write_band_csv(path: &Path, band: &Array2<f64>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for row in band.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Writes one CSV per patch plus a manifest listing each patch as a
/// single-band image. Returns the manifest path.
pub fn write_patch_fixtures(dir: &Path, patches: &[LabeledPatch]) -> Result<PathBuf> {
    let mut entries = Vec::with_capacity(patches.len());
    for p in patches {
        let file = format!("{}.csv", p.id);
        write_band_csv(&dir.join(&file), &p.pixels)?;
        entries.push(ManifestEntry {
            id: p.id.clone(),
            bands: vec![BandRef {
                name: "b0".to_string(),
                path: file,
            }],
        });
    }
    let manifest = dir.join("manifest.json");
    let mut out = BufWriter::new(File::create(&manifest)?);
    serde_json::to_writer_pretty(&mut out, &entries)?;
    writeln!(out)?;
    Ok(manifest)
}

/// Loads the bands of one manifest entry; relative paths resolve against the
/// manifest's directory.
pub fn load_image(entry: &ManifestEntry, base: &Path) -> Result<MultiBandImage> {
    let mut names = Vec::with_capacity(entry.bands.len());
    let mut bands = Vec::with_capacity(entry.bands.len());
    for band in &entry.bands {
        let raw = Path::new(&band.path);
        let path = if raw.is_absolute() {
            raw.to_path_buf()
        } else {
            base.join(raw)
        };
        names.push(band.name.clone());
        bands.push(read_band_csv(&path)?);
    }
    MultiBandImage::new(entry.id.clone(), names, bands)
}

fn process_entry(
    entry: &ManifestEntry,
    base: &Path,
    cfg: &SolverConfig,
    method: Method,
    fraction: f64,
    connectivity: Connectivity,
) -> ClassificationRecord {
    let outcome = load_image(entry, base).and_then(|image| match method {
        Method::Sparse => classify(&image, cfg, fraction, connectivity),
        Method::Naive => classify_naive(&image, fraction, connectivity),
    });
    outcome.unwrap_or_else(|e| ClassificationRecord {
        id: entry.id.clone(),
        method,
        per_band_peaks: Vec::new(),
        per_band_votes: Vec::new(),
        label: false,
        error: Some(e.to_string()),
    })
}

/// Classifies every manifest entry and writes one JSON record per line, in
/// manifest order. Images are processed in parallel; `threads` caps the pool
/// (0 or None uses the default pool). Per-image failures are recorded in the
/// output rather than aborting the batch.
pub fn run_batch(
    manifest_path: &Path,
    cfg: &SolverConfig,
    method: Method,
    fraction: f64,
    connectivity: Connectivity,
    output_path: &Path,
    threads: Option<usize>,
) -> Result<BatchSummary> {
    let entries = read_manifest(manifest_path)?;
    let base = manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));

    let work = || -> Vec<ClassificationRecord> {
        entries
            .par_iter()
            .map(|entry| process_entry(entry, &base, cfg, method, fraction, connectivity))
            .collect()
    };
    let records = match threads {
        Some(t) if t > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .install(work),
        _ => work(),
    };

    let mut out = BufWriter::new(File::create(output_path)?);
    let mut summary = BatchSummary {
        cluster: 0,
        not_cluster: 0,
        errored: 0,
    };
    for record in &records {
        writeln!(out, "{}", serde_json::to_string(record)?)?;
        if record.label {
            summary.cluster += 1;
        } else {
            summary.not_cluster += 1;
        }
        if record.error.is_some() {
            summary.errored += 1;
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sinkhorn::SinkhornConfig;
    use crate::synth::{classification_fixture, gaussian_blob};

    /// Small-patch settings: heavy smoothing keeps the inner solves cheap and
    /// convergent on a 100-point pixel grid.
    fn desk_cfg() -> SolverConfig {
        SolverConfig {
            lambda: 1.0,
            initial_step: 0.001,
            step_cap: 0.01,
            max_steps: 50,
            convergence_tol: 1e-6,
            sinkhorn: SinkhornConfig {
                epsilon: 1.0,
                max_iters: 20_000,
                tolerance: 1e-6,
                stabilized: true,
            },
        }
    }

    fn single_blob() -> Array2<f64> {
        gaussian_blob(10, (4.4, 5.0), 1.3, 1.0)
    }

    fn double_blob() -> Array2<f64> {
        let mut img = gaussian_blob(10, (2.6, 2.6), 1.2, 1.0);
        img += &gaussian_blob(10, (7.1, 7.0), 1.2, 0.9);
        img
    }

    #[test]
    fn sparse_band_counts_one_peak_for_one_source() {
        let (peaks, vote) =
            classify_band(&single_blob(), &desk_cfg(), 0.75, Connectivity::Eight).unwrap();
        assert_eq!(peaks, 1);
        assert!(vote);
    }

    #[test]
    fn sparse_band_counts_two_peaks_for_two_sources() {
        let (peaks, vote) =
            classify_band(&double_blob(), &desk_cfg(), 0.75, Connectivity::Eight).unwrap();
        assert_eq!(peaks, 2);
        assert!(!vote);
    }

    #[test]
    fn zero_band_is_reported() {
        let zero = Array2::<f64>::zeros((10, 10));
        assert!(matches!(
            classify_band(&zero, &desk_cfg(), 0.75, Connectivity::Eight),
            Err(Error::ZeroBand)
        ));
        assert!(matches!(
            classify_band_naive(&zero, 0.75, Connectivity::Eight),
            Err(Error::ZeroBand)
        ));
    }

    #[test]
    fn naive_votes_majority_across_bands() {
        let image = MultiBandImage::new(
            "five-band".into(),
            vec!["a".into(), "b".into(), "c".into(), "d".into(), "e".into()],
            vec![
                single_blob(),
                single_blob(),
                single_blob(),
                double_blob(),
                double_blob(),
            ],
        )
        .unwrap();
        let rec = classify_naive(&image, 0.75, Connectivity::Eight).unwrap();
        assert_eq!(rec.per_band_peaks, vec![1, 1, 1, 2, 2]);
        assert_eq!(rec.per_band_votes, vec![true, true, true, false, false]);
        assert!(rec.label);
        assert!(rec.error.is_none());
    }

    #[test]
    fn minority_of_single_peaks_is_not_a_cluster() {
        let image = MultiBandImage::new(
            "minority".into(),
            vec!["a".into(), "b".into(), "c".into()],
            vec![single_blob(), double_blob(), double_blob()],
        )
        .unwrap();
        let rec = classify_naive(&image, 0.75, Connectivity::Eight).unwrap();
        assert!(!rec.label);
    }

    #[test]
    fn single_band_majority_is_that_vote() {
        let image =
            MultiBandImage::new("solo".into(), vec!["a".into()], vec![single_blob()]).unwrap();
        let rec = classify_naive(&image, 0.75, Connectivity::Eight).unwrap();
        assert!(rec.label);
    }

    #[test]
    fn even_split_breaks_to_not_cluster() {
        let image = MultiBandImage::new(
            "tie".into(),
            vec!["a".into(), "b".into()],
            vec![single_blob(), double_blob()],
        )
        .unwrap();
        let rec = classify_naive(&image, 0.75, Connectivity::Eight).unwrap();
        assert!(!rec.label);
    }

    #[test]
    fn zero_band_among_good_bands_is_recorded_not_fatal() {
        let image = MultiBandImage::new(
            "partial".into(),
            vec!["good".into(), "dead".into()],
            vec![single_blob(), Array2::zeros((10, 10))],
        )
        .unwrap();
        let rec = classify_naive(&image, 0.75, Connectivity::Eight).unwrap();
        assert_eq!(rec.per_band_peaks, vec![1, 0]);
        assert_eq!(rec.per_band_votes, vec![true, false]);
        assert!(rec.error.as_deref().unwrap().contains("dead"));
        assert!(!rec.label);
    }

    #[test]
    fn all_zero_image_is_fatal() {
        let image = MultiBandImage::new(
            "dead".into(),
            vec!["a".into(), "b".into()],
            vec![Array2::zeros((10, 10)), Array2::zeros((10, 10))],
        )
        .unwrap();
        assert!(matches!(
            classify_naive(&image, 0.75, Connectivity::Eight),
            Err(Error::AllBandsZero)
        ));
    }

    #[test]
    fn ingestion_clamps_negatives() {
        let mut band = single_blob();
        band[(0, 0)] = -5.0;
        let image = MultiBandImage::new("neg".into(), vec!["a".into()], vec![band]).unwrap();
        assert_eq!(image.bands[0][(0, 0)], 0.0);
    }

    #[test]
    fn band_scaling_does_not_change_the_record() {
        let image =
            MultiBandImage::new("base".into(), vec!["a".into()], vec![single_blob()]).unwrap();
        let scaled = MultiBandImage::new(
            "base".into(),
            vec!["a".into()],
            vec![single_blob().mapv(|v| 37.0 * v)],
        )
        .unwrap();
        let a = classify_naive(&image, 0.75, Connectivity::Eight).unwrap();
        let b = classify_naive(&scaled, 0.75, Connectivity::Eight).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn permuting_bands_never_changes_the_label() {
        let bands = vec![single_blob(), double_blob(), single_blob()];
        let names: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
        let base = MultiBandImage::new("p".into(), names.clone(), bands.clone()).unwrap();
        let rec = classify_naive(&base, 0.75, Connectivity::Eight).unwrap();
        let perm = MultiBandImage::new(
            "p".into(),
            vec![names[2].clone(), names[0].clone(), names[1].clone()],
            vec![bands[2].clone(), bands[0].clone(), bands[1].clone()],
        )
        .unwrap();
        let rec_perm = classify_naive(&perm, 0.75, Connectivity::Eight).unwrap();
        assert_eq!(rec.label, rec_perm.label);
        assert_eq!(rec_perm.per_band_peaks, vec![1, 1, 2]);
    }

    #[test]
    fn record_serializes_with_stable_field_names() {
        let rec = ClassificationRecord {
            id: "x".into(),
            method: Method::Sparse,
            per_band_peaks: vec![1, 2],
            per_band_votes: vec![true, false],
            label: false,
            error: None,
        };
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(
            json,
            r#"{"id":"x","method":"sparse","perBandPeaks":[1,2],"perBandVotes":[true,false],"label":false}"#
        );
        let back: ClassificationRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn band_csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("band.csv");
        let band = single_blob();
        write_band_csv(&path, &band).unwrap();
        let back = read_band_csv(&path).unwrap();
        assert_eq!(band, back);
    }

    #[test]
    fn band_csv_rejects_bad_grids() {
        let dir = tempfile::tempdir().unwrap();
        let ragged = dir.path().join("ragged.csv");
        std::fs::write(&ragged, "1,2\n3\n").unwrap();
        assert!(read_band_csv(&ragged).is_err());
        let rect = dir.path().join("rect.csv");
        std::fs::write(&rect, "1,2,3\n4,5,6\n").unwrap();
        assert!(read_band_csv(&rect).is_err());
        let nan = dir.path().join("nan.csv");
        std::fs::write(&nan, "1,nan\n2,3\n").unwrap();
        assert!(matches!(read_band_csv(&nan), Err(Error::NonFinite(_))));
    }

    #[test]
    fn batch_runs_in_manifest_order_and_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let patches = classification_fixture(10, 1, 0.0, None, 5).unwrap();
        let manifest = write_patch_fixtures(dir.path(), &patches).unwrap();
        let out_a = dir.path().join("a.jsonl");
        let out_b = dir.path().join("b.jsonl");
        let cfg = desk_cfg();
        let s1 = run_batch(
            &manifest,
            &cfg,
            Method::Naive,
            0.75,
            Connectivity::Eight,
            &out_a,
            Some(2),
        )
        .unwrap();
        let s2 = run_batch(
            &manifest,
            &cfg,
            Method::Naive,
            0.75,
            Connectivity::Eight,
            &out_b,
            Some(1),
        )
        .unwrap();
        assert_eq!(s1, s2);
        assert_eq!(
            s1,
            BatchSummary {
                cluster: 1,
                not_cluster: 1,
                errored: 0
            }
        );
        let a = std::fs::read(&out_a).unwrap();
        let b = std::fs::read(&out_b).unwrap();
        assert_eq!(a, b);
        let first: ClassificationRecord =
            serde_json::from_str(String::from_utf8_lossy(&a).lines().next().unwrap()).unwrap();
        assert_eq!(first.id, "single-000");
    }

    #[test]
    fn empty_manifest_yields_empty_output() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = dir.path().join("manifest.json");
        std::fs::write(&manifest, "[]").unwrap();
        let out = dir.path().join("out.jsonl");
        let summary = run_batch(
            &manifest,
            &desk_cfg(),
            Method::Naive,
            0.75,
            Connectivity::Eight,
            &out,
            None,
        )
        .unwrap();
        assert_eq!(
            summary,
            BatchSummary {
                cluster: 0,
                not_cluster: 0,
                errored: 0
            }
        );
        assert_eq!(std::fs::read(&out).unwrap().len(), 0);
    }

    #[test]
    fn missing_band_file_is_recorded_not_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = dir.path().join("manifest.json");
        std::fs::write(
            &manifest,
            r#"[{"id":"ghost","bands":[{"name":"b0","path":"nope.csv"}]}]"#,
        )
        .unwrap();
        let out = dir.path().join("out.jsonl");
        let summary = run_batch(
            &manifest,
            &desk_cfg(),
            Method::Naive,
            0.75,
            Connectivity::Eight,
            &out,
            None,
        )
        .unwrap();
        assert_eq!(summary.errored, 1);
        let text = std::fs::read_to_string(&out).unwrap();
        let rec: ClassificationRecord = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(rec.id, "ghost");
        assert!(rec.error.is_some());
        assert!(!rec.label);
    }

    #[test]
    fn bad_manifest_is_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = dir.path().join("manifest.json");
        std::fs::write(&manifest, "{ not json").unwrap();
        let out = dir.path().join("out.jsonl");
        assert!(run_batch(
            &manifest,
            &desk_cfg(),
            Method::Naive,
            0.75,
            Connectivity::Eight,
            &out,
            None,
        )
        .is_err());
    }

    #[test]
    fn sparse_and_naive_agree_on_a_clean_source() {
        let image =
            MultiBandImage::new("clean".into(), vec!["a".into()], vec![single_blob()]).unwrap();
        let sparse = classify(&image, &desk_cfg(), 0.75, Connectivity::Eight).unwrap();
        let naive = classify_naive(&image, 0.75, Connectivity::Eight).unwrap();
        assert!(sparse.label);
        assert!(naive.label);
    }
}
