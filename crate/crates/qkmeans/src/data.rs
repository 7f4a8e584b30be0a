//! Dataset generation, CSV persistence, PCA, and the elbow curve.

use std::path::Path;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::cluster::{self, ClusterConfig};
use crate::error::{Error, Result};
use crate::qsim;

/// Points plus, when known, the cluster each point was drawn from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Dataset {
    pub points: Vec<Vec<f64>>,
    pub true_labels: Option<Vec<usize>>,
}

/// Gaussian blobs around centers rejection-sampled in `[lo, hi]^dim` so
/// every pair of centers is at least `min_sep` apart. Points come back
/// cluster-major: all of cluster 0, then cluster 1, and so on.
pub fn gen_clusters_in(
    bounds: (f64, f64),
    k: usize,
    per_cluster: usize,
    dim: usize,
    variance: f64,
    min_sep: f64,
    seed: u64,
) -> Result<Dataset> {
    let (lo, hi) = bounds;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInput(format!(
            "bounds must be finite with lo < hi, got ({lo}, {hi})"
        )));
    }
    if k == 0 || per_cluster == 0 || dim == 0 {
        return Err(Error::InvalidInput(
            "k, points per cluster, and dimension must all be at least 1".into(),
        ));
    }
    if !(variance.is_finite() && variance >= 0.0) {
        return Err(Error::InvalidInput("variance must be finite and non-negative".into()));
    }
    if !(min_sep.is_finite() && min_sep >= 0.0) {
        return Err(Error::InvalidInput(
            "minimum separation must be finite and non-negative".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coord = Uniform::new_inclusive(lo, hi)
        .map_err(|e| Error::InvalidInput(format!("bad sampling bounds: {e}")))?;
    let sep_sq = min_sep * min_sep;
    let budget = 1000 * k;
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut attempts = 0usize;
    while centers.len() < k {
        if attempts >= budget {
            return Err(Error::InfeasibleSeparation {
                count: k,
                min_dist: min_sep,
                attempts,
            });
        }
        attempts += 1;
        let cand: Vec<f64> = (0..dim).map(|_| coord.sample(&mut rng)).collect();
        let far_enough = centers.iter().all(|c| {
            c.iter()
                .zip(&cand)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                >= sep_sq
        });
        if far_enough {
            centers.push(cand);
        }
    }

    let sigma = variance.sqrt();
    let jitter = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidInput(format!("bad variance: {e}")))?;
    let mut points = Vec::with_capacity(k * per_cluster);
    let mut labels = Vec::with_capacity(k * per_cluster);
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..per_cluster {
            points.push(center.iter().map(|x| x + jitter.sample(&mut rng)).collect());
            labels.push(c);
        }
    }
    Ok(Dataset {
        points,
        true_labels: Some(labels),
    })
}

/// [`gen_clusters_in`] over the default `[0, 10]^dim` box.
pub fn gen_clusters(
    k: usize,
    per_cluster: usize,
    dim: usize,
    variance: f64,
    min_sep: f64,
    seed: u64,
) -> Result<Dataset> {
    gen_clusters_in((0.0, 10.0), k, per_cluster, dim, variance, min_sep, seed)
}

fn csv_err(line: usize, message: impl Into<String>) -> Error {
    Error::Csv {
        line,
        message: message.into(),
    }
}

fn from_csv(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    csv_err(line, e.to_string())
}

/// File-open failures keep their identity as I/O errors, with the path
/// attached; everything else stays a CSV error.
fn open_err(path: &Path, e: csv::Error) -> Error {
    let msg = e.to_string();
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        _ => csv_err(0, msg),
    }
}

/// Write a dataset as CSV with header `f0,..,f{d-1}` plus a trailing
/// `label` column when true labels are present.
pub fn save_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let dim = match dataset.points.first() {
        Some(p) => p.len(),
        None => return Err(Error::InvalidInput("dataset has no points".into())),
    };
    if let Some(labels) = &dataset.true_labels {
        if labels.len() != dataset.points.len() {
            return Err(Error::LengthMismatch {
                left: dataset.points.len(),
                right: labels.len(),
            });
        }
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| open_err(path, e))?;
    let mut header: Vec<String> = (0..dim).map(|i| format!("f{i}")).collect();
    if dataset.true_labels.is_some() {
        header.push("label".into());
    }
    w.write_record(&header).map_err(from_csv)?;
    for (i, p) in dataset.points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::LengthMismatch {
                left: dim,
                right: p.len(),
            });
        }
        let mut row: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        if let Some(labels) = &dataset.true_labels {
            row.push(labels[i].to_string());
        }
        w.write_record(&row).map_err(from_csv)?;
    }
    w.flush()?;
    Ok(())
}

/// Read a dataset written by [`save_csv`]. A final column named `label`
/// becomes the true labels; every other column must parse as f64.
pub fn load_csv(path: &Path) -> Result<Dataset> {
    let mut r = csv::ReaderBuilder::new()
        .flexible(false)
        .from_path(path)
        .map_err(|e| open_err(path, e))?;
    let headers = r
        .headers()
        .map_err(|e| csv_err(1, e.to_string()))?
        .clone();
    if headers.is_empty() {
        return Err(csv_err(1, "empty header row"));
    }
    let has_label = headers.iter().last() == Some("label");
    let dim = headers.len() - usize::from(has_label);
    if dim == 0 {
        return Err(csv_err(1, "no feature columns before the label column"));
    }

    let mut points = Vec::new();
    let mut labels = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(from_csv)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let mut point = Vec::with_capacity(dim);
        for (i, field) in rec.iter().take(dim).enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                csv_err(line, format!("column {}: expected a number, got {field:?}", headers.get(i).unwrap_or("?")))
            })?;
            point.push(v);
        }
        if has_label {
            let field = rec.get(dim).unwrap_or("");
            let l: usize = field
                .trim()
                .parse()
                .map_err(|_| csv_err(line, format!("label column: expected an integer, got {field:?}")))?;
            labels.push(l);
        }
        points.push(point);
    }
    if points.is_empty() {
        return Err(csv_err(1, "no data rows"));
    }
    Ok(Dataset {
        points,
        true_labels: if has_label { Some(labels) } else { None },
    })
}

/// Principal axes of a point cloud, strongest first.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// One unit-length axis per row.
    pub components: Vec<Vec<f64>>,
    /// Fraction of total variance along each kept axis.
    pub explained_variance_ratio: Vec<f64>,
}

/// Fit a PCA of `n_components` axes on at least two points.
pub fn pca_fit(points: &[Vec<f64>], n_components: usize) -> Result<PcaModel> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidInput("PCA needs at least two points".into()));
    }
    let dim = points[0].len();
    if dim == 0 {
        return Err(Error::InvalidInput("points must have at least one component".into()));
    }
    if n_components == 0 || n_components > dim {
        return Err(Error::InvalidInput(format!(
            "component count must be in 1..={dim}, got {n_components}"
        )));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::LengthMismatch {
                left: dim,
                right: p.len(),
            });
        }
    }

    let mut mean = vec![0.0; dim];
    for p in points {
        for (m, x) in mean.iter_mut().zip(p) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }

    let mut cov = DMatrix::<f64>::zeros(dim, dim);
    for p in points {
        let d: Vec<f64> = p.iter().zip(&mean).map(|(x, m)| x - m).collect();
        for i in 0..dim {
            for j in 0..dim {
                cov[(i, j)] += d[i] * d[j];
            }
        }
    }
    cov /= (n - 1) as f64;

    let eig = cov.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let clamped: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
    let total: f64 = clamped.iter().sum();

    let mut components = Vec::with_capacity(n_components);
    let mut ratios = Vec::with_capacity(n_components);
    for (rank, &i) in order.iter().take(n_components).enumerate() {
        let col = eig.eigenvectors.column(i);
        let mut axis: Vec<f64> = col.iter().copied().collect();
        // Deterministic orientation: the largest-magnitude entry points up.
        let lead = axis
            .iter()
            .cloned()
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if lead < 0.0 {
            for x in &mut axis {
                *x = -*x;
            }
        }
        components.push(axis);
        ratios.push(if total > 0.0 { clamped[rank] / total } else { 0.0 });
    }
    Ok(PcaModel {
        mean,
        components,
        explained_variance_ratio: ratios,
    })
}

/// Project points onto a fitted model's axes.
pub fn pca_transform(model: &PcaModel, points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let dim = model.mean.len();
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != dim {
            return Err(Error::LengthMismatch {
                left: dim,
                right: p.len(),
            });
        }
        let centered: Vec<f64> = p.iter().zip(&model.mean).map(|(x, m)| x - m).collect();
        out.push(
            model
                .components
                .iter()
                .map(|axis| axis.iter().zip(&centered).map(|(a, c)| a * c).sum())
                .collect(),
        );
    }
    Ok(out)
}

/// Best within-cluster sum of squares over five classical runs for each
/// k in `1..=k_max`.
pub fn elbow_curve(points: &[Vec<f64>], k_max: usize, seed: u64) -> Result<Vec<(usize, f64)>> {
    if k_max == 0 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    if k_max > points.len() {
        return Err(Error::InvalidInput(format!(
            "k_max {k_max} exceeds the {} available points",
            points.len()
        )));
    }
    let mut curve = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut best = f64::INFINITY;
        for attempt in 0..5u64 {
            let mut cfg = ClusterConfig::new(k);
            cfg.seed = qsim::mix(seed, (k as u64) * 5 + attempt);
            let run = cluster::kmeans_classical(points, &cfg)?;
            best = best.min(cluster::wcss(points, &run.labels, &run.centroids));
        }
        curve.push((k, best));
    }
    Ok(curve)
}
