//! Lloyd-style k-means with classical or swap-test distances.
//!
//! Both solvers share one iteration loop; they differ only in how the
//! point-to-centroid distance matrix is produced. The quantum solver
//! batches every pair's circuits into a single job per iteration, so a
//! backend's per-job limits and queue emulation apply exactly as they
//! would on real hardware.

use serde::{Deserialize, Serialize};

use crate::backend::{self, BackendProfile};
use crate::dist::{self, BlockSpec, EstimatorConfig, Mode};
use crate::embed::{Embedding, VectorPair};
use crate::error::{Error, Result};
use crate::qsim::{self, Circuit};

/// Tunables for one clustering run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusterConfig {
    /// Number of clusters requested; runs can end with fewer when a
    /// cluster loses all members.
    pub k: usize,
    /// Minimum pairwise distance required between initial centroids.
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Converged when no centroid moves at least this far.
    pub convergence_tol: f64,
    pub estimator: EstimatorConfig,
    pub seed: u64,
    /// Worker threads for job execution; `None` runs sequentially.
    pub workers: Option<usize>,
}

impl ClusterConfig {
    pub fn new(k: usize) -> Self {
        ClusterConfig {
            k,
            epsilon: 0.0,
            max_iterations: 100,
            convergence_tol: 1e-4,
            estimator: EstimatorConfig::analytic(Embedding::Amplitude),
            seed: 0,
            workers: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput(
                "clustering needs at least one iteration".into(),
            ));
        }
        if !self.convergence_tol.is_finite() || self.convergence_tol < 0.0 {
            return Err(Error::InvalidInput(
                "convergence tolerance must be finite and non-negative".into(),
            ));
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::InvalidInput(
                "epsilon must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of a clustering run. Labels are dense cluster indices in
/// `0..centroids.len()`.
#[derive(Clone, Debug, Serialize)]
pub struct ClusteringRun {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub iterations: usize,
    /// Maximum centroid displacement after each iteration.
    pub history: Vec<f64>,
    pub converged: bool,
}

fn euclid_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn check_points(points: &[Vec<f64>]) -> Result<usize> {
    let dim = match points.first() {
        Some(p) => p.len(),
        None => return Err(Error::InvalidInput("no points to cluster".into())),
    };
    if dim == 0 {
        return Err(Error::InvalidInput("points must have at least one component".into()));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::LengthMismatch {
                left: dim,
                right: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("points must be finite".into()));
        }
    }
    Ok(dim)
}

/// Draw `k` distinct points uniformly as starting centroids, rejecting
/// draws whose centroids come closer than `epsilon` to each other. Gives
/// up after 1000 * k rejected draws.
pub fn init_centroids(
    points: &[Vec<f64>],
    k: usize,
    epsilon: f64,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    use rand::SeedableRng;

    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if points.len() < k {
        return Err(Error::InvalidInput(format!(
            "cannot place {k} centroids on {} points",
            points.len()
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let budget = 1000 * k;
    let eps_sq = epsilon * epsilon;
    for attempt in 1..=budget {
        let picked = rand::seq::index::sample(&mut rng, points.len(), k);
        let centroids: Vec<Vec<f64>> = picked.iter().map(|i| points[i].clone()).collect();
        let separated = (0..k).all(|a| {
            (a + 1..k).all(|b| euclid_sq(&centroids[a], &centroids[b]) >= eps_sq)
        });
        if separated {
            return Ok(centroids);
        }
        let _ = attempt;
    }
    Err(Error::InfeasibleSeparation {
        count: k,
        min_dist: epsilon,
        attempts: budget,
    })
}

/// Nearest-centroid assignment; ties go to the lowest index.
pub fn assign(dists: &[Vec<f64>]) -> Vec<usize> {
    dists
        .iter()
        .map(|row| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (j, &d) in row.iter().enumerate() {
                if d < best_d {
                    best = j;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}

/// Replace each centroid with the mean of its members. Clusters without
/// members are deleted and the labels re-indexed densely.
pub fn update_centroids(
    points: &[Vec<f64>],
    labels: &[usize],
    k: usize,
) -> Result<(Vec<Vec<f64>>, Vec<usize>)> {
    if points.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: points.len(),
            right: labels.len(),
        });
    }
    let dim = check_points(points)?;
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in points.iter().zip(labels) {
        if l >= k {
            return Err(Error::InvalidInput(format!("label {l} out of range for k={k}")));
        }
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(p) {
            *s += x;
        }
    }
    let mut remap = vec![usize::MAX; k];
    let mut centroids = Vec::new();
    for (old, (sum, &count)) in sums.iter().zip(&counts).enumerate() {
        if count == 0 {
            continue;
        }
        remap[old] = centroids.len();
        centroids.push(sum.iter().map(|s| s / count as f64).collect());
    }
    let relabeled = labels.iter().map(|&l| remap[l]).collect();
    Ok((centroids, relabeled))
}

/// Within-cluster sum of squared distances.
pub fn wcss(points: &[Vec<f64>], labels: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .zip(labels)
        .map(|(p, &l)| euclid_sq(p, &centroids[l]))
        .sum()
}

fn lloyd<F>(points: &[Vec<f64>], cfg: &ClusterConfig, mut dist_matrix: F) -> Result<ClusteringRun>
where
    F: FnMut(&[Vec<f64>], &[Vec<f64>], usize) -> Result<Vec<Vec<f64>>>,
{
    cfg.validate()?;
    check_points(points)?;
    let mut centroids = init_centroids(points, cfg.k, cfg.epsilon, cfg.seed)?;
    let mut labels = Vec::new();
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    for it in 0..cfg.max_iterations {
        iterations = it + 1;
        let dists = dist_matrix(points, &centroids, it)?;
        labels = assign(&dists);
        let (next, relabeled) = update_centroids(points, &labels, centroids.len())?;
        labels = relabeled;
        let displacement = if next.len() == centroids.len() {
            centroids
                .iter()
                .zip(&next)
                .map(|(a, b)| euclid_sq(a, b).sqrt())
                .fold(0.0, f64::max)
        } else {
            // A deleted cluster restarts the geometry; never converged here.
            f64::INFINITY
        };
        history.push(displacement);
        centroids = next;
        if displacement < cfg.convergence_tol {
            converged = true;
            break;
        }
    }
    Ok(ClusteringRun {
        labels,
        centroids,
        iterations,
        history,
        converged,
    })
}

/// k-means with exact squared Euclidean distances.
pub fn kmeans_classical(points: &[Vec<f64>], cfg: &ClusterConfig) -> Result<ClusteringRun> {
    lloyd(points, cfg, |pts, cents, _| {
        Ok(pts
            .iter()
            .map(|p| cents.iter().map(|c| euclid_sq(p, c)).collect())
            .collect())
    })
}

/// k-means whose distances come from swap-test estimates executed on the
/// given backend profile. Iteration `i` derives its job seed from
/// `cfg.seed` and `i`, so a run is fully reproducible.
pub fn kmeans_quantum(
    points: &[Vec<f64>],
    cfg: &ClusterConfig,
    profile: &BackendProfile,
) -> Result<ClusteringRun> {
    cfg.estimator.validate()?;
    lloyd(points, cfg, |pts, cents, it| {
        quantum_dist_matrix(
            pts,
            cents,
            &cfg.estimator,
            cfg.workers,
            profile,
            qsim::mix(cfg.seed, it as u64),
        )
    })
}

/// Label points by their nearest centroid under swap-test distances.
pub fn nn_classify(
    points: &[Vec<f64>],
    centroids: &[Vec<f64>],
    cfg: &EstimatorConfig,
    profile: &BackendProfile,
    seed: u64,
) -> Result<Vec<usize>> {
    cfg.validate()?;
    check_points(points)?;
    if centroids.is_empty() {
        return Err(Error::InvalidInput("classification needs centroids".into()));
    }
    let dists = quantum_dist_matrix(points, centroids, cfg, None, profile, seed)?;
    Ok(assign(&dists))
}

/// Distance matrix for one iteration. Sampled mode builds every pair's
/// circuits (times repetitions, split into blocks when configured),
/// packs block circuits onto the device width, and submits the lot as
/// one job.
fn quantum_dist_matrix(
    points: &[Vec<f64>],
    centroids: &[Vec<f64>],
    est: &EstimatorConfig,
    workers: Option<usize>,
    profile: &BackendProfile,
    job_seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let n = points.len();
    let k = centroids.len();
    let noise = est.noise.unwrap_or(profile.noise);
    noise.validate()?;

    // A pair of all-zero vectors has no embedding but its distance is 0.
    let degenerate = |p: &[f64], c: &[f64]| p.iter().chain(c).all(|&x| x == 0.0);

    if est.mode == Mode::Analytic {
        let mut dists = vec![vec![0.0; k]; n];
        for (i, p) in points.iter().enumerate() {
            for (j, c) in centroids.iter().enumerate() {
                if degenerate(p, c) {
                    continue;
                }
                let pair = VectorPair::new(p.clone(), c.clone())?;
                dists[i][j] = dist::estimate(&pair, est, profile, 0)?.distance;
            }
        }
        return Ok(dists);
    }

    // Per-pair recovery plan: the normalization of each circuit-backed
    // block, in the order its counts will come back.
    let mut plans: Vec<Vec<f64>> = Vec::with_capacity(n * k);
    let mut circuits: Vec<Circuit> = Vec::new();
    for p in points {
        for c in centroids {
            if degenerate(p, c) {
                plans.push(Vec::new());
                continue;
            }
            let pair = VectorPair::new(p.clone(), c.clone())?;
            let blocks: Vec<(Circuit, f64)> = match est.block {
                BlockSpec::Full => {
                    let (circuit, z) = dist::swap_test_with_z(&pair, est.embedding)?;
                    if circuit.width() > profile.qubits {
                        return Err(Error::CircuitTooWide {
                            width: circuit.width(),
                            qubits: profile.qubits,
                        });
                    }
                    vec![(circuit, z)]
                }
                BlockSpec::Size(size) => {
                    let mut out = Vec::new();
                    for block in dist::block_pairs(&pair, size)? {
                        let z: f64 =
                            block.a.iter().chain(block.b.iter()).map(|x| x * x).sum();
                        if z == 0.0 {
                            continue;
                        }
                        out.push((dist::swap_test_with_z(&block, est.embedding)?.0, z));
                    }
                    out
                }
            };
            for _ in 0..est.repetitions {
                for (circuit, _) in &blocks {
                    circuits.push(circuit.clone());
                }
            }
            plans.push(blocks.into_iter().map(|(_, z)| z).collect());
        }
    }

    let submitted = match est.block {
        BlockSpec::Full => circuits,
        BlockSpec::Size(_) => dist::pack_blocks(&circuits, profile)?,
    };
    let flat: Vec<f64> = if submitted.is_empty() {
        Vec::new()
    } else {
        let exec = profile.with_noise(noise);
        backend::run_job(&submitted, est.shots, &exec, workers, job_seed)?
            .iter()
            .flat_map(|r| r.counts.iter().map(|sc| sc.p1()))
            .collect()
    };

    let mut dists = vec![vec![0.0; k]; n];
    let mut cursor = 0usize;
    let mut plan_iter = plans.iter();
    for row in dists.iter_mut() {
        for cell in row.iter_mut() {
            let zs = plan_iter.next().expect("one plan per pair");
            if zs.is_empty() {
                continue;
            }
            let mut d_sum = 0.0;
            for _ in 0..est.repetitions {
                let mut d_rep = 0.0;
                for &z in zs {
                    let mut p1 = flat[cursor];
                    cursor += 1;
                    if est.mitigate {
                        p1 = qsim::mitigate_readout(p1, noise.p01, noise.p10)?;
                    }
                    d_rep += dist::recover(est.embedding, p1, z).0;
                }
                d_sum += d_rep;
            }
            *cell = d_sum / est.repetitions as f64;
        }
    }
    debug_assert_eq!(cursor, flat.len());
    Ok(dists)
}

/// Try clustering seeds `0..seeds_to_try` and return the first whose
/// classical run converges within `iteration_budget` iterations while
/// keeping all k clusters alive.
pub fn seed_search(
    points: &[Vec<f64>],
    cfg: &ClusterConfig,
    iteration_budget: usize,
    seeds_to_try: u64,
) -> Result<(u64, Vec<Vec<f64>>)> {
    if iteration_budget == 0 || seeds_to_try == 0 {
        return Err(Error::InvalidInput(
            "seed search needs a positive budget and at least one seed".into(),
        ));
    }
    for seed in 0..seeds_to_try {
        let mut candidate = cfg.clone();
        candidate.seed = seed;
        candidate.max_iterations = iteration_budget;
        match kmeans_classical(points, &candidate) {
            Ok(run) if run.converged && run.centroids.len() == cfg.k => {
                return Ok((seed, run.centroids));
            }
            Ok(_) => {}
            Err(Error::InfeasibleSeparation { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoSeedFound {
        tried: seeds_to_try,
        budget: iteration_budget,
    })
}
