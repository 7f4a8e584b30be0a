//! Swap-test distance estimation.
//!
//! A swap test bounces an ancilla off two embedded registers; the
//! ancilla's outcome distribution encodes their overlap. For amplitude
//! embedding the squared Euclidean distance comes back through
//! |a - b|^2 = 4 Z (Pr(0) - 1/2); for angle embedding the metric is
//! d = sqrt(Z * Pr(1)). The estimators below run those circuits either
//! analytically (exact marginals) or sampled through a backend profile,
//! with optional readout mitigation, repetition averaging, a blockwise
//! subspace decomposition for narrow devices, and packing of several
//! independent blocks into one wide circuit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::backend::{self, BackendProfile};
use crate::embed::{amplitude_pair_states, angle_product_params, normalize_pair, Embedding, VectorPair};
use crate::error::{Error, Result};
use crate::qsim::{self, Circuit, Gate, NoiseModel};

/// Whether probabilities come from exact marginals or from shots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Sampled,
}

/// Whole-vector estimation or an even-sized block decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockSpec {
    Full,
    Size(usize),
}

/// Everything that shapes a distance estimate.
///
/// `noise` overrides the executing profile's noise model when set; in
/// analytic mode a non-zero model is applied to the exact probability as
/// a deterministic channel, which isolates noise bias from shot noise.
/// `mitigate` inverts the readout part of the effective noise model on
/// every observed frequency before distances are recovered.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub embedding: Embedding,
    pub mode: Mode,
    /// Shots per circuit in sampled mode; ignored (and echoed as 0) in
    /// analytic mode.
    pub shots: u64,
    /// Independent circuits per estimate whose recovered distances are
    /// averaged.
    pub repetitions: usize,
    pub block: BlockSpec,
    pub noise: Option<NoiseModel>,
    pub mitigate: bool,
}

impl EstimatorConfig {
    /// Exact, noise-free estimation.
    pub fn analytic(embedding: Embedding) -> Self {
        EstimatorConfig {
            embedding,
            mode: Mode::Analytic,
            shots: 0,
            repetitions: 1,
            block: BlockSpec::Full,
            noise: None,
            mitigate: false,
        }
    }

    /// Shot-sampled estimation with the profile's own noise model.
    pub fn sampled(embedding: Embedding, shots: u64) -> Self {
        EstimatorConfig {
            embedding,
            mode: Mode::Sampled,
            shots,
            repetitions: 1,
            block: BlockSpec::Full,
            noise: None,
            mitigate: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidInput(
                "estimates need at least one repetition".into(),
            ));
        }
        if self.mode == Mode::Sampled && self.shots == 0 {
            return Err(Error::InvalidInput(
                "sampled estimates need at least one shot".into(),
            ));
        }
        if let BlockSpec::Size(s) = self.block {
            if s < 2 || s % 2 != 0 {
                return Err(Error::InvalidInput(format!(
                    "block size must be even and at least 2, got {s}"
                )));
            }
        }
        if let Some(noise) = &self.noise {
            noise.validate()?;
        }
        Ok(())
    }
}

/// One recovered distance with its raw ingredients.
///
/// For block decompositions, `distance` is the sum over blocks, `z` the
/// sum of per-block normalizations, and the probabilities are averages
/// over all contributing circuits.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DistanceEstimate {
    pub distance: f64,
    pub sq_distance: f64,
    pub p0: f64,
    pub p1: f64,
    pub z: f64,
    /// Shots per circuit; 0 marks an analytic estimate.
    pub shots: u64,
    pub repetitions: usize,
}

/// Squared Euclidean distance from an amplitude swap test's Pr(0),
/// clamped at zero because noise can push the raw frequency below 1/2.
pub fn amp_sq_distance(p0: f64, z: f64) -> f64 {
    (4.0 * z * (p0 - 0.5)).max(0.0)
}

/// Angle-embedding distance from the swap test's Pr(1).
pub fn angle_distance(p1: f64, z: f64) -> f64 {
    (z * p1).max(0.0).sqrt()
}

pub(crate) fn recover(embedding: Embedding, p1: f64, z: f64) -> (f64, f64) {
    match embedding {
        Embedding::Amplitude => {
            let sq = amp_sq_distance(1.0 - p1, z);
            (sq.sqrt(), sq)
        }
        Embedding::Angle => {
            let d = angle_distance(p1, z);
            (d, d * d)
        }
    }
}

/// Swap-test circuit for a pair under the given embedding, measuring a
/// single ancilla.
pub fn build_swap_test(pair: &VectorPair, embedding: Embedding) -> Result<Circuit> {
    Ok(swap_test_with_z(pair, embedding)?.0)
}

pub(crate) fn swap_test_with_z(pair: &VectorPair, embedding: Embedding) -> Result<(Circuit, f64)> {
    match embedding {
        Embedding::Amplitude => {
            let s = amplitude_pair_states(pair)?;
            let k = s.data_qubits;
            let mut c = Circuit::new(k + 3)?;
            c.push(Gate::AmplitudeInit {
                qubits: (0..=k).collect(),
                amplitudes: s.psi.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            })?;
            c.push(Gate::AmplitudeInit {
                qubits: vec![k + 1],
                amplitudes: s.phi.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            })?;
            let anc = k + 2;
            c.push(Gate::H { qubit: anc })?;
            // The pair-selection qubit of psi meets the reference qubit;
            // one Fredkin gate regardless of dimension.
            c.push(Gate::Cswap {
                control: anc,
                target_a: k,
                target_b: k + 1,
            })?;
            c.push(Gate::H { qubit: anc })?;
            c.measure(anc)?;
            Ok((c, s.z))
        }
        Embedding::Angle => {
            let p = angle_product_params(pair)?;
            let m = p.a.len();
            let mut c = Circuit::new(2 * m + 1)?;
            for (j, &(theta, gamma)) in p.a.iter().enumerate() {
                c.push(Gate::U { qubit: j, theta, gamma })?;
            }
            for (j, &(theta, gamma)) in p.b.iter().enumerate() {
                c.push(Gate::U {
                    qubit: m + j,
                    theta,
                    gamma,
                })?;
            }
            let anc = 2 * m;
            c.push(Gate::H { qubit: anc })?;
            for j in 0..m {
                c.push(Gate::Cswap {
                    control: anc,
                    target_a: j,
                    target_b: m + j,
                })?;
            }
            c.push(Gate::H { qubit: anc })?;
            c.measure(anc)?;
            Ok((c, p.z))
        }
    }
}

fn effective_noise(cfg: &EstimatorConfig, profile: &BackendProfile) -> NoiseModel {
    cfg.noise.unwrap_or(profile.noise)
}

fn observed_p1(counts_p1: f64, noise: &NoiseModel, mitigate: bool) -> Result<f64> {
    if mitigate {
        qsim::mitigate_readout(counts_p1, noise.p01, noise.p10)
    } else {
        Ok(counts_p1)
    }
}

/// Estimate the distance between the two vectors of a pair.
///
/// Dispatches on `cfg.block`: full-vector estimation runs one swap test,
/// a block spec runs the subspace decomposition. The profile bounds
/// circuit width and, in sampled mode, executes the circuits under its
/// limits.
pub fn estimate(
    pair: &VectorPair,
    cfg: &EstimatorConfig,
    profile: &BackendProfile,
    seed: u64,
) -> Result<DistanceEstimate> {
    cfg.validate()?;
    match cfg.block {
        BlockSpec::Full => estimate_full(pair, cfg, profile, seed),
        BlockSpec::Size(_) => subspace_distance(pair, cfg, profile, seed),
    }
}

fn estimate_full(
    pair: &VectorPair,
    cfg: &EstimatorConfig,
    profile: &BackendProfile,
    seed: u64,
) -> Result<DistanceEstimate> {
    let (circuit, z) = swap_test_with_z(pair, cfg.embedding)?;
    if circuit.width() > profile.qubits {
        return Err(Error::CircuitTooWide {
            width: circuit.width(),
            qubits: profile.qubits,
        });
    }
    let noise = effective_noise(cfg, profile);
    noise.validate()?;
    match cfg.mode {
        Mode::Analytic => {
            let anc = circuit.measured()[0];
            let p1 = observed_p1(
                qsim::noisy_prob1(&circuit, anc, &noise)?,
                &noise,
                cfg.mitigate,
            )?;
            let (distance, sq_distance) = recover(cfg.embedding, p1, z);
            Ok(DistanceEstimate {
                distance,
                sq_distance,
                p0: 1.0 - p1,
                p1,
                z,
                shots: 0,
                repetitions: cfg.repetitions,
            })
        }
        Mode::Sampled => {
            let circuits = vec![circuit; cfg.repetitions];
            let exec = profile.with_noise(noise);
            let results = backend::run_job(&circuits, cfg.shots, &exec, None, seed)?;
            let mut d_sum = 0.0;
            let mut p1_sum = 0.0;
            for r in &results {
                let p1 = observed_p1(r.counts[0].p1(), &noise, cfg.mitigate)?;
                let (d, _) = recover(cfg.embedding, p1, z);
                d_sum += d;
                p1_sum += p1;
            }
            let reps = cfg.repetitions as f64;
            let distance = d_sum / reps;
            let p1 = p1_sum / reps;
            Ok(DistanceEstimate {
                distance,
                sq_distance: distance * distance,
                p0: 1.0 - p1,
                p1,
                z,
                shots: cfg.shots,
                repetitions: cfg.repetitions,
            })
        }
    }
}

/// Split a pair into consecutive blocks of `block_size` components,
/// zero-padding the tail. Blocks where both projections are zero are
/// kept; estimation skips their circuits and counts them as distance 0.
pub fn block_pairs(pair: &VectorPair, block_size: usize) -> Result<Vec<VectorPair>> {
    if block_size < 2 || block_size % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "block size must be even and at least 2, got {block_size}"
        )));
    }
    let mut a = pair.a.clone();
    let mut b = pair.b.clone();
    while a.len() % block_size != 0 {
        a.push(0.0);
        b.push(0.0);
    }
    Ok(a
        .chunks(block_size)
        .zip(b.chunks(block_size))
        .map(|(ca, cb)| VectorPair {
            a: ca.to_vec(),
            b: cb.to_vec(),
        })
        .collect())
}

/// Blockwise distance: the sum of independent per-block swap-test
/// estimates, each with its own normalization Z_block.
///
/// The block sum dominates the Euclidean distance (a sum of norms is at
/// least the norm of the sum), so it is a coarser but monotone metric
/// that fits on far narrower devices. In sampled mode the per-block
/// circuits are packed onto the profile's qubits before submission;
/// packing never changes analytic values because disjoint blocks
/// simulate independently.
pub fn subspace_distance(
    pair: &VectorPair,
    cfg: &EstimatorConfig,
    profile: &BackendProfile,
    seed: u64,
) -> Result<DistanceEstimate> {
    cfg.validate()?;
    let size = match cfg.block {
        BlockSpec::Full => return estimate_full(pair, cfg, profile, seed),
        BlockSpec::Size(s) => s,
    };
    // A pair of zero vectors has no meaningful estimate at any block size.
    normalize_pair(pair)?;
    let noise = effective_noise(cfg, profile);
    noise.validate()?;

    let blocks = block_pairs(pair, size)?;
    let mut z_total = 0.0;
    let mut active: Vec<(Circuit, f64)> = Vec::new();
    for block in &blocks {
        let z: f64 = block.a.iter().chain(block.b.iter()).map(|x| x * x).sum();
        z_total += z;
        if z == 0.0 {
            continue;
        }
        let (circuit, _) = swap_test_with_z(block, cfg.embedding)?;
        if circuit.width() > profile.qubits {
            return Err(Error::CircuitTooWide {
                width: circuit.width(),
                qubits: profile.qubits,
            });
        }
        active.push((circuit, z));
    }
    if active.is_empty() {
        // All blocks degenerate can only happen for identical zero-padded
        // vectors, which normalize_pair already rejected.
        unreachable!("non-zero pair always has an active block");
    }

    match cfg.mode {
        Mode::Analytic => {
            let mut distance = 0.0;
            let mut p1_sum = 0.0;
            for (circuit, z) in &active {
                let anc = circuit.measured()[0];
                let p1 = observed_p1(
                    qsim::noisy_prob1(circuit, anc, &noise)?,
                    &noise,
                    cfg.mitigate,
                )?;
                let (d, _) = recover(cfg.embedding, p1, *z);
                distance += d;
                p1_sum += p1;
            }
            let p1 = p1_sum / active.len() as f64;
            Ok(DistanceEstimate {
                distance,
                sq_distance: distance * distance,
                p0: 1.0 - p1,
                p1,
                z: z_total,
                shots: 0,
                repetitions: cfg.repetitions,
            })
        }
        Mode::Sampled => {
            let mut circuits = Vec::with_capacity(active.len() * cfg.repetitions);
            for rep in 0..cfg.repetitions {
                for (i, (circuit, _)) in active.iter().enumerate() {
                    let mut c = circuit.clone();
                    c.tag(format!("rep{rep}/block{i}"));
                    circuits.push(c);
                }
            }
            let packed = pack_blocks(&circuits, profile)?;
            let exec = profile.with_noise(noise);
            let results = backend::run_job(&packed, cfg.shots, &exec, None, seed)?;
            let flat: Vec<f64> = results
                .iter()
                .flat_map(|r| r.counts.iter().map(|c| c.p1()))
                .collect();
            debug_assert_eq!(flat.len(), circuits.len());

            let mut d_sum = 0.0;
            let mut p1_sum = 0.0;
            for rep_p1s in flat.chunks(active.len()) {
                let mut d_rep = 0.0;
                for (raw, (_, z)) in rep_p1s.iter().zip(&active) {
                    let p1 = observed_p1(*raw, &noise, cfg.mitigate)?;
                    let (d, _) = recover(cfg.embedding, p1, *z);
                    d_rep += d;
                    p1_sum += p1;
                }
                d_sum += d_rep;
            }
            let reps = cfg.repetitions as f64;
            let distance = d_sum / reps;
            let p1 = p1_sum / flat.len() as f64;
            Ok(DistanceEstimate {
                distance,
                sq_distance: distance * distance,
                p0: 1.0 - p1,
                p1,
                z: z_total,
                shots: cfg.shots,
                repetitions: cfg.repetitions,
            })
        }
    }
}

fn offset_gate(gate: &Gate, base: usize) -> Gate {
    match gate {
        Gate::H { qubit } => Gate::H { qubit: qubit + base },
        Gate::X { qubit } => Gate::X { qubit: qubit + base },
        Gate::U { qubit, theta, gamma } => Gate::U {
            qubit: qubit + base,
            theta: *theta,
            gamma: *gamma,
        },
        Gate::Cswap {
            control,
            target_a,
            target_b,
        } => Gate::Cswap {
            control: control + base,
            target_a: target_a + base,
            target_b: target_b + base,
        },
        Gate::AmplitudeInit { qubits, amplitudes } => Gate::AmplitudeInit {
            qubits: qubits.iter().map(|q| q + base).collect(),
            amplitudes: amplitudes.clone(),
        },
    }
}

/// Place consecutive single-ancilla circuits side by side on disjoint
/// qubit ranges, as many per merged circuit as the profile's width
/// allows. Measured ancillas and tags keep the input order, so result
/// counts line up with the original block list.
pub fn pack_blocks(block_circuits: &[Circuit], profile: &BackendProfile) -> Result<Vec<Circuit>> {
    let mut groups: Vec<Vec<&Circuit>> = Vec::new();
    let mut current: Vec<&Circuit> = Vec::new();
    let mut used = 0usize;
    for c in block_circuits {
        if c.measured().len() != 1 {
            return Err(Error::InvalidInput(
                "only single-ancilla circuits can be packed".into(),
            ));
        }
        if c.width() > profile.qubits {
            return Err(Error::CircuitTooWide {
                width: c.width(),
                qubits: profile.qubits,
            });
        }
        if used + c.width() > profile.qubits {
            groups.push(std::mem::take(&mut current));
            used = 0;
        }
        current.push(c);
        used += c.width();
    }
    if !current.is_empty() {
        groups.push(current);
    }

    let mut out = Vec::with_capacity(groups.len());
    for group in groups {
        let width: usize = group.iter().map(|c| c.width()).sum();
        let mut merged = Circuit::new(width)?;
        let mut base = 0usize;
        for part in group {
            for gate in part.gates() {
                merged.push(offset_gate(gate, base))?;
            }
            for &m in part.measured() {
                merged.measure(m + base)?;
            }
            for t in part.tags() {
                merged.tag(t.clone());
            }
            base += part.width();
        }
        out.push(merged);
    }
    Ok(out)
}
