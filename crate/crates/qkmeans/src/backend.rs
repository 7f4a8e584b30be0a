//! Emulated cloud execution service.
//!
//! A [`BackendProfile`] describes the device being emulated: qubit
//! count, shot cap, circuits-per-job cap, and a noise model. Jobs run
//! through [`submit_batch`] (one request carrying many circuits) or
//! [`submit_parallel`] (many single-circuit requests issued by worker
//! threads). Both derive every circuit's sampling seed from the job seed
//! and the circuit's index, so scheduling and the degree of parallelism
//! can never change results: the two paths are bit-identical.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{self, Circuit, NoiseModel, ShotCounts};

/// An emulated device: its limits and noise character.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackendProfile {
    pub name: String,
    pub qubits: usize,
    pub max_shots: u64,
    pub max_circuits_per_job: usize,
    pub noise: NoiseModel,
    /// Advertised queue latency per job in seconds. Recorded for
    /// reporting; only slept on when `sleep_on_submit` is set.
    pub queue_delay_s: f64,
    #[serde(default)]
    pub sleep_on_submit: bool,
}

impl BackendProfile {
    /// The same device with a different noise model.
    pub fn with_noise(&self, noise: NoiseModel) -> Self {
        BackendProfile {
            noise,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits < 3 {
            return Err(Error::Config(format!(
                "profile '{}': a swap test needs at least 3 qubits, got {}",
                self.name, self.qubits
            )));
        }
        if self.max_shots < 1 {
            return Err(Error::Config(format!(
                "profile '{}': max_shots must be at least 1",
                self.name
            )));
        }
        if self.max_circuits_per_job < 1 {
            return Err(Error::Config(format!(
                "profile '{}': max_circuits_per_job must be at least 1",
                self.name
            )));
        }
        self.noise.validate()
    }
}

/// The profiles shipped with the crate.
///
/// "ideal" is a noise-free wide device with effectively unlimited shots
/// and batch size, for exact and high-shot reference runs. "cap8192" is
/// a 27-qubit device capped at 8192 shots and 900 circuits per job, with
/// mild depolarizing and readout noise typical of superconducting
/// hardware. "seven-qubit" is a narrow device that allows many shots but
/// small jobs.
pub fn builtin_profiles() -> Vec<BackendProfile> {
    vec![
        BackendProfile {
            name: "ideal".into(),
            qubits: 32,
            max_shots: 1_000_000_000,
            max_circuits_per_job: 1_000_000,
            noise: NoiseModel::default(),
            queue_delay_s: 0.0,
            sleep_on_submit: false,
        },
        BackendProfile {
            name: "cap8192".into(),
            qubits: 27,
            max_shots: 8192,
            max_circuits_per_job: 900,
            noise: NoiseModel {
                p01: 0.02,
                p10: 0.025,
                lambda1: 0.001,
                lambda2: 0.02,
            },
            queue_delay_s: 8.0,
            sleep_on_submit: false,
        },
        BackendProfile {
            name: "seven-qubit".into(),
            qubits: 7,
            max_shots: 32_000,
            max_circuits_per_job: 300,
            noise: NoiseModel {
                p01: 0.015,
                p10: 0.02,
                lambda1: 0.0008,
                lambda2: 0.015,
            },
            queue_delay_s: 4.0,
            sleep_on_submit: false,
        },
    ]
}

/// Look up a built-in profile by name.
pub fn builtin_profile(name: &str) -> Option<BackendProfile> {
    builtin_profiles().into_iter().find(|p| p.name == name)
}

#[derive(Deserialize)]
struct ProfileFile {
    name: String,
    qubits: usize,
    max_shots: u64,
    max_circuits_per_job: usize,
    #[serde(default)]
    p01: f64,
    #[serde(default)]
    p10: f64,
    #[serde(default)]
    lambda1: f64,
    #[serde(default)]
    lambda2: f64,
    #[serde(default)]
    queue_delay_s: f64,
}

/// Load a profile from a TOML file with keys `name`, `qubits`,
/// `max_shots`, `max_circuits_per_job` and optional noise rates `p01`,
/// `p10`, `lambda1`, `lambda2`.
pub fn load_profile(path: &Path) -> Result<BackendProfile> {
    let text = std::fs::read_to_string(path)?;
    let raw: ProfileFile = toml::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let profile = BackendProfile {
        name: raw.name,
        qubits: raw.qubits,
        max_shots: raw.max_shots,
        max_circuits_per_job: raw.max_circuits_per_job,
        noise: NoiseModel {
            p01: raw.p01,
            p10: raw.p10,
            lambda1: raw.lambda1,
            lambda2: raw.lambda2,
        },
        queue_delay_s: raw.queue_delay_s,
        sleep_on_submit: false,
    };
    profile.validate()?;
    Ok(profile)
}

/// Outcome of one submitted circuit: one counts record per measured
/// qubit, plus the circuit's tags for order-independent keying.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitResult {
    pub counts: Vec<ShotCounts>,
    pub tags: Vec<String>,
}

/// Outcome of one job, in submission order.
#[derive(Clone, Debug, Serialize)]
pub struct JobResult {
    pub results: Vec<CircuitResult>,
    pub shots: u64,
    pub profile: String,
    pub wall_time_s: f64,
}

fn check_limits(
    circuits: &[Circuit],
    shots: u64,
    profile: &BackendProfile,
    enforce_batch_size: bool,
) -> Result<()> {
    if enforce_batch_size && circuits.len() > profile.max_circuits_per_job {
        return Err(Error::TooManyCircuits {
            submitted: circuits.len(),
            max: profile.max_circuits_per_job,
        });
    }
    if shots == 0 {
        return Err(Error::InvalidInput("jobs need at least one shot".into()));
    }
    if shots > profile.max_shots {
        return Err(Error::TooManyShots {
            requested: shots,
            max: profile.max_shots,
        });
    }
    for c in circuits {
        if c.width() > profile.qubits {
            return Err(Error::CircuitTooWide {
                width: c.width(),
                qubits: profile.qubits,
            });
        }
    }
    Ok(())
}

fn run_one(
    circuit: &Circuit,
    shots: u64,
    profile: &BackendProfile,
    circuit_seed: u64,
) -> Result<CircuitResult> {
    Ok(CircuitResult {
        counts: qsim::sample(circuit, shots, &profile.noise, circuit_seed)?,
        tags: circuit.tags().to_vec(),
    })
}

fn maybe_sleep(profile: &BackendProfile) {
    if profile.sleep_on_submit && profile.queue_delay_s > 0.0 {
        std::thread::sleep(std::time::Duration::from_secs_f64(profile.queue_delay_s));
    }
}

/// Execute a whole job in one request.
///
/// Circuit `i` samples with seed derived from (`seed`, `i`), and results
/// come back in submission order.
pub fn submit_batch(
    circuits: &[Circuit],
    shots: u64,
    profile: &BackendProfile,
    seed: u64,
) -> Result<JobResult> {
    check_limits(circuits, shots, profile, true)?;
    let start = Instant::now();
    maybe_sleep(profile);
    let results = circuits
        .iter()
        .enumerate()
        .map(|(i, c)| run_one(c, shots, profile, qsim::mix(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(JobResult {
        results,
        shots,
        profile: profile.name.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Execute circuits as independent single-circuit requests spread over
/// `workers` threads, then restore submission order.
///
/// Per-circuit seeds are derived exactly as in [`submit_batch`], so for
/// any worker count the results equal the batched ones bit for bit. The
/// per-job batch-size cap does not apply here; shot and width limits do.
pub fn submit_parallel(
    circuits: &[Circuit],
    shots: u64,
    profile: &BackendProfile,
    workers: usize,
    seed: u64,
) -> Result<JobResult> {
    if workers == 0 {
        return Err(Error::InvalidInput("need at least one worker".into()));
    }
    check_limits(circuits, shots, profile, false)?;
    let start = Instant::now();
    let next = AtomicUsize::new(0);
    let worker_outputs: Vec<Vec<(usize, Result<CircuitResult>)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers.min(circuits.len()).max(1))
            .map(|_| {
                scope.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= circuits.len() {
                            break;
                        }
                        maybe_sleep(profile);
                        local.push((
                            i,
                            run_one(&circuits[i], shots, profile, qsim::mix(seed, i as u64)),
                        ));
                    }
                    local
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    });
    let mut slots: Vec<Option<CircuitResult>> = (0..circuits.len()).map(|_| None).collect();
    for (i, outcome) in worker_outputs.into_iter().flatten() {
        slots[i] = Some(outcome?);
    }
    Ok(JobResult {
        results: slots
            .into_iter()
            .map(|s| s.expect("every circuit index visited"))
            .collect(),
        shots,
        profile: profile.name.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Run an arbitrarily long circuit list by splitting it into maximal
/// jobs of `max_circuits_per_job`, batched when `workers` is None and
/// through the multi-worker path otherwise.
///
/// Chunking and seed derivation are identical for the two paths, so they
/// stay bit-for-bit interchangeable even when splitting kicks in.
pub fn run_job(
    circuits: &[Circuit],
    shots: u64,
    profile: &BackendProfile,
    workers: Option<usize>,
    seed: u64,
) -> Result<Vec<CircuitResult>> {
    let cap = profile.max_circuits_per_job.max(1);
    let mut out = Vec::with_capacity(circuits.len());
    for (chunk_index, chunk) in circuits.chunks(cap).enumerate() {
        let job_seed = qsim::mix(seed, chunk_index as u64);
        let job = match workers {
            None => submit_batch(chunk, shots, profile, job_seed)?,
            Some(w) => submit_parallel(chunk, shots, profile, w, job_seed)?,
        };
        out.extend(job.results);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Gate;

    fn bell_probe(tag: &str) -> Circuit {
        let mut c = Circuit::new(3).unwrap();
        c.push(Gate::H { qubit: 0 }).unwrap();
        c.push(Gate::H { qubit: 2 }).unwrap();
        c.push(Gate::Cswap {
            control: 2,
            target_a: 0,
            target_b: 1,
        })
        .unwrap();
        c.push(Gate::H { qubit: 2 }).unwrap();
        c.measure(2).unwrap();
        c.tag(tag);
        c
    }

    #[test]
    fn builtin_profiles_have_the_documented_limits() {
        let ideal = builtin_profile("ideal").unwrap();
        assert!(ideal.noise.is_zero());
        assert_eq!(ideal.qubits, 32);
        assert_eq!(builtin_profile("cap8192").unwrap().max_shots, 8192);
        assert_eq!(builtin_profile("seven-qubit").unwrap().qubits, 7);
        assert!(builtin_profile("nonexistent").is_none());
        for p in builtin_profiles() {
            p.validate().unwrap();
        }
    }

    #[test]
    fn results_preserve_submission_order_and_tags() {
        let profile = builtin_profile("ideal").unwrap();
        let circuits: Vec<Circuit> = (0..5).map(|i| bell_probe(&format!("c{i}"))).collect();
        let job = submit_batch(&circuits, 256, &profile, 3).unwrap();
        assert_eq!(job.results.len(), 5);
        for (i, r) in job.results.iter().enumerate() {
            assert_eq!(r.tags, vec![format!("c{i}")]);
            assert_eq!(r.counts[0].shots(), 256);
        }
    }

    #[test]
    fn same_seed_reproduces_results_exactly() {
        let profile = builtin_profile("cap8192").unwrap();
        let circuits = vec![bell_probe("a"), bell_probe("b")];
        let one = submit_batch(&circuits, 1024, &profile, 11).unwrap();
        let two = submit_batch(&circuits, 1024, &profile, 11).unwrap();
        assert_eq!(one.results, two.results);
        let three = submit_batch(&circuits, 1024, &profile, 12).unwrap();
        assert_ne!(one.results, three.results);
    }

    #[test]
    fn parallel_path_matches_batch_path() {
        let profile = builtin_profile("cap8192").unwrap();
        let circuits: Vec<Circuit> = (0..7).map(|i| bell_probe(&format!("c{i}"))).collect();
        let batch = submit_batch(&circuits, 512, &profile, 21).unwrap();
        for workers in [1, 2, 8] {
            let par = submit_parallel(&circuits, 512, &profile, workers, 21).unwrap();
            assert_eq!(batch.results, par.results);
        }
    }

    #[test]
    fn job_splitting_is_invisible_to_the_two_paths() {
        let mut profile = builtin_profile("ideal").unwrap();
        profile.max_circuits_per_job = 4;
        let circuits: Vec<Circuit> = (0..10).map(|i| bell_probe(&format!("c{i}"))).collect();
        let batched = run_job(&circuits, 128, &profile, None, 5).unwrap();
        let parallel = run_job(&circuits, 128, &profile, Some(3), 5).unwrap();
        assert_eq!(batched.len(), 10);
        assert_eq!(batched, parallel);
    }

    #[test]
    fn zero_shots_are_rejected() {
        let profile = builtin_profile("ideal").unwrap();
        let r = submit_batch(&[bell_probe("x")], 0, &profile, 0);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn profile_files_round_trip() {
        let dir = std::env::temp_dir().join("qkmeans-profile-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("device.toml");
        std::fs::write(
            &path,
            "name = \"lab\"\nqubits = 9\nmax_shots = 4000\nmax_circuits_per_job = 50\n\
             p01 = 0.01\np10 = 0.02\nlambda1 = 0.001\nlambda2 = 0.005\n",
        )
        .unwrap();
        let p = load_profile(&path).unwrap();
        assert_eq!(p.name, "lab");
        assert_eq!(p.qubits, 9);
        assert_eq!(p.max_shots, 4000);
        assert_eq!(p.noise.p10, 0.02);

        std::fs::write(&path, "name = \"broken\"").unwrap();
        assert!(matches!(load_profile(&path), Err(Error::Config(_))));

        std::fs::write(
            &path,
            "name = \"tiny\"\nqubits = 2\nmax_shots = 10\nmax_circuits_per_job = 1\n",
        )
        .unwrap();
        assert!(matches!(load_profile(&path), Err(Error::Config(_))));
        std::fs::remove_dir_all(&dir).ok();
    }
}
