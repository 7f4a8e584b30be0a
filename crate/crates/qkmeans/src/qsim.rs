//! Statevector circuit simulator.
//!
//! Qubit 0 is the least significant bit of a basis-state index, so the
//! amplitude of |q_{w-1} ... q_1 q_0> lives at index sum(q_i << i). The
//! gate set is intentionally small: everything the swap-test circuits
//! need, plus direct register initialization for amplitude-encoded
//! states.
//!
//! Circuits are simulated one connected component at a time. Gates link
//! the qubits they touch; a measured qubit's outcome distribution only
//! depends on its own component, so a wide circuit made of disjoint
//! narrow pieces costs as much as simulating the pieces separately.
//! This keeps packed circuits (several independent swap tests side by
//! side on one device) cheap and makes their marginals identical to the
//! unpacked ones.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest connected component the simulator will materialize: 2^27
/// complex amplitudes is 2 GiB, which is as much as a single statevector
/// should take on a development machine.
pub const MAX_SIM_QUBITS: usize = 27;

/// One circuit operation.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Hadamard.
    H { qubit: usize },
    /// Pauli X.
    X { qubit: usize },
    /// Single-qubit rotation with matrix
    /// [[cos(t/2), -sin(t/2)], [e^(i g) sin(t/2), e^(i g) cos(t/2)]]
    /// for theta = t, gamma = g.
    U { qubit: usize, theta: f64, gamma: f64 },
    /// Controlled swap (Fredkin): exchanges `target_a` and `target_b`
    /// when `control` is set.
    Cswap {
        control: usize,
        target_a: usize,
        target_b: usize,
    },
    /// Set a register of fresh qubits to an arbitrary normalized state.
    /// Bit j of an amplitude index addresses `qubits[j]`.
    AmplitudeInit {
        qubits: Vec<usize>,
        amplitudes: Vec<Complex64>,
    },
}

impl Gate {
    /// Qubits the gate acts on.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H { qubit } | Gate::X { qubit } | Gate::U { qubit, .. } => vec![*qubit],
            Gate::Cswap {
                control,
                target_a,
                target_b,
            } => vec![*control, *target_a, *target_b],
            Gate::AmplitudeInit { qubits, .. } => qubits.clone(),
        }
    }

    fn is_nonlocal(&self) -> bool {
        match self {
            Gate::Cswap { .. } => true,
            Gate::AmplitudeInit { qubits, .. } => qubits.len() > 1,
            _ => false,
        }
    }
}

/// A fixed-width gate list with explicit measured qubits.
///
/// The swap-test builders measure exactly one ancilla; packing several
/// tests into one wide circuit concatenates their measured lists.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    measured: Vec<usize>,
    tags: Vec<String>,
}

impl Circuit {
    /// An empty circuit on `width` qubits.
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidCircuit("width must be at least 1".into()));
        }
        Ok(Circuit {
            width,
            gates: Vec::new(),
            measured: Vec::new(),
            tags: Vec::new(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Qubits whose outcome statistics the circuit reports, in the order
    /// they were marked.
    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    /// Attach a free-form label; packing and batching carry tags along so
    /// results can be keyed without relying on positions.
    pub fn tag(&mut self, tag: impl Into<String>) {
        self.tags.push(tag.into());
    }

    /// Append a gate after validating it against the current circuit.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        for &q in &qs {
            if q >= self.width {
                return Err(Error::InvalidCircuit(format!(
                    "qubit {q} out of range for width {}",
                    self.width
                )));
            }
        }
        match &gate {
            Gate::Cswap {
                control,
                target_a,
                target_b,
            } => {
                if control == target_a || control == target_b || target_a == target_b {
                    return Err(Error::InvalidCircuit(
                        "controlled swap needs three distinct qubits".into(),
                    ));
                }
            }
            Gate::AmplitudeInit { qubits, amplitudes } => {
                if qubits.is_empty() {
                    return Err(Error::InvalidCircuit(
                        "amplitude initialization needs at least one qubit".into(),
                    ));
                }
                let mut sorted = qubits.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != qubits.len() {
                    return Err(Error::InvalidCircuit(
                        "amplitude initialization qubits must be distinct".into(),
                    ));
                }
                if amplitudes.len() != 1 << qubits.len() {
                    return Err(Error::InvalidCircuit(format!(
                        "amplitude register of {} qubits needs {} amplitudes, got {}",
                        qubits.len(),
                        1usize << qubits.len(),
                        amplitudes.len()
                    )));
                }
                let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
                if (norm - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidCircuit(format!(
                        "amplitude register norm {norm} is not 1"
                    )));
                }
                // Initialization only makes sense on qubits still in |0>;
                // anything already touched would be silently overwritten.
                for earlier in &self.gates {
                    for q in earlier.qubits() {
                        if qubits.contains(&q) {
                            return Err(Error::InvalidCircuit(format!(
                                "qubit {q} already used before amplitude initialization"
                            )));
                        }
                    }
                }
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Mark a qubit as measured.
    pub fn measure(&mut self, qubit: usize) -> Result<()> {
        if qubit >= self.width {
            return Err(Error::InvalidCircuit(format!(
                "measured qubit {qubit} out of range for width {}",
                self.width
            )));
        }
        if self.measured.contains(&qubit) {
            return Err(Error::InvalidCircuit(format!(
                "qubit {qubit} already measured"
            )));
        }
        self.measured.push(qubit);
        Ok(())
    }

    /// Union-find component id per qubit, where gates merge the qubits
    /// they touch.
    fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.width).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for gate in &self.gates {
            let qs = gate.qubits();
            for w in qs.windows(2) {
                let a = find(&mut parent, w[0]);
                let b = find(&mut parent, w[1]);
                if a != b {
                    parent[a] = b;
                }
            }
        }
        (0..self.width).map(|q| find(&mut parent, q)).collect()
    }

    /// The sub-circuit spanning one component, with its qubits renumbered
    /// in increasing order. Returns the qubit mapping as a sorted list.
    fn component_circuit(&self, root: usize, components: &[usize]) -> (Vec<usize>, Circuit) {
        let qubits: Vec<usize> = (0..self.width).filter(|&q| components[q] == root).collect();
        let index_of = |q: usize| qubits.binary_search(&q).expect("qubit in component");
        let mut sub = Circuit {
            width: qubits.len(),
            gates: Vec::new(),
            measured: Vec::new(),
            tags: Vec::new(),
        };
        for gate in &self.gates {
            let gate_qubits = gate.qubits();
            if components[gate_qubits[0]] != root {
                continue;
            }
            let remapped = match gate {
                Gate::H { qubit } => Gate::H {
                    qubit: index_of(*qubit),
                },
                Gate::X { qubit } => Gate::X {
                    qubit: index_of(*qubit),
                },
                Gate::U { qubit, theta, gamma } => Gate::U {
                    qubit: index_of(*qubit),
                    theta: *theta,
                    gamma: *gamma,
                },
                Gate::Cswap {
                    control,
                    target_a,
                    target_b,
                } => Gate::Cswap {
                    control: index_of(*control),
                    target_a: index_of(*target_a),
                    target_b: index_of(*target_b),
                },
                Gate::AmplitudeInit { qubits, amplitudes } => Gate::AmplitudeInit {
                    qubits: qubits.iter().map(|&q| index_of(q)).collect(),
                    amplitudes: amplitudes.clone(),
                },
            };
            sub.gates.push(remapped);
        }
        (qubits, sub)
    }
}

fn apply_h(state: &mut [Complex64], q: usize) {
    let step = 1usize << q;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for base in (0..state.len()).step_by(step << 1) {
        for i in base..base + step {
            let j = i + step;
            let a = state[i];
            let b = state[j];
            state[i] = (a + b) * r;
            state[j] = (a - b) * r;
        }
    }
}

fn apply_x(state: &mut [Complex64], q: usize) {
    let step = 1usize << q;
    for base in (0..state.len()).step_by(step << 1) {
        for i in base..base + step {
            state.swap(i, i + step);
        }
    }
}

fn apply_u(state: &mut [Complex64], q: usize, theta: f64, gamma: f64) {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let phase = Complex64::from_polar(1.0, gamma);
    let step = 1usize << q;
    for base in (0..state.len()).step_by(step << 1) {
        for i in base..base + step {
            let j = i + step;
            let a = state[i];
            let b = state[j];
            state[i] = a * c - b * s;
            state[j] = (a * s + b * c) * phase;
        }
    }
}

fn apply_cswap(state: &mut [Complex64], control: usize, t1: usize, t2: usize) {
    let cbit = 1usize << control;
    let swap_mask = (1usize << t1) | (1usize << t2);
    for i in 0..state.len() {
        if i & cbit == 0 {
            continue;
        }
        let b1 = (i >> t1) & 1;
        let b2 = (i >> t2) & 1;
        if b1 != b2 {
            let j = i ^ swap_mask;
            if i < j {
                state.swap(i, j);
            }
        }
    }
}

fn apply_amplitude_init(state: &mut [Complex64], qubits: &[usize], amplitudes: &[Complex64]) {
    let mut mask = 0usize;
    for &q in qubits {
        mask |= 1 << q;
    }
    let zero = Complex64::new(0.0, 0.0);
    for i in 0..state.len() {
        if i & mask != 0 {
            continue;
        }
        let base = state[i];
        if base == zero {
            continue;
        }
        for (p, &amp) in amplitudes.iter().enumerate() {
            let mut idx = i;
            for (j, &q) in qubits.iter().enumerate() {
                if (p >> j) & 1 == 1 {
                    idx |= 1 << q;
                }
            }
            state[idx] = base * amp;
        }
    }
}

/// Full statevector of the circuit applied to |0...0>.
///
/// Materializes all 2^width amplitudes; wide circuits should go through
/// [`exact_prob1`] or [`sample`], which only ever materialize one
/// connected component at a time.
pub fn simulate(circuit: &Circuit) -> Result<Vec<Complex64>> {
    if circuit.width > MAX_SIM_QUBITS {
        return Err(Error::InvalidCircuit(format!(
            "{} qubits exceed the {MAX_SIM_QUBITS}-qubit statevector limit",
            circuit.width
        )));
    }
    let mut state = vec![Complex64::new(0.0, 0.0); 1 << circuit.width];
    state[0] = Complex64::new(1.0, 0.0);
    for gate in &circuit.gates {
        match gate {
            Gate::H { qubit } => apply_h(&mut state, *qubit),
            Gate::X { qubit } => apply_x(&mut state, *qubit),
            Gate::U { qubit, theta, gamma } => apply_u(&mut state, *qubit, *theta, *gamma),
            Gate::Cswap {
                control,
                target_a,
                target_b,
            } => apply_cswap(&mut state, *control, *target_a, *target_b),
            Gate::AmplitudeInit { qubits, amplitudes } => {
                apply_amplitude_init(&mut state, qubits, amplitudes)
            }
        }
    }
    Ok(state)
}

fn marginal_prob1(state: &[Complex64], qubit: usize) -> f64 {
    let bit = 1usize << qubit;
    state
        .iter()
        .enumerate()
        .filter(|(i, _)| i & bit != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Exact probability of measuring |1> on one qubit, ignoring noise.
///
/// Only the qubit's connected component is simulated, so this stays cheap
/// on wide circuits whose pieces are independent.
pub fn exact_prob1(circuit: &Circuit, qubit: usize) -> Result<f64> {
    if qubit >= circuit.width {
        return Err(Error::InvalidCircuit(format!(
            "qubit {qubit} out of range for width {}",
            circuit.width
        )));
    }
    let components = circuit.components();
    let (qubits, sub) = circuit.component_circuit(components[qubit], &components);
    if sub.gates.is_empty() {
        return Ok(0.0);
    }
    if sub.width > MAX_SIM_QUBITS {
        return Err(Error::InvalidCircuit(format!(
            "connected component of {} qubits exceeds the {MAX_SIM_QUBITS}-qubit \
             statevector limit",
            sub.width
        )));
    }
    let state = simulate(&sub)?;
    let local = qubits.binary_search(&qubit).expect("qubit in component");
    Ok(marginal_prob1(&state, local))
}

/// Exact |1> probabilities for every measured qubit, in measurement
/// order. Components shared by several measured qubits are simulated
/// once.
pub fn exact_probs(circuit: &Circuit) -> Result<Vec<f64>> {
    let components = circuit.components();
    let mut cache: Vec<(usize, Vec<usize>, Vec<Complex64>)> = Vec::new();
    let mut out = Vec::with_capacity(circuit.measured.len());
    for &m in &circuit.measured {
        let root = components[m];
        let cached = cache.iter().find(|(r, _, _)| *r == root);
        let (qubits, state) = match cached {
            Some((_, q, s)) => (q.clone(), s.clone()),
            None => {
                let (qubits, sub) = circuit.component_circuit(root, &components);
                if sub.width > MAX_SIM_QUBITS {
                    return Err(Error::InvalidCircuit(format!(
                        "connected component of {} qubits exceeds the \
                         {MAX_SIM_QUBITS}-qubit statevector limit",
                        sub.width
                    )));
                }
                let state = if sub.gates.is_empty() {
                    let mut s = vec![Complex64::new(0.0, 0.0); 1 << sub.width];
                    s[0] = Complex64::new(1.0, 0.0);
                    s
                } else {
                    simulate(&sub)?
                };
                cache.push((root, qubits.clone(), state.clone()));
                (qubits, state)
            }
        };
        let local = qubits.binary_search(&m).expect("qubit in component");
        out.push(marginal_prob1(&state, local));
    }
    Ok(out)
}

/// Device noise applied to outcome probabilities.
///
/// `lambda1` and `lambda2` are per-gate depolarizing rates for
/// single-qubit gates and controlled swaps; `p01` is the probability of
/// reading 1 for a true 0 and `p10` of reading 0 for a true 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p01: f64,
    pub p10: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl NoiseModel {
    /// True when every rate is zero.
    pub fn is_zero(&self) -> bool {
        self.p01 == 0.0 && self.p10 == 0.0 && self.lambda1 == 0.0 && self.lambda2 == 0.0
    }

    /// Check all rates are valid probabilities and the readout confusion
    /// matrix is invertible.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p01", self.p01),
            ("p10", self.p10),
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidInput(format!(
                    "noise rate {name} = {v} outside [0, 1]"
                )));
            }
        }
        if self.p01 + self.p10 >= 1.0 {
            return Err(Error::SingularCalibration {
                p01: self.p01,
                p10: self.p10,
            });
        }
        Ok(())
    }
}

/// Survival-complement of the per-gate depolarizing rates over a gate
/// count: 1 - (1-lambda1)^n1 (1-lambda2)^n2.
pub fn depolarizing_lambda(n_single: usize, n_cswap: usize, noise: &NoiseModel) -> f64 {
    1.0 - (1.0 - noise.lambda1).powi(n_single as i32) * (1.0 - noise.lambda2).powi(n_cswap as i32)
}

/// Depolarizing channel on a |1> probability.
pub fn apply_depolarizing(p1: f64, lambda: f64) -> f64 {
    (1.0 - lambda) * p1 + lambda / 2.0
}

/// Readout confusion applied to a |1> probability.
pub fn apply_readout(p1: f64, p01: f64, p10: f64) -> f64 {
    p1 * (1.0 - p10) + (1.0 - p1) * p01
}

/// Invert the readout confusion matrix on an observed |1> frequency and
/// clamp the result into [0, 1].
pub fn mitigate_readout(observed_p1: f64, p01: f64, p10: f64) -> Result<f64> {
    let denom = 1.0 - p01 - p10;
    if denom <= 0.0 {
        return Err(Error::SingularCalibration { p01, p10 });
    }
    Ok(((observed_p1 - p01) / denom).clamp(0.0, 1.0))
}

/// The noisy |1> probability of one measured qubit: exact component
/// marginal, then depolarizing over the component's gate counts, then
/// readout confusion. Register initialization is treated as noiseless
/// state preparation, not as gates.
pub fn noisy_prob1(circuit: &Circuit, qubit: usize, noise: &NoiseModel) -> Result<f64> {
    let p = exact_prob1(circuit, qubit)?;
    if noise.is_zero() {
        return Ok(p);
    }
    let components = circuit.components();
    let root = components[qubit];
    let mut n_single = 0usize;
    let mut n_cswap = 0usize;
    for gate in &circuit.gates {
        if components[gate.qubits()[0]] != root {
            continue;
        }
        match gate {
            Gate::H { .. } | Gate::X { .. } | Gate::U { .. } => n_single += 1,
            Gate::Cswap { .. } => n_cswap += 1,
            Gate::AmplitudeInit { .. } => {}
        }
    }
    let lambda = depolarizing_lambda(n_single, n_cswap, noise);
    Ok(apply_readout(
        apply_depolarizing(p, lambda),
        noise.p01,
        noise.p10,
    ))
}

/// Aggregated outcomes of repeated measurement of one qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    pub zeros: u64,
    pub ones: u64,
}

impl ShotCounts {
    pub fn shots(&self) -> u64 {
        self.zeros + self.ones
    }

    /// Observed |1> frequency.
    pub fn p1(&self) -> f64 {
        if self.shots() == 0 {
            0.0
        } else {
            self.ones as f64 / self.shots() as f64
        }
    }

    /// Observed |0> frequency.
    pub fn p0(&self) -> f64 {
        1.0 - self.p1()
    }
}

/// SplitMix64 step, used everywhere a child seed is derived from a
/// parent seed and an index so that execution order and parallelism can
/// never change sampled results.
pub(crate) fn mix(seed: u64, index: u64) -> u64 {
    let mut x = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index)
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Draw shot counts for every measured qubit.
///
/// Each measured qubit's noisy probability feeds one seeded binomial
/// draw; qubits use independent streams derived from `seed` and their
/// position in the measured list. Measured qubits living in disjoint
/// components are exactly independent, which is the only way the circuit
/// builders in this crate ever measure more than one qubit.
pub fn sample(circuit: &Circuit, shots: u64, noise: &NoiseModel, seed: u64) -> Result<Vec<ShotCounts>> {
    if circuit.measured.is_empty() {
        return Err(Error::InvalidCircuit(
            "cannot sample a circuit with no measured qubits".into(),
        ));
    }
    let mut out = Vec::with_capacity(circuit.measured.len());
    for (slot, &qubit) in circuit.measured.iter().enumerate() {
        let q = noisy_prob1(circuit, qubit, noise)?.clamp(0.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, slot as u64));
        let ones = Binomial::new(shots, q)
            .map_err(|e| Error::InvalidInput(format!("binomial sampling: {e}")))?
            .sample(&mut rng);
        out.push(ShotCounts {
            zeros: shots - ones,
            ones,
        });
    }
    Ok(out)
}

/// Static cost summary of a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Resources {
    pub width: usize,
    /// Greedy-layered circuit depth: each gate lands on the earliest
    /// layer after the last gate touching any of its qubits.
    pub depth: usize,
    /// Number of multi-qubit operations (controlled swaps and register
    /// initializations spanning more than one qubit).
    pub nonlocal: usize,
}

/// Width, depth, and nonlocal gate count of a circuit.
pub fn resources(circuit: &Circuit) -> Resources {
    let mut level = vec![0usize; circuit.width];
    let mut depth = 0usize;
    let mut nonlocal = 0usize;
    for gate in &circuit.gates {
        let qs = gate.qubits();
        let layer = 1 + qs.iter().map(|&q| level[q]).max().unwrap_or(0);
        for &q in &qs {
            level[q] = layer;
        }
        depth = depth.max(layer);
        if gate.is_nonlocal() {
            nonlocal += 1;
        }
    }
    Resources {
        width: circuit.width,
        depth,
        nonlocal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hadamard_on_zero_gives_equal_superposition() {
        let mut c = Circuit::new(1).unwrap();
        c.push(Gate::H { qubit: 0 }).unwrap();
        let state = simulate(&c).unwrap();
        assert!((state[0].re - 0.70711).abs() < 1e-5);
        assert!((state[1].re - 0.70711).abs() < 1e-5);
        assert!(state[0].im.abs() < 1e-12 && state[1].im.abs() < 1e-12);
    }

    #[test]
    fn u_gate_matches_its_matrix_columns() {
        let mut c = Circuit::new(1).unwrap();
        c.push(Gate::U {
            qubit: 0,
            theta: std::f64::consts::PI,
            gamma: std::f64::consts::FRAC_PI_2,
        })
        .unwrap();
        let state = simulate(&c).unwrap();
        assert!((state[0] - c64(0.0, 0.0)).norm() < 1e-12);
        assert!((state[1] - c64(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn fredkin_swaps_targets_when_control_is_set() {
        let mut c = Circuit::new(3).unwrap();
        c.push(Gate::X { qubit: 0 }).unwrap();
        c.push(Gate::X { qubit: 2 }).unwrap();
        c.push(Gate::Cswap {
            control: 0,
            target_a: 1,
            target_b: 2,
        })
        .unwrap();
        let state = simulate(&c).unwrap();
        // |q2 q1 q0> = |0 1 1> lives at index 0b011.
        assert!((state[0b011].re - 1.0).abs() < 1e-12);
        assert_eq!(
            state.iter().filter(|a| a.norm() > 1e-12).count(),
            1,
            "state must stay a basis vector"
        );
    }

    fn swap_test(prepare: &[Gate]) -> f64 {
        let mut c = Circuit::new(3).unwrap();
        for g in prepare {
            c.push(g.clone()).unwrap();
        }
        c.push(Gate::H { qubit: 2 }).unwrap();
        c.push(Gate::Cswap {
            control: 2,
            target_a: 0,
            target_b: 1,
        })
        .unwrap();
        c.push(Gate::H { qubit: 2 }).unwrap();
        c.measure(2).unwrap();
        exact_prob1(&c, 2).unwrap()
    }

    #[test]
    fn swap_test_prob1_tracks_state_overlap() {
        // Identical states: Pr(1) = 0.
        assert!(swap_test(&[]).abs() < 1e-12);
        // Orthogonal states: Pr(1) = 1/2.
        assert!((swap_test(&[Gate::X { qubit: 0 }]) - 0.5).abs() < 1e-12);
        // |+> against |0>: overlap 1/2, Pr(1) = 1/4.
        assert!((swap_test(&[Gate::H { qubit: 0 }]) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn amplitude_init_loads_the_register() {
        let amps = vec![c64(0.5, 0.0), c64(0.5, 0.0), c64(0.5, 0.0), c64(-0.5, 0.0)];
        let mut c = Circuit::new(3).unwrap();
        c.push(Gate::AmplitudeInit {
            qubits: vec![0, 2],
            amplitudes: amps.clone(),
        })
        .unwrap();
        let state = simulate(&c).unwrap();
        // Bit 0 of the amplitude index is qubit 0, bit 1 is qubit 2.
        assert!((state[0b000] - amps[0]).norm() < 1e-12);
        assert!((state[0b001] - amps[1]).norm() < 1e-12);
        assert!((state[0b100] - amps[2]).norm() < 1e-12);
        assert!((state[0b101] - amps[3]).norm() < 1e-12);
    }

    #[test]
    fn amplitude_init_rejects_touched_qubits() {
        let mut c = Circuit::new(2).unwrap();
        c.push(Gate::H { qubit: 0 }).unwrap();
        let r = c.push(Gate::AmplitudeInit {
            qubits: vec![0],
            amplitudes: vec![c64(1.0, 0.0), c64(0.0, 0.0)],
        });
        assert!(matches!(r, Err(Error::InvalidCircuit(_))));
    }

    #[test]
    fn amplitude_init_rejects_unnormalized_states() {
        let mut c = Circuit::new(1).unwrap();
        let r = c.push(Gate::AmplitudeInit {
            qubits: vec![0],
            amplitudes: vec![c64(1.0, 0.0), c64(1.0, 0.0)],
        });
        assert!(matches!(r, Err(Error::InvalidCircuit(_))));
    }

    #[test]
    fn disjoint_components_have_independent_marginals() {
        // Two side-by-side swap tests; each ancilla's marginal matches the
        // standalone 3-qubit circuit exactly.
        let mut c = Circuit::new(6).unwrap();
        c.push(Gate::H { qubit: 0 }).unwrap();
        c.push(Gate::H { qubit: 2 }).unwrap();
        c.push(Gate::Cswap {
            control: 2,
            target_a: 0,
            target_b: 1,
        })
        .unwrap();
        c.push(Gate::H { qubit: 2 }).unwrap();
        c.push(Gate::X { qubit: 3 }).unwrap();
        c.push(Gate::H { qubit: 5 }).unwrap();
        c.push(Gate::Cswap {
            control: 5,
            target_a: 3,
            target_b: 4,
        })
        .unwrap();
        c.push(Gate::H { qubit: 5 }).unwrap();
        c.measure(2).unwrap();
        c.measure(5).unwrap();
        let probs = exact_probs(&c).unwrap();
        let first = swap_test(&[Gate::H { qubit: 0 }]);
        let second = swap_test(&[Gate::X { qubit: 0 }]);
        assert_eq!(probs[0].to_bits(), first.to_bits());
        assert_eq!(probs[1].to_bits(), second.to_bits());
    }

    #[test]
    fn untouched_qubit_measures_zero() {
        let mut c = Circuit::new(4).unwrap();
        c.push(Gate::H { qubit: 0 }).unwrap();
        assert_eq!(exact_prob1(&c, 3).unwrap(), 0.0);
    }

    #[test]
    fn readout_channel_and_mitigation_are_inverses() {
        let q = apply_readout(0.2, 0.1, 0.1);
        assert!((q - 0.26).abs() < 1e-12);
        assert!((mitigate_readout(0.26, 0.1, 0.1).unwrap() - 0.2).abs() < 1e-12);
        // Observed frequency below the floor clamps to 0.
        assert_eq!(mitigate_readout(0.05, 0.1, 0.0).unwrap(), 0.0);
        assert!(matches!(
            mitigate_readout(0.3, 0.6, 0.5),
            Err(Error::SingularCalibration { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_respects_extremes() {
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
        let quiet = NoiseModel::default();
        let a = sample(&c, 4096, &quiet, 9).unwrap();
        let b = sample(&c, 4096, &quiet, 9).unwrap();
        assert_eq!(a, b);
        let other = sample(&c, 4096, &quiet, 10).unwrap();
        assert_eq!(a[0].shots(), 4096);
        assert_eq!(other[0].shots(), 4096);

        // A fresh ancilla never reads 1 without noise.
        let mut idle = Circuit::new(1).unwrap();
        idle.measure(0).unwrap();
        let counts = sample(&idle, 1000, &quiet, 0).unwrap();
        assert_eq!(counts[0].ones, 0);
    }

    #[test]
    fn resources_report_width_depth_and_nonlocal_gates() {
        let mut c = Circuit::new(1).unwrap();
        c.push(Gate::H { qubit: 0 }).unwrap();
        assert_eq!(
            resources(&c),
            Resources {
                width: 1,
                depth: 1,
                nonlocal: 0
            }
        );

        let mut c = Circuit::new(3).unwrap();
        c.push(Gate::U {
            qubit: 0,
            theta: 1.0,
            gamma: 0.0,
        })
        .unwrap();
        c.push(Gate::U {
            qubit: 1,
            theta: 1.0,
            gamma: 0.0,
        })
        .unwrap();
        c.push(Gate::H { qubit: 2 }).unwrap();
        c.push(Gate::Cswap {
            control: 2,
            target_a: 0,
            target_b: 1,
        })
        .unwrap();
        c.push(Gate::H { qubit: 2 }).unwrap();
        let r = resources(&c);
        assert_eq!((r.width, r.depth, r.nonlocal), (3, 3, 1));
    }

    #[test]
    fn depolarizing_pulls_probabilities_toward_half() {
        let lambda = depolarizing_lambda(4, 1, &NoiseModel {
            p01: 0.0,
            p10: 0.0,
            lambda1: 0.01,
            lambda2: 0.05,
        });
        let expect = 1.0 - 0.99f64.powi(4) * 0.95;
        assert!((lambda - expect).abs() < 1e-12);
        assert!(apply_depolarizing(0.9, lambda) < 0.9);
        assert!(apply_depolarizing(0.1, lambda) > 0.1);
        assert_eq!(apply_depolarizing(0.5, lambda), 0.5);
    }
}
