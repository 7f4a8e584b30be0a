//! Classical-to-quantum data embeddings.
//!
//! Two encodings are supported. Amplitude embedding stores a pair of
//! vectors in one register as
//! psi = (|0>|a_hat> + |1>|b_hat>) / sqrt(2), next to a single reference
//! qubit phi = (|a|, -|b|) / sqrt(Z) with Z = |a|^2 + |b|^2; a swap test
//! between the pair-selection qubit of psi and phi then recovers the
//! Euclidean distance. Angle embedding packs two components per qubit as
//! rotation angles after an affine map onto [0, pi].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which encoding a circuit or estimator uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Embedding {
    Amplitude,
    Angle,
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Embedding::Amplitude => write!(f, "amplitude"),
            Embedding::Angle => write!(f, "angle"),
        }
    }
}

impl FromStr for Embedding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(Embedding::Amplitude),
            "angle" => Ok(Embedding::Angle),
            other => Err(Error::InvalidInput(format!(
                "unknown embedding '{other}' (expected 'amplitude' or 'angle')"
            ))),
        }
    }
}

/// Two equal-length real vectors whose distance is being estimated.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorPair {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl VectorPair {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        if a.is_empty() {
            return Err(Error::InvalidInput("vectors must be non-empty".into()));
        }
        if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(
                "vector components must be finite".into(),
            ));
        }
        Ok(VectorPair { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }
}

/// Joint normalization of a pair: both vectors divided by sqrt(Z) with
/// Z = |a|^2 + |b|^2, so every component lands in [-1, 1].
pub fn normalize_pair(pair: &VectorPair) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let z: f64 = pair
        .a
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        + pair.b.iter().map(|x| x * x).sum::<f64>();
    if z == 0.0 {
        return Err(Error::InvalidInput(
            "cannot normalize a pair of zero vectors (Z = 0)".into(),
        ));
    }
    let root = z.sqrt();
    let a = pair.a.iter().map(|x| x / root).collect();
    let b = pair.b.iter().map(|x| x / root).collect();
    Ok((a, b, z))
}

/// Affine map sending a normalized component in [-1, 1] to an angle in
/// [0, pi].
pub fn angle_map(component: f64) -> f64 {
    std::f64::consts::FRAC_PI_2 * (component + 1.0)
}

/// The two states needed for an amplitude-embedded swap test.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudePair {
    /// Flat pair state over `data_qubits + 1` qubits; bit `data_qubits`
    /// of an amplitude index selects the vector, the lower bits address
    /// its components.
    pub psi: Vec<f64>,
    /// Reference qubit state (|a|, -|b|) / sqrt(Z).
    pub phi: [f64; 2],
    pub z: f64,
    pub data_qubits: usize,
}

/// Build psi and phi for a pair, zero-padding the vectors to the next
/// power of two. A zero vector on one side keeps the construction valid:
/// its unit ket is replaced by |0...0>, which carries weight |a| = 0 in
/// phi, so the recovered distance degrades to the other vector's norm as
/// it should.
pub fn amplitude_pair_states(pair: &VectorPair) -> Result<AmplitudePair> {
    let (_, _, z) = normalize_pair(pair)?;
    let n = pair.dim();
    let data_qubits = n.next_power_of_two().trailing_zeros() as usize;
    let padded = 1usize << data_qubits;

    let unit = |v: &[f64]| -> Vec<f64> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut ket = vec![0.0; padded];
        if norm == 0.0 {
            ket[0] = 1.0;
        } else {
            for (slot, x) in ket.iter_mut().zip(v) {
                *slot = x / norm;
            }
        }
        ket
    };
    let a_hat = unit(&pair.a);
    let b_hat = unit(&pair.b);

    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi = vec![0.0; padded * 2];
    for i in 0..padded {
        psi[i] = a_hat[i] * half;
        psi[padded + i] = b_hat[i] * half;
    }

    let norm_a = pair.a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_b = pair.b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let root = z.sqrt();
    Ok(AmplitudePair {
        psi,
        phi: [norm_a / root, -norm_b / root],
        z,
        data_qubits,
    })
}

/// Per-qubit rotation parameters for an angle-embedded swap test.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleParams {
    /// (theta, gamma) per qubit of the first register.
    pub a: Vec<(f64, f64)>,
    /// (theta, gamma) per qubit of the second register.
    pub b: Vec<(f64, f64)>,
    pub z: f64,
}

/// Map a pair onto rotation parameters: components are jointly
/// normalized, shifted into [0, pi], and consumed two per qubit, with a
/// zero pad when the dimension is odd.
pub fn angle_product_params(pair: &VectorPair) -> Result<AngleParams> {
    let (mut a, mut b, z) = normalize_pair(pair)?;
    if a.len() % 2 == 1 {
        a.push(0.0);
        b.push(0.0);
    }
    let to_params = |v: &[f64]| -> Vec<(f64, f64)> {
        v.chunks_exact(2)
            .map(|c| (angle_map(c[0]), angle_map(c[1])))
            .collect()
    };
    Ok(AngleParams {
        a: to_params(&a),
        b: to_params(&b),
        z,
    })
}

/// Total qubit count of a swap-test circuit for `n`-dimensional vectors.
///
/// Amplitude embedding needs a data register of ceil(log2 n) qubits plus
/// the pair-selection qubit, the reference qubit, and the ancilla; angle
/// embedding needs ceil(n/2) qubits per vector plus the ancilla.
pub fn circuit_width(n: usize, embedding: Embedding) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "distance circuits need vectors of dimension 2 or more, got {n}"
        )));
    }
    Ok(match embedding {
        Embedding::Amplitude => n.next_power_of_two().trailing_zeros() as usize + 3,
        Embedding::Angle => n.div_ceil(2) * 2 + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &[f64], b: &[f64]) -> VectorPair {
        VectorPair::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn normalization_divides_by_the_joint_norm() {
        let (a, _, z) = normalize_pair(&pair(&[1.0, 0.0], &[1.0, 1.0])).unwrap();
        assert!((z - 3.0).abs() < 1e-12);
        assert!((a[0] - 0.57735).abs() < 1e-5);
        assert_eq!(a[1], 0.0);
    }

    #[test]
    fn zero_pair_is_rejected() {
        let r = normalize_pair(&pair(&[0.0, 0.0], &[0.0, 0.0]));
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let r = VectorPair::new(vec![1.0], vec![1.0, 2.0]);
        assert!(matches!(r, Err(Error::LengthMismatch { left: 1, right: 2 })));
    }

    #[test]
    fn amplitude_states_match_hand_construction() {
        let s = amplitude_pair_states(&pair(&[1.0, 0.0], &[1.0, 1.0])).unwrap();
        let expect_psi = [0.70711, 0.0, 0.5, 0.5];
        for (got, want) in s.psi.iter().zip(expect_psi) {
            assert!((got - want).abs() < 1e-5, "psi {:?}", s.psi);
        }
        assert!((s.phi[0] - 0.57735).abs() < 1e-5);
        assert!((s.phi[1] + 0.81650).abs() < 1e-5);
        assert_eq!(s.data_qubits, 1);
        assert!((s.z - 3.0).abs() < 1e-12);
    }

    #[test]
    fn amplitude_states_of_equal_vectors_are_symmetric() {
        let s = amplitude_pair_states(&pair(&[1.0, 0.0], &[1.0, 0.0])).unwrap();
        let expect_psi = [0.70711, 0.0, 0.70711, 0.0];
        for (got, want) in s.psi.iter().zip(expect_psi) {
            assert!((got - want).abs() < 1e-5);
        }
        assert!((s.phi[0] - 0.70711).abs() < 1e-5);
        assert!((s.phi[1] + 0.70711).abs() < 1e-5);
    }

    #[test]
    fn odd_dimensions_are_zero_padded() {
        let s = amplitude_pair_states(&pair(&[1.0, 1.0, 1.0], &[2.0, 0.0, 0.0])).unwrap();
        assert_eq!(s.data_qubits, 2);
        assert_eq!(s.psi.len(), 8);
        let root7 = 7f64.sqrt();
        assert!((s.phi[0] - 3f64.sqrt() / root7).abs() < 1e-12);
        assert!((s.phi[1] + 2.0 / root7).abs() < 1e-12);
    }

    #[test]
    fn pair_state_has_unit_norm() {
        let s = amplitude_pair_states(&pair(&[0.3, -2.0, 0.7], &[1.5, 0.0, -0.2])).unwrap();
        let norm: f64 = s.psi.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn angle_map_spans_zero_to_pi() {
        assert!((angle_map(1.0) - std::f64::consts::PI).abs() < 1e-12);
        assert!((angle_map(0.0) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert_eq!(angle_map(-1.0), 0.0);
        assert!((angle_map(0.57735) - 2.47770).abs() < 1e-5);
    }

    #[test]
    fn angle_params_match_hand_values() {
        let p = angle_product_params(&pair(&[1.0, 0.0], &[1.0, 1.0])).unwrap();
        assert_eq!(p.a.len(), 1);
        assert!((p.a[0].0 - 2.47770).abs() < 1e-5);
        assert!((p.a[0].1 - 1.57080).abs() < 1e-5);
        assert!((p.b[0].0 - 2.47770).abs() < 1e-5);
        assert!((p.b[0].1 - 2.47770).abs() < 1e-5);
        assert!((p.z - 3.0).abs() < 1e-12);
    }

    #[test]
    fn equal_vectors_give_equal_params() {
        let p = angle_product_params(&pair(&[0.4, -1.0, 2.0], &[0.4, -1.0, 2.0])).unwrap();
        assert_eq!(p.a, p.b);
        assert_eq!(p.a.len(), 2, "3 dims pad to 2 qubits per vector");
    }

    #[test]
    fn widths_follow_the_register_layouts() {
        assert_eq!(circuit_width(8, Embedding::Amplitude).unwrap(), 6);
        assert_eq!(circuit_width(2, Embedding::Amplitude).unwrap(), 4);
        assert_eq!(circuit_width(26, Embedding::Angle).unwrap(), 27);
        assert_eq!(circuit_width(2, Embedding::Angle).unwrap(), 3);
        assert_eq!(circuit_width(3, Embedding::Angle).unwrap(), 5);
        assert!(circuit_width(1, Embedding::Amplitude).is_err());
    }

    #[test]
    fn embedding_names_round_trip() {
        for e in [Embedding::Amplitude, Embedding::Angle] {
            assert_eq!(e.to_string().parse::<Embedding>().unwrap(), e);
        }
        assert!("dense".parse::<Embedding>().is_err());
    }
}
