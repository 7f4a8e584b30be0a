//! Shared oracles for integration tests.
//!
//! Everything in this module is computed independently of the library's
//! simulation path: closed-form expressions, brute-force enumeration, and
//! hand arithmetic only. Tests compare library output against these.

#![allow(dead_code)]

use num_complex::Complex64;

/// Brute-force squared Euclidean distance.
pub fn euclid_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    euclid_sq(a, b).sqrt()
}

/// Joint normalizer of the two-vector comparison.
pub fn z_of(a: &[f64], b: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>() + b.iter().map(|x| x * x).sum::<f64>()
}

/// Overlap that the amplitude-embedding swap test estimates, from raw
/// vectors only: (|a|^2 + |b|^2 - 2 a.b) / (2Z) = |a-b|^2 / (2Z).
pub fn amplitude_overlap(a: &[f64], b: &[f64]) -> f64 {
    euclid_sq(a, b) / (2.0 * z_of(a, b))
}

/// Ancilla Pr(1) of a swap test between two pure states with squared
/// overlap `ov`.
pub fn swap_test_p1(ov: f64) -> f64 {
    0.5 - 0.5 * ov
}

/// Single-qubit state prepared by the two-angle rotation acting on |0>.
pub fn rotation_ket(theta: f64, gamma: f64) -> [Complex64; 2] {
    [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), gamma),
    ]
}

/// Squared distance recovered by the angle-embedding swap test, computed
/// in closed form: normalize both vectors by sqrt(Z), map components
/// through pi/2 (v + 1), build one qubit per component pair, take the
/// product of per-qubit inner products, and scale Pr(1) by Z.
pub fn angle_sq_distance_closed_form(a: &[f64], b: &[f64]) -> f64 {
    let z = z_of(a, b);
    assert!(z > 0.0, "oracle needs a nonzero pair");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    if a.len() % 2 == 1 {
        a.push(0.0);
        b.push(0.0);
    }
    let inv = 1.0 / z.sqrt();
    let map = |v: f64| std::f64::consts::FRAC_PI_2 * (v * inv + 1.0);
    let mut product = Complex64::new(1.0, 0.0);
    for i in (0..a.len()).step_by(2) {
        let u = rotation_ket(map(a[i]), map(a[i + 1]));
        let v = rotation_ket(map(b[i]), map(b[i + 1]));
        let inner = u[0].conj() * v[0] + u[1].conj() * v[1];
        product *= inner;
    }
    let overlap = product.norm_sqr();
    z * swap_test_p1(overlap)
}

/// Sum of per-block swap-test distances with per-block normalizers,
/// amplitude blocks: each block contributes its plain Euclidean block
/// distance, so the total is a sum of block norms.
pub fn blockwise_euclidean_sum(a: &[f64], b: &[f64], block: usize) -> f64 {
    assert!(block >= 2 && block % 2 == 0);
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while a.len() % block != 0 {
        a.push(0.0);
        b.push(0.0);
    }
    let mut total = 0.0;
    for i in (0..a.len()).step_by(block) {
        total += euclid(&a[i..i + block], &b[i..i + block]);
    }
    total
}

/// Closed-form composition of depolarizing and readout channels on a
/// bare outcome probability.
pub fn noisy_prob1(p: f64, one_q_gates: u32, cswaps: u32, l1: f64, l2: f64, p01: f64, p10: f64) -> f64 {
    let lambda = 1.0 - (1.0 - l1).powi(one_q_gates as i32) * (1.0 - l2).powi(cswaps as i32);
    let p_dep = (1.0 - lambda) * p + lambda / 2.0;
    p_dep * (1.0 - p10) + (1.0 - p_dep) * p01
}

/// All permutations of 0..n via Heap's algorithm.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(items.len(), &mut items, &mut out);
    out
}

/// Exhaustive search for the relabeling of predicted classes that
/// maximizes the confusion-matrix trace. `counts[i][j]` counts points
/// with true class i and predicted class j; the returned permutation maps
/// predicted label j to new label perm[j]. Returns (best trace, perm).
pub fn best_alignment_exhaustive(counts: &[Vec<u64>]) -> (u64, Vec<usize>) {
    let k_true = counts.len();
    let k_pred = counts.first().map_or(0, |r| r.len());
    let k = k_true.max(k_pred);
    let cell = |i: usize, j: usize| -> u64 {
        if i < k_true && j < k_pred {
            counts[i][j]
        } else {
            0
        }
    };
    let mut best = 0;
    let mut best_perm: Vec<usize> = (0..k).collect();
    for perm in permutations(k) {
        // Predicted label j is renamed perm[j]; the trace then picks up
        // counts[perm[j]][j].
        let trace: u64 = (0..k).map(|j| cell(perm[j], j)).sum();
        if trace > best {
            best = trace;
            best_perm = perm.clone();
        }
    }
    (best, best_perm)
}

/// Deterministic xorshift-multiply mixer for test-local seeding.
pub fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Small deterministic pseudo-random f64 in [lo, hi), decoupled from the
/// library's RNG choices.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(mix(seed.wrapping_add(1)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = mix(self.0);
        self.0
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }

    pub fn index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Sample mean and standard deviation (n - 1 denominator).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
