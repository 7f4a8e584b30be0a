//! Clustering and classification quality scores.
//!
//! Cluster labels are only defined up to a permutation, so every score
//! here either works on a confusion matrix directly or goes through
//! [`align_labels`], which finds the label permutation with the largest
//! diagonal before scoring.

use serde::Serialize;

use crate::error::{Error, Result};

/// Simple guard against label typos blowing up the matrix allocation.
const MAX_CLASSES: usize = 4096;

/// Square matrix of counts; rows are true classes, columns predicted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Row-normalized rates; rows without support stay all zero.
    pub fn normalized(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| {
                let sum: u64 = row.iter().sum();
                row.iter()
                    .map(|&c| if sum == 0 { 0.0 } else { c as f64 / sum as f64 })
                    .collect()
            })
            .collect()
    }

    /// True exactly when every off-diagonal count is zero.
    pub fn is_diagonal(&self) -> bool {
        self.counts
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &c)| i == j || c == 0))
    }
}

/// Count (true, predicted) label pairs into a square matrix sized by the
/// largest label seen on either side.
pub fn confusion(truth: &[usize], pred: &[usize]) -> Result<ConfusionMatrix> {
    if truth.len() != pred.len() {
        return Err(Error::LengthMismatch {
            left: truth.len(),
            right: pred.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::InvalidInput("no labels to score".into()));
    }
    let side = 1 + truth
        .iter()
        .chain(pred)
        .copied()
        .max()
        .expect("non-empty label slices");
    if side > MAX_CLASSES {
        return Err(Error::InvalidInput(format!(
            "label {} implies more than {MAX_CLASSES} classes",
            side - 1
        )));
    }
    let mut counts = vec![vec![0u64; side]; side];
    for (&t, &p) in truth.iter().zip(pred) {
        counts[t][p] += 1;
    }
    Ok(ConfusionMatrix { counts })
}

/// Mean per-class recall over the true classes that have support.
pub fn balanced_accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    let mut recalls = Vec::new();
    for (i, row) in cm.counts.iter().enumerate() {
        let support: u64 = row.iter().sum();
        if support > 0 {
            recalls.push(row[i] as f64 / support as f64);
        }
    }
    if recalls.is_empty() {
        return Err(Error::InvalidInput("confusion matrix has no support".into()));
    }
    Ok(recalls.iter().sum::<f64>() / recalls.len() as f64)
}

/// Fraction of all samples on the diagonal.
pub fn raw_accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::InvalidInput("confusion matrix has no support".into()));
    }
    let trace: u64 = cm.counts.iter().enumerate().map(|(i, row)| row[i]).sum();
    Ok(trace as f64 / total as f64)
}

/// Support-weighted mean of per-class precision. Undefined (an error)
/// when a supported class's own predicted column is empty, because that
/// class then has no precision to weight.
pub fn weighted_precision(cm: &ConfusionMatrix) -> Result<f64> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::InvalidInput("confusion matrix has no support".into()));
    }
    let side = cm.counts.len();
    let mut score = 0.0;
    for c in 0..side {
        let support: u64 = cm.counts[c].iter().sum();
        if support == 0 {
            continue;
        }
        let predicted: u64 = (0..side).map(|t| cm.counts[t][c]).sum();
        if predicted == 0 {
            return Err(Error::EmptyPredictedClass { class: c });
        }
        let precision = cm.counts[c][c] as f64 / predicted as f64;
        score += support as f64 / total as f64 * precision;
    }
    Ok(score)
}

fn diagonal_for(counts: &[Vec<u64>], perm: &[usize]) -> u64 {
    // perm[j] is the new label of predicted class j, so predicted column
    // j lands on the diagonal row perm[j].
    perm.iter().enumerate().map(|(j, &t)| counts[t][j]).sum()
}

fn exhaustive_alignment(counts: &[Vec<u64>]) -> Vec<usize> {
    let side = counts.len();
    let mut best_perm: Vec<usize> = (0..side).collect();
    let mut best = diagonal_for(counts, &best_perm);
    let mut perm: Vec<usize> = (0..side).collect();
    // Lexicographic order with strict improvement keeps ties deterministic.
    loop {
        let i = match (0..side.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) {
            Some(i) => i,
            None => break,
        };
        let j = (i + 1..side).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
        let score = diagonal_for(counts, &perm);
        if score > best {
            best = score;
            best_perm = perm.clone();
        }
    }
    best_perm
}

fn hungarian_alignment(counts: &[Vec<u64>]) -> Vec<usize> {
    use pathfinding::kuhn_munkres::kuhn_munkres;
    use pathfinding::matrix::Matrix;

    let side = counts.len();
    // Row j: predicted class j's count against every candidate new label.
    let weights = Matrix::from_rows(
        (0..side).map(|j| (0..side).map(|t| counts[t][j] as i64).collect::<Vec<_>>()),
    )
    .expect("square matrix rows have equal length");
    let (_, assignment) = kuhn_munkres(&weights);
    assignment
}

/// Permutation `perm` with `perm[predicted] = aligned label`, chosen to
/// maximize the aligned confusion matrix's diagonal. Small problems are
/// solved exhaustively, larger ones with the Hungarian assignment.
pub fn align_labels(truth: &[usize], pred: &[usize]) -> Result<Vec<usize>> {
    let cm = confusion(truth, pred)?;
    let side = cm.counts.len();
    Ok(if side <= 8 {
        exhaustive_alignment(&cm.counts)
    } else {
        hungarian_alignment(&cm.counts)
    })
}

/// Relabel through a permutation from [`align_labels`].
///
/// Every label must index into `perm`.
pub fn apply_alignment(labels: &[usize], perm: &[usize]) -> Vec<usize> {
    labels
        .iter()
        .map(|&l| {
            *perm
                .get(l)
                .unwrap_or_else(|| panic!("label {l} outside the {}-class alignment", perm.len()))
        })
        .collect()
}
