//! External validity indices: Rand Index, entropy, mutual information and
//! normalized mutual information. All logarithms are natural.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Joint counts of (truth, prediction) label pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    rows: Vec<u64>,
    cols: Vec<u64>,
    total: u64,
}

impl ContingencyTable {
    pub fn new<A, B>(truth: &[A], pred: &[B]) -> Result<Self>
    where
        A: Hash + Eq,
        B: Hash + Eq,
    {
        if truth.len() != pred.len() {
            return Err(Error::LengthMismatch(truth.len(), pred.len()));
        }
        let ti = dense_ids(truth);
        let pi = dense_ids(pred);
        let nr = ti.iter().max().map_or(0, |m| m + 1);
        let nc = pi.iter().max().map_or(0, |m| m + 1);
        let mut counts = vec![vec![0u64; nc]; nr];
        for (&a, &b) in ti.iter().zip(&pi) {
            counts[a][b] += 1;
        }
        let rows = counts.iter().map(|r| r.iter().sum()).collect();
        let cols = (0..nc).map(|c| counts.iter().map(|r| r[c]).sum()).collect();
        Ok(Self {
            counts,
            rows,
            cols,
            total: truth.len() as u64,
        })
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_marginals(&self) -> &[u64] {
        &self.rows
    }

    pub fn col_marginals(&self) -> &[u64] {
        &self.cols
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

fn dense_ids<T: Hash + Eq>(labels: &[T]) -> Vec<usize> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

fn pairs(x: u64) -> f64 {
    (x as f64) * (x as f64 - 1.0) / 2.0
}

/// Fraction of point pairs on which both partitions agree.
pub fn rand_index<A, B>(truth: &[A], pred: &[B]) -> Result<f64>
where
    A: Hash + Eq,
    B: Hash + Eq,
{
    let t = ContingencyTable::new(truth, pred)?;
    if t.total < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: t.total as usize,
        });
    }
    let total = pairs(t.total);
    let together_both: f64 = t.counts.iter().flatten().map(|&c| pairs(c)).sum();
    let together_truth: f64 = t.rows.iter().map(|&c| pairs(c)).sum();
    let together_pred: f64 = t.cols.iter().map(|&c| pairs(c)).sum();
    // Separated in both = all − together in either.
    let apart_both = total - together_truth - together_pred + together_both;
    Ok((together_both + apart_both) / total)
}

fn entropy_of(counts: &[u64], total: u64) -> f64 {
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

pub fn entropy<A: Hash + Eq>(labels: &[A]) -> f64 {
    let ids = dense_ids(labels);
    let k = ids.iter().max().map_or(0, |m| m + 1);
    let mut counts = vec![0u64; k];
    for i in ids {
        counts[i] += 1;
    }
    entropy_of(&counts, labels.len() as u64)
}

pub fn mutual_information<A, B>(truth: &[A], pred: &[B]) -> Result<f64>
where
    A: Hash + Eq,
    B: Hash + Eq,
{
    let t = ContingencyTable::new(truth, pred)?;
    Ok(mi_of(&t))
}

fn mi_of(t: &ContingencyTable) -> f64 {
    let n = t.total as f64;
    let mut mi = 0.0;
    for (r, row) in t.counts.iter().enumerate() {
        for (c, &nxy) in row.iter().enumerate() {
            if nxy == 0 {
                continue;
            }
            let pxy = nxy as f64 / n;
            let px = t.rows[r] as f64 / n;
            let py = t.cols[c] as f64 / n;
            mi += pxy * (pxy / (px * py)).ln();
        }
    }
    mi.max(0.0)
}

/// `2 MI / (H(truth) + H(pred))`; undefined when both partitions are trivial.
pub fn nmi<A, B>(truth: &[A], pred: &[B]) -> Result<f64>
where
    A: Hash + Eq,
    B: Hash + Eq,
{
    let t = ContingencyTable::new(truth, pred)?;
    let h = entropy_of(&t.rows, t.total) + entropy_of(&t.cols, t.total);
    if h <= 0.0 {
        return Err(Error::UndefinedNmi);
    }
    Ok((2.0 * mi_of(&t) / h).clamp(0.0, 1.0))
}
