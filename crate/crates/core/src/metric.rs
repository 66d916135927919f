//! Euclidean distance with a deterministic, symmetric jitter.
//!
//! Every unordered pair `{i, j}` gets a fixed perturbation
//! `scale * raw(i, j) * u(i, j)` with `u` in `(0, 1]` hashed from the seed and
//! the pair, so nearest-neighbour relations are unique without storing an
//! `n x n` table. Coincident points use the smallest non-zero pairwise
//! distance of the dataset in place of `raw`.

use std::sync::OnceLock;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::kdtree::KdTree;

pub const DEFAULT_JITTER_SCALE: f64 = 1e-9;

#[derive(Debug)]
pub struct JitteredMetric<'a> {
    data: &'a Dataset,
    seed: u64,
    scale: f64,
    floor: OnceLock<f64>,
}

impl<'a> JitteredMetric<'a> {
    pub fn new(data: &'a Dataset, seed: u64) -> Self {
        Self::with_scale(data, seed, DEFAULT_JITTER_SCALE)
    }

    /// `scale` must lie in `[0, 0.5)`; zero disables jitter entirely.
    pub fn with_scale(data: &'a Dataset, seed: u64, scale: f64) -> Self {
        assert!(
            (0.0..0.5).contains(&scale),
            "jitter scale {scale} outside [0, 0.5)"
        );
        Self {
            data,
            seed,
            scale,
            floor: OnceLock::new(),
        }
    }

    pub fn data(&self) -> &'a Dataset {
        self.data
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn jitter_scale(&self) -> f64 {
        self.scale
    }

    /// Jittered distance; errors on `i == j` or an out-of-range index.
    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.data.len();
        for index in [i, j] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, len: n });
            }
        }
        if i == j {
            return Err(Error::SelfDistance(i));
        }
        Ok(self.dist(i, j))
    }

    /// Jittered distance without argument checks; callers guarantee `i != j`.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        let raw = self.data.euclidean(i, j);
        raw + self.jitter_for(i, j, raw)
    }

    pub fn jitter(&self, i: usize, j: usize) -> f64 {
        self.jitter_for(i, j, self.data.euclidean(i, j))
    }

    #[inline]
    fn jitter_for(&self, i: usize, j: usize, raw: f64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        let base = if raw > 0.0 { raw } else { self.duplicate_floor() };
        self.scale * base * self.unit(i, j)
    }

    /// Hash of the unordered pair mapped into `(0, 1]`.
    fn unit(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let h = splitmix64(splitmix64(self.seed ^ splitmix64(lo as u64)) ^ hi as u64);
        ((h >> 11) + 1) as f64 / (1u64 << 53) as f64
    }

    /// Smallest non-zero raw pairwise distance, or 1.0 when all points coincide.
    pub fn duplicate_floor(&self) -> f64 {
        *self.floor.get_or_init(|| {
            let all: Vec<usize> = (0..self.data.len()).collect();
            let tree = KdTree::new(self.data, &all);
            let mut best = f64::INFINITY;
            for i in 0..self.data.len() {
                let q = self.data.point(i);
                if let Some((d2, _)) = tree.nearest(q, |j| {
                    j != i && crate::dataset::squared_distance(q, self.data.point(j)) > 0.0
                }) {
                    best = best.min(d2.sqrt());
                }
            }
            if best.is_finite() {
                best
            } else {
                1.0
            }
        })
    }

    /// Linear-scan nearest neighbour of `i` within `active`.
    pub fn nearest_neighbor(&self, i: usize, active: &[usize]) -> Result<usize> {
        if active.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                found: active.len(),
            });
        }
        SpatialIndex::new(self, active).nearest_neighbor(i)
    }

    /// Furthest point from `i` among all points not in `excluded`.
    pub fn furthest_point(&self, i: usize, excluded: &[usize]) -> Result<usize> {
        let all: Vec<usize> = (0..self.data.len()).collect();
        let mut mask = vec![false; self.data.len()];
        for &e in excluded {
            mask[e] = true;
        }
        SpatialIndex::new(self, &all).furthest_point(i, |j| !mask[j])
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Nearest/furthest queries under a [`JitteredMetric`], restricted to a
/// fixed point subset.
///
/// The tree ranks by raw distance; jitter is applied only to candidates
/// within a `2 * scale` relative band of the raw optimum, which contains the
/// jittered optimum.
#[derive(Debug)]
pub struct SpatialIndex<'m, 'a> {
    metric: &'m JitteredMetric<'a>,
    tree: KdTree<'a>,
}

impl<'m, 'a> SpatialIndex<'m, 'a> {
    pub fn new(metric: &'m JitteredMetric<'a>, points: &[usize]) -> Self {
        Self {
            metric,
            tree: KdTree::new(metric.data, points),
        }
    }

    pub fn points(&self) -> &[usize] {
        self.tree.points()
    }

    pub fn nearest_neighbor(&self, i: usize) -> Result<usize> {
        self.nearest_where(i, |j| j != i)
    }

    /// Jittered argmin over indexed points accepted by `accept` (`i` itself
    /// must be rejected by the filter).
    pub fn nearest_where<F>(&self, i: usize, accept: F) -> Result<usize>
    where
        F: Fn(usize) -> bool,
    {
        let data = self.metric.data;
        let q = data.point(i);
        let (d2, first) = self
            .tree
            .nearest(q, |j| j != i && accept(j))
            .ok_or(Error::NoEligiblePoint(i))?;
        if self.metric.scale == 0.0 {
            return Ok(first);
        }
        let radius = d2.sqrt() * (1.0 + 2.0 * self.metric.scale);
        let mut cands = Vec::new();
        self.tree
            .within(q, radius * radius, |j| j != i && accept(j), &mut cands);
        Ok(best_by(&cands, |j| self.metric.dist(i, j), |a, b| a < b).unwrap_or(first))
    }

    pub fn furthest_point<F>(&self, i: usize, accept: F) -> Result<usize>
    where
        F: Fn(usize) -> bool,
    {
        let data = self.metric.data;
        let q = data.point(i);
        let (d2, first) = self
            .tree
            .furthest(q, |j| j != i && accept(j))
            .ok_or(Error::NoEligiblePoint(i))?;
        if self.metric.scale == 0.0 {
            return Ok(first);
        }
        let radius = d2.sqrt() / (1.0 + 2.0 * self.metric.scale);
        let mut cands = Vec::new();
        self.tree
            .beyond(q, radius * radius, |j| j != i && accept(j), &mut cands);
        Ok(best_by(&cands, |j| self.metric.dist(i, j), |a, b| a > b).unwrap_or(first))
    }
}

/// Picks the candidate whose key is strictly `better`, falling back to the
/// smaller index on equal keys.
fn best_by<K, B>(cands: &[usize], key: K, better: B) -> Option<usize>
where
    K: Fn(usize) -> f64,
    B: Fn(f64, f64) -> bool,
{
    let mut best: Option<(f64, usize)> = None;
    for &c in cands {
        let k = key(c);
        best = match best {
            Some((bk, bi)) if !(better(k, bk) || (k == bk && c < bi)) => Some((bk, bi)),
            _ => Some((k, c)),
        };
    }
    best.map(|(_, i)| i)
}
