//! Boundary sampling by furthest-of-furthest pairs, and the boundary
//! closeness score used to break ties between reciprocal endpoints.

use rand::{rngs::StdRng, seq::index, SeedableRng};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metric::{JitteredMetric, SpatialIndex};

/// Sampled boundary pairs (dataset indices) and their endpoint set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPairSet {
    pairs: Vec<(usize, usize)>,
    endpoints: Vec<usize>,
    requested: usize,
}

impl BoundaryPairSet {
    /// Wraps explicitly chosen pairs (dataset indices).
    pub fn from_pairs(pairs: Vec<(usize, usize)>) -> Self {
        let endpoints = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let requested = pairs.len();
        Self {
            pairs,
            endpoints,
            requested,
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Every sampled endpoint, in sampling order.
    pub fn endpoints(&self) -> &[usize] {
        &self.endpoints
    }

    pub fn sigma(&self) -> usize {
        self.pairs.len()
    }

    pub fn requested_sigma(&self) -> usize {
        self.requested
    }

    /// True when the dataset ran out of eligible points before `requested`
    /// pairs were drawn.
    pub fn is_clamped(&self) -> bool {
        self.pairs.len() < self.requested
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// `max(3, ceil(log2 n))`.
pub fn default_sigma(n: usize) -> usize {
    let log = if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    };
    log.max(3)
}

/// Samples `sigma` boundary pairs from seeded random start points.
pub fn detect_boundary(metric: &JitteredMetric<'_>, sigma: usize, rng_seed: u64) -> Result<BoundaryPairSet> {
    let n = metric.data().len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: n });
    }
    let mut rng = StdRng::seed_from_u64(rng_seed);
    let starts = index::sample(&mut rng, n, sigma.min(n)).into_vec();
    let mut set = detect_boundary_from(metric, &starts)?;
    set.requested = sigma;
    Ok(set)
}

/// Boundary sampling from explicit start points.
pub fn detect_boundary_from(metric: &JitteredMetric<'_>, starts: &[usize]) -> Result<BoundaryPairSet> {
    let n = metric.data().len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: n });
    }
    let all: Vec<usize> = (0..n).collect();
    let index = SpatialIndex::new(metric, &all);
    let mut taken = vec![false; n];
    let mut pairs = Vec::with_capacity(starts.len());
    let mut endpoints = Vec::with_capacity(2 * starts.len());
    for &x in starts {
        let Ok(first) = index.furthest_point(x, |j| !taken[j]) else {
            break;
        };
        let Ok(second) = index.furthest_point(first, |j| !taken[j]) else {
            break;
        };
        taken[first] = true;
        taken[second] = true;
        pairs.push((first, second));
        endpoints.extend([first, second]);
    }
    Ok(BoundaryPairSet {
        pairs,
        endpoints,
        requested: starts.len(),
    })
}

/// Mean absolute difference of `r`'s raw distances to the two endpoints of
/// each boundary pair; larger means closer to the boundary.
pub fn boundary_score(r: usize, boundary: &BoundaryPairSet, data: &Dataset) -> f64 {
    if boundary.is_empty() {
        return 0.0;
    }
    let total: f64 = boundary
        .pairs
        .iter()
        .map(|&(a, b)| (data.euclidean(r, a) - data.euclidean(r, b)).abs())
        .sum();
    total / boundary.pairs.len() as f64
}
