//! Sub-MST construction by nearest-neighbour chains.
//!
//! Starting from a random candidate, a chain follows nearest-neighbour links
//! until it either closes a reciprocal pair (a new sub-MST) or reaches a
//! point that an earlier chain already claimed (the chain joins that
//! sub-MST). Every point of the level emits exactly one directed edge to its
//! nearest neighbour, so each component holds exactly one reciprocal pair.
//!
//! All indices inside a forest are *local*: positions in the level's point
//! list. [`SubMstForest::point`] maps them back to dataset indices.

use rand::{rngs::StdRng, Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::metric::{JitteredMetric, SpatialIndex};

#[derive(Debug, Clone, PartialEq)]
pub struct SubMstForest {
    points: Vec<usize>,
    edges: Vec<(usize, usize)>,
    component_of: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl SubMstForest {
    /// Dataset indices of this level, in local order.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn point(&self, local: usize) -> usize {
        self.points[local]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Directed nearest-neighbour edges in traversal order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn component_of(&self, local: usize) -> usize {
        self.component_of[local]
    }

    /// Members of each sub-MST (local indices), in discovery order.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }
}

/// Builds the sub-MST forest over `level` (dataset indices).
///
/// Chain starts are drawn uniformly from the remaining candidates using
/// `rng_seed`; the resulting partition does not depend on that order.
pub fn build_forest(level: &[usize], metric: &JitteredMetric<'_>, rng_seed: u64) -> Result<SubMstForest> {
    if level.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: level.len(),
        });
    }
    let n = level.len();
    let index = SpatialIndex::new(metric, level);
    let local_of = LocalMap::new(level, metric.data().len());

    let mut nn: Vec<Option<usize>> = vec![None; n];
    let mut neighbor = |x: usize| -> Result<usize> {
        if let Some(d) = nn[x] {
            return Ok(d);
        }
        let d = local_of.get(index.nearest_neighbor(level[x])?);
        nn[x] = Some(d);
        Ok(d)
    };

    // Candidate set with O(1) uniform draws and removals.
    let mut candidates: Vec<usize> = (0..n).collect();
    let mut slot: Vec<usize> = (0..n).collect();
    let mut in_gamma = vec![true; n];
    let remove = |x: usize, candidates: &mut Vec<usize>, slot: &mut Vec<usize>| {
        let s = slot[x];
        let last = *candidates.last().expect("candidate set non-empty");
        candidates.swap_remove(s);
        if last != x {
            slot[last] = s;
        }
    };

    let mut rng = StdRng::seed_from_u64(rng_seed);
    let mut edges = Vec::with_capacity(n + n / 2);
    let mut component_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    // Chain stamp per point; a point is in the current chain's V iff its
    // stamp equals the chain counter.
    let mut stamp = vec![0usize; n];
    let mut chain_id = 0usize;
    let mut chain = Vec::new();

    while !candidates.is_empty() {
        chain_id += 1;
        chain.clear();
        let start = candidates[rng.gen_range(0..candidates.len())];
        stamp[start] = chain_id;
        chain.push(start);
        let mut x = start;
        let target = loop {
            let d = neighbor(x)?;
            edges.push((x, d));
            if stamp[d] == chain_id {
                // Closed a reciprocal pair: the chain is a new sub-MST.
                debug_assert_eq!(neighbor(d)?, x);
                components.push(Vec::new());
                break components.len() - 1;
            }
            if !in_gamma[d] {
                // Reached an earlier sub-MST: attach to it.
                break component_of[d];
            }
            stamp[d] = chain_id;
            chain.push(d);
            x = d;
        };
        for &v in &chain {
            component_of[v] = target;
            components[target].push(v);
            in_gamma[v] = false;
            remove(v, &mut candidates, &mut slot);
        }
    }

    Ok(SubMstForest {
        points: level.to_vec(),
        edges,
        component_of,
        components,
    })
}

/// Dataset index -> local index lookup for one level.
struct LocalMap(Vec<u32>);

impl LocalMap {
    fn new(level: &[usize], n: usize) -> Self {
        let mut map = vec![u32::MAX; n];
        for (l, &p) in level.iter().enumerate() {
            map[p] = l as u32;
        }
        Self(map)
    }

    fn get(&self, point: usize) -> usize {
        self.0[point] as usize
    }
}

/// Symmetric `R = A + Aᵀ` of the forest's directed edge graph, stored as
/// sorted adjacency rows over local indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationshipMatrix {
    rows: Vec<Vec<(usize, u8)>>,
}

impl RelationshipMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.rows[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map_or(0, |pos| self.rows[i][pos].1)
    }

    /// Non-zero entries `(j, r_ij)` of row `i`, sorted by `j`.
    pub fn row(&self, i: usize) -> &[(usize, u8)] {
        &self.rows[i]
    }

    /// Weighted degree: the row sum.
    pub fn degree(&self, i: usize) -> u32 {
        self.rows[i].iter().map(|&(_, r)| u32::from(r)).sum()
    }
}

pub fn relationship_matrix(forest: &SubMstForest) -> RelationshipMatrix {
    let n = forest.len();
    let mut directed: Vec<(usize, usize)> = forest.edges.clone();
    directed.sort_unstable();
    directed.dedup();
    let mut rows: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n];
    for &(i, j) in &directed {
        rows[i].push((j, 1));
        rows[j].push((i, 1));
    }
    for row in &mut rows {
        row.sort_unstable();
        // Merge the two halves of a mutual edge into a single entry of 2.
        let mut merged: Vec<(usize, u8)> = Vec::with_capacity(row.len());
        for &(j, r) in row.iter() {
            match merged.last_mut() {
                Some(last) if last.0 == j => last.1 += r,
                _ => merged.push((j, r)),
            }
        }
        *row = merged;
    }
    RelationshipMatrix { rows }
}

/// Unordered reciprocal pairs `(i, j)`, `i < j`, i.e. entries with `r_ij = 2`.
pub fn rnn_pairs(r: &RelationshipMatrix) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (i, row) in r.rows.iter().enumerate() {
        for &(j, v) in row {
            if v == 2 && i < j {
                pairs.push((i, j));
            }
        }
    }
    pairs
}
