//! Level-by-level aggregation into a cluster tree.
//!
//! Level 0 holds one leaf per data point. Each further level builds the
//! sub-MST forest over the previous level's roots, elects one root per
//! sub-MST and turns every sub-MST into a tree node. Iteration stops at the
//! first level with at most `K` roots (or a single root).

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::boundary::{default_sigma, detect_boundary, BoundaryPairSet};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metric::{JitteredMetric, SpatialIndex, DEFAULT_JITTER_SCALE};
use crate::scoring::{select_root, IndexMode, ScoreVector};
use crate::submst::{build_forest, relationship_matrix, rnn_pairs, RelationshipMatrix, SubMstForest};

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterConfig {
    /// Target number of clusters, `1 <= k <= n`.
    pub k: usize,
    pub mode: IndexMode,
    pub seed: u64,
    /// Boundary pair count; `None` uses [`default_sigma`].
    pub sigma: Option<usize>,
    /// Merge the closest roots until exactly `k` clusters remain.
    pub exact_k: bool,
    pub jitter_scale: f64,
}

impl ClusterConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            mode: IndexMode::default(),
            seed: 0,
            sigma: None,
            exact_k: false,
            jitter_scale: DEFAULT_JITTER_SCALE,
        }
    }

    pub fn mode(mut self, mode: IndexMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn sigma(mut self, sigma: Option<usize>) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn exact_k(mut self, exact_k: bool) -> Self {
        self.exact_k = exact_k;
        self
    }
}

/// One node of the cluster tree. Leaves have no children and a single member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    pub level: usize,
    /// Representative (elected root) as a dataset index.
    pub rep: usize,
    pub children: Vec<usize>,
    /// Dataset indices covered by this node, sorted.
    pub members: Vec<usize>,
}

/// Everything recorded while building one level above the leaves.
#[derive(Debug, Clone)]
pub struct LevelRecord {
    /// Node ids of this level; their representatives form the level's root set.
    pub nodes: Vec<usize>,
    /// Forest over the previous level's roots that produced this level.
    pub forest: Option<SubMstForest>,
    pub matrix: Option<RelationshipMatrix>,
}

#[derive(Debug, Clone)]
pub struct ClusterTree {
    n: usize,
    nodes: Vec<TreeNode>,
    levels: Vec<LevelRecord>,
    boundary: Option<BoundaryPairSet>,
    mode: IndexMode,
}

impl ClusterTree {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn levels(&self) -> &[LevelRecord] {
        &self.levels
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn boundary(&self) -> Option<&BoundaryPairSet> {
        self.boundary.as_ref()
    }

    pub fn mode(&self) -> IndexMode {
        self.mode
    }

    /// Representatives of the given level, in level order.
    pub fn roots(&self, level: usize) -> Vec<usize> {
        self.levels[level]
            .nodes
            .iter()
            .map(|&id| self.nodes[id].rep)
            .collect()
    }

    pub fn final_roots(&self) -> Vec<usize> {
        self.roots(self.levels.len() - 1)
    }

    pub fn document(&self) -> TreeDocument {
        TreeDocument {
            n: self.n,
            levels: self.levels.len(),
            nodes: self.nodes.clone(),
            final_roots: self.final_roots(),
        }
    }
}

/// Serialized form of a [`ClusterTree`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDocument {
    pub n: usize,
    pub levels: usize,
    pub nodes: Vec<TreeNode>,
    pub final_roots: Vec<usize>,
}

/// Flat cluster assignment with ids `0..k` in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn from_assignment(raw: &[usize]) -> Self {
        let mut map = HashMap::new();
        let labels: Vec<usize> = raw
            .iter()
            .map(|&r| {
                let next = map.len();
                *map.entry(r).or_insert(next)
            })
            .collect();
        Self { k: map.len(), labels }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17)
}

const BOUNDARY_SALT: u64 = 0xB0_0D;

/// Builds the cluster tree for `data` and extracts a flat partition.
///
/// Without `exact_k`, when the level that reaches `K` overshoots (`k⁻ < K`),
/// the previous level's `k⁺ > K` clusters are returned; the first level is
/// the exception, as going back there would return singletons. With
/// `exact_k`, the `k⁺` clusters are merged down to exactly `K`
/// (see [`cut_level_to_k`]).
pub fn cluster(data: &Dataset, config: &ClusterConfig) -> Result<(ClusterTree, Partition)> {
    let metric = JitteredMetric::with_scale(data, config.seed, config.jitter_scale);
    let tree = build_tree(&metric, config)?;
    let last = tree.level_count() - 1;
    let reached = tree.levels[last].nodes.len();
    let partition = if reached == config.k || last == 0 {
        labeling(&tree, last)
    } else if config.exact_k {
        cut_level_to_k(&tree, last - 1, config.k, &metric)?
    } else if last == 1 {
        labeling(&tree, 1)
    } else {
        labeling(&tree, last - 1)
    };
    Ok((tree, partition))
}

/// Runs the aggregation loop and records every level.
pub fn build_tree(metric: &JitteredMetric<'_>, config: &ClusterConfig) -> Result<ClusterTree> {
    let data = metric.data();
    let n = data.len();
    if config.k == 0 {
        return Err(Error::ZeroClusters);
    }
    if config.k > n {
        return Err(Error::TooManyClusters {
            k: config.k,
            available: n,
        });
    }

    let boundary = if n >= 3 {
        let sigma = config.sigma.unwrap_or_else(|| default_sigma(n));
        Some(detect_boundary(metric, sigma, mix_seed(config.seed, BOUNDARY_SALT))?)
    } else {
        None
    };

    let mut nodes: Vec<TreeNode> = (0..n)
        .map(|i| TreeNode {
            id: i,
            level: 0,
            rep: i,
            children: Vec::new(),
            members: vec![i],
        })
        .collect();
    let mut levels = vec![LevelRecord {
        nodes: (0..n).collect(),
        forest: None,
        matrix: None,
    }];

    loop {
        let current = &levels[levels.len() - 1];
        if current.nodes.len() <= config.k || current.nodes.len() < 2 {
            break;
        }
        let level_no = levels.len();
        let roots: Vec<usize> = current.nodes.iter().map(|&id| nodes[id].rep).collect();
        let prev_nodes = current.nodes.clone();

        let forest = build_forest(&roots, metric, mix_seed(config.seed, level_no as u64))?;
        let matrix = relationship_matrix(&forest);
        let elected = elect_roots(&forest, &matrix, metric, boundary.as_ref(), config.mode);

        let mut ids = Vec::with_capacity(forest.component_count());
        for (members, rep) in forest.components().iter().zip(elected) {
            let id = nodes.len();
            let children: Vec<usize> = members.iter().map(|&l| prev_nodes[l]).collect();
            let mut covered: Vec<usize> = children
                .iter()
                .flat_map(|&c| nodes[c].members.iter().copied())
                .collect();
            covered.sort_unstable();
            nodes.push(TreeNode {
                id,
                level: level_no,
                rep,
                children,
                members: covered,
            });
            ids.push(id);
        }
        levels.push(LevelRecord {
            nodes: ids,
            forest: Some(forest),
            matrix: Some(matrix),
        });
    }

    Ok(ClusterTree {
        n,
        nodes,
        levels,
        boundary,
        mode: config.mode,
    })
}

/// Elects one root (dataset index) per component, in component order.
pub fn elect_roots(
    forest: &SubMstForest,
    matrix: &RelationshipMatrix,
    metric: &JitteredMetric<'_>,
    boundary: Option<&BoundaryPairSet>,
    mode: IndexMode,
) -> Vec<usize> {
    let mut pair_of = vec![None; forest.component_count()];
    for (i, j) in rnn_pairs(matrix) {
        let c = forest.component_of(i);
        debug_assert!(pair_of[c].is_none(), "component {c} has two reciprocal pairs");
        pair_of[c] = Some((i, j));
    }
    pair_of
        .into_iter()
        .map(|pair| {
            let (i, j) = pair.expect("every component holds a reciprocal pair");
            let si = ScoreVector::compute(forest, matrix, metric, i);
            let sj = ScoreVector::compute(forest, matrix, metric, j);
            select_root(
                (forest.point(i), forest.point(j)),
                (&si, &sj),
                boundary,
                metric,
                mode,
            )
        })
        .collect()
}

/// Component count of a completed level: half the number of reciprocal
/// endpoints, `(1/2) Σ_ij ⌊r_ij / 2⌋`.
pub fn count_roots(r: &RelationshipMatrix) -> usize {
    let total: usize = (0..r.len())
        .flat_map(|i| r.row(i).iter().map(|&(_, v)| usize::from(v / 2)))
        .sum();
    total / 2
}

/// Flat partition induced by the nodes of one level.
pub fn labeling(tree: &ClusterTree, level: usize) -> Partition {
    let mut raw = vec![0; tree.n];
    for (c, &id) in tree.levels[level].nodes.iter().enumerate() {
        for &p in &tree.nodes[id].members {
            raw[p] = c;
        }
    }
    Partition::from_assignment(&raw)
}

/// Merges the final level's clusters down to `k`.
pub fn cut_to_k(tree: &ClusterTree, k: usize, metric: &JitteredMetric<'_>) -> Result<Partition> {
    cut_level_to_k(tree, tree.level_count() - 1, k, metric)
}

/// Merges the clusters of `level` down to `k`.
///
/// Each step joins the two clusters whose representatives are closest; the
/// merged cluster keeps the pair's elected root (same index mode and
/// fallbacks as the aggregation) as its only representative, so the loser
/// takes no part in later steps.
pub fn cut_level_to_k(
    tree: &ClusterTree,
    level: usize,
    k: usize,
    metric: &JitteredMetric<'_>,
) -> Result<Partition> {
    if k == 0 {
        return Err(Error::ZeroClusters);
    }
    let roots = tree.roots(level);
    let m = roots.len();
    if k > m {
        return Err(Error::TooManyClusters { k, available: m });
    }
    if k == m {
        return Ok(labeling(tree, level));
    }

    // Scores come from the forest over this level's roots: the one recorded
    // for the next level, or a fresh one (its topology does not depend on the
    // chain seed).
    let built;
    let (forest, matrix) = match tree.levels.get(level + 1) {
        Some(LevelRecord {
            forest: Some(f),
            matrix: Some(r),
            ..
        }) => (f, r),
        _ => {
            let f = build_forest(&roots, metric, 0)?;
            let r = relationship_matrix(&f);
            built = (f, r);
            (&built.0, &built.1)
        }
    };
    debug_assert_eq!(forest.points(), roots.as_slice());
    let scores: Vec<ScoreVector> = (0..m)
        .map(|l| ScoreVector::compute(forest, matrix, metric, l))
        .collect();

    let local: HashMap<usize, usize> = roots.iter().enumerate().map(|(l, &p)| (p, l)).collect();
    let index = SpatialIndex::new(metric, &roots);
    let mut alive = vec![true; m];
    let mut group: Vec<usize> = (0..m).collect();
    let mut heap = BinaryHeap::with_capacity(m);
    let nearest = |alive: &[bool], a: usize| -> Result<Reverse<Candidate>> {
        let p = index.nearest_where(roots[a], |q| alive[local[&q]])?;
        let b = local[&p];
        Ok(Candidate::new(metric.dist(roots[a], p), a, b))
    };
    for a in 0..m {
        heap.push(nearest(&alive, a)?);
    }

    let mut remaining = m;
    while remaining > k {
        let Reverse(c) = heap.pop().expect("live clusters keep heap entries");
        if !alive[c.a] {
            continue;
        }
        if !alive[c.b] {
            heap.push(nearest(&alive, c.a)?);
            continue;
        }
        let winner = select_root(
            (roots[c.a], roots[c.b]),
            (&scores[c.a], &scores[c.b]),
            tree.boundary(),
            metric,
            tree.mode,
        );
        let (keep, drop) = if winner == roots[c.a] { (c.a, c.b) } else { (c.b, c.a) };
        alive[drop] = false;
        group[drop] = keep;
        remaining -= 1;
        if remaining > 1 {
            heap.push(nearest(&alive, keep)?);
        }
    }

    let mut raw = vec![0; tree.n];
    for (c, &id) in tree.levels[level].nodes.iter().enumerate() {
        let mut g = c;
        while group[g] != g {
            g = group[g];
        }
        for &p in &tree.nodes[id].members {
            raw[p] = g;
        }
    }
    Ok(Partition::from_assignment(&raw))
}

/// Closest-pair heap entry ordered by distance, then by local indices.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    dist: f64,
    a: usize,
    b: usize,
}

impl Candidate {
    fn new(dist: f64, a: usize, b: usize) -> Reverse<Self> {
        Reverse(Self { dist, a, b })
    }

    fn key(&self) -> (usize, usize) {
        (self.a.min(self.b), self.a.max(self.b))
    }
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then_with(|| self.key().cmp(&other.key()))
            .then_with(|| self.a.cmp(&other.a))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn export_tree(tree: &ClusterTree) -> Result<Vec<u8>> {
    Ok(serde_json::to_vec(&tree.document())?)
}

pub fn parse_tree(bytes: &[u8]) -> Result<TreeDocument> {
    Ok(serde_json::from_slice(bytes)?)
}
