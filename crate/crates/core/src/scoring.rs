//! Representativeness indices for the endpoints of a reciprocal pair and the
//! root election that uses them.
//!
//! For a point `i` of sub-MST `τ`:
//!
//! * degree `d_i`: row sum of the relationship matrix (the reciprocal partner
//!   counts twice);
//! * average neighbour degree: `(1 / d_i) * Σ d_j` over neighbours `j`
//!   (`r_ij >= 1`);
//! * path centrality `c_i`: mean hop count from `i` to every member of `τ`,
//!   itself included;
//! * distance centrality `c*_i`: `(1 / |τ|) * Σ_{j != i} dist(i, j) / hops(i, j)`,
//!   with raw Euclidean distances so that mirror-symmetric neighbourhoods tie
//!   exactly instead of being split by jitter.
//!
//! Higher degree scores win; lower centralities win.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::boundary::{boundary_score, BoundaryPairSet};
use crate::metric::JitteredMetric;
use crate::submst::{RelationshipMatrix, SubMstForest};

/// Relative tolerance under which two pairwise scores count as tied.
pub const SCORE_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreVector {
    pub degree: u32,
    pub avg_neighbor_degree: f64,
    pub path_centrality: f64,
    pub distance_centrality: f64,
}

impl ScoreVector {
    pub fn compute(
        forest: &SubMstForest,
        r: &RelationshipMatrix,
        metric: &JitteredMetric<'_>,
        i: usize,
    ) -> Self {
        let size = forest.components()[forest.component_of(i)].len();
        let hops = hop_counts(r, i);
        let (mut hop_sum, mut dist_sum) = (0usize, 0.0);
        for &(j, h) in &hops {
            hop_sum += h;
            if j != i {
                dist_sum += metric.data().euclidean(forest.point(i), forest.point(j)) / h as f64;
            }
        }
        Self {
            degree: degree(r, i),
            avg_neighbor_degree: avg_neighbor_degree(r, i),
            path_centrality: hop_sum as f64 / size as f64,
            distance_centrality: dist_sum / size as f64,
        }
    }
}

pub fn degree(r: &RelationshipMatrix, i: usize) -> u32 {
    r.degree(i)
}

pub fn avg_neighbor_degree(r: &RelationshipMatrix, i: usize) -> f64 {
    let d = r.degree(i);
    if d == 0 {
        return 0.0;
    }
    let sum: u32 = r.row(i).iter().map(|&(j, _)| r.degree(j)).sum();
    f64::from(sum) / f64::from(d)
}

/// Breadth-first hop counts from `source` to every point of its component,
/// `(local index, hops)` in visiting order, starting with `(source, 0)`.
pub fn hop_counts(r: &RelationshipMatrix, source: usize) -> Vec<(usize, usize)> {
    let mut seen = HashSet::from([source]);
    let mut out = Vec::new();
    let mut queue = VecDeque::from([(source, 0usize)]);
    while let Some((u, h)) = queue.pop_front() {
        out.push((u, h));
        for &(v, _) in r.row(u) {
            if seen.insert(v) {
                queue.push_back((v, h + 1));
            }
        }
    }
    out
}

pub fn path_centrality(forest: &SubMstForest, r: &RelationshipMatrix, i: usize) -> f64 {
    let size = forest.components()[forest.component_of(i)].len();
    let total: usize = hop_counts(r, i).iter().map(|&(_, h)| h).sum();
    total as f64 / size as f64
}

pub fn distance_centrality(
    forest: &SubMstForest,
    r: &RelationshipMatrix,
    metric: &JitteredMetric<'_>,
    i: usize,
) -> f64 {
    let size = forest.components()[forest.component_of(i)].len();
    let total: f64 = hop_counts(r, i)
        .into_iter()
        .filter(|&(j, _)| j != i)
        .map(|(j, h)| metric.data().euclidean(forest.point(i), forest.point(j)) / h as f64)
        .sum();
    total / size as f64
}

/// Which index decides between the two endpoints of a reciprocal pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum IndexMode {
    Degree,
    AvgNeighborDegree,
    PathCentrality,
    DistanceCentrality,
    Hybrid,
    #[default]
    SimplifiedHybrid,
}

impl IndexMode {
    pub const ALL: [IndexMode; 6] = [
        IndexMode::AvgNeighborDegree,
        IndexMode::PathCentrality,
        IndexMode::DistanceCentrality,
        IndexMode::Degree,
        IndexMode::Hybrid,
        IndexMode::SimplifiedHybrid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IndexMode::Degree => "d",
            IndexMode::AvgNeighborDegree => "dbar",
            IndexMode::PathCentrality => "c",
            IndexMode::DistanceCentrality => "cstar",
            IndexMode::Hybrid => "psi",
            IndexMode::SimplifiedHybrid => "psistar",
        }
    }
}

impl fmt::Display for IndexMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IndexMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IndexMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown index mode {s:?} (expected d, dbar, c, cstar, psi or psistar)"))
    }
}

fn share(a: f64, b: f64) -> f64 {
    if a + b == 0.0 {
        0.5
    } else {
        a / (a + b)
    }
}

/// Four-index hybrid score; the two values sum to one.
pub fn hybrid_score(si: &ScoreVector, sj: &ScoreVector) -> (f64, f64) {
    let di = f64::from(si.degree);
    let dj = f64::from(sj.degree);
    let psi_i = 0.25
        * (share(di, dj)
            + share(si.avg_neighbor_degree, sj.avg_neighbor_degree)
            + (1.0 - share(si.path_centrality, sj.path_centrality))
            + (1.0 - share(si.distance_centrality, sj.distance_centrality)));
    let psi_j = 0.25
        * (share(dj, di)
            + share(sj.avg_neighbor_degree, si.avg_neighbor_degree)
            + (1.0 - share(sj.path_centrality, si.path_centrality))
            + (1.0 - share(sj.distance_centrality, si.distance_centrality)));
    (psi_i, psi_j)
}

/// Two-index hybrid over average neighbour degree and distance centrality.
pub fn simplified_score(si: &ScoreVector, sj: &ScoreVector) -> (f64, f64) {
    let psi_i = 0.5
        * (share(si.avg_neighbor_degree, sj.avg_neighbor_degree)
            + (1.0 - share(si.distance_centrality, sj.distance_centrality)));
    let psi_j = 0.5
        * (share(sj.avg_neighbor_degree, si.avg_neighbor_degree)
            + (1.0 - share(sj.distance_centrality, si.distance_centrality)));
    (psi_i, psi_j)
}

/// Pairwise score of the selected index; the larger value wins.
pub fn pairwise_score(mode: IndexMode, si: &ScoreVector, sj: &ScoreVector) -> (f64, f64) {
    let inverse = |a: f64, b: f64| (1.0 - share(a, b), 1.0 - share(b, a));
    match mode {
        IndexMode::Degree => {
            let (a, b) = (f64::from(si.degree), f64::from(sj.degree));
            (share(a, b), share(b, a))
        }
        IndexMode::AvgNeighborDegree => {
            let (a, b) = (si.avg_neighbor_degree, sj.avg_neighbor_degree);
            (share(a, b), share(b, a))
        }
        IndexMode::PathCentrality => inverse(si.path_centrality, sj.path_centrality),
        IndexMode::DistanceCentrality => inverse(si.distance_centrality, sj.distance_centrality),
        IndexMode::Hybrid => hybrid_score(si, sj),
        IndexMode::SimplifiedHybrid => simplified_score(si, sj),
    }
}

pub(crate) fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= SCORE_TIE_TOLERANCE * a.abs().max(b.abs())
}

/// Elects the root of a reciprocal pair `(i, j)` given as dataset indices.
///
/// Falls back to the boundary closeness score when the index ties, then to
/// the smaller dataset index.
pub fn select_root(
    pair: (usize, usize),
    scores: (&ScoreVector, &ScoreVector),
    boundary: Option<&BoundaryPairSet>,
    metric: &JitteredMetric<'_>,
    mode: IndexMode,
) -> usize {
    let (i, j) = pair;
    let (vi, vj) = pairwise_score(mode, scores.0, scores.1);
    if !tied(vi, vj) {
        return if vi > vj { i } else { j };
    }
    if let Some(b) = boundary.filter(|b| !b.is_empty()) {
        let zi = boundary_score(i, b, metric.data());
        let zj = boundary_score(j, b, metric.data());
        if !tied(zi, zj) {
            return if zi > zj { i } else { j };
        }
    }
    i.min(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use crate::submst::{build_forest, relationship_matrix};

    fn fixture() -> (Dataset, Vec<usize>) {
        (Dataset::from_values(&[0.0, 1.0, 3.0]).unwrap(), vec![0, 1, 2])
    }

    #[test]
    fn three_point_indices() {
        let (data, level) = fixture();
        let m = JitteredMetric::with_scale(&data, 0, 0.0);
        let f = build_forest(&level, &m, 0).unwrap();
        let r = relationship_matrix(&f);
        // Local order equals dataset order here; point "3" is local 2.
        assert_eq!([degree(&r, 0), degree(&r, 1), degree(&r, 2)], [2, 3, 1]);
        assert_eq!(avg_neighbor_degree(&r, 0), 1.5);
        assert_eq!(avg_neighbor_degree(&r, 1), 1.0);
        assert_eq!(avg_neighbor_degree(&r, 2), 3.0);
        assert_eq!(path_centrality(&f, &r, 0), 1.0);
        assert!((path_centrality(&f, &r, 1) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(path_centrality(&f, &r, 2), 1.0);
        assert!((distance_centrality(&f, &r, &m, 0) - 5.0 / 6.0).abs() < 1e-15);
        assert!((distance_centrality(&f, &r, &m, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn three_point_election() {
        let (data, level) = fixture();
        let m = JitteredMetric::with_scale(&data, 0, 0.0);
        let f = build_forest(&level, &m, 0).unwrap();
        let r = relationship_matrix(&f);
        let s0 = ScoreVector::compute(&f, &r, &m, 0);
        let s1 = ScoreVector::compute(&f, &r, &m, 1);
        let (p0, p1) = hybrid_score(&s0, &s1);
        assert!((p0 - 0.25 * (0.4 + 0.6 + 0.4 + 6.0 / 11.0)).abs() < 1e-12);
        assert!((p0 + p1 - 1.0).abs() < 1e-12);
        let (q0, q1) = simplified_score(&s0, &s1);
        assert!((q0 - 0.5 * (0.6 + 6.0 / 11.0)).abs() < 1e-12);
        assert!((q0 + q1 - 1.0).abs() < 1e-12);
        let pick = |mode| select_root((0, 1), (&s0, &s1), None, &m, mode);
        assert_eq!(pick(IndexMode::SimplifiedHybrid), 0);
        assert_eq!(pick(IndexMode::Hybrid), 1);
        assert_eq!(pick(IndexMode::Degree), 1);
        assert_eq!(pick(IndexMode::AvgNeighborDegree), 0);
        assert_eq!(pick(IndexMode::PathCentrality), 1);
        assert_eq!(pick(IndexMode::DistanceCentrality), 0);
    }

    #[test]
    fn two_point_component_is_symmetric() {
        let data = Dataset::from_values(&[2.0, 9.0]).unwrap();
        let m = JitteredMetric::with_scale(&data, 0, 0.0);
        let f = build_forest(&[0, 1], &m, 0).unwrap();
        let r = relationship_matrix(&f);
        let s0 = ScoreVector::compute(&f, &r, &m, 0);
        let s1 = ScoreVector::compute(&f, &r, &m, 1);
        assert_eq!(s0, s1);
        assert_eq!(s0.degree, 2);
        assert_eq!(s0.avg_neighbor_degree, 1.0);
        assert_eq!(s0.path_centrality, 0.5);
        assert_eq!(s0.distance_centrality, 3.5);
        assert_eq!(hybrid_score(&s0, &s1), (0.5, 0.5));
        assert_eq!(simplified_score(&s0, &s1), (0.5, 0.5));
    }

    #[test]
    fn star_center_degree() {
        // Center 0 with leaves at 1, -1.2, 1.4i, -1.6i; leaf at 1 is reciprocal.
        let data = Dataset::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![-1.2, 0.0],
            vec![0.0, 1.4],
            vec![0.0, -1.6],
        ])
        .unwrap();
        let m = JitteredMetric::with_scale(&data, 0, 0.0);
        let f = build_forest(&[0, 1, 2, 3, 4], &m, 0).unwrap();
        let r = relationship_matrix(&f);
        assert_eq!(degree(&r, 0), 5);
        let k = 4.0;
        assert!((path_centrality(&f, &r, 0) - k / (k + 1.0)).abs() < 1e-15);
        assert!(path_centrality(&f, &r, 0) < path_centrality(&f, &r, 2));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in IndexMode::ALL {
            assert_eq!(m.as_str().parse::<IndexMode>().unwrap(), m);
        }
        assert!("x".parse::<IndexMode>().is_err());
        assert_eq!(IndexMode::default(), IndexMode::SimplifiedHybrid);
    }
}
