//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::{rngs::StdRng, Rng, SeedableRng};
use srsc::{Dataset, JitteredMetric, RelationshipMatrix};

pub fn random_dataset(seed: u64, n: usize, dim: usize) -> Dataset {
    let mut rng = StdRng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect())
        .collect();
    Dataset::new(rows).unwrap()
}

/// Points on a coarse grid, so raw distances tie often.
pub fn grid_dataset(seed: u64, n: usize, dim: usize) -> Dataset {
    let mut rng = StdRng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0..6) as f64).collect())
        .collect();
    Dataset::new(rows).unwrap()
}

/// Jittered argmin by linear scan, ties to the smaller index.
pub fn linear_nearest(metric: &JitteredMetric<'_>, i: usize, candidates: &[usize]) -> usize {
    let mut best = None;
    for &j in candidates {
        if j == i {
            continue;
        }
        let d = metric.dist(i, j);
        if best.map_or(true, |(bd, bj)| d < bd || (d == bd && j < bj)) {
            best = Some((d, j));
        }
    }
    best.unwrap().1
}

pub fn linear_furthest(metric: &JitteredMetric<'_>, i: usize, candidates: &[usize]) -> usize {
    let mut best = None;
    for &j in candidates {
        if j == i {
            continue;
        }
        let d = metric.dist(i, j);
        if best.map_or(true, |(bd, bj)| d > bd || (d == bd && j < bj)) {
            best = Some((d, j));
        }
    }
    best.unwrap().1
}

/// Undirected edges `(min, max)` of the jittered-metric MST over `points`,
/// by the dense O(n²) Prim algorithm.
pub fn prim_mst(metric: &JitteredMetric<'_>, points: &[usize]) -> BTreeSet<(usize, usize)> {
    let m = points.len();
    let mut in_tree = vec![false; m];
    let mut best = vec![(f64::INFINITY, 0usize); m];
    let mut edges = BTreeSet::new();
    in_tree[0] = true;
    let mut cur = 0;
    for _ in 1..m {
        for v in 0..m {
            if !in_tree[v] {
                let d = metric.dist(points[cur], points[v]);
                if d < best[v].0 {
                    best[v] = (d, cur);
                }
            }
        }
        let next = (0..m)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].0.total_cmp(&best[b].0))
            .unwrap();
        in_tree[next] = true;
        let (a, b) = (points[best[next].1], points[next]);
        edges.insert((a.min(b), a.max(b)));
        cur = next;
    }
    edges
}

/// All-pairs hop counts over the nonzero entries of `R`; `usize::MAX` when
/// unreachable.
pub fn floyd_warshall(r: &RelationshipMatrix) -> Vec<Vec<usize>> {
    let n = r.len();
    let inf = usize::MAX / 4;
    let mut h = vec![vec![inf; n]; n];
    for i in 0..n {
        h[i][i] = 0;
        for &(j, v) in r.row(i) {
            if v > 0 {
                h[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = h[i][k] + h[k][j];
                if via < h[i][j] {
                    h[i][j] = via;
                }
            }
        }
    }
    for row in &mut h {
        for v in row.iter_mut() {
            if *v >= inf {
                *v = usize::MAX;
            }
        }
    }
    h
}

/// Rand index by enumerating every pair.
pub fn brute_rand_index(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let mut agree = 0u64;
    let mut total = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            total += 1;
            if (a[i] == a[j]) == (b[i] == b[j]) {
                agree += 1;
            }
        }
    }
    agree as f64 / total as f64
}

/// Vertices of the 2-D convex hull (Andrew's monotone chain, collinear
/// points excluded).
pub fn convex_hull(data: &Dataset) -> BTreeSet<usize> {
    let mut idx: Vec<usize> = (0..data.len()).collect();
    idx.sort_by(|&a, &b| {
        let (p, q) = (data.point(a), data.point(b));
        p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1]))
    });
    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (data.point(o), data.point(a), data.point(b));
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull.into_iter().collect()
}

/// Relabels `labels` through an arbitrary injective map.
pub fn permute_labels(labels: &[usize], seed: u64) -> Vec<usize> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|&l| *map.entry(l).or_insert_with(|| rng.gen_range(0..1_000_000usize) * 1000 + l))
        .collect()
}
