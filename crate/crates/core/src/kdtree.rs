//! Static k-d tree over a subset of a dataset's points.
//!
//! Queries work on raw squared Euclidean distance and accept a filter so
//! callers can exclude the query point or any other set of indices. Ties on
//! distance resolve to the smaller point index.

use crate::dataset::{squared_distance, Dataset};

const LEAF_SIZE: usize = 8;
const MAX_SPLIT_DIM: usize = 32;

#[derive(Debug, Clone)]
struct Node {
    start: usize,
    end: usize,
    // Child node ids; `usize::MAX` marks a leaf.
    left: usize,
    right: usize,
}

#[derive(Debug, Clone)]
pub struct KdTree<'a> {
    data: &'a Dataset,
    order: Vec<usize>,
    nodes: Vec<Node>,
    leaf_size: usize,
    // Per node: `dim` minima followed by `dim` maxima.
    bounds: Vec<f64>,
}

impl<'a> KdTree<'a> {
    pub fn new(data: &'a Dataset, points: &[usize]) -> Self {
        // In very high dimensions pruning rarely succeeds; a single leaf then
        // turns every query into one linear scan.
        let leaf_size = if data.dim() <= MAX_SPLIT_DIM {
            LEAF_SIZE
        } else {
            usize::MAX
        };
        let mut tree = Self {
            leaf_size,
            data,
            order: points.to_vec(),
            nodes: Vec::with_capacity(2 * points.len() / LEAF_SIZE + 1),
            bounds: Vec::new(),
        };
        if !points.is_empty() {
            tree.build(0, points.len());
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn points(&self) -> &[usize] {
        &self.order
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let dim = self.data.dim();
        let id = self.nodes.len();
        self.nodes.push(Node {
            start,
            end,
            left: usize::MAX,
            right: usize::MAX,
        });
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &p in &self.order[start..end] {
            for (d, &v) in self.data.point(p).iter().enumerate() {
                lo[d] = lo[d].min(v);
                hi[d] = hi[d].max(v);
            }
        }
        let (split, spread) = (0..dim)
            .map(|d| (d, hi[d] - lo[d]))
            .fold((0, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        self.bounds.extend_from_slice(&lo);
        self.bounds.extend_from_slice(&hi);

        if end - start <= self.leaf_size || spread <= 0.0 {
            return id;
        }
        let mid = start + (end - start) / 2;
        let data = self.data;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            data.point(a)[split].total_cmp(&data.point(b)[split])
        });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id].left = left;
        self.nodes[id].right = right;
        id
    }

    fn bounds_of(&self, node: usize) -> (&[f64], &[f64]) {
        let dim = self.data.dim();
        let b = &self.bounds[2 * dim * node..2 * dim * (node + 1)];
        b.split_at(dim)
    }

    fn min_dist2(&self, node: usize, q: &[f64]) -> f64 {
        let (lo, hi) = self.bounds_of(node);
        q.iter()
            .zip(lo.iter().zip(hi))
            .map(|(&x, (&l, &h))| {
                let d = if x < l {
                    l - x
                } else if x > h {
                    x - h
                } else {
                    0.0
                };
                d * d
            })
            .sum()
    }

    fn max_dist2(&self, node: usize, q: &[f64]) -> f64 {
        let (lo, hi) = self.bounds_of(node);
        q.iter()
            .zip(lo.iter().zip(hi))
            .map(|(&x, (&l, &h))| {
                let d = (x - l).abs().max((h - x).abs());
                d * d
            })
            .sum()
    }

    /// Smallest squared distance from `q` to an accepted point, with its index.
    pub fn nearest<F>(&self, q: &[f64], accept: F) -> Option<(f64, usize)>
    where
        F: Fn(usize) -> bool,
    {
        let mut best = None;
        if !self.is_empty() {
            self.nearest_rec(0, q, &accept, &mut best);
        }
        best
    }

    fn nearest_rec<F>(&self, node: usize, q: &[f64], accept: &F, best: &mut Option<(f64, usize)>)
    where
        F: Fn(usize) -> bool,
    {
        let n = &self.nodes[node];
        if n.left == usize::MAX {
            for &p in &self.order[n.start..n.end] {
                if !accept(p) {
                    continue;
                }
                let d = squared_distance(q, self.data.point(p));
                if best.map_or(true, |(bd, bi)| d < bd || (d == bd && p < bi)) {
                    *best = Some((d, p));
                }
            }
            return;
        }
        let (a, b) = (n.left, n.right);
        let (da, db) = (self.min_dist2(a, q), self.min_dist2(b, q));
        let (first, df, second, ds) = if da <= db { (a, da, b, db) } else { (b, db, a, da) };
        if best.map_or(true, |(bd, _)| df <= bd) {
            self.nearest_rec(first, q, accept, best);
        }
        if best.map_or(true, |(bd, _)| ds <= bd) {
            self.nearest_rec(second, q, accept, best);
        }
    }

    /// Largest squared distance from `q` to an accepted point, with its index.
    pub fn furthest<F>(&self, q: &[f64], accept: F) -> Option<(f64, usize)>
    where
        F: Fn(usize) -> bool,
    {
        let mut best = None;
        if !self.is_empty() {
            self.furthest_rec(0, q, &accept, &mut best);
        }
        best
    }

    fn furthest_rec<F>(&self, node: usize, q: &[f64], accept: &F, best: &mut Option<(f64, usize)>)
    where
        F: Fn(usize) -> bool,
    {
        let n = &self.nodes[node];
        if n.left == usize::MAX {
            for &p in &self.order[n.start..n.end] {
                if !accept(p) {
                    continue;
                }
                let d = squared_distance(q, self.data.point(p));
                if best.map_or(true, |(bd, bi)| d > bd || (d == bd && p < bi)) {
                    *best = Some((d, p));
                }
            }
            return;
        }
        let (a, b) = (n.left, n.right);
        let (da, db) = (self.max_dist2(a, q), self.max_dist2(b, q));
        let (first, df, second, ds) = if da >= db { (a, da, b, db) } else { (b, db, a, da) };
        if best.map_or(true, |(bd, _)| df >= bd) {
            self.furthest_rec(first, q, accept, best);
        }
        if best.map_or(true, |(bd, _)| ds >= bd) {
            self.furthest_rec(second, q, accept, best);
        }
    }

    /// Appends every accepted point with squared distance `<= r2` to `out`.
    pub fn within<F>(&self, q: &[f64], r2: f64, accept: F, out: &mut Vec<usize>)
    where
        F: Fn(usize) -> bool,
    {
        if self.is_empty() {
            return;
        }
        let mut stack = vec![0];
        while let Some(node) = stack.pop() {
            if self.min_dist2(node, q) > r2 {
                continue;
            }
            let n = &self.nodes[node];
            if n.left == usize::MAX {
                out.extend(self.order[n.start..n.end].iter().copied().filter(|&p| {
                    accept(p) && squared_distance(q, self.data.point(p)) <= r2
                }));
            } else {
                stack.push(n.left);
                stack.push(n.right);
            }
        }
    }

    /// Appends every accepted point with squared distance `>= r2` to `out`.
    pub fn beyond<F>(&self, q: &[f64], r2: f64, accept: F, out: &mut Vec<usize>)
    where
        F: Fn(usize) -> bool,
    {
        if self.is_empty() {
            return;
        }
        let mut stack = vec![0];
        while let Some(node) = stack.pop() {
            if self.max_dist2(node, q) < r2 {
                continue;
            }
            let n = &self.nodes[node];
            if n.left == usize::MAX {
                out.extend(self.order[n.start..n.end].iter().copied().filter(|&p| {
                    accept(p) && squared_distance(q, self.data.point(p)) >= r2
                }));
            } else {
                stack.push(n.left);
                stack.push(n.right);
            }
        }
    }
}
