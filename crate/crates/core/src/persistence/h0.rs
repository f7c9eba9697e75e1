use std::cmp::Ordering;

use super::union_find::UnionFind;
use super::PersistenceDiagram;
use crate::error::{Error, Result};
use crate::pointcloud::DistanceMatrix;

/// Edge of a minimum spanning tree, endpoints stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MstEdge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

impl MstEdge {
    fn new(u: usize, v: usize, length: f64) -> Self {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        Self { a, b, length }
    }

    /// Filtration value at which the edge enters.
    pub fn merge_value(&self) -> f64 {
        0.5 * self.length
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.length
            .total_cmp(&other.length)
            .then(self.a.cmp(&other.a))
            .then(self.b.cmp(&other.b))
    }
}

/// Minimum spanning tree of a cloud, kept so that the dimension-0 diagram of
/// the cloud plus one extra point can be computed without the full matrix.
///
/// Edges are sorted by (length, smaller index, larger index).
#[derive(Clone, Debug)]
pub struct H0State {
    n: usize,
    edges: Vec<MstEdge>,
}

impl H0State {
    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[MstEdge] {
        &self.edges
    }

    /// Largest merge value in the tree, 0 for a single point.
    pub fn max_merge(&self) -> f64 {
        self.edges.last().map_or(0.0, MstEdge::merge_value)
    }

    pub fn diagram(&self) -> PersistenceDiagram {
        diagram_from_sorted(&self.edges, self.n)
    }
}

/// Kruskal over edges already in key order; returns the accepted edges.
fn kruskal(n_nodes: usize, sorted: impl Iterator<Item = MstEdge>) -> Vec<MstEdge> {
    let mut uf = UnionFind::new(n_nodes);
    let mut tree = Vec::with_capacity(n_nodes.saturating_sub(1));
    for e in sorted {
        if uf.union(e.a, e.b).is_some() {
            tree.push(e);
            if tree.len() + 1 == n_nodes {
                break;
            }
        }
    }
    tree
}

/// Every point is born at 0; each tree edge kills one component at its merge
/// value and one component survives forever.
fn diagram_from_sorted(edges: &[MstEdge], n: usize) -> PersistenceDiagram {
    debug_assert_eq!(edges.len() + 1, n.max(1));
    PersistenceDiagram {
        dim: 0,
        pairs: edges.iter().map(|e| (0.0, e.merge_value())).collect(),
        essential: if n > 0 { vec![0.0] } else { Vec::new() },
    }
}

/// Prim's algorithm on the dense matrix, O(n²).
fn prim(dm: &DistanceMatrix) -> Vec<MstEdge> {
    let n = dm.len();
    if n <= 1 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut from = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let row = dm.row(current);
        let mut next = usize::MAX;
        let mut next_len = f64::INFINITY;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            if row[v] < best[v] {
                best[v] = row[v];
                from[v] = current;
            }
            if next == usize::MAX || best[v] < next_len {
                next = v;
                next_len = best[v];
            }
        }
        in_tree[next] = true;
        edges.push(MstEdge::new(from[next], next, next_len));
        current = next;
    }
    edges
}

/// Dimension-0 diagram of the Vietoris-Rips filtration, with the spanning
/// tree kept for incremental updates.
pub fn h0_diagram(dm: &DistanceMatrix) -> (PersistenceDiagram, H0State) {
    let mut edges = prim(dm);
    edges.sort_by(MstEdge::key_cmp);
    // Equal-length ties may let Prim pick a different tree than Kruskal would;
    // re-running Kruskal on the sorted tree fixes the canonical edge set.
    let edges = kruskal(dm.len(), edges.into_iter());
    let state = H0State { n: dm.len(), edges };
    (state.diagram(), state)
}

/// Dimension-0 diagram of the cloud extended by one point, given that
/// point's distances to the existing points (in index order).
///
/// Any edge outside the old tree is the longest on some cycle of old edges,
/// so the new tree uses only old tree edges and the `n` new ones.
pub fn h0_add_point(state: &H0State, dists_to_new: &[f64]) -> Result<PersistenceDiagram> {
    let n = state.n;
    if dists_to_new.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: dists_to_new.len(),
        });
    }
    if let Some(&d) = dists_to_new.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
        return Err(Error::InvalidArgument(format!("invalid distance {d} to the new point")));
    }
    let mut fresh: Vec<MstEdge> = dists_to_new
        .iter()
        .enumerate()
        .map(|(i, &d)| MstEdge::new(i, n, d))
        .collect();
    fresh.sort_by(MstEdge::key_cmp);
    let merged = MergeSorted {
        left: state.edges.iter().copied().peekable(),
        right: fresh.into_iter().peekable(),
    };
    let tree = kruskal(n + 1, merged);
    Ok(diagram_from_sorted(&tree, n + 1))
}

struct MergeSorted<L: Iterator<Item = MstEdge>, R: Iterator<Item = MstEdge>> {
    left: std::iter::Peekable<L>,
    right: std::iter::Peekable<R>,
}

impl<L: Iterator<Item = MstEdge>, R: Iterator<Item = MstEdge>> Iterator for MergeSorted<L, R> {
    type Item = MstEdge;

    fn next(&mut self) -> Option<MstEdge> {
        match (self.left.peek(), self.right.peek()) {
            (Some(l), Some(r)) => {
                if l.key_cmp(r) != Ordering::Greater {
                    self.left.next()
                } else {
                    self.right.next()
                }
            }
            (Some(_), None) => self.left.next(),
            (None, _) => self.right.next(),
        }
    }
}
