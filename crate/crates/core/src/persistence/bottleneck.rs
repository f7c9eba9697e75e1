use super::PersistenceDiagram;
use crate::error::{Error, Result};

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn to_diagonal(a: (f64, f64)) -> f64 {
    0.5 * (a.1 - a.0)
}

/// Bipartite graph between `A ∪ diag(B)` and `B ∪ diag(A)` at threshold `eps`.
struct Threshold<'a> {
    a: &'a [(f64, f64)],
    b: &'a [(f64, f64)],
    eps: f64,
}

impl Threshold<'_> {
    fn size(&self) -> usize {
        self.a.len() + self.b.len()
    }

    /// Left vertex `u` may match right vertex `v`.
    fn edge(&self, u: usize, v: usize) -> bool {
        let (m, k) = (self.a.len(), self.b.len());
        match (u < m, v < k) {
            // point to point
            (true, true) => linf(self.a[u], self.b[v]) <= self.eps,
            // a_u to its own diagonal copy
            (true, false) => v - k == u && to_diagonal(self.a[u]) <= self.eps,
            // diagonal copy of b_{u-m} to b_v
            (false, true) => u - m == v && to_diagonal(self.b[v]) <= self.eps,
            (false, false) => true,
        }
    }

    fn augment(&self, u: usize, seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
        for v in 0..self.size() {
            if seen[v] || !self.edge(u, v) {
                continue;
            }
            seen[v] = true;
            let free = match match_right[v] {
                None => true,
                Some(w) => self.augment(w, seen, match_right),
            };
            if free {
                match_right[v] = Some(u);
                return true;
            }
        }
        false
    }

    fn has_perfect_matching(&self) -> bool {
        let n = self.size();
        let mut match_right = vec![None; n];
        let mut seen = vec![false; n];
        for u in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            if !self.augment(u, &mut seen, &mut match_right) {
                return false;
            }
        }
        true
    }
}

/// Exact bottleneck distance between the finite parts of two diagrams under
/// the infinity norm, where a point may be matched to the diagonal at cost
/// half its lifetime.
///
/// The optimum is one of finitely many candidate costs; binary search picks
/// the smallest for which a perfect matching exists.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<f64> {
    if d1.dim != d2.dim {
        return Err(Error::DiagramDimension(d1.dim, d2.dim));
    }
    let (a, b) = (&d1.pairs[..], &d2.pairs[..]);
    let mut candidates: Vec<f64> = Vec::with_capacity(a.len() * b.len() + a.len() + b.len() + 1);
    candidates.push(0.0);
    candidates.extend(a.iter().map(|&p| to_diagonal(p)));
    candidates.extend(b.iter().map(|&p| to_diagonal(p)));
    for &p in a {
        candidates.extend(b.iter().map(|&q| linf(p, q)));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // The largest candidate always admits the all-to-diagonal matching.
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        let g = Threshold {
            a,
            b,
            eps: candidates[mid],
        };
        if g.has_perfect_matching() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}
