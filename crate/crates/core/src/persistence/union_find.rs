/// Disjoint-set forest whose root is always the smallest index in its set.
///
/// Keeping the minimum as representative gives the elder-rule tie-break for
/// free: on a merge, the component with the larger representative dies.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    /// Merges the sets of `a` and `b`. Returns `Some((survivor, killed))`
    /// representatives, or `None` if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return None;
        }
        let (keep, kill) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[kill] = keep;
        Some((keep, kill))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smaller_representative_survives() {
        let mut uf = UnionFind::new(5);
        assert_eq!(uf.union(3, 4), Some((3, 4)));
        assert_eq!(uf.union(4, 1), Some((1, 3)));
        assert_eq!(uf.union(3, 1), None);
        assert_eq!(uf.find(4), 1);
        assert_eq!(uf.find(0), 0);
    }
}
