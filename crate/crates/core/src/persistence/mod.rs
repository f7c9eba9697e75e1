//! Persistent homology of Vietoris-Rips filtrations.
//!
//! Filtration values follow the half-distance convention: an edge between
//! points at distance `r` enters at `t = r / 2`, so a simplex is present at
//! scale `t` when all of its vertices are pairwise within `2t`.
//!
//! Dimension 0 is computed from a minimum spanning tree ([`h0_diagram`]), with
//! an incremental path ([`h0_add_point`]) that re-runs Kruskal over the stored
//! tree plus the edges to one new point. Higher dimensions come from a plain
//! boundary-matrix reduction over a prime field ([`vr_diagrams`]), meant for
//! small clouds only.

mod bottleneck;
mod h0;
mod union_find;
mod vr;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bottleneck::bottleneck;
pub use h0::{h0_add_point, h0_diagram, H0State, MstEdge};
pub use union_find::UnionFind;
pub use vr::{vr_diagrams, VrParams, DEFAULT_FIELD, DEFAULT_POINT_CAP};

/// Persistence diagram in one homological dimension.
///
/// `pairs` holds finite (birth, death) points, `essential` the births of
/// classes that never die.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub dim: usize,
    pub pairs: Vec<(f64, f64)>,
    pub essential: Vec<f64>,
}

impl PersistenceDiagram {
    pub fn new(dim: usize, pairs: Vec<(f64, f64)>, essential: Vec<f64>) -> Result<Self> {
        for &(birth, death) in &pairs {
            if !(birth.is_finite() && death.is_finite()) || death < birth || birth < 0.0 {
                return Err(Error::InvalidPair { birth, death });
            }
        }
        if let Some(&b) = essential.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
            return Err(Error::InvalidPair {
                birth: b,
                death: f64::INFINITY,
            });
        }
        Ok(Self {
            dim,
            pairs,
            essential,
        })
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            pairs: Vec::new(),
            essential: Vec::new(),
        }
    }

    /// Finite pairs in canonical (birth, death) order. Two diagrams are equal
    /// as multisets exactly when their sorted pairs and sorted essentials are.
    pub fn sorted_pairs(&self) -> Vec<(f64, f64)> {
        let mut p = self.pairs.clone();
        p.sort_by(cmp_pair);
        p
    }

    pub fn sorted_essential(&self) -> Vec<f64> {
        let mut e = self.essential.clone();
        e.sort_by(f64::total_cmp);
        e
    }

    /// Multiset equality, exact.
    pub fn same_multiset(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.sorted_pairs() == other.sorted_pairs()
            && self.sorted_essential() == other.sorted_essential()
    }

    /// Copy with the essential classes dropped.
    pub fn finite_part(&self) -> Self {
        Self {
            dim: self.dim,
            pairs: self.pairs.clone(),
            essential: Vec::new(),
        }
    }

    pub fn max_death(&self) -> Option<f64> {
        self.pairs.iter().map(|p| p.1).max_by(f64::total_cmp)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PersistenceDiagram = serde_json::from_str(s)?;
        Self::new(raw.dim, raw.pairs, raw.essential)
    }
}

pub(crate) fn cmp_pair(a: &(f64, f64), b: &(f64, f64)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let d = PersistenceDiagram::new(0, vec![(0.0, 1.5), (0.0, 0.1)], vec![0.0]).unwrap();
        let s = d.to_json().unwrap();
        assert_eq!(s, r#"{"dim":0,"pairs":[[0.0,1.5],[0.0,0.1]],"essential":[0.0]}"#);
        assert_eq!(PersistenceDiagram::from_json(&s).unwrap(), d);
    }

    #[test]
    fn json_preserves_full_precision() {
        let v = std::f64::consts::FRAC_1_SQRT_2;
        let d = PersistenceDiagram::new(1, vec![(0.5, v)], vec![]).unwrap();
        let back = PersistenceDiagram::from_json(&d.to_json().unwrap()).unwrap();
        assert_eq!(back.pairs[0].1.to_bits(), v.to_bits());
    }

    #[test]
    fn rejects_inverted_pair() {
        assert!(PersistenceDiagram::new(0, vec![(2.0, 1.0)], vec![]).is_err());
        assert!(PersistenceDiagram::from_json(r#"{"dim":0,"pairs":[[2,1]],"essential":[]}"#).is_err());
    }

    #[test]
    fn multiset_equality_ignores_order() {
        let a = PersistenceDiagram::new(0, vec![(0.0, 1.0), (0.0, 2.0)], vec![0.0]).unwrap();
        let b = PersistenceDiagram::new(0, vec![(0.0, 2.0), (0.0, 1.0)], vec![0.0]).unwrap();
        assert!(a.same_multiset(&b));
        let c = PersistenceDiagram::new(0, vec![(0.0, 2.0), (0.0, 2.0)], vec![0.0]).unwrap();
        assert!(!a.same_multiset(&c));
    }
}
