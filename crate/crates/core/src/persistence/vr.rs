use std::cmp::Ordering;
use std::collections::HashMap;

use super::PersistenceDiagram;
use crate::error::{Error, Result};
use crate::pointcloud::DistanceMatrix;

pub const DEFAULT_FIELD: u32 = 11;
pub const DEFAULT_POINT_CAP: usize = 64;

/// Parameters for the general-dimension reduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VrParams {
    /// Highest homological dimension reported (at most 2).
    pub max_dim: usize,
    /// Filtration truncation; simplices entering later are left out.
    pub max_scale: f64,
    /// Prime coefficient field.
    pub field_p: u32,
    /// Refuse clouds larger than this.
    pub max_points: usize,
}

impl VrParams {
    pub fn new(max_dim: usize, max_scale: f64) -> Self {
        Self {
            max_dim,
            max_scale,
            field_p: DEFAULT_FIELD,
            max_points: DEFAULT_POINT_CAP,
        }
    }
}

#[derive(Debug)]
struct Simplex {
    vertices: Vec<usize>,
    value: f64,
}

impl Simplex {
    fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    fn filtration_cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.vertices.len().cmp(&other.vertices.len()))
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Sparse column over F_p, entries sorted by row, no zero coefficients.
type Column = Vec<(usize, u64)>;

/// `target += factor * source` over F_p.
fn axpy(target: &Column, source: &Column, factor: u64, p: u64) -> Column {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let take = match (target.get(i), source.get(j)) {
            (Some(t), Some(s)) => t.0.cmp(&s.0),
            (Some(_), None) => Ordering::Less,
            (None, _) => Ordering::Greater,
        };
        match take {
            Ordering::Less => {
                out.push(target[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push((source[j].0, factor * source[j].1 % p));
                j += 1;
            }
            Ordering::Equal => {
                let c = (target[i].1 + factor * source[j].1) % p;
                if c != 0 {
                    out.push((target[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// All cliques up to `top_dim` whose edges enter by `max_scale`.
fn enumerate(dm: &DistanceMatrix, top_dim: usize, max_scale: f64) -> Vec<Simplex> {
    let n = dm.len();
    let edge_value = |i: usize, j: usize| 0.5 * dm.get(i, j);
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| ((i + 1)..n).filter(|&j| edge_value(i, j) <= max_scale).collect())
        .collect();

    let mut out: Vec<Simplex> = (0..n)
        .map(|i| Simplex {
            vertices: vec![i],
            value: 0.0,
        })
        .collect();
    let mut frontier: Vec<Simplex> = out
        .iter()
        .map(|s| Simplex {
            vertices: s.vertices.clone(),
            value: s.value,
        })
        .collect();
    for _ in 1..=top_dim {
        let mut next = Vec::new();
        for s in &frontier {
            let last = *s.vertices.last().expect("nonempty simplex");
            for &v in &neighbors[last] {
                if s.vertices.iter().all(|&u| edge_value(u, v) <= max_scale) {
                    let value = s
                        .vertices
                        .iter()
                        .map(|&u| edge_value(u, v))
                        .fold(s.value, f64::max);
                    let mut vertices = s.vertices.clone();
                    vertices.push(v);
                    next.push(Simplex { vertices, value });
                }
            }
        }
        out.extend(next.iter().map(|s| Simplex {
            vertices: s.vertices.clone(),
            value: s.value,
        }));
        frontier = next;
    }
    out
}

/// Diagrams in dimensions `0..=max_dim` of the Vietoris-Rips filtration,
/// by standard column reduction with clearing over F_p.
///
/// Zero-length pairs are reported in dimension 0 (coincident points) and
/// dropped in higher dimensions, where they only reflect simplices entering
/// at the same scale.
pub fn vr_diagrams(dm: &DistanceMatrix, params: &VrParams) -> Result<Vec<PersistenceDiagram>> {
    let n = dm.len();
    if n > params.max_points {
        return Err(Error::TooManyPoints {
            n,
            cap: params.max_points,
        });
    }
    if params.max_dim > 2 {
        return Err(Error::UnsupportedDimension(params.max_dim));
    }
    if !is_prime(params.field_p) {
        return Err(Error::NotPrime(params.field_p));
    }
    if !(params.max_scale >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "max_scale {} must be nonnegative",
            params.max_scale
        )));
    }
    let p = u64::from(params.field_p);
    let top = params.max_dim + 1;

    let mut simplices = enumerate(dm, top, params.max_scale);
    simplices.sort_by(Simplex::filtration_cmp);
    let index: HashMap<&[usize], usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.vertices.as_slice(), i))
        .collect();

    let boundary = |s: &Simplex| -> Column {
        if s.dim() == 0 {
            return Vec::new();
        }
        let mut col: Column = (0..s.vertices.len())
            .map(|skip| {
                let face: Vec<usize> = s
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                let coef = if skip % 2 == 0 { 1 } else { p - 1 };
                (index[face.as_slice()], coef)
            })
            .collect();
        col.sort_unstable_by_key(|e| e.0);
        col
    };

    let mut paired = vec![false; simplices.len()];
    let mut zero_column = vec![false; simplices.len()];
    let mut diagrams: Vec<PersistenceDiagram> = (0..=params.max_dim).map(PersistenceDiagram::empty).collect();

    for dim in (1..=top).rev() {
        // low row -> reduced column with that pivot
        let mut pivot_of: HashMap<usize, Column> = HashMap::new();
        for (j, s) in simplices.iter().enumerate() {
            if s.dim() != dim {
                continue;
            }
            if paired[j] {
                // cleared: this simplex is a birth killed by a higher simplex
                zero_column[j] = true;
                continue;
            }
            let mut col = boundary(s);
            while let Some(&(low, coef)) = col.last() {
                let Some(reducer) = pivot_of.get(&low) else {
                    break;
                };
                let lead = reducer.last().expect("nonzero reducer").1;
                let factor = (p - coef * pow_mod(lead, p - 2, p) % p) % p;
                col = axpy(&col, reducer, factor, p);
            }
            match col.last() {
                Some(&(low, _)) => {
                    paired[low] = true;
                    let birth = simplices[low].value;
                    let death = s.value;
                    let out_dim = dim - 1;
                    if out_dim <= params.max_dim && (out_dim == 0 || death > birth) {
                        diagrams[out_dim].pairs.push((birth, death));
                    }
                    pivot_of.insert(low, col);
                }
                None => zero_column[j] = true,
            }
        }
    }

    for (j, s) in simplices.iter().enumerate() {
        let d = s.dim();
        if d <= params.max_dim && !paired[j] && (d == 0 || zero_column[j]) {
            diagrams[d].essential.push(s.value);
        }
    }
    Ok(diagrams)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::h0_diagram;
    use crate::pointcloud::{pairwise_distances, PointCloud};

    fn dm(rows: &[&[f64]]) -> DistanceMatrix {
        pairwise_distances(&PointCloud::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn unit_square_has_one_cycle() {
        let d = dm(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
        let diagrams = vr_diagrams(&d, &VrParams::new(1, 2.0)).unwrap();
        assert_eq!(diagrams.len(), 2);
        let h1 = &diagrams[1];
        assert_eq!(h1.pairs.len(), 1);
        let (b, dd) = h1.pairs[0];
        assert!((b - 0.5).abs() < 1e-9);
        assert!((dd - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert!(h1.essential.is_empty());
        assert_eq!(diagrams[0].pairs, vec![(0.0, 0.5); 3]);
        assert_eq!(diagrams[0].essential, vec![0.0]);
    }

    #[test]
    fn equilateral_triangle_has_no_cycle() {
        let h = 3f64.sqrt();
        let d = dm(&[&[0.0, 0.0], &[2.0, 0.0], &[1.0, h]]);
        let diagrams = vr_diagrams(&d, &VrParams::new(1, 5.0)).unwrap();
        assert!(diagrams[1].pairs.is_empty());
        assert!(diagrams[1].essential.is_empty());
    }

    #[test]
    fn truncation_leaves_cycle_essential() {
        let d = dm(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
        let diagrams = vr_diagrams(&d, &VrParams::new(1, 0.6)).unwrap();
        assert!(diagrams[1].pairs.is_empty());
        assert_eq!(diagrams[1].essential, vec![0.5]);
    }

    #[test]
    fn dim0_matches_mst() {
        let d = dm(&[&[0.0, 0.0], &[0.3, 1.0], &[2.0, 2.5], &[4.0, -1.0], &[0.1, 0.1]]);
        let (h0, _) = h0_diagram(&d);
        for scale in [0.2, 1.0, 10.0] {
            let vr = vr_diagrams(&d, &VrParams::new(0, scale)).unwrap();
            let mut want: Vec<_> = h0.pairs.iter().copied().filter(|p| p.1 <= scale).collect();
            want.sort_by(crate::persistence::cmp_pair);
            assert_eq!(vr[0].sorted_pairs(), want);
        }
    }

    #[test]
    fn octahedron_has_h2_class() {
        // Cross-polytope: six points ±e_i. Edges of length √2 except antipodal
        // pairs (length 2); the 2-sphere is born at √2/2 and fills at 1.
        let mut rows = Vec::new();
        for i in 0..3 {
            for s in [1.0, -1.0] {
                let mut r = vec![0.0; 3];
                r[i] = s;
                rows.push(r);
            }
        }
        let d = pairwise_distances(&PointCloud::from_rows(&rows).unwrap()).unwrap();
        let diagrams = vr_diagrams(&d, &VrParams::new(2, 2.0)).unwrap();
        assert_eq!(diagrams[2].pairs.len(), 1);
        let (b, dd) = diagrams[2].pairs[0];
        assert!((b - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((dd - 1.0).abs() < 1e-12);
        assert!(diagrams[1].pairs.is_empty());
    }

    #[test]
    fn rejects_bad_parameters() {
        let d = dm(&[&[0.0], &[1.0]]);
        let mut p = VrParams::new(1, 1.0);
        p.field_p = 12;
        assert!(matches!(vr_diagrams(&d, &p), Err(Error::NotPrime(12))));
        p = VrParams::new(3, 1.0);
        assert!(matches!(vr_diagrams(&d, &p), Err(Error::UnsupportedDimension(3))));
        p = VrParams::new(1, 1.0);
        p.max_points = 1;
        assert!(matches!(vr_diagrams(&d, &p), Err(Error::TooManyPoints { .. })));
    }

    #[test]
    fn other_fields_agree() {
        let d = dm(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0], &[0.5, 0.4]]);
        let base = vr_diagrams(&d, &VrParams::new(1, 3.0)).unwrap();
        for p in [2, 3, 5, 7] {
            let mut params = VrParams::new(1, 3.0);
            params.field_p = p;
            let other = vr_diagrams(&d, &params).unwrap();
            for (a, b) in base.iter().zip(&other) {
                assert!(a.same_multiset(b));
            }
        }
    }
}
