//! Functional summaries of persistence diagrams sampled on a shared grid:
//! tent functions, landscapes and lifetime-weighted silhouettes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persistence::{cmp_pair, PersistenceDiagram};

pub const DEFAULT_RESOLUTION: usize = 1000;

/// Headroom applied above the largest finite death when building a grid.
pub const GRID_HEADROOM: f64 = 1.05;

/// Evenly spaced samples over `[t_min, t_max]`, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub resolution: usize,
}

impl Grid {
    pub fn new(t_min: f64, t_max: f64, resolution: usize) -> Result<Self> {
        if !(t_min >= 0.0 && t_max > t_min && t_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("range [{t_min}, {t_max}]")));
        }
        if resolution < 2 {
            return Err(Error::InvalidGrid(format!("resolution {resolution} < 2")));
        }
        Ok(Self {
            t_min,
            t_max,
            resolution,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.t_max - self.t_min) / (self.resolution - 1) as f64
    }

    pub fn sample(&self, i: usize) -> f64 {
        if i + 1 == self.resolution {
            self.t_max
        } else {
            self.t_min + (self.t_max - self.t_min) * (i as f64 / (self.resolution - 1) as f64)
        }
    }

    pub fn samples(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.resolution).map(|i| self.sample(i))
    }

    /// Sample indices whose value can lie inside `[lo, hi]`, padded by one on
    /// each side so rounding never drops a sample.
    fn index_span(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let h = self.spacing();
        let first = ((lo - self.t_min) / h).floor() - 1.0;
        let last = ((hi - self.t_min) / h).ceil() + 1.0;
        let clamp = |x: f64| x.max(0.0).min(self.resolution as f64) as usize;
        clamp(first)..clamp(last + 1.0)
    }
}

/// A summary function sampled on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryVector {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl SummaryVector {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[inline]
fn tent_unchecked(birth: f64, death: f64, t: f64) -> f64 {
    (t - birth).min(death - t).max(0.0)
}

/// `max(0, min(t - b, d - t))`.
pub fn tent(birth: f64, death: f64, t: f64) -> Result<f64> {
    if death < birth {
        return Err(Error::InvalidPair { birth, death });
    }
    Ok(tent_unchecked(birth, death, t))
}

/// k-th landscape level (k starts at 1); zero where fewer than k tents are
/// positive.
pub fn landscape(diag: &PersistenceDiagram, k: usize, grid: &Grid) -> Result<SummaryVector> {
    if k == 0 {
        return Err(Error::InvalidArgument("landscape level starts at 1".into()));
    }
    let mut scratch = Vec::with_capacity(diag.pairs.len());
    let values = grid
        .samples()
        .map(|t| {
            if diag.pairs.len() < k {
                return 0.0;
            }
            scratch.clear();
            scratch.extend(diag.pairs.iter().map(|&(b, d)| tent_unchecked(b, d, t)));
            let (_, kth, _) = scratch.select_nth_unstable_by(k - 1, |x, y| y.total_cmp(x));
            *kth
        })
        .collect();
    Ok(SummaryVector { grid: *grid, values })
}

/// Silhouette with lifetime weights, essential classes excluded.
///
/// Pairs are accumulated in canonical (birth, death) order so the result
/// depends only on the diagram as a multiset.
pub fn silhouette(diag: &PersistenceDiagram, grid: &Grid) -> Result<SummaryVector> {
    let mut pairs = diag.pairs.clone();
    pairs.sort_by(cmp_pair);
    let total: f64 = pairs.iter().map(|(b, d)| d - b).sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateDiagram);
    }
    let mut values = vec![0.0; grid.resolution];
    for &(b, d) in &pairs {
        let w = (d - b) / total;
        if w == 0.0 {
            continue;
        }
        for i in grid.index_span(b, d) {
            values[i] += w * tent_unchecked(b, d, grid.sample(i));
        }
    }
    Ok(SummaryVector { grid: *grid, values })
}

/// Grid on `[0, 1.05 * largest finite death]` shared by all given diagrams.
pub fn make_grid(diagrams: &[&PersistenceDiagram], resolution: usize) -> Result<Grid> {
    let max_death = diagrams
        .iter()
        .filter_map(|d| d.max_death())
        .max_by(f64::total_cmp)
        .ok_or_else(|| Error::InvalidGrid("no finite pairs in any diagram".into()))?;
    if !(max_death > 0.0) {
        return Err(Error::InvalidGrid("every finite death is zero".into()));
    }
    Grid::new(0.0, GRID_HEADROOM * max_death, resolution)
}

/// Plain Euclidean norm of the sample-wise difference.
pub fn l2_distance(a: &SummaryVector, b: &SummaryVector) -> Result<f64> {
    if a.grid != b.grid || a.values.len() != b.values.len() {
        return Err(Error::GridMismatch);
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}
