use serde::{Deserialize, Serialize};

use super::logreg::{logreg_fit, LogRegParams};
use crate::error::{Error, Result};
use crate::pointcloud::{mean_std, PointCloud};

/// Outcome of recursive feature elimination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RfeResult {
    /// Surviving feature indices, ascending.
    pub kept: Vec<usize>,
    /// Rank per original feature: 1 for survivors, then 2 for the last
    /// feature eliminated, up to `dim - n_keep + 1` for the first.
    pub ranking: Vec<usize>,
}

impl RfeResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Standardizes every column; constant columns are only centered.
fn standardize(x: &PointCloud) -> PointCloud {
    let d = x.dim();
    let stats: Vec<(f64, f64)> = (0..d).map(|j| mean_std(&x.points().map(|p| p[j]).collect::<Vec<_>>())).collect();
    let coords = x
        .points()
        .flat_map(|p| {
            p.iter().zip(&stats).map(|(v, &(m, s))| {
                let s = if s > 1e-12 * (1.0 + m.abs()) { s } else { 1.0 };
                (v - m) / s
            })
        })
        .collect();
    PointCloud::from_parts(d, coords, x.labels().map(<[String]>::to_vec))
}

pub fn rfe_select(x: &PointCloud, n_keep: usize) -> Result<RfeResult> {
    rfe_select_with(x, n_keep, &LogRegParams::default())
}

/// Repeatedly fits a logistic regression on the surviving (standardized)
/// features and drops the one whose weight column has the smallest norm.
/// Exact ties drop the higher original index.
pub fn rfe_select_with(x: &PointCloud, n_keep: usize, params: &LogRegParams) -> Result<RfeResult> {
    let d = x.dim();
    if n_keep == 0 || n_keep > d {
        return Err(Error::InvalidArgument(format!("n_keep {n_keep} outside 1..={d}")));
    }
    let z = standardize(x);
    let mut alive: Vec<usize> = (0..d).collect();
    let mut ranking = vec![1; d];
    let mut rank = d - n_keep + 1;
    while alive.len() > n_keep {
        let model = logreg_fit(&z.select_features(&alive)?, params)?;
        let scores = model.feature_scores();
        let mut worst = 0;
        for (i, s) in scores.iter().enumerate() {
            if *s <= scores[worst] {
                worst = i;
            }
        }
        ranking[alive[worst]] = rank;
        rank -= 1;
        alive.remove(worst);
    }
    Ok(RfeResult { kept: alive, ranking })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keep_all_is_identity() {
        let x = PointCloud::from_rows(&[[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]])
            .unwrap()
            .with_labels(["A", "B", "A"])
            .unwrap();
        let r = rfe_select(&x, 2).unwrap();
        assert_eq!(r.kept, vec![0, 1]);
        assert_eq!(r.ranking, vec![1, 1]);
        assert!(rfe_select(&x, 0).is_err());
        assert!(rfe_select(&x, 3).is_err());
    }

    #[test]
    fn constant_feature_dropped_first() {
        let x = PointCloud::from_rows(&[[5.0, -1.0, 0.1], [5.0, 1.0, -0.2], [5.0, -1.1, 0.3], [5.0, 0.9, 0.0]])
            .unwrap()
            .with_labels(["A", "B", "A", "B"])
            .unwrap();
        let r = rfe_select(&x, 1).unwrap();
        assert_eq!(r.kept, vec![1]);
        assert_eq!(r.ranking[0], 3);
        assert_eq!(r.ranking[2], 2);
        assert_eq!(r.to_json().unwrap(), r#"{"kept":[1],"ranking":[3,1,2]}"#);
    }
}
