//! The silhouette-perturbation classifier and the nearest-neighbour baseline.
//!
//! Training splits the data by label and stores, per class, the spanning tree
//! of its cloud and the lifetime-weighted dimension-0 silhouette on a grid
//! shared by all classes. A test point is appended to each class cloud in
//! turn; the class whose silhouette moves the least wins.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persistence::{h0_add_point, h0_diagram, H0State};
use crate::pointcloud::{euclidean, pairwise_distances, PointCloud};
use crate::summaries::{l2_distance, make_grid, silhouette, Grid, SummaryVector, DEFAULT_RESOLUTION};

#[derive(Clone, Debug)]
pub struct ClassModel {
    pub label: String,
    pub cloud: PointCloud,
    pub state: H0State,
    pub reference: SummaryVector,
}

/// Fitted classifier. Classes keep their declaration order.
#[derive(Clone, Debug)]
pub struct TopoModel {
    classes: Vec<ClassModel>,
    grid: Grid,
    dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: String,
    /// Silhouette displacement per class, in declaration order.
    pub distances: IndexMap<String, f64>,
}

impl Prediction {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Splits a labeled cloud into per-class clouds, in declaration order.
pub fn split_by_class(train: &PointCloud) -> Result<Vec<(String, PointCloud)>> {
    if train.labels().is_none() {
        return Err(Error::Unlabeled);
    }
    Ok(train
        .classes()
        .into_iter()
        .map(|c| {
            let idx = train.indices_of(&c);
            let cloud = train.select(&idx).without_labels();
            (c, cloud)
        })
        .collect())
}

impl TopoModel {
    pub fn fit(train: &PointCloud) -> Result<Self> {
        Self::fit_with_resolution(train, DEFAULT_RESOLUTION)
    }

    pub fn fit_with_resolution(train: &PointCloud, resolution: usize) -> Result<Self> {
        let split = split_by_class(train)?;
        if split.len() < 2 {
            return Err(Error::TooFewClasses(split.len()));
        }
        let mut fitted = Vec::with_capacity(split.len());
        for (label, cloud) in split {
            if cloud.len() < 2 {
                return Err(Error::ClassTooSmall {
                    label,
                    count: cloud.len(),
                    needed: 2,
                });
            }
            let (diagram, state) = h0_diagram(&pairwise_distances(&cloud)?);
            fitted.push((label, cloud, diagram, state));
        }
        let diagrams: Vec<_> = fitted.iter().map(|f| &f.2).collect();
        let grid = make_grid(&diagrams, resolution).map_err(|_| {
            Error::DegenerateClass(fitted[0].0.clone())
        })?;
        let classes = fitted
            .into_iter()
            .map(|(label, cloud, diagram, state)| {
                let reference = match silhouette(&diagram, &grid) {
                    Ok(s) => s,
                    Err(Error::DegenerateDiagram) => return Err(Error::DegenerateClass(label)),
                    Err(e) => return Err(e),
                };
                Ok(ClassModel {
                    label,
                    cloud,
                    state,
                    reference,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            classes,
            grid,
            dim: train.dim(),
        })
    }

    pub fn classes(&self) -> &[ClassModel] {
        &self.classes
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Silhouette of class `c` with `x` appended, on the model grid.
    pub fn perturbed_silhouette(&self, class: &ClassModel, x: &[f64]) -> Result<SummaryVector> {
        let dists: Vec<f64> = class.cloud.points().map(|p| euclidean(p, x)).collect();
        let diagram = h0_add_point(&class.state, &dists)?;
        silhouette(&diagram, &self.grid)
    }

    pub fn classify(&self, x: &[f64]) -> Result<Prediction> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let mut distances = IndexMap::with_capacity(self.classes.len());
        let mut best: Option<(&str, f64)> = None;
        for class in &self.classes {
            let moved = self.perturbed_silhouette(class, x)?;
            let d = l2_distance(&class.reference, &moved)?;
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((&class.label, d));
            }
            distances.insert(class.label.clone(), d);
        }
        let (label, _) = best.expect("at least two classes");
        Ok(Prediction {
            label: label.to_string(),
            distances,
        })
    }
}

pub fn fit(train: &PointCloud) -> Result<TopoModel> {
    TopoModel::fit(train)
}

pub fn classify(model: &TopoModel, x: &[f64]) -> Result<Prediction> {
    model.classify(x)
}

/// Label of the nearest training point. Exactly equidistant nearest points
/// vote, and a tied vote goes to the class declared first.
pub fn nn1_classify(train: &PointCloud, x: &[f64]) -> Result<String> {
    let labels = train.labels().ok_or(Error::Unlabeled)?;
    if train.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if x.len() != train.dim() {
        return Err(Error::DimensionMismatch {
            expected: train.dim(),
            found: x.len(),
        });
    }
    let dists: Vec<f64> = train.points().map(|p| euclidean(p, x)).collect();
    let nearest = dists.iter().copied().fold(f64::INFINITY, f64::min);
    let mut votes: IndexMap<&str, usize> = IndexMap::new();
    for c in labels {
        votes.entry(c.as_str()).or_insert(0);
    }
    for (d, l) in dists.iter().zip(labels) {
        if *d == nearest {
            *votes.get_mut(l.as_str()).expect("label registered") += 1;
        }
    }
    let mut winner = ("", 0);
    for (l, v) in votes {
        if v > winner.1 {
            winner = (l, v);
        }
    }
    Ok(winner.0.to_string())
}
