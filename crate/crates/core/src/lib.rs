//! Topological classification of labeled point clouds: dimension-0
//! persistence under single-point perturbation, summarized by silhouettes and
//! compared per class, with the surrounding dimensionality reduction, signal
//! filtering and evaluation harness.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod error;
pub mod harness;
pub mod persistence;
pub mod pointcloud;
pub mod reduction;
pub mod signal;
pub mod summaries;

pub use classifier::{classify, fit, nn1_classify, Prediction, TopoModel};
pub use error::{Error, Result};
pub use harness::{evaluate, sweep_dimensions, EvalConfig, EvalReport, SweepReport};
pub use persistence::{bottleneck, h0_add_point, h0_diagram, vr_diagrams, H0State, PersistenceDiagram, VrParams};
pub use pointcloud::{load_csv, pairwise_distances, read_csv, remove_outliers, zscore, DistanceMatrix, PointCloud};
pub use reduction::{logreg_fit, pca_fit, pca_transform, rfe_select, LogRegModel, LogRegParams, PcaModel, RfeResult};
pub use signal::{butterworth_bandpass, extract_features, mean_abs_feature, notch, BandSpec, FilterChain, TimeSeries};
pub use summaries::{landscape, l2_distance, make_grid, silhouette, tent, Grid, SummaryVector};
