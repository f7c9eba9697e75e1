//! Dimensionality reduction applied after feature extraction: principal
//! component analysis, and recursive feature elimination driven by a
//! multinomial logistic regression.

mod logreg;
mod pca;
mod rfe;

pub use logreg::{logreg_fit, logreg_fit_traced, LogRegModel, LogRegParams};
pub use pca::{pca_fit, pca_transform, PcaModel};
pub use rfe::{rfe_select, rfe_select_with, RfeResult};
