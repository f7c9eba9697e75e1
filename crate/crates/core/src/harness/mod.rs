//! Experiment orchestration: synthetic data, the repeated train/test
//! protocol, dimension sweeps and SVG output.

pub mod config;
pub mod eval;
pub mod plot;
pub mod synth;

pub use config::{ClassifierKind, EvalConfig, Reduction};
pub use eval::{
    derive_seed, evaluate, predict_all, repetition_splits, stratified_split, sweep_dimensions, EvalReport, Repetition,
    Split, SweepReport, DEFAULT_SWEEP_DIMS,
};
pub use plot::{diagram_svg, plot_svg, render_svg, silhouettes_svg, sweep_svg, PlotObject};
pub use synth::{shuffle_labels, simplex_vertices, synth_blobs, synth_embedded, synth_informative, EmbeddedParams};
