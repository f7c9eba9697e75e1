use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ClassifierKind, EvalConfig, Reduction};
use crate::classifier::{nn1_classify, TopoModel};
use crate::error::{Error, Result};
use crate::pointcloud::{mean_std, PointCloud};
use crate::reduction::{pca_fit, rfe_select};

/// splitmix64 step; derives independent sub-seeds from one seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Train/test indices of one stratified split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Per class: shuffle, put `round(n_c * test_fraction)` points (at least one)
/// in the test set, keep at least two for training.
pub fn stratified_split(data: &PointCloud, test_fraction: f64, seed: u64) -> Result<Split> {
    let classes = data.classes();
    if classes.is_empty() {
        return Err(Error::Unlabeled);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for c in &classes {
        let mut idx = data.indices_of(c);
        let n = idx.len();
        let n_test = ((n as f64 * test_fraction).round() as usize).max(1);
        if n < n_test + 2 {
            return Err(Error::ClassTooSmall {
                label: c.clone(),
                count: n,
                needed: n_test + 2,
            });
        }
        idx.shuffle(&mut rng);
        test.extend_from_slice(&idx[..n_test]);
        train.extend_from_slice(&idx[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}

/// What the reduction step produced on one repetition.
#[derive(Clone, Debug, Default)]
struct Reduced {
    train: Option<PointCloud>,
    test: Option<PointCloud>,
    cumulative_variance: Option<f64>,
    kept: Option<Vec<usize>>,
}

fn reduce(train: &PointCloud, test: &PointCloud, reduction: Reduction) -> Result<Reduced> {
    match reduction {
        Reduction::Raw => Ok(Reduced::default()),
        Reduction::Pca(k) => {
            let model = pca_fit(train, k)?;
            Ok(Reduced {
                train: Some(model.transform(train)?),
                test: Some(model.transform(test)?),
                cumulative_variance: Some(model.cumulative_explained_variance()),
                kept: None,
            })
        }
        Reduction::Rfe(k) => {
            let kept = rfe_select(train, k)?.kept;
            Ok(Reduced {
                train: Some(train.select_features(&kept)?),
                test: Some(test.select_features(&kept)?),
                cumulative_variance: None,
                kept: Some(kept),
            })
        }
    }
}

/// Predicted labels for every test point.
pub fn predict_all(kind: ClassifierKind, train: &PointCloud, test: &PointCloud) -> Result<Vec<String>> {
    match kind {
        ClassifierKind::Topo => {
            let model = TopoModel::fit(train)?;
            (0..test.len())
                .into_par_iter()
                .map(|i| model.classify(test.point(i)).map(|p| p.label))
                .collect()
        }
        ClassifierKind::Nn1 => (0..test.len())
            .into_par_iter()
            .map(|i| nn1_classify(train, test.point(i)))
            .collect(),
    }
}

/// Outcome of a single repetition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Repetition {
    pub accuracy: f64,
    /// `confusion[true][predicted]`, classes in declaration order.
    pub confusion: Vec<Vec<usize>>,
    pub cumulative_variance: Option<f64>,
    pub kept_features: Option<Vec<usize>>,
}

pub(crate) fn run_repetition(
    data: &PointCloud,
    classes: &[String],
    split: &Split,
    reduction: Reduction,
    classifier: ClassifierKind,
) -> Result<Repetition> {
    let train = data.select(&split.train);
    let test = data.select(&split.test);
    let reduced = reduce(&train, &test, reduction)?;
    let (train_r, test_r) = (
        reduced.train.as_ref().unwrap_or(&train),
        reduced.test.as_ref().unwrap_or(&test),
    );
    let predicted = predict_all(classifier, train_r, test_r)?;
    let position = |l: &str| classes.iter().position(|c| c == l).expect("known class");
    let mut confusion = vec![vec![0usize; classes.len()]; classes.len()];
    let truth = test.labels().expect("labeled");
    for (t, p) in truth.iter().zip(&predicted) {
        confusion[position(t)][position(p)] += 1;
    }
    let correct: usize = (0..classes.len()).map(|i| confusion[i][i]).sum();
    Ok(Repetition {
        accuracy: correct as f64 / test.len() as f64,
        confusion,
        cumulative_variance: reduced.cumulative_variance,
        kept_features: reduced.kept,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub config: EvalConfig,
    pub classes: Vec<String>,
    /// Training and test points per class in every repetition.
    pub train_per_class: Vec<usize>,
    pub test_per_class: Vec<usize>,
    pub accuracies: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation over repetitions.
    pub std: f64,
    /// Confusion counts summed over repetitions, `[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    pub chance_level: f64,
    /// Cumulative explained variance of the kept components, per repetition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explained_variance: Option<Vec<f64>>,
    /// Features kept by elimination, per repetition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kept_features: Option<Vec<Vec<usize>>>,
}

impl EvalReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Splits of every repetition; they depend only on the data, the test
/// fraction and the seed, so all classifiers and reductions share them.
pub fn repetition_splits(data: &PointCloud, cfg: &EvalConfig) -> Result<Vec<Split>> {
    (0..cfg.repetitions)
        .map(|r| stratified_split(data, cfg.test_fraction, derive_seed(cfg.seed, r as u64)))
        .collect()
}

pub fn evaluate(data: &PointCloud, cfg: &EvalConfig) -> Result<EvalReport> {
    cfg.validate()?;
    if data.labels().is_none() {
        return Err(Error::Unlabeled);
    }
    let classes = data.classes();
    if classes.len() < 2 {
        return Err(Error::TooFewClasses(classes.len()));
    }
    let splits = repetition_splits(data, cfg)?;
    let reps = splits
        .iter()
        .map(|s| run_repetition(data, &classes, s, cfg.reduction, cfg.classifier))
        .collect::<Result<Vec<_>>>()?;

    let count = |idx: &[usize]| -> Vec<usize> {
        classes
            .iter()
            .map(|c| idx.iter().filter(|&&i| data.label(i) == Some(c.as_str())).count())
            .collect()
    };
    let accuracies: Vec<f64> = reps.iter().map(|r| r.accuracy).collect();
    let (mean, std) = mean_std(&accuracies);
    let mut confusion = vec![vec![0; classes.len()]; classes.len()];
    for r in &reps {
        for (row, add) in confusion.iter_mut().zip(&r.confusion) {
            row.iter_mut().zip(add).for_each(|(a, b)| *a += b);
        }
    }
    let explained_variance = reps.iter().map(|r| r.cumulative_variance).collect::<Option<Vec<_>>>();
    let kept_features = reps.iter().map(|r| r.kept_features.clone()).collect::<Option<Vec<_>>>();
    Ok(EvalReport {
        config: cfg.clone(),
        train_per_class: count(&splits[0].train),
        test_per_class: count(&splits[0].test),
        chance_level: 1.0 / classes.len() as f64,
        classes,
        accuracies,
        mean,
        std,
        confusion,
        explained_variance,
        kept_features,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: EvalConfig,
    pub dims: Vec<usize>,
    /// `accuracies[i][r]`: dimension `dims[i]`, repetition `r`.
    pub accuracies: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    /// Mean cumulative explained variance per dimension (PCA sweeps).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cumulative_variance: Option<Vec<f64>>,
    /// `kept_features[i][r]` (RFE sweeps).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kept_features: Option<Vec<Vec<Vec<usize>>>>,
}

impl SweepReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub const DEFAULT_SWEEP_DIMS: std::ops::RangeInclusive<usize> = 2..=10;

/// Runs the protocol of `cfg` once per target dimension, replacing the
/// component count of its reduction. Every dimension reuses the same splits.
pub fn sweep_dimensions(data: &PointCloud, cfg: &EvalConfig, dims: &[usize]) -> Result<SweepReport> {
    cfg.validate()?;
    if cfg.reduction == Reduction::Raw {
        return Err(Error::Config("a sweep needs reduction pca:k or rfe:k".into()));
    }
    if dims.is_empty() {
        return Err(Error::InvalidArgument("no sweep dimensions".into()));
    }
    if let Some(&k) = dims.iter().find(|&&k| k == 0 || k > data.dim()) {
        return Err(Error::InvalidArgument(format!(
            "sweep dimension {k} outside 1..={}",
            data.dim()
        )));
    }
    if data.labels().is_none() {
        return Err(Error::Unlabeled);
    }
    let classes = data.classes();
    if classes.len() < 2 {
        return Err(Error::TooFewClasses(classes.len()));
    }
    let splits = repetition_splits(data, cfg)?;
    let k_min = *dims.iter().min().expect("nonempty");

    // Elimination is greedy, so the kept set for every k is a prefix of one
    // elimination run down to the smallest k.
    let rankings: Option<Vec<Vec<usize>>> = match cfg.reduction {
        Reduction::Rfe(_) => Some(
                splits
                    .par_iter()
                    .map(|s| rfe_select(&data.select(&s.train), k_min).map(|r| r.ranking))
                .collect::<Result<_>>()?,
        ),
        _ => None,
    };

    let per_dim: Vec<Vec<Repetition>> = dims
        .par_iter()
        .map(|&k| {
            splits
                .iter()
                .enumerate()
                .map(|(r, s)| match &rankings {
                    Some(rk) => {
                        let kept: Vec<usize> = (0..data.dim()).filter(|&j| rk[r][j] <= k - k_min + 1).collect();
                        let projected = data.select_features(&kept)?;
                        let mut rep = run_repetition(&projected, &classes, s, Reduction::Raw, cfg.classifier)?;
                        rep.kept_features = Some(kept);
                        Ok(rep)
                    }
                    None => run_repetition(data, &classes, s, cfg.reduction.with_k(k), cfg.classifier),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let accuracies: Vec<Vec<f64>> = per_dim
        .iter()
        .map(|reps| reps.iter().map(|r| r.accuracy).collect())
        .collect();
    let (mean, std) = accuracies.iter().map(|a| mean_std(a)).unzip();
    let cumulative_variance = per_dim
        .iter()
        .map(|reps| {
            let v = reps.iter().map(|r| r.cumulative_variance).collect::<Option<Vec<f64>>>()?;
            Some(v.iter().sum::<f64>() / v.len() as f64)
        })
        .collect::<Option<Vec<_>>>();
    let kept_features = per_dim
        .iter()
        .map(|reps| reps.iter().map(|r| r.kept_features.clone()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>();
    Ok(SweepReport {
        config: cfg.clone(),
        dims: dims.to_vec(),
        accuracies,
        mean,
        std,
        cumulative_variance,
        kept_features,
    })
}
