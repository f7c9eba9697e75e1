//! Synthetic labeled clouds standing in for recorded feature matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::pointcloud::PointCloud;

/// Per-direction decay of the noise standard deviation outside the class
/// subspace of [`synth_embedded`].
pub const NOISE_DECAY: f64 = 0.8;

fn class_label(c: usize) -> String {
    format!("c{c}")
}

/// Vertices of a regular simplex with edge `separation`, expressed in the
/// Helmert basis of its affine hull: `k` vertices in `k - 1` coordinates.
pub fn simplex_vertices(k: usize, separation: f64) -> Vec<Vec<f64>> {
    let scale = separation / std::f64::consts::SQRT_2;
    (0..k)
        .map(|i| {
            (1..k)
                .map(|m| {
                    let norm = ((m * (m + 1)) as f64).sqrt();
                    let h = match i.cmp(&m) {
                        std::cmp::Ordering::Less => 1.0,
                        std::cmp::Ordering::Equal => -(m as f64),
                        std::cmp::Ordering::Greater => 0.0,
                    };
                    scale * h / norm
                })
                .collect()
        })
        .collect()
}

/// Isotropic Gaussian blobs whose means sit on a regular simplex with edge
/// `separation`. Points are grouped by class, labels `c0, c1, ...`.
pub fn synth_blobs(
    n_classes: usize,
    n_per_class: usize,
    dim: usize,
    separation: f64,
    sigma: f64,
    seed: u64,
) -> Result<PointCloud> {
    if n_classes < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 classes, got {n_classes}")));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if n_classes > dim + 1 {
        return Err(Error::InvalidArgument(format!(
            "{n_classes} simplex vertices do not fit in dimension {dim}; use dim >= {}",
            n_classes - 1
        )));
    }
    if !(sigma >= 0.0 && separation >= 0.0) {
        return Err(Error::InvalidArgument("sigma and separation must be nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let means = simplex_vertices(n_classes, separation);
    let mut coords = Vec::with_capacity(n_classes * n_per_class * dim);
    let mut labels = Vec::with_capacity(n_classes * n_per_class);
    for (c, mean) in means.iter().enumerate() {
        for _ in 0..n_per_class {
            for j in 0..dim {
                let centre = mean.get(j).copied().unwrap_or(0.0);
                let z: f64 = StandardNormal.sample(&mut rng);
                coords.push(centre + sigma * z);
            }
            labels.push(class_label(c));
        }
    }
    PointCloud::new(dim, coords)?.with_labels(labels)
}

/// Parameters of [`synth_embedded`].
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedParams {
    pub intrinsic_dim: usize,
    pub ambient_dim: usize,
    pub n_classes: usize,
    pub n_per_class: usize,
    /// Standard deviation of the first noise direction; direction `j` gets
    /// `noise * 0.8^j`.
    pub noise: f64,
    /// Distance between class means inside the class subspace.
    pub separation: f64,
    /// Within-class standard deviation inside the class subspace.
    pub sigma: f64,
    pub seed: u64,
}

impl EmbeddedParams {
    pub fn new(intrinsic_dim: usize, ambient_dim: usize, n_classes: usize, n_per_class: usize, noise: f64, seed: u64) -> Self {
        Self {
            intrinsic_dim,
            ambient_dim,
            n_classes,
            n_per_class,
            noise,
            separation: 4.0,
            sigma: 1.0,
            seed,
        }
    }
}

/// Random orthonormal basis of R^d (rows), by Gram-Schmidt on Gaussian rows.
pub(crate) fn random_orthonormal(d: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    while basis.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

/// Separated blobs inside a random `intrinsic_dim`-dimensional subspace of
/// R^`ambient_dim`, plus label-independent Gaussian noise along the remaining
/// directions with geometrically decaying standard deviation.
///
/// Class means sit on a regular simplex spread over the first
/// `min(n_classes - 1, intrinsic_dim)` subspace directions.
pub fn synth_embedded(p: &EmbeddedParams) -> Result<PointCloud> {
    if p.intrinsic_dim == 0 || p.intrinsic_dim >= p.ambient_dim {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= intrinsic_dim ({}) < ambient_dim ({})",
            p.intrinsic_dim, p.ambient_dim
        )));
    }
    if p.n_classes < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 classes, got {}", p.n_classes)));
    }
    if p.n_classes > p.intrinsic_dim + 1 {
        return Err(Error::InvalidArgument(format!(
            "{} classes do not fit on a simplex in {} intrinsic dimensions",
            p.n_classes, p.intrinsic_dim
        )));
    }
    if !(p.noise >= 0.0 && p.sigma >= 0.0) {
        return Err(Error::InvalidArgument("noise and sigma must be nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let basis = random_orthonormal(p.ambient_dim, &mut rng);
    let (signal, noise_dirs) = basis.split_at(p.intrinsic_dim);
    let means = simplex_vertices(p.n_classes, p.separation);

    let d = p.ambient_dim;
    let mut coords = Vec::with_capacity(p.n_classes * p.n_per_class * d);
    let mut labels = Vec::with_capacity(p.n_classes * p.n_per_class);
    for (c, mean) in means.iter().enumerate() {
        for _ in 0..p.n_per_class {
            let mut x = vec![0.0; d];
            for (k, dir) in signal.iter().enumerate() {
                let z: f64 = StandardNormal.sample(&mut rng);
                let a = mean.get(k).copied().unwrap_or(0.0) + p.sigma * z;
                x.iter_mut().zip(dir).for_each(|(xi, di)| *xi += a * di);
            }
            for (j, dir) in noise_dirs.iter().enumerate() {
                let z: f64 = StandardNormal.sample(&mut rng);
                let a = p.noise * NOISE_DECAY.powi(j as i32) * z;
                x.iter_mut().zip(dir).for_each(|(xi, di)| *xi += a * di);
            }
            coords.extend(x);
            labels.push(class_label(c));
        }
    }
    PointCloud::new(d, coords)?.with_labels(labels)
}

/// Data whose first `n_informative` features separate the classes and whose
/// remaining features are independent standard Gaussian noise.
pub fn synth_informative(
    n_classes: usize,
    n_per_class: usize,
    n_features: usize,
    n_informative: usize,
    separation: f64,
    seed: u64,
) -> Result<PointCloud> {
    if n_informative == 0 || n_informative > n_features {
        return Err(Error::InvalidArgument(format!(
            "n_informative {n_informative} outside 1..={n_features}"
        )));
    }
    let informative = synth_blobs(n_classes, n_per_class, n_informative, separation, 1.0, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e_ed0f_5eed);
    let mut coords = Vec::with_capacity(informative.len() * n_features);
    for p in informative.points() {
        coords.extend_from_slice(p);
        for _ in n_informative..n_features {
            coords.push(StandardNormal.sample(&mut rng));
        }
    }
    let labels = informative.labels().expect("labeled").to_vec();
    PointCloud::new(n_features, coords)?.with_labels(labels)
}

/// Same points, labels permuted uniformly at random.
pub fn shuffle_labels(data: &PointCloud, seed: u64) -> Result<PointCloud> {
    use rand::seq::SliceRandom;
    let mut labels = data.labels().ok_or(Error::Unlabeled)?.to_vec();
    labels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    data.clone().with_labels(labels)
}
