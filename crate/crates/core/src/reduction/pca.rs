use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointcloud::PointCloud;

/// Principal directions of a cloud, ordered by decreasing variance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// One orthonormal direction per row.
    pub components: Vec<Vec<f64>>,
    /// Variance along each kept direction.
    pub explained_variance: Vec<f64>,
    /// Share of the total variance captured by each kept direction.
    pub explained_variance_ratio: Vec<f64>,
}

impl PcaModel {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn cumulative_explained_variance(&self) -> f64 {
        self.explained_variance_ratio.iter().sum()
    }

    pub fn transform(&self, x: &PointCloud) -> Result<PointCloud> {
        pca_transform(self, x)
    }

    /// Maps projected coordinates back into the original space.
    pub fn inverse_transform(&self, y: &PointCloud) -> Result<PointCloud> {
        if y.dim() != self.n_components() {
            return Err(Error::DimensionMismatch {
                expected: self.n_components(),
                found: y.dim(),
            });
        }
        let mut coords = Vec::with_capacity(y.len() * self.dim());
        for p in y.points() {
            let mut row = self.mean.clone();
            for (c, comp) in p.iter().zip(&self.components) {
                for (r, v) in row.iter_mut().zip(comp) {
                    *r += c * v;
                }
            }
            coords.extend(row);
        }
        Ok(PointCloud::from_parts(self.dim(), coords, y.labels().map(<[String]>::to_vec)))
    }
}

/// Centered covariance with the `n - 1` normalization.
pub(crate) fn covariance(x: &PointCloud) -> (Vec<f64>, DMatrix<f64>) {
    let (n, d) = (x.len(), x.dim());
    let mut mean = vec![0.0; d];
    for p in x.points() {
        for (m, v) in mean.iter_mut().zip(p) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut cov = DMatrix::<f64>::zeros(d, d);
    for p in x.points() {
        for i in 0..d {
            let ci = p[i] - mean[i];
            for j in i..d {
                cov[(i, j)] += ci * (p[j] - mean[j]);
            }
        }
    }
    let denom = (n - 1) as f64;
    for i in 0..d {
        for j in i..d {
            let v = cov[(i, j)] / denom;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    (mean, cov)
}

pub fn pca_fit(x: &PointCloud, n_components: usize) -> Result<PcaModel> {
    let (n, d) = (x.len(), x.dim());
    if n < 2 {
        return Err(Error::InvalidArgument(format!("PCA needs at least 2 points, got {n}")));
    }
    if n_components == 0 || n_components > (n - 1).min(d) {
        return Err(Error::InvalidArgument(format!(
            "n_components {n_components} outside 1..={}",
            (n - 1).min(d)
        )));
    }
    let (mean, cov) = covariance(x);
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k].max(0.0)).collect();
    let total: f64 = values.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidArgument("data has zero total variance".into()));
    }
    let components = order[..n_components]
        .iter()
        .map(|&k| {
            let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            // largest-magnitude coordinate made nonnegative
            let pivot = v
                .iter()
                .enumerate()
                .fold(0, |best, (i, x)| if x.abs() > v[best].abs() { i } else { best });
            if v[pivot] < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            v
        })
        .collect();
    let explained_variance = values[..n_components].to_vec();
    let explained_variance_ratio = explained_variance.iter().map(|v| v / total).collect();
    Ok(PcaModel {
        mean,
        components,
        explained_variance,
        explained_variance_ratio,
    })
}

pub fn pca_transform(model: &PcaModel, x: &PointCloud) -> Result<PointCloud> {
    if x.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: x.dim(),
        });
    }
    let k = model.n_components();
    let mut coords = Vec::with_capacity(x.len() * k);
    for p in x.points() {
        for comp in &model.components {
            coords.push(
                p.iter()
                    .zip(&model.mean)
                    .zip(comp)
                    .map(|((v, m), c)| (v - m) * c)
                    .sum(),
            );
        }
    }
    Ok(PointCloud::from_parts(k, coords, x.labels().map(<[String]>::to_vec)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn line_y_equals_x() {
        let x = PointCloud::from_rows(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [-3.0, -3.0]]).unwrap();
        let m = pca_fit(&x, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m.components[0][0].abs() - h).abs() < 1e-12);
        assert!((m.components[0][1].abs() - h).abs() < 1e-12);
        assert!((m.explained_variance_ratio[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isotropic_sample_splits_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rows: Vec<[f64; 2]> = (0..20000)
            .map(|_| [StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)])
            .collect();
        let m = pca_fit(&PointCloud::from_rows(&rows).unwrap(), 2).unwrap();
        for r in &m.explained_variance_ratio {
            assert!((r - 0.5).abs() < 0.02, "{r}");
        }
        assert!((m.cumulative_explained_variance() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn transform_examples() {
        let x = PointCloud::from_rows(&[[1.0, 2.0, 0.0], [3.0, -1.0, 1.0], [0.0, 0.5, 4.0], [2.0, 2.0, 2.0]])
            .unwrap()
            .with_labels(["a", "b", "c", "d"])
            .unwrap();
        let m = pca_fit(&x, 3).unwrap();
        let at_mean = PointCloud::from_rows(std::slice::from_ref(&m.mean)).unwrap();
        let y = pca_transform(&m, &at_mean).unwrap();
        assert!(y.coords().iter().all(|v| v.abs() < 1e-12));

        let y = m.transform(&x).unwrap();
        assert_eq!(y.labels(), x.labels());
        let back = m.inverse_transform(&y).unwrap();
        for (a, b) in back.coords().iter().zip(x.coords()) {
            assert!((a - b).abs() < 1e-8);
        }

        let identity = PcaModel {
            mean: vec![0.0; 2],
            components: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            explained_variance: vec![1.0, 1.0],
            explained_variance_ratio: vec![0.5, 0.5],
        };
        let z = PointCloud::from_rows(&[[3.5, -2.0]]).unwrap();
        assert_eq!(pca_transform(&identity, &z).unwrap(), z);
        assert!(pca_transform(&identity, &x).is_err());
    }

    #[test]
    fn rejects_bad_component_counts() {
        let x = PointCloud::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(pca_fit(&x, 0).is_err());
        assert!(pca_fit(&x, 2).is_err());
        assert!(pca_fit(&x, 1).is_ok());
    }

    #[test]
    fn sign_convention() {
        let x = PointCloud::from_rows(&[[0.0, 0.0], [-1.0, -3.0], [1.0, 3.0], [0.5, 1.4]]).unwrap();
        let m = pca_fit(&x, 2).unwrap();
        for c in &m.components {
            let pivot = c.iter().copied().fold(0.0f64, |a, v| if v.abs() > a.abs() { v } else { a });
            assert!(pivot >= 0.0);
        }
    }
}
