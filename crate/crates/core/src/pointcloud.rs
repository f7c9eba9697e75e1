//! Point clouds in R^d, their Euclidean distance matrices, and the row-level
//! cleaning steps applied before classification (norm-based outlier removal
//! and z-scoring against a reference subset).

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of points in R^d, optionally labeled.
///
/// Coordinates are stored row-major in a single buffer. Labels, when present,
/// are kept one per point; the order in which distinct labels first appear is
/// the class declaration order used for every tie-break downstream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl PointCloud {
    /// Builds an unlabeled cloud from a flat row-major buffer.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCloud("dimension must be at least 1".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidCloud(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidCloud(format!(
                "non-finite coordinate in point {}",
                i / dim
            )));
        }
        Ok(Self {
            dim,
            coords,
            labels: None,
        })
    }

    /// Builds an unlabeled cloud from rows. Fails on an empty slice since the
    /// dimension cannot be inferred.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().ok_or(Error::EmptyCloud)?.as_ref().len();
        let mut coords = Vec::with_capacity(dim * rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::InvalidCloud(format!(
                    "point {i} has dimension {}, expected {dim}",
                    row.len()
                )));
            }
            coords.extend_from_slice(row);
        }
        Self::new(dim, coords)
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    /// Attaches one label per point.
    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.len() {
            return Err(Error::InvalidCloud(format!(
                "{} labels for {} points",
                labels.len(),
                self.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[i].as_str())
    }

    /// Distinct labels in order of first appearance.
    pub fn classes(&self) -> Vec<String> {
        let mut seen = Vec::<String>::new();
        if let Some(labels) = &self.labels {
            for l in labels {
                if !seen.contains(l) {
                    seen.push(l.clone());
                }
            }
        }
        seen
    }

    /// Indices of the points carrying `label`.
    pub fn indices_of(&self, label: &str) -> Vec<usize> {
        match &self.labels {
            Some(labels) => labels
                .iter()
                .enumerate()
                .filter(|(_, l)| l.as_str() == label)
                .map(|(i, _)| i)
                .collect(),
            None => Vec::new(),
        }
    }

    /// Sub-cloud of the given points, labels carried along.
    pub fn select(&self, indices: &[usize]) -> PointCloud {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud {
            dim: self.dim,
            coords,
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i].clone()).collect()),
        }
    }

    /// Keeps only the listed coordinates, in the listed order.
    pub fn select_features(&self, features: &[usize]) -> Result<PointCloud> {
        if features.is_empty() {
            return Err(Error::InvalidArgument("no features selected".into()));
        }
        if let Some(&bad) = features.iter().find(|&&f| f >= self.dim) {
            return Err(Error::InvalidArgument(format!(
                "feature {bad} out of range for dimension {}",
                self.dim
            )));
        }
        let coords = self
            .points()
            .flat_map(|p| features.iter().map(move |&f| p[f]))
            .collect();
        Ok(PointCloud {
            dim: features.len(),
            coords,
            labels: self.labels.clone(),
        })
    }

    pub(crate) fn from_parts(dim: usize, coords: Vec<f64>, labels: Option<Vec<String>>) -> Self {
        debug_assert!(dim > 0 && coords.len().is_multiple_of(dim));
        PointCloud {
            dim,
            coords,
            labels,
        }
    }

    /// Writes the cloud as CSV with a header `x0,..,x{d-1}[,label]`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (0..self.dim).map(|j| format!("x{j}")).collect();
        if self.labels.is_some() {
            header.push("label".into());
        }
        w.write_record(&header)?;
        for (i, p) in self.points().enumerate() {
            let mut record: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            if let Some(l) = self.label(i) {
                record.push(l.to_string());
            }
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }
}

/// Euclidean distance between two equal-length coordinate slices.
#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Dense symmetric matrix of pairwise Euclidean distances.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps a row-major n×n buffer, checking symmetry, zero diagonal and
    /// nonnegativity.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                let v = entries[i * n + j];
                if !(v >= 0.0 && v.is_finite()) || v != entries[j * n + i] {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({i},{j}) is negative, non-finite or asymmetric"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

pub fn pairwise_distances(cloud: &PointCloud) -> Result<DistanceMatrix> {
    let n = cloud.len();
    if n == 0 {
        return Err(Error::EmptyCloud);
    }
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        let p = cloud.point(i);
        for j in (i + 1)..n {
            let d = euclidean(p, cloud.point(j));
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    Ok(DistanceMatrix { n, entries })
}

/// Mean and population standard deviation.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Drops points whose norm deviates from the mean norm by more than
/// `k` population standard deviations. Statistics come from the input cloud.
pub fn remove_outliers(cloud: &PointCloud, k: f64) -> Result<PointCloud> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!("outlier threshold {k} must be positive")));
    }
    let norms: Vec<f64> = cloud
        .points()
        .map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let (mean, std) = mean_std(&norms);
    let keep: Vec<usize> = norms
        .iter()
        .enumerate()
        .filter(|(_, &n)| (n - mean).abs() <= k * std)
        .map(|(i, _)| i)
        .collect();
    Ok(cloud.select(&keep))
}

/// Per-coordinate standardization against the statistics of `reference`.
pub fn zscore(cloud: &PointCloud, reference: &PointCloud) -> Result<PointCloud> {
    if reference.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if reference.dim() != cloud.dim() {
        return Err(Error::DimensionMismatch {
            expected: reference.dim(),
            found: cloud.dim(),
        });
    }
    let dim = reference.dim();
    let mut stats = Vec::with_capacity(dim);
    for j in 0..dim {
        let column: Vec<f64> = reference.points().map(|p| p[j]).collect();
        let (mean, std) = mean_std(&column);
        if std <= 1e-12 * (1.0 + mean.abs()) {
            return Err(Error::ZeroVariance { coordinate: j });
        }
        stats.push((mean, std));
    }
    let coords = cloud
        .points()
        .flat_map(|p| p.iter().zip(&stats).map(|(x, (m, s))| (x - m) / s))
        .collect();
    Ok(PointCloud::from_parts(dim, coords, cloud.labels.clone()))
}

/// Reads a cloud from CSV text. `label_column` is a zero-based column index
/// whose cells become labels rather than coordinates.
pub fn read_csv<R: Read>(reader: R, has_header: bool, label_column: Option<usize>) -> Result<PointCloud> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut expected: Option<usize> = None;
    let mut coords = Vec::new();
    let mut labels = Vec::new();
    let mut dim = 0;
    for record in rdr.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        let width = *expected.get_or_insert(record.len());
        if record.len() != width {
            return Err(Error::RaggedRow {
                row,
                expected: width,
                found: record.len(),
            });
        }
        if let Some(lc) = label_column {
            if lc >= width {
                return Err(Error::InvalidArgument(format!(
                    "label column {lc} out of range for {width} columns"
                )));
            }
        }
        dim = width - usize::from(label_column.is_some());
        for (column, cell) in record.iter().enumerate() {
            if Some(column) == label_column {
                labels.push(cell.to_string());
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column,
                cell: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    column,
                    cell: cell.to_string(),
                });
            }
            coords.push(v);
        }
    }
    if expected.is_none() {
        return Err(Error::EmptyCloud);
    }
    if dim == 0 {
        return Err(Error::InvalidCloud("no coordinate columns".into()));
    }
    let cloud = PointCloud::new(dim, coords)?;
    if label_column.is_some() {
        cloud.with_labels(labels)
    } else {
        Ok(cloud)
    }
}

pub fn load_csv(path: impl AsRef<Path>, has_header: bool, label_column: Option<usize>) -> Result<PointCloud> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(std::io::BufReader::new(file), has_header, label_column)
}
