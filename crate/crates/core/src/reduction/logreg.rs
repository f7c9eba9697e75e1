use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointcloud::PointCloud;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRegParams {
    pub learning_rate: f64,
    pub iterations: usize,
    /// Coefficient of `‖W‖² / 2`; the bias is not penalized.
    pub l2: f64,
    /// Stop once every gradient entry is below this in magnitude.
    pub tolerance: f64,
}

impl Default for LogRegParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            iterations: 500,
            l2: 1e-4,
            tolerance: 1e-10,
        }
    }
}

/// Multinomial logistic regression, one weight row per class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub classes: Vec<String>,
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub params: LogRegParams,
}

impl LogRegModel {
    pub fn n_features(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.classes.len()];
        softmax_into(&self.weights, &self.bias, x, &mut out);
        out
    }

    pub fn predict(&self, x: &[f64]) -> &str {
        let p = self.predict_proba(x);
        let best = p
            .iter()
            .enumerate()
            .fold(0, |b, (i, v)| if *v > p[b] { i } else { b });
        &self.classes[best]
    }

    /// Euclidean norm of each feature's weight column across classes.
    pub fn feature_scores(&self) -> Vec<f64> {
        (0..self.n_features())
            .map(|j| self.weights.iter().map(|w| w[j] * w[j]).sum::<f64>().sqrt())
            .collect()
    }
}

fn softmax_into(weights: &[Vec<f64>], bias: &[f64], x: &[f64], out: &mut [f64]) {
    for ((o, w), b) in out.iter_mut().zip(weights).zip(bias) {
        *o = b + w.iter().zip(x).map(|(a, c)| a * c).sum::<f64>();
    }
    let max = out.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    for o in out.iter_mut() {
        *o = (*o - max).exp();
        z += *o;
    }
    out.iter_mut().for_each(|o| *o /= z);
}

fn objective(weights: &[Vec<f64>], bias: &[f64], x: &PointCloud, targets: &[usize], l2: f64) -> f64 {
    let mut probs = vec![0.0; bias.len()];
    let mut ce = 0.0;
    for (p, &t) in x.points().zip(targets) {
        softmax_into(weights, bias, p, &mut probs);
        ce -= probs[t].max(f64::MIN_POSITIVE).ln();
    }
    let penalty: f64 = weights.iter().flatten().map(|w| w * w).sum();
    ce / x.len() as f64 + 0.5 * l2 * penalty
}

/// Full-batch gradient descent from zero weights. Returns the model and the
/// objective value before each step plus the final one.
pub fn logreg_fit_traced(x: &PointCloud, params: &LogRegParams) -> Result<(LogRegModel, Vec<f64>)> {
    let labels = x.labels().ok_or(Error::Unlabeled)?;
    let classes = x.classes();
    if classes.len() < 2 {
        return Err(Error::TooFewClasses(classes.len()));
    }
    let targets: Vec<usize> = labels
        .iter()
        .map(|l| classes.iter().position(|c| c == l).expect("label listed"))
        .collect();
    let (n, d, k) = (x.len() as f64, x.dim(), classes.len());

    let mut weights = vec![vec![0.0; d]; k];
    let mut bias = vec![0.0; k];
    let mut grad_w = vec![vec![0.0; d]; k];
    let mut grad_b = vec![0.0; k];
    let mut probs = vec![0.0; k];
    let mut trace = Vec::with_capacity(params.iterations + 1);

    for _ in 0..params.iterations {
        trace.push(objective(&weights, &bias, x, &targets, params.l2));
        grad_w.iter_mut().flatten().for_each(|g| *g = 0.0);
        grad_b.iter_mut().for_each(|g| *g = 0.0);
        for (p, &t) in x.points().zip(&targets) {
            softmax_into(&weights, &bias, p, &mut probs);
            for c in 0..k {
                let r = probs[c] - if c == t { 1.0 } else { 0.0 };
                grad_b[c] += r;
                for (g, v) in grad_w[c].iter_mut().zip(p) {
                    *g += r * v;
                }
            }
        }
        let mut largest = 0.0f64;
        for c in 0..k {
            grad_b[c] /= n;
            largest = largest.max(grad_b[c].abs());
            for (g, w) in grad_w[c].iter_mut().zip(&weights[c]) {
                *g = *g / n + params.l2 * w;
                largest = largest.max(g.abs());
            }
        }
        if largest < params.tolerance {
            break;
        }
        for c in 0..k {
            bias[c] -= params.learning_rate * grad_b[c];
            for (w, g) in weights[c].iter_mut().zip(&grad_w[c]) {
                *w -= params.learning_rate * g;
            }
        }
    }
    trace.push(objective(&weights, &bias, x, &targets, params.l2));
    if weights.iter().flatten().any(|w| !w.is_finite()) {
        return Err(Error::InvalidArgument("logistic regression diverged; lower the learning rate".into()));
    }
    Ok((
        LogRegModel {
            classes,
            weights,
            bias,
            params: *params,
        },
        trace,
    ))
}

pub fn logreg_fit(x: &PointCloud, params: &LogRegParams) -> Result<LogRegModel> {
    logreg_fit_traced(x, params).map(|(m, _)| m)
}
