use std::f64::consts::PI;

use nalgebra::Complex;

use crate::error::{Error, Result};

type C64 = Complex<f64>;

/// Second-order section with `a[0] == 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 3],
}

impl Biquad {
    /// Frequency response at normalized angular frequency `omega`.
    pub fn response(&self, omega: f64) -> C64 {
        let z1 = C64::from_polar(1.0, -omega);
        let z2 = z1 * z1;
        (self.b[0] + z1 * self.b[1] + z2 * self.b[2]) / (self.a[0] + z1 * self.a[1] + z2 * self.a[2])
    }

    fn scale(&mut self, g: f64) {
        self.b.iter_mut().for_each(|b| *b *= g);
    }
}

/// Cascade of second-order sections.
#[derive(Clone, Debug, PartialEq)]
pub struct Sos {
    pub sections: Vec<Biquad>,
}

impl Sos {
    /// Causal filtering, transposed direct form II per section, zero state.
    pub fn filter(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for s in &self.sections {
            let (mut s1, mut s2) = (0.0, 0.0);
            for v in y.iter_mut() {
                let input = *v;
                let out = s.b[0] * input + s1;
                s1 = s.b[1] * input - s.a[1] * out + s2;
                s2 = s.b[2] * input - s.a[2] * out;
                *v = out;
            }
        }
        y
    }

    pub fn response(&self, omega: f64) -> C64 {
        self.sections.iter().map(|s| s.response(omega)).product()
    }

    /// Magnitude response at `freq` Hz for sampling rate `fs`.
    pub fn gain_at(&self, freq: f64, fs: f64) -> f64 {
        self.response(2.0 * PI * freq / fs).norm()
    }

    /// Expands the cascade into a single numerator/denominator pair.
    pub fn to_transfer_function(&self) -> TransferFunction {
        let mut b = vec![1.0];
        let mut a = vec![1.0];
        for s in &self.sections {
            b = poly_mul(&b, &s.b);
            a = poly_mul(&a, &s.a);
        }
        TransferFunction { b, a }
    }
}

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Rational transfer function in powers of `z^-1`, `a[0] == 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferFunction {
    pub b: Vec<f64>,
    pub a: Vec<f64>,
}

impl TransferFunction {
    /// Direct form I difference equation.
    pub fn filter(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        for n in 0..x.len() {
            let mut acc = 0.0;
            for (k, b) in self.b.iter().enumerate().take(n + 1) {
                acc += b * x[n - k];
            }
            for (k, a) in self.a.iter().enumerate().skip(1).take(n) {
                acc -= a * y[n - k];
            }
            y[n] = acc;
        }
        y
    }
}

/// Left-half-plane poles of the normalized analog Butterworth lowpass.
fn prototype_poles(order: usize) -> Vec<C64> {
    let n = order as f64;
    (0..order)
        .map(|k| C64::from_polar(1.0, PI * (2.0 * k as f64 + n + 1.0) / (2.0 * n)))
        .collect()
}

fn prewarp(freq: f64, fs: f64) -> f64 {
    2.0 * fs * (PI * freq / fs).tan()
}

fn bilinear(s: C64, fs: f64) -> C64 {
    let k = 2.0 * fs;
    (k + s) / (k - s)
}

/// Pairs digital poles into denominators: conjugate pairs first, then any
/// real poles two at a time.
fn pole_sections(poles: &[C64]) -> Vec<[f64; 3]> {
    let scale = poles.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let eps = 1e-10 * scale;
    let mut out = Vec::new();
    let mut reals = Vec::new();
    for p in poles {
        if p.im > eps {
            out.push([1.0, -2.0 * p.re, p.norm_sqr()]);
        } else if p.im.abs() <= eps {
            reals.push(p.re);
        }
    }
    for pair in reals.chunks(2) {
        match pair {
            [r1, r2] => out.push([1.0, -(r1 + r2), r1 * r2]),
            [r] => out.push([1.0, -r, 0.0]),
            _ => unreachable!(),
        }
    }
    out
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidFilter("order must be at least 1".into()));
    }
    Ok(())
}

/// Butterworth bandpass of prototype order `order` (2·order poles), with
/// edges pre-warped so the bilinear map puts -3 dB exactly at `lo` and `hi`.
pub fn butterworth_bandpass_sos(lo: f64, hi: f64, fs: f64, order: usize) -> Result<Sos> {
    check_order(order)?;
    if !(fs > 0.0 && lo > 0.0 && lo < hi && hi < fs / 2.0) {
        return Err(Error::InvalidFilter(format!(
            "band {lo}..{hi} Hz must satisfy 0 < lo < hi < {} (Nyquist)",
            fs / 2.0
        )));
    }
    let (w1, w2) = (prewarp(lo, fs), prewarp(hi, fs));
    let bw = w2 - w1;
    let w0sq = w1 * w2;
    let mut poles = Vec::with_capacity(2 * order);
    for p in prototype_poles(order) {
        let pb = p * bw;
        let root = (pb * pb - 4.0 * w0sq).sqrt();
        poles.push(bilinear((pb + root) * 0.5, fs));
        poles.push(bilinear((pb - root) * 0.5, fs));
    }
    // digital image of the analog center frequency
    let center = 2.0 * (w0sq.sqrt() / (2.0 * fs)).atan();
    let sections = pole_sections(&poles)
        .into_iter()
        .map(|a| {
            let mut s = Biquad { b: [1.0, 0.0, -1.0], a };
            let g = s.response(center).norm();
            s.scale(1.0 / g);
            s
        })
        .collect();
    Ok(Sos { sections })
}

/// Butterworth band-stop centred exactly on `f0` with stop bandwidth `f0 / q`.
pub fn butterworth_notch_sos(f0: f64, fs: f64, order: usize, q: f64) -> Result<Sos> {
    check_order(order)?;
    if !(q > 0.0) {
        return Err(Error::InvalidFilter(format!("quality factor {q} must be positive")));
    }
    let half = f0 / (2.0 * q);
    if !(fs > 0.0 && f0 - half > 0.0 && f0 + half < fs / 2.0) {
        return Err(Error::InvalidFilter(format!(
            "notch at {f0} Hz (Q {q}) does not fit below Nyquist {}",
            fs / 2.0
        )));
    }
    let w0 = prewarp(f0, fs);
    let bw = prewarp(f0 + half, fs) - prewarp(f0 - half, fs);
    let mut poles = Vec::with_capacity(2 * order);
    for p in prototype_poles(order) {
        let c = C64::new(bw, 0.0) / p;
        let root = (c * c - 4.0 * w0 * w0).sqrt();
        poles.push(bilinear((c + root) * 0.5, fs));
        poles.push(bilinear((c - root) * 0.5, fs));
    }
    let omega0 = 2.0 * PI * f0 / fs;
    let sections = pole_sections(&poles)
        .into_iter()
        .map(|a| {
            let mut s = Biquad {
                b: [1.0, -2.0 * omega0.cos(), 1.0],
                a,
            };
            let g = s.response(0.0).norm();
            s.scale(1.0 / g);
            s
        })
        .collect();
    Ok(Sos { sections })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn db(g: f64) -> f64 {
        20.0 * g.log10()
    }

    #[test]
    fn bandpass_analytic_response() {
        for (lo, hi, fs) in [(8.0, 15.0, 250.0), (15.0, 32.0, 1000.0), (32.0, 80.0, 500.0), (0.1, 100.0, 1000.0)] {
            let sos = butterworth_bandpass_sos(lo, hi, fs, 4).unwrap();
            assert_eq!(sos.sections.len(), 4);
            assert!((db(sos.gain_at(lo, fs)) + 3.0103).abs() < 1e-6, "{lo}");
            assert!((db(sos.gain_at(hi, fs)) + 3.0103).abs() < 1e-6, "{hi}");
            assert!(sos.gain_at(0.0, fs) < 1e-12);
            assert!(sos.gain_at((lo * hi).sqrt(), fs) > 0.9);
        }
    }

    #[test]
    fn odd_order_bandpass() {
        let sos = butterworth_bandpass_sos(10.0, 20.0, 200.0, 3).unwrap();
        assert_eq!(sos.sections.len(), 3);
        assert!((db(sos.gain_at(10.0, 200.0)) + 3.0103).abs() < 1e-6);
    }

    #[test]
    fn notch_analytic_response() {
        let sos = butterworth_notch_sos(50.0, 1000.0, 4, 35.0).unwrap();
        assert!(sos.gain_at(50.0, 1000.0) < 1e-9);
        assert!((sos.gain_at(0.0, 1000.0) - 1.0).abs() < 1e-12);
        assert!((sos.gain_at(12.5, 1000.0) - 1.0).abs() < 0.01);
    }

    #[test]
    fn invalid_edges() {
        assert!(butterworth_bandpass_sos(0.0, 10.0, 100.0, 4).is_err());
        assert!(butterworth_bandpass_sos(10.0, 60.0, 100.0, 4).is_err());
        assert!(butterworth_bandpass_sos(20.0, 10.0, 100.0, 4).is_err());
        assert!(butterworth_bandpass_sos(5.0, 10.0, 100.0, 0).is_err());
        assert!(butterworth_notch_sos(150.0, 250.0, 4, 35.0).is_err());
    }

    #[test]
    fn transfer_function_matches_cascade() {
        let sos = butterworth_bandpass_sos(8.0, 15.0, 250.0, 2).unwrap();
        let tf = sos.to_transfer_function();
        assert_eq!(tf.b.len(), 5);
        let impulse: Vec<f64> = (0..200).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
        let (a, b) = (sos.filter(&impulse), tf.filter(&impulse));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
