//! Per-channel pre-processing: Butterworth band-pass and notch filtering, and
//! the mean-absolute-value feature taken over an analysis window.

mod design;

use std::fmt;
use std::io::{Read, Write};
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use design::{butterworth_bandpass_sos, butterworth_notch_sos, Biquad, Sos, TransferFunction};

pub const DEFAULT_ORDER: usize = 4;
/// Stop bandwidth of the mains notch is `f0 / NOTCH_Q`.
pub const NOTCH_Q: f64 = 35.0;
pub const MAINS_HARMONICS: [f64; 3] = [50.0, 100.0, 150.0];
pub const BROADBAND: (f64, f64) = (0.1, 100.0);

#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub samples: Vec<f64>,
    /// Sampling rate in Hz.
    pub fs: f64,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>, fs: f64) -> Result<Self> {
        if !(fs > 0.0 && fs.is_finite()) {
            return Err(Error::InvalidArgument(format!("sampling rate {fs} must be positive")));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument("non-finite sample".into()));
        }
        Ok(Self { samples, fs })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn map_samples(&self, samples: Vec<f64>) -> TimeSeries {
        TimeSeries { samples, fs: self.fs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    None,
    Alpha,
    Beta,
    Gamma,
}

/// Named frequency band; `Band::None` means no band-specific filtering.
/// Serialized by name.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BandSpec {
    pub name: Band,
    pub lo: f64,
    pub hi: f64,
}

impl BandSpec {
    pub const NONE: BandSpec = BandSpec {
        name: Band::None,
        lo: 0.0,
        hi: 0.0,
    };
    pub const ALPHA: BandSpec = BandSpec {
        name: Band::Alpha,
        lo: 8.0,
        hi: 15.0,
    };
    pub const BETA: BandSpec = BandSpec {
        name: Band::Beta,
        lo: 15.0,
        hi: 32.0,
    };
    pub const GAMMA: BandSpec = BandSpec {
        name: Band::Gamma,
        lo: 32.0,
        hi: 80.0,
    };

    pub fn validate(&self, fs: f64) -> Result<()> {
        if self.name != Band::None && !(0.0 < self.lo && self.lo < self.hi && self.hi < fs / 2.0) {
            return Err(Error::InvalidFilter(format!(
                "band {}..{} Hz does not fit below Nyquist {}",
                self.lo,
                self.hi,
                fs / 2.0
            )));
        }
        Ok(())
    }
}

impl Default for BandSpec {
    fn default() -> Self {
        Self::NONE
    }
}

impl FromStr for BandSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "" => Ok(Self::NONE),
            "alpha" => Ok(Self::ALPHA),
            "beta" => Ok(Self::BETA),
            "gamma" => Ok(Self::GAMMA),
            other => Err(Error::Config(format!("unknown band {other:?}"))),
        }
    }
}

impl TryFrom<String> for BandSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BandSpec> for String {
    fn from(b: BandSpec) -> String {
        b.to_string()
    }
}

impl fmt::Display for BandSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.name {
            Band::None => "none",
            Band::Alpha => "alpha",
            Band::Beta => "beta",
            Band::Gamma => "gamma",
        };
        f.write_str(name)
    }
}

pub fn butterworth_bandpass(x: &TimeSeries, lo: f64, hi: f64, order: usize) -> Result<TimeSeries> {
    let sos = butterworth_bandpass_sos(lo, hi, x.fs, order)?;
    Ok(x.map_samples(sos.filter(&x.samples)))
}

pub fn notch(x: &TimeSeries, f0: f64, order: usize) -> Result<TimeSeries> {
    notch_with_q(x, f0, order, NOTCH_Q)
}

pub fn notch_with_q(x: &TimeSeries, f0: f64, order: usize, q: f64) -> Result<TimeSeries> {
    let sos = butterworth_notch_sos(f0, x.fs, order, q)?;
    Ok(x.map_samples(sos.filter(&x.samples)))
}

/// Filter chain applied to each channel: mains notches, then the broadband
/// band-pass, then the band-specific band-pass.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterChain {
    pub notches: Vec<f64>,
    pub broadband: Option<(f64, f64)>,
    pub band: BandSpec,
    pub order: usize,
}

impl FilterChain {
    pub fn new(band: BandSpec) -> Self {
        Self {
            notches: MAINS_HARMONICS.to_vec(),
            broadband: Some(BROADBAND),
            band,
            order: DEFAULT_ORDER,
        }
    }

    pub fn apply(&self, x: &TimeSeries) -> Result<TimeSeries> {
        self.band.validate(x.fs)?;
        let mut y = x.clone();
        for &f0 in &self.notches {
            if f0 + f0 / (2.0 * NOTCH_Q) < x.fs / 2.0 {
                y = notch(&y, f0, self.order)?;
            }
        }
        if let Some((lo, hi)) = self.broadband {
            y = butterworth_bandpass(&y, lo, hi, self.order)?;
        }
        if self.band.name != Band::None {
            y = butterworth_bandpass(&y, self.band.lo, self.band.hi, self.order)?;
        }
        Ok(y)
    }
}

/// Mean of `|x|` over a sample window.
pub fn mean_abs_feature(x: &TimeSeries, window: Range<usize>) -> Result<f64> {
    if window.start >= window.end || window.end > x.len() {
        return Err(Error::InvalidWindow {
            start: window.start,
            end: window.end,
            len: x.len(),
        });
    }
    let len = window.len() as f64;
    Ok(x.samples[window].iter().map(|v| v.abs()).sum::<f64>() / len)
}

/// One feature per channel.
pub fn extract_features(channels: &[TimeSeries], window: Range<usize>) -> Result<Vec<f64>> {
    channels.iter().map(|c| mean_abs_feature(c, window.clone())).collect()
}

/// Reads one channel per CSV column.
pub fn read_timeseries_csv<R: Read>(reader: R, has_header: bool, fs: f64) -> Result<Vec<TimeSeries>> {
    let cloud = crate::pointcloud::read_csv(reader, has_header, None)?;
    let d = cloud.dim();
    (0..d)
        .map(|j| TimeSeries::new(cloud.points().map(|p| p[j]).collect(), fs))
        .collect()
}

pub fn write_timeseries_csv<W: Write>(channels: &[TimeSeries], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record((0..channels.len()).map(|j| format!("ch{j}")))?;
    let n = channels.iter().map(TimeSeries::len).max().unwrap_or(0);
    for i in 0..n {
        w.write_record(
            channels
                .iter()
                .map(|c| c.samples.get(i).map_or(String::new(), |v| v.to_string())),
        )?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}
