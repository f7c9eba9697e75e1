use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::BandSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Topo,
    Nn1,
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "topo" => Ok(Self::Topo),
            "nn1" | "1nn" | "nn" => Ok(Self::Nn1),
            other => Err(Error::Config(format!("unknown classifier {other:?} (topo | nn1)"))),
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Topo => "topo",
            Self::Nn1 => "nn1",
        })
    }
}

/// Dimensionality reduction applied per repetition, fit on the training
/// split only. Written as `raw`, `pca:k` or `rfe:k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Reduction {
    Raw,
    Pca(usize),
    Rfe(usize),
}

impl Reduction {
    pub fn with_k(self, k: usize) -> Self {
        match self {
            Self::Raw => Self::Raw,
            Self::Pca(_) => Self::Pca(k),
            Self::Rfe(_) => Self::Rfe(k),
        }
    }
}

impl FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "raw" || s == "none" {
            return Ok(Self::Raw);
        }
        let (kind, k) = s
            .split_once([':', '('])
            .ok_or_else(|| Error::Config(format!("reduction {s:?} must be raw, pca:k or rfe:k")))?;
        let k: usize = k
            .trim_end_matches(')')
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad component count in {s:?}")))?;
        if k == 0 {
            return Err(Error::Config("reduction needs at least one component".into()));
        }
        match kind.trim() {
            "pca" => Ok(Self::Pca(k)),
            "rfe" => Ok(Self::Rfe(k)),
            other => Err(Error::Config(format!("unknown reduction {other:?}"))),
        }
    }
}

impl TryFrom<String> for Reduction {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Reduction> for String {
    fn from(r: Reduction) -> String {
        r.to_string()
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Raw => f.write_str("raw"),
            Self::Pca(k) => write!(f, "pca:{k}"),
            Self::Rfe(k) => write!(f, "rfe:{k}"),
        }
    }
}

/// One evaluation protocol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    pub classifier: ClassifierKind,
    pub reduction: Reduction,
    pub band: BandSpec,
    pub test_fraction: f64,
    pub repetitions: usize,
    pub seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            classifier: ClassifierKind::Topo,
            reduction: Reduction::Raw,
            band: BandSpec::NONE,
            test_fraction: 0.2,
            repetitions: 5,
            seed: 0,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::Config(format!(
                "test_fraction {} must lie strictly between 0 and 1",
                self.test_fraction
            )));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        Ok(())
    }

    /// Sets one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("bad {what} {value:?}"));
        match key.trim() {
            "classifier" => self.classifier = value.parse()?,
            "reduction" => self.reduction = value.parse()?,
            "band" => self.band = value.parse()?,
            "test_fraction" => self.test_fraction = value.trim().parse().map_err(|_| bad("test_fraction"))?,
            "repetitions" => self.repetitions = value.trim().parse().map_err(|_| bad("repetitions"))?,
            "seed" => self.seed = value.trim().parse().map_err(|_| bad("seed"))?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Parses either a JSON object or flat `key = value` lines (`#` starts a
    /// comment). Missing keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg = if text.trim_start().starts_with('{') {
            serde_json::from_str::<EvalConfig>(text).map_err(|e| Error::Config(e.to_string()))?
        } else {
            let mut cfg = EvalConfig::default();
            for (n, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
                cfg.set(k, v.trim().trim_matches('"'))?;
            }
            cfg
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_forms() {
        assert_eq!("raw".parse::<Reduction>().unwrap(), Reduction::Raw);
        assert_eq!("pca:5".parse::<Reduction>().unwrap(), Reduction::Pca(5));
        assert_eq!("PCA(3)".parse::<Reduction>().unwrap(), Reduction::Pca(3));
        assert_eq!("rfe:2".parse::<Reduction>().unwrap(), Reduction::Rfe(2));
        assert!("pca".parse::<Reduction>().is_err());
        assert!("pca:0".parse::<Reduction>().is_err());
        assert!("ica:2".parse::<Reduction>().is_err());
    }

    #[test]
    fn key_value_config() {
        let cfg = EvalConfig::parse(
            "# protocol\nclassifier = nn1\nreduction = pca:4\nband = gamma\n\
             test_fraction = 0.25\nrepetitions = 3\nseed = 42\n",
        )
        .unwrap();
        assert_eq!(cfg.classifier, ClassifierKind::Nn1);
        assert_eq!(cfg.reduction, Reduction::Pca(4));
        assert_eq!(cfg.band, BandSpec::GAMMA);
        assert_eq!(cfg.test_fraction, 0.25);
        assert_eq!(cfg.repetitions, 3);
        assert_eq!(cfg.seed, 42);
    }

    #[test]
    fn json_config_round_trip() {
        let cfg = EvalConfig {
            reduction: Reduction::Rfe(3),
            seed: 7,
            ..EvalConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains(r#""reduction":"rfe:3""#));
        assert_eq!(EvalConfig::parse(&text).unwrap(), cfg);
        let partial = EvalConfig::parse(r#"{"classifier":"nn1","band":"beta"}"#).unwrap();
        assert_eq!(partial.band, BandSpec::BETA);
        assert_eq!(partial.repetitions, 5);
    }

    #[test]
    fn invalid_configs() {
        assert!(EvalConfig::parse("test_fraction = 1.0").is_err());
        assert!(EvalConfig::parse("repetitions = 0").is_err());
        assert!(EvalConfig::parse("colour = blue").is_err());
        assert!(EvalConfig::parse("seed").is_err());
    }
}
