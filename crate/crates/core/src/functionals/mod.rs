//! Statistical functionals over LLD contours and the feature-set presets
//! built from them.

mod preset;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsp::{DspError, LldMatrix};

pub use preset::{
    assemble_preset, lookup, preset_registry, ExtractionMode, FeatureSetPreset, FeatureVector,
    Provenance, RegistryEntry, EGEMAPS_ANALOG, IS09_ANALOG,
};

#[derive(Debug, Error)]
pub enum FunctionalError {
    #[error("functionals need at least 2 frames, got {0}")]
    TooFewFrames(usize),
    #[error("column `{0}` contains NaN")]
    NaN(String),
    #[error("functional set is empty")]
    EmptySet,
    #[error("functional `{0}` listed twice")]
    Duplicate(String),
    #[error("unknown functional `{0}`")]
    Unknown(String),
    #[error("preset `{0}` is registry metadata only and cannot be computed")]
    NotComputable(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("preset `{name}` declares {declared} features but its layout yields {actual}")]
    DimensionMismatch {
        name: String,
        declared: usize,
        actual: usize,
    },
    #[error("preset `{preset}` references unknown LLD column `{column}`")]
    UnknownColumn { preset: String, column: String },
    #[error("invalid preset config: {0}")]
    Config(String),
    #[error(transparent)]
    Dsp(#[from] DspError),
}

/// One statistic that reduces a contour to a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    Mean,
    Stddev,
    Min,
    Max,
    Range,
    /// Index of the first minimum over (n − 1), in [0, 1].
    MinPos,
    /// Index of the first maximum over (n − 1), in [0, 1].
    MaxPos,
    /// Least-squares slope against the frame index.
    LinSlope,
    /// Least-squares intercept at frame 0.
    LinOffset,
    /// Mean squared residual of the linear fit.
    LinErr,
    Skewness,
    Kurtosis,
}

impl Functional {
    pub const ALL: [Functional; 12] = [
        Functional::Mean,
        Functional::Stddev,
        Functional::Min,
        Functional::Max,
        Functional::Range,
        Functional::MinPos,
        Functional::MaxPos,
        Functional::LinSlope,
        Functional::LinOffset,
        Functional::LinErr,
        Functional::Skewness,
        Functional::Kurtosis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Functional::Mean => "mean",
            Functional::Stddev => "stddev",
            Functional::Min => "min",
            Functional::Max => "max",
            Functional::Range => "range",
            Functional::MinPos => "minpos",
            Functional::MaxPos => "maxpos",
            Functional::LinSlope => "linslope",
            Functional::LinOffset => "linoffset",
            Functional::LinErr => "linerr",
            Functional::Skewness => "skewness",
            Functional::Kurtosis => "kurtosis",
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Functional {
    type Err = FunctionalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Functional::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| FunctionalError::Unknown(s.to_string()))
    }
}

/// Ordered, duplicate-free, non-empty list of functionals. The order fixes
/// the vector layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Functional>", into = "Vec<Functional>")]
pub struct FunctionalSet(Vec<Functional>);

impl FunctionalSet {
    pub fn new(items: Vec<Functional>) -> Result<Self, FunctionalError> {
        if items.is_empty() {
            return Err(FunctionalError::EmptySet);
        }
        for (i, f) in items.iter().enumerate() {
            if items[..i].contains(f) {
                return Err(FunctionalError::Duplicate(f.name().to_string()));
            }
        }
        Ok(Self(items))
    }

    pub fn as_slice(&self) -> &[Functional] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<Functional>> for FunctionalSet {
    type Error = FunctionalError;
    fn try_from(v: Vec<Functional>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<FunctionalSet> for Vec<Functional> {
    fn from(s: FunctionalSet) -> Self {
        s.0
    }
}

/// Moments and fit statistics shared by several functionals.
struct Summary {
    n: f64,
    mean: f64,
    var: f64,
    m3: f64,
    m4: f64,
    min: (usize, f64),
    max: (usize, f64),
    slope: f64,
    offset: f64,
    fit_err: f64,
}

impl Summary {
    fn of(x: &[f64]) -> Self {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        for v in x {
            let d = v - mean;
            let d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        let (var, m3, m4) = (m2 / n, m3 / n, m4 / n);

        let mut min = (0, x[0]);
        let mut max = (0, x[0]);
        for (i, &v) in x.iter().enumerate() {
            if v < min.1 {
                min = (i, v);
            }
            if v > max.1 {
                max = (i, v);
            }
        }

        // Regression on t = 0..n-1.
        let t_mean = (n - 1.0) / 2.0;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (i, v) in x.iter().enumerate() {
            let dt = i as f64 - t_mean;
            sxy += dt * (v - mean);
            sxx += dt * dt;
        }
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let offset = mean - slope * t_mean;
        let fit_err = x
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let r = v - (offset + slope * i as f64);
                r * r
            })
            .sum::<f64>()
            / n;
        Self {
            n,
            mean,
            var,
            m3,
            m4,
            min,
            max,
            slope,
            offset,
            fit_err,
        }
    }

    fn get(&self, f: Functional) -> f64 {
        let sd = self.var.sqrt();
        // Treat variance at rounding-noise level as zero so shape statistics
        // stay finite and scale-free.
        let flat = sd <= 1e-12 * (1.0 + self.mean.abs());
        match f {
            Functional::Mean => self.mean,
            Functional::Stddev => sd,
            Functional::Min => self.min.1,
            Functional::Max => self.max.1,
            Functional::Range => self.max.1 - self.min.1,
            Functional::MinPos => self.min.0 as f64 / (self.n - 1.0),
            Functional::MaxPos => self.max.0 as f64 / (self.n - 1.0),
            Functional::LinSlope => self.slope,
            Functional::LinOffset => self.offset,
            Functional::LinErr => self.fit_err,
            Functional::Skewness if flat => 0.0,
            Functional::Skewness => self.m3 / (sd * sd * sd),
            Functional::Kurtosis if flat => 0.0,
            Functional::Kurtosis => self.m4 / (self.var * self.var),
        }
    }
}

/// Applies `fs` to every column of `m`, concatenating column-major:
/// `[col0·f0, col0·f1, …, col1·f0, …]`.
pub fn apply_functionals(m: &LldMatrix, fs: &FunctionalSet) -> Result<Vec<f64>, FunctionalError> {
    let n = m.n_frames();
    if n < 2 {
        return Err(FunctionalError::TooFewFrames(n));
    }
    let mut out = Vec::with_capacity(m.columns().len() * fs.len());
    for (name, col) in m.names().iter().zip(m.columns()) {
        if col.iter().any(|v| v.is_nan()) {
            return Err(FunctionalError::NaN(name.clone()));
        }
        let s = Summary::of(col);
        out.extend(fs.as_slice().iter().map(|&f| s.get(f)));
    }
    Ok(out)
}
