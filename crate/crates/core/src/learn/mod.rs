//! Fusion, stratified splitting, the five classifier families and the
//! evaluation grid.
//!
//! Undefined feature values travel as `NaN` in a [`LabeledMatrix`] until a
//! [`Preprocessor`] fitted on training rows imputes and scales them.

mod grid;
mod knn;
mod logistic;
mod model;
mod svm;
mod tree;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Label, SessionKey};
use crate::functionals::{FeatureVector, Provenance};
use crate::lexrich::LexMetricVector;
use crate::synco::SynMetricVector;

pub use grid::{evaluate_grid, Case, Cell, EvalReport, ReportRow, SplitMeta};
pub use model::{train, Model, ModelKind, ModelSpec};

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("row {row} has {got} values, expected {expected}")]
    Ragged { row: usize, got: usize, expected: usize },
    #[error("{rows} rows but {labels} labels")]
    LabelCount { rows: usize, labels: usize },
    #[error("fused input has {got} columns, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("fusion needs a whole-utterance prosody vector")]
    NotWholeUtterance,
    #[error("class {0} has no instances")]
    EmptyClass(Label),
    #[error("train fraction must be in (0, 1), got {0}")]
    Fraction(f64),
    #[error("training data holds a single class")]
    SingleClass,
    #[error("training data is empty")]
    NoData,
    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("case {0} selects no instances")]
    EmptyCase(String),
    #[error("invalid hyperparameter: {0}")]
    Hyper(String),
}

/// Provenance of one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowMeta {
    pub key: SessionKey,
    /// Fragment index for per-fragment prosody instances.
    pub fragment: Option<usize>,
}

/// Feature rows with their labels. Values may be `NaN` for undefined
/// metrics until preprocessing.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    labels: Vec<Label>,
    meta: Vec<RowMeta>,
}

impl LabeledMatrix {
    pub fn new(
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<Label>,
        meta: Vec<RowMeta>,
    ) -> Result<Self, LearnError> {
        if rows.len() != labels.len() || rows.len() != meta.len() {
            return Err(LearnError::LabelCount {
                rows: rows.len(),
                labels: labels.len().min(meta.len()),
            });
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != columns.len()) {
            return Err(LearnError::Ragged {
                row,
                got: r.len(),
                expected: columns.len(),
            });
        }
        Ok(Self {
            columns,
            rows,
            labels,
            meta,
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn meta(&self) -> &[RowMeta] {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            columns: self.columns.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            meta: indices.iter().map(|&i| self.meta[i].clone()).collect(),
        }
    }

    /// Classes present, in scale order.
    pub fn classes(&self) -> Vec<Label> {
        Label::ALL
            .into_iter()
            .filter(|l| self.labels.contains(l))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub stratified: bool,
    pub seed: u64,
    /// Classes that must be represented under stratification.
    pub classes: Vec<Label>,
}

impl SplitSpec {
    pub fn new(seed: u64) -> Self {
        Self {
            train_fraction: 0.7,
            stratified: true,
            seed,
            classes: Label::ALL.to_vec(),
        }
    }
}

/// Sorted, disjoint train/test index sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

fn train_count(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64).round() as usize).min(n)
}

/// Shuffles with a seeded ChaCha8 stream and keeps `round(f·n)` instances
/// per class (or overall) for training.
pub fn split(m: &LabeledMatrix, s: &SplitSpec) -> Result<Split, LearnError> {
    if !(s.train_fraction > 0.0 && s.train_fraction < 1.0) {
        return Err(LearnError::Fraction(s.train_fraction));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    if s.stratified {
        for &class in &s.classes {
            let mut idx: Vec<usize> = (0..m.len()).filter(|&i| m.labels[i] == class).collect();
            if idx.is_empty() {
                return Err(LearnError::EmptyClass(class));
            }
            idx.shuffle(&mut rng);
            let k = train_count(s.train_fraction, idx.len());
            train.extend_from_slice(&idx[..k]);
            test.extend_from_slice(&idx[k..]);
        }
        // Instances of undeclared classes are never trained on.
        test.extend((0..m.len()).filter(|&i| !s.classes.contains(&m.labels[i])));
    } else {
        let mut idx: Vec<usize> = (0..m.len()).collect();
        idx.shuffle(&mut rng);
        let k = train_count(s.train_fraction, idx.len());
        train.extend_from_slice(&idx[..k]);
        test.extend_from_slice(&idx[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}

/// Median imputation followed by z-scoring, both fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preprocessor {
    medians: Vec<f64>,
    means: Vec<f64>,
    scales: Vec<f64>,
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

impl Preprocessor {
    /// A column with no finite training value imputes to 0; a column with
    /// zero training variance scales to all zeros.
    pub fn fit(rows: &[&[f64]]) -> Self {
        let d = rows.first().map_or(0, |r| r.len());
        let mut medians = Vec::with_capacity(d);
        let mut means = Vec::with_capacity(d);
        let mut scales = Vec::with_capacity(d);
        for j in 0..d {
            let med = median(rows.iter().map(|r| r[j]).filter(|v| v.is_finite()).collect());
            let col: Vec<f64> = rows
                .iter()
                .map(|r| if r[j].is_finite() { r[j] } else { med })
                .collect();
            let n = col.len() as f64;
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let sd = var.sqrt();
            medians.push(med);
            means.push(mean);
            scales.push(if sd > 1e-12 * (1.0 + mean.abs()) { sd } else { 0.0 });
        }
        Self {
            medians,
            means,
            scales,
        }
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| {
                let v = if v.is_finite() { v } else { self.medians[j] };
                if self.scales[j] == 0.0 {
                    0.0
                } else {
                    (v - self.means[j]) / self.scales[j]
                }
            })
            .collect()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }
}

/// Width of a fused row: 25 lexical + 14 syntactic + 88 prosodic.
pub const FUSED_WIDTH: usize = 25 + 14 + 88;

/// Concatenates lex ∥ syn ∥ whole-utterance prosody; undefined metrics
/// become `NaN` for later imputation.
pub fn fuse(
    prosody: &FeatureVector,
    lex: &LexMetricVector,
    syn: &SynMetricVector,
) -> Result<Vec<f64>, LearnError> {
    if prosody.provenance != Provenance::WholeUtterance {
        return Err(LearnError::NotWholeUtterance);
    }
    let got = 25 + 14 + prosody.values.len();
    if got != FUSED_WIDTH {
        return Err(LearnError::DimensionMismatch {
            got,
            expected: FUSED_WIDTH,
        });
    }
    let undefined = |v: &Option<f64>| v.unwrap_or(f64::NAN);
    let mut row = Vec::with_capacity(FUSED_WIDTH);
    row.extend(lex.values().iter().map(undefined));
    row.extend(syn.values().iter().map(undefined));
    row.extend_from_slice(&prosody.values);
    Ok(row)
}

/// Column names matching [`fuse`].
pub fn fused_columns(prosody_names: &[String]) -> Vec<String> {
    LexMetricVector::NAMES
        .iter()
        .chain(SynMetricVector::NAMES.iter())
        .map(|s| s.to_string())
        .chain(prosody_names.iter().cloned())
        .collect()
}
