use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::knn::Knn;
use super::logistic::Logistic;
use super::svm::Svm;
use super::tree::{Forest, Tree, TreeParams};
use super::LearnError;
use crate::corpus::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Svm,
    LogisticRegression,
    NearestNeighbors,
    DecisionTree,
    RandomForest,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Svm,
        ModelKind::LogisticRegression,
        ModelKind::NearestNeighbors,
        ModelKind::DecisionTree,
        ModelKind::RandomForest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Svm => "svm",
            ModelKind::LogisticRegression => "logistic_regression",
            ModelKind::NearestNeighbors => "nearest_neighbors",
            ModelKind::DecisionTree => "decision_tree",
            ModelKind::RandomForest => "random_forest",
        }
    }

    /// Column heading used in rendered tables.
    pub fn title(self) -> &'static str {
        match self {
            ModelKind::Svm => "SVM",
            ModelKind::LogisticRegression => "Logistic Regression",
            ModelKind::NearestNeighbors => "Nearest Neighbors",
            ModelKind::DecisionTree => "Decision Tree",
            ModelKind::RandomForest => "Random Forest",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = LearnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| LearnError::Hyper(format!("unknown classifier `{s}`")))
    }
}

/// Classifier family plus hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    /// SVM box constraint.
    pub svm_c: f64,
    /// RBF width; `None` means 1/d.
    pub svm_gamma: Option<f64>,
    /// Inverse L2 strength for logistic regression.
    pub logistic_c: f64,
    pub knn_k: usize,
    pub tree_max_depth: Option<usize>,
    pub tree_min_leaf: usize,
    pub forest_trees: usize,
}

impl ModelSpec {
    pub fn new(kind: ModelKind) -> Self {
        Self {
            kind,
            svm_c: 1.0,
            svm_gamma: None,
            logistic_c: 1.0,
            knn_k: 5,
            tree_max_depth: None,
            tree_min_leaf: 1,
            forest_trees: 100,
        }
    }

    /// One default spec per family, in table column order.
    pub fn defaults() -> Vec<Self> {
        ModelKind::ALL.into_iter().map(Self::new).collect()
    }

    fn check(&self) -> Result<(), LearnError> {
        let bad = |m: &str| Err(LearnError::Hyper(m.to_string()));
        if !(self.svm_c > 0.0 && self.svm_c.is_finite()) {
            return bad("svm_c must be positive");
        }
        if self.svm_gamma.is_some_and(|g| !(g > 0.0 && g.is_finite())) {
            return bad("svm_gamma must be positive");
        }
        if !(self.logistic_c > 0.0 && self.logistic_c.is_finite()) {
            return bad("logistic_c must be positive");
        }
        if self.knn_k == 0 {
            return bad("knn_k must be at least 1");
        }
        if self.tree_min_leaf == 0 {
            return bad("tree_min_leaf must be at least 1");
        }
        if self.forest_trees == 0 {
            return bad("forest_trees must be at least 1");
        }
        Ok(())
    }

    fn tree_params(&self) -> TreeParams {
        TreeParams {
            max_depth: self.tree_max_depth,
            min_leaf: self.tree_min_leaf,
            max_features: None,
        }
    }
}

#[derive(Debug, Clone)]
enum Fitted {
    Svm(Svm),
    Logistic(Logistic),
    Knn(Knn),
    Tree(Tree),
    Forest(Forest),
    Majority(usize),
}

/// A fitted classifier over the classes seen in training.
#[derive(Debug, Clone)]
pub struct Model {
    classes: Vec<Label>,
    fitted: Fitted,
}

impl Model {
    pub fn classes(&self) -> &[Label] {
        &self.classes
    }

    /// True when training fell back to the majority class.
    pub fn is_majority(&self) -> bool {
        matches!(self.fitted, Fitted::Majority(_))
    }

    pub fn predict(&self, x: &[f64]) -> Label {
        let k = match &self.fitted {
            Fitted::Svm(m) => m.predict(x),
            Fitted::Logistic(m) => m.predict(x),
            Fitted::Knn(m) => m.predict(x),
            Fitted::Tree(m) => m.predict(x),
            Fitted::Forest(m) => m.predict(x),
            Fitted::Majority(k) => *k,
        };
        self.classes[k]
    }
}

/// Majority class index; ties go to the lower index.
pub(crate) fn majority(y: &[usize], n_classes: usize) -> usize {
    let mut counts = vec![0usize; n_classes];
    for &c in y {
        counts[c] += 1;
    }
    let mut best = 0;
    for (c, &n) in counts.iter().enumerate() {
        if n > counts[best] {
            best = c;
        }
    }
    best
}

/// Fits `spec` on rows `x`. A matrix whose every column is constant yields a
/// majority-class predictor and a warning.
pub fn train(x: &[Vec<f64>], y: &[Label], spec: &ModelSpec, seed: u64) -> Result<Model, LearnError> {
    spec.check()?;
    if x.is_empty() {
        return Err(LearnError::NoData);
    }
    if x.len() != y.len() {
        return Err(LearnError::LabelCount {
            rows: x.len(),
            labels: y.len(),
        });
    }
    let d = x[0].len();
    for (row, r) in x.iter().enumerate() {
        if r.len() != d {
            return Err(LearnError::Ragged {
                row,
                got: r.len(),
                expected: d,
            });
        }
        if let Some(col) = r.iter().position(|v| !v.is_finite()) {
            return Err(LearnError::NonFinite { row, col });
        }
    }
    let classes: Vec<Label> = Label::ALL.into_iter().filter(|l| y.contains(l)).collect();
    if classes.len() < 2 {
        return Err(LearnError::SingleClass);
    }
    let yi: Vec<usize> = y
        .iter()
        .map(|l| classes.iter().position(|c| c == l).expect("label collected above"))
        .collect();
    let k = classes.len();

    let constant = (0..d).all(|j| x.iter().all(|r| r[j] == x[0][j]));
    if constant {
        log::warn!(
            "all {d} features are constant over {} training rows; predicting the majority class",
            x.len()
        );
        return Ok(Model {
            classes,
            fitted: Fitted::Majority(majority(&yi, k)),
        });
    }

    let fitted = match spec.kind {
        ModelKind::Svm => {
            let gamma = spec.svm_gamma.unwrap_or(1.0 / d.max(1) as f64);
            Fitted::Svm(Svm::fit(x, &yi, k, spec.svm_c, gamma))
        }
        ModelKind::LogisticRegression => Fitted::Logistic(Logistic::fit(x, &yi, k, 1.0 / spec.logistic_c)),
        ModelKind::NearestNeighbors => Fitted::Knn(Knn::fit(x, &yi, k, spec.knn_k)),
        ModelKind::DecisionTree => Fitted::Tree(Tree::fit(x, &yi, k, &spec.tree_params(), seed)),
        ModelKind::RandomForest => {
            let params = TreeParams {
                max_features: Some(((d as f64).sqrt() as usize).max(1)),
                ..spec.tree_params()
            };
            Fitted::Forest(Forest::fit(x, &yi, k, &params, spec.forest_trees, seed))
        }
    };
    Ok(Model { classes, fitted })
}
