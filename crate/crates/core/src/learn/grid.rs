use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{train, ModelKind, ModelSpec};
use super::{split, LabeledMatrix, LearnError, Preprocessor, SplitSpec};
use crate::corpus::{Criterion, Label, SessionKey};
use crate::seed;

/// A row of the accuracy tables: every session, one day, or one article.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    All,
    Day(u8),
    Article(u8),
}

impl Case {
    /// Rows of the per-feature-family tables, in order.
    pub const GRID: [Case; 6] = [
        Case::All,
        Case::Day(1),
        Case::Day(2),
        Case::Day(3),
        Case::Article(1),
        Case::Article(2),
    ];

    pub const DAYS: [Case; 3] = [Case::Day(1), Case::Day(2), Case::Day(3)];

    pub fn matches(self, key: &SessionKey) -> bool {
        match self {
            Case::All => true,
            Case::Day(d) => key.day == d,
            Case::Article(a) => key.article == a,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::All => f.write_str("All"),
            Case::Day(d) => write!(f, "Day-{d}"),
            Case::Article(a) => write!(f, "Article-{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub classifier: ModelKind,
    /// Test accuracy in percent; `None` when it cannot be measured.
    pub accuracy: Option<f64>,
    pub n_train: usize,
    pub n_test: usize,
    /// Rows are true labels, columns predictions, both in scale order.
    pub confusion: Option<[[usize; 3]; 3]>,
    pub note: Option<String>,
}

impl Cell {
    pub fn empty(classifier: ModelKind, note: impl Into<String>) -> Self {
        Self {
            classifier,
            accuracy: None,
            n_train: 0,
            n_test: 0,
            confusion: None,
            note: Some(note.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    /// Feature set for grids with several (the prosodic table).
    pub group: Option<String>,
    pub case: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitMeta {
    pub train_fraction: f64,
    pub stratified: bool,
    pub seed: u64,
}

/// One accuracy table with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub table: String,
    pub title: String,
    pub features: String,
    pub n_features: usize,
    pub criterion: Criterion,
    pub config_hash: String,
    pub seed: u64,
    pub split: SplitMeta,
    pub classifiers: Vec<ModelKind>,
    pub rows: Vec<ReportRow>,
}

/// Fits every spec on each case's training split and scores its test
/// split. Splits and preprocessing are shared by the classifiers of a case;
/// all streams derive from `split.seed` and `scope`.
pub fn evaluate_grid(
    m: &LabeledMatrix,
    cases: &[Case],
    specs: &[ModelSpec],
    split_spec: &SplitSpec,
    scope: &str,
) -> Result<Vec<ReportRow>, LearnError> {
    let mut rows = Vec::with_capacity(cases.len());
    for &case in cases {
        let case_name = case.to_string();
        let idx: Vec<usize> = (0..m.len()).filter(|&i| case.matches(&m.meta()[i].key)).collect();
        if idx.is_empty() {
            return Err(LearnError::EmptyCase(case_name));
        }
        let sub = m.subset(&idx);
        let spec = SplitSpec {
            seed: seed::derive(split_spec.seed, &[scope, &case_name, "split"]),
            classes: sub.classes(),
            ..split_spec.clone()
        };
        let s = split(&sub, &spec)?;
        let train_rows: Vec<&[f64]> = s.train.iter().map(|&i| sub.rows()[i].as_slice()).collect();
        let pre = Preprocessor::fit(&train_rows);
        let x_train: Vec<Vec<f64>> = train_rows.iter().map(|r| pre.transform(r)).collect();
        let y_train: Vec<Label> = s.train.iter().map(|&i| sub.labels()[i]).collect();
        let x_test: Vec<Vec<f64>> = s.test.iter().map(|&i| pre.transform(&sub.rows()[i])).collect();
        let y_test: Vec<Label> = s.test.iter().map(|&i| sub.labels()[i]).collect();
        let train_classes = Label::ALL.iter().filter(|l| y_train.contains(l)).count();

        let cells = specs
            .par_iter()
            .map(|ms| {
                if train_classes < 2 {
                    return Ok(Cell {
                        n_train: x_train.len(),
                        n_test: x_test.len(),
                        ..Cell::empty(ms.kind, "single-class training data")
                    });
                }
                if x_test.is_empty() {
                    return Ok(Cell {
                        n_train: x_train.len(),
                        ..Cell::empty(ms.kind, "empty test split")
                    });
                }
                let cell_seed = seed::derive(split_spec.seed, &[scope, &case_name, ms.kind.name()]);
                let model = train(&x_train, &y_train, ms, cell_seed)?;
                let mut confusion = [[0usize; 3]; 3];
                let mut correct = 0usize;
                for (x, &truth) in x_test.iter().zip(&y_test) {
                    let p = model.predict(x);
                    confusion[truth.index()][p.index()] += 1;
                    correct += usize::from(p == truth);
                }
                Ok(Cell {
                    classifier: ms.kind,
                    accuracy: Some(100.0 * correct as f64 / x_test.len() as f64),
                    n_train: x_train.len(),
                    n_test: x_test.len(),
                    confusion: Some(confusion),
                    note: model.is_majority().then(|| "constant features; majority class".into()),
                })
            })
            .collect::<Result<Vec<_>, LearnError>>()?;
        rows.push(ReportRow {
            group: None,
            case: case_name,
            cells,
        });
    }
    Ok(rows)
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Fixed-width table: one row per (group, case), one column per
    /// classifier, accuracies in percent.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.table, self.title);
        let _ = writeln!(
            out,
            "features: {}{}; label: {}; split {:.0}/{:.0}{}; seed {}; config {}",
            self.features,
            if self.n_features > 0 { format!(" ({})", self.n_features) } else { String::new() },
            self.criterion,
            self.split.train_fraction * 100.0,
            (1.0 - self.split.train_fraction) * 100.0,
            if self.split.stratified { " stratified" } else { "" },
            self.seed,
            self.config_hash
        );
        out.push('\n');

        let grouped = self.rows.iter().any(|r| r.group.is_some());
        let mut header: Vec<String> = Vec::new();
        if grouped {
            header.push("Feature set".into());
        }
        header.push("Case".into());
        header.extend(self.classifiers.iter().map(|k| k.title().to_string()));
        let mut body: Vec<Vec<String>> = Vec::new();
        let mut notes: Vec<String> = Vec::new();
        for r in &self.rows {
            let mut line = Vec::new();
            if grouped {
                line.push(r.group.clone().unwrap_or_default());
            }
            line.push(r.case.clone());
            let label = match &r.group {
                Some(g) => format!("{g} {}", r.case),
                None => r.case.clone(),
            };
            for c in &r.cells {
                line.push(c.accuracy.map_or_else(|| "n/a".to_string(), |a| format!("{a:.2}")));
            }
            // One note per row when every cell shares it.
            let first = r.cells.first().and_then(|c| c.note.as_ref());
            if first.is_some() && r.cells.iter().all(|c| c.note.as_ref() == first) {
                notes.push(format!("{label}: {}", first.unwrap()));
            } else {
                for c in &r.cells {
                    if let Some(n) = &c.note {
                        notes.push(format!("{label} / {}: {n}", c.classifier.title()));
                    }
                }
            }
            body.push(line);
        }
        let widths: Vec<usize> = (0..header.len())
            .map(|j| {
                body.iter()
                    .map(|l| l.get(j).map_or(0, String::len))
                    .chain([header[j].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let text_cols = if grouped { 2 } else { 1 };
        let fmt_line = |cells: &[String]| {
            let mut s = String::new();
            for (j, c) in cells.iter().enumerate() {
                if j > 0 {
                    s.push_str("  ");
                }
                if j < text_cols {
                    let _ = write!(s, "{c:<w$}", w = widths[j]);
                } else {
                    let _ = write!(s, "{c:>w$}", w = widths[j]);
                }
            }
            s.trim_end().to_string() + "\n"
        };
        out.push_str(&fmt_line(&header));
        let rule: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
        out.push_str(&"-".repeat(rule));
        out.push('\n');
        for l in &body {
            out.push_str(&fmt_line(l));
        }
        if !notes.is_empty() {
            out.push_str("\nnotes:\n");
            for n in notes {
                let _ = writeln!(out, "  {n}");
            }
        }
        out
    }

    /// One line per (row, classifier, true label) with predicted counts.
    pub fn confusion_csv(&self) -> String {
        let mut out = String::from("group,case,classifier,true_label,basic,average,advance\n");
        for r in &self.rows {
            for c in &r.cells {
                let Some(m) = &c.confusion else { continue };
                for l in Label::ALL {
                    let row = m[l.index()];
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        r.group.as_deref().unwrap_or(""),
                        r.case,
                        c.classifier,
                        l,
                        row[0],
                        row[1],
                        row[2]
                    );
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::RowMeta;

    fn toy() -> LabeledMatrix {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut meta = Vec::new();
        for i in 0..36u32 {
            let label = Label::ALL[(i % 3) as usize];
            rows.push(vec![f64::from(label.score()) * 10.0 + f64::from(i % 5) * 0.1]);
            labels.push(label);
            meta.push(RowMeta {
                key: SessionKey::new(format!("p{i}"), (i % 3 + 1) as u8, (i % 2 + 1) as u8).unwrap(),
                fragment: None,
            });
        }
        LabeledMatrix::new(vec!["x".into()], rows, labels, meta).unwrap()
    }

    fn report(rows: Vec<ReportRow>) -> EvalReport {
        EvalReport {
            table: "Table X".into(),
            title: "toy".into(),
            features: "x".into(),
            n_features: 1,
            criterion: Criterion::Overall,
            config_hash: "0".repeat(16),
            seed: 1,
            split: SplitMeta {
                train_fraction: 0.7,
                stratified: true,
                seed: 1,
            },
            classifiers: ModelKind::ALL.to_vec(),
            rows,
        }
    }

    #[test]
    fn separable_feature_scores_perfectly() {
        let rows = evaluate_grid(&toy(), &[Case::All], &ModelSpec::defaults(), &SplitSpec::new(3), "t").unwrap();
        for c in &rows[0].cells {
            assert_eq!(c.accuracy, Some(100.0), "{:?}", c.classifier);
            let m = c.confusion.unwrap();
            for l in Label::ALL {
                let row_sum: usize = m[l.index()].iter().sum();
                assert_eq!(row_sum, 4);
            }
        }
    }

    #[test]
    fn grid_layout_and_round_trip() {
        let rows = evaluate_grid(&toy(), &Case::GRID, &ModelSpec::defaults(), &SplitSpec::new(5), "t").unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[4].case, "Article-1");
        assert!(rows.iter().all(|r| r.cells.len() == 5));
        let r = report(rows);
        assert_eq!(EvalReport::from_json(&r.to_json()).unwrap(), r);
        let text = r.render_text();
        assert!(text.contains("Random Forest"));
        assert_eq!(text.lines().filter(|l| l.starts_with("Day-")).count(), 3);
    }

    #[test]
    fn empty_case_is_error() {
        let m = toy().subset(&[0, 3, 6]);
        assert!(matches!(
            evaluate_grid(&m, &[Case::Day(2)], &ModelSpec::defaults(), &SplitSpec::new(1), "t"),
            Err(LearnError::EmptyCase(c)) if c == "Day-2"
        ));
    }

    #[test]
    fn single_class_case_yields_notes() {
        let m = toy();
        let idx: Vec<usize> = (0..m.len()).filter(|&i| m.labels()[i] == Label::Basic).collect();
        let rows = evaluate_grid(&m.subset(&idx), &[Case::All], &ModelSpec::defaults(), &SplitSpec::new(1), "t").unwrap();
        assert!(rows[0].cells.iter().all(|c| c.accuracy.is_none() && c.note.is_some()));
    }
}
