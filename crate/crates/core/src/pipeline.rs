//! End-to-end runs: validate a corpus, extract feature CSVs, evaluate the
//! accuracy grids.
//!
//! Every artifact records the run's config hash and seed. CSVs carry them in
//! a leading `#` comment line, reports in their JSON fields.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::corpus::{self, Corpus, Criterion, Label, SessionKey, SessionRecord};
use crate::dsp::{self, LldConfig, SilenceFloor};
use crate::error::{Error, Result};
use crate::functionals::{
    assemble_preset, lookup, preset_registry, ExtractionMode, FeatureSetPreset, FeatureVector,
    Provenance,
};
use crate::learn::{
    evaluate_grid, fuse, fused_columns, Case, Cell, EvalReport, LabeledMatrix, LearnError,
    ModelSpec, ReportRow, RowMeta, SplitMeta, SplitSpec,
};
use crate::lexrich::{self, LexMetricVector, WordList, DEFAULT_SOPHISTICATION_RANK};
use crate::seed;
use crate::synco::{self, ProductionCounts, SynMetricVector};

pub const LEXICAL_CSV: &str = "lexical.csv";
pub const SYNTACTIC_CSV: &str = "syntactic.csv";
pub const FUSION_PROSODY_CSV: &str = "fusion_prosody.csv";
pub const COUNTS_CSV: &str = "fig1_counts.csv";
pub const CONFUSION_DIR: &str = "confusion";

/// Report stems in table order.
pub const TABLES: [&str; 4] = [
    "table1_prosody",
    "table2_lexical",
    "table3_syntactic",
    "table4_fused",
];

const KEY_COLUMNS: [&str; 4] = ["participant_id", "day", "article", "instance"];

/// Everything that determines a run's outputs, plus where to put them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub manifest: PathBuf,
    /// Analog or registry names, or paths to JSON preset files.
    pub presets: Vec<String>,
    pub wordlist: Option<PathBuf>,
    pub sophistication_rank: usize,
    pub silence_floor_db: f64,
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
    pub mode: ExtractionMode,
    pub models: Vec<ModelSpec>,
}

impl RunConfig {
    pub fn new(manifest: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            manifest: manifest.into(),
            presets: vec![
                crate::functionals::IS09_ANALOG.to_string(),
                crate::functionals::EGEMAPS_ANALOG.to_string(),
            ],
            wordlist: None,
            sophistication_rank: DEFAULT_SOPHISTICATION_RANK,
            silence_floor_db: dsp::DEFAULT_SILENCE_FLOOR_DB,
            seed: 0,
            out: out.into(),
            mode: ExtractionMode::Fragment,
            models: ModelSpec::defaults(),
        }
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON of every
    /// field except the output directory.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serialises");
        let digest = Sha256::digest(json.as_bytes());
        digest[..8].iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    fn header(&self, what: &str) -> String {
        format!(
            "# fluency {what} config={} seed={}\n",
            self.config_hash(),
            self.seed
        )
    }

    fn resolve_presets(&self) -> Result<Vec<FeatureSetPreset>> {
        let root = std::env::current_dir().unwrap_or_default();
        let mut out: Vec<FeatureSetPreset> = Vec::new();
        for p in &self.presets {
            let preset = if p.ends_with(".json") {
                FeatureSetPreset::from_json_file(&root.join(p))?
            } else {
                FeatureSetPreset::builtin(p)?
            };
            if !out.iter().any(|q| q.name == preset.name) {
                out.push(preset);
            }
        }
        Ok(out)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn file_stem_safe(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

pub fn prosody_csv_name(preset: &str) -> String {
    format!("prosody_{}.csv", file_stem_safe(preset))
}

// ---------------------------------------------------------------- validate

/// Violations found across a corpus.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub sessions: usize,
    pub problems: Vec<(SessionKey, String)>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.problems.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, p) in &self.problems {
            let _ = writeln!(s, "{k}: {p}");
        }
        let _ = writeln!(
            s,
            "{} sessions, {} violation(s)",
            self.sessions,
            self.problems.len()
        );
        s
    }
}

fn gold_tags(rec: &SessionRecord) -> Result<Option<Vec<Vec<String>>>> {
    match &rec.tags_ref {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            Ok(Some(lexrich::parse_gold_tags(&text)?))
        }
        None => Ok(None),
    }
}

/// Loads the corpus and checks every session's transcript conventions,
/// disfluency removal, tree count and gold-tag alignment. Load failures are
/// returned as errors.
pub fn validate(manifest: &Path) -> Result<ValidationReport> {
    let corpus = corpus::load_corpus(manifest)?;
    let mut report = ValidationReport {
        sessions: corpus.len(),
        problems: Vec::new(),
    };
    for rec in corpus.sessions() {
        for v in rec.violations() {
            report.problems.push((rec.key.clone(), v.to_string()));
        }
        match gold_tags(rec).and_then(|g| Ok(lexrich::tag_tokens(&rec.transcript, g.as_deref())?)) {
            Ok(_) => {}
            Err(e) => report.problems.push((rec.key.clone(), format!("gold tags: {e}"))),
        }
    }
    Ok(report)
}

// ----------------------------------------------------------------- extract

struct SessionFeatures {
    prosody: Vec<Vec<FeatureVector>>,
    fusion: FeatureVector,
    lexical: LexMetricVector,
    syntactic: SynMetricVector,
    counts: ProductionCounts,
}

fn extract_session(
    rec: &SessionRecord,
    presets: &[FeatureSetPreset],
    wordlist: &WordList,
    cfg: &RunConfig,
) -> Result<SessionFeatures> {
    let floor = SilenceFloor::new(cfg.silence_floor_db)?;
    let lld = LldConfig::default();
    let signal = dsp::load_wav(&rec.audio_ref)?;
    let prosody = presets
        .iter()
        .map(|p| assemble_preset(&signal, p, cfg.mode, floor, &lld))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let fusion = assemble_preset(
        &signal,
        &FeatureSetPreset::egemaps_analog(),
        ExtractionMode::Utterance,
        floor,
        &lld,
    )?
    .remove(0);

    let gold = gold_tags(rec)?;
    let tokens = lexrich::tag_tokens(&rec.transcript, gold.as_deref())?;
    let profile = lexrich::build_profile(&tokens, wordlist)?;
    let lex_seed = seed::derive(cfg.seed, &["lexical", &rec.key.to_string()]);
    let lexical = lexrich::lexical_metrics(&profile, &tokens, lex_seed)?;

    let counts = synco::count_units(&rec.trees);
    let syntactic = synco::syntax_metrics(&counts)?;
    Ok(SessionFeatures {
        prosody,
        fusion,
        lexical,
        syntactic,
        counts,
    })
}

fn fmt_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, fmt_value)
}

fn key_fields(k: &SessionKey, instance: &str) -> Vec<String> {
    vec![
        k.participant_id.clone(),
        k.day.to_string(),
        k.article.to_string(),
        instance.to_string(),
    ]
}

fn instance_name(p: Provenance) -> String {
    match p {
        Provenance::Fragment { index } => index.to_string(),
        Provenance::WholeUtterance => "utterance".into(),
    }
}

fn csv_text(header: &str, columns: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let head: Vec<&str> = KEY_COLUMNS
        .iter()
        .copied()
        .chain(columns.iter().map(String::as_str))
        .collect();
    w.write_record(&head).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields");
    format!("{header}{body}")
}

/// Files written by [`extract`].
#[derive(Debug, Clone)]
pub struct ExtractSummary {
    pub sessions: usize,
    pub files: Vec<PathBuf>,
}

/// Computes every feature family for every session and writes one CSV per
/// family (one per prosodic preset).
pub fn extract(cfg: &RunConfig) -> Result<ExtractSummary> {
    let corpus = corpus::load_corpus(&cfg.manifest)?;
    let presets = cfg.resolve_presets()?;
    SilenceFloor::new(cfg.silence_floor_db)?;
    let wordlist = match &cfg.wordlist {
        Some(p) => WordList::from_file(p, cfg.sophistication_rank)?,
        None => WordList::default(),
    };
    let features: Vec<SessionFeatures> = corpus
        .sessions()
        .par_iter()
        .map(|rec| {
            extract_session(rec, &presets, &wordlist, cfg).map_err(|e| Error::in_session(&rec.key, e))
        })
        .collect::<Result<_>>()?;

    let header = cfg.header("extract");
    let mut files = Vec::new();
    let mut emit = |name: &str, columns: &[String], rows: Vec<Vec<String>>| -> Result<()> {
        let path = cfg.out.join(name);
        write_file(&path, &csv_text(&header, columns, &rows))?;
        files.push(path);
        Ok(())
    };

    for (pi, preset) in presets.iter().enumerate() {
        let mut rows = Vec::new();
        for (rec, f) in corpus.sessions().iter().zip(&features) {
            for v in &f.prosody[pi] {
                let mut r = key_fields(&rec.key, &instance_name(v.provenance));
                r.extend(v.values.iter().map(|&x| fmt_value(x)));
                rows.push(r);
            }
        }
        emit(&prosody_csv_name(&preset.name), &preset.feature_names(), rows)?;
    }

    let rows = corpus
        .sessions()
        .iter()
        .zip(&features)
        .map(|(rec, f)| {
            let mut r = key_fields(&rec.key, "utterance");
            r.extend(f.fusion.values.iter().map(|&x| fmt_value(x)));
            r
        })
        .collect();
    emit(
        FUSION_PROSODY_CSV,
        &FeatureSetPreset::egemaps_analog().feature_names(),
        rows,
    )?;

    let lex_cols: Vec<String> = LexMetricVector::NAMES.iter().map(|s| s.to_string()).collect();
    let rows = corpus
        .sessions()
        .iter()
        .zip(&features)
        .map(|(rec, f)| {
            let mut r = key_fields(&rec.key, "utterance");
            r.extend(f.lexical.values().iter().map(|&v| fmt_opt(v)));
            r
        })
        .collect();
    emit(LEXICAL_CSV, &lex_cols, rows)?;

    let syn_cols: Vec<String> = SynMetricVector::NAMES
        .iter()
        .chain(ProductionCounts::NAMES.iter())
        .map(|s| s.to_string())
        .collect();
    let rows = corpus
        .sessions()
        .iter()
        .zip(&features)
        .map(|(rec, f)| {
            let mut r = key_fields(&rec.key, "utterance");
            r.extend(f.syntactic.values().iter().map(|&v| fmt_opt(v)));
            r.extend(f.counts.as_array().iter().map(|c| c.to_string()));
            r
        })
        .collect();
    emit(SYNTACTIC_CSV, &syn_cols, rows)?;

    Ok(ExtractSummary {
        sessions: corpus.len(),
        files,
    })
}

// ---------------------------------------------------------------- evaluate

/// A feature CSV read back: column names and rows keyed by session.
struct FeatureTable {
    columns: Vec<String>,
    rows: Vec<(SessionKey, Option<usize>, Vec<f64>)>,
}

fn read_features(path: &Path) -> Result<FeatureTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |message: String| Error::Format {
        path: path.display().to_string(),
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let head = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if head.len() < KEY_COLUMNS.len() || head.iter().take(4).ne(KEY_COLUMNS) {
        return Err(bad("missing key columns".into()));
    }
    let columns = head.iter().skip(4).map(String::from).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| -> Result<u8> {
            rec[i]
                .parse()
                .map_err(|_| bad(format!("bad {} `{}`", KEY_COLUMNS[i], &rec[i])))
        };
        let key = SessionKey::new(&rec[0], num(1)?, num(2)?)?;
        let fragment = match &rec[3] {
            "utterance" => None,
            s => Some(s.parse().map_err(|_| bad(format!("bad instance `{s}`")))?),
        };
        let values = rec
            .iter()
            .skip(4)
            .map(|v| {
                if v.is_empty() {
                    Ok(f64::NAN)
                } else {
                    v.parse::<f64>().map_err(|_| bad(format!("bad value `{v}`")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((key, fragment, values));
    }
    Ok(FeatureTable { columns, rows })
}

fn labeled(table: FeatureTable, labels: &BTreeMap<SessionKey, Label>) -> Result<LabeledMatrix> {
    let mut rows = Vec::with_capacity(table.rows.len());
    let mut ys = Vec::with_capacity(table.rows.len());
    let mut meta = Vec::with_capacity(table.rows.len());
    for (key, fragment, values) in table.rows {
        let Some(&label) = labels.get(&key) else {
            return Err(Error::Format {
                path: key.to_string(),
                message: "features for a session missing from the manifest".into(),
            });
        };
        rows.push(values);
        ys.push(label);
        meta.push(RowMeta { key, fragment });
    }
    Ok(LabeledMatrix::new(table.columns, rows, ys, meta)?)
}

/// Like [`evaluate_grid`] but an empty case becomes a row of notes.
fn grid_rows(
    m: &LabeledMatrix,
    cases: &[Case],
    cfg: &RunConfig,
    scope: &str,
    group: Option<&str>,
) -> Result<Vec<ReportRow>> {
    let split = SplitSpec::new(cfg.seed);
    let mut out = Vec::new();
    for &case in cases {
        let mut rows = match evaluate_grid(m, &[case], &cfg.models, &split, scope) {
            Ok(rows) => rows,
            Err(LearnError::EmptyCase(name)) => vec![ReportRow {
                group: None,
                case: name,
                cells: cfg.models.iter().map(|s| Cell::empty(s.kind, "no instances")).collect(),
            }],
            Err(e) => return Err(e.into()),
        };
        for r in &mut rows {
            r.group = group.map(String::from);
        }
        out.extend(rows);
    }
    Ok(out)
}

/// Files written by [`evaluate`].
#[derive(Debug, Clone)]
pub struct EvaluateSummary {
    pub reports: Vec<EvalReport>,
    pub files: Vec<PathBuf>,
}

fn labels_for(corpus: &Corpus, criterion: Criterion) -> Result<BTreeMap<SessionKey, Label>> {
    Ok(corpus
        .labels(criterion)?
        .into_iter()
        .map(|a| (a.key, a.label))
        .collect())
}

fn rated_criterion(table: &str) -> Criterion {
    match table {
        "table1_prosody" => Criterion::OralFluency,
        "table2_lexical" => Criterion::LexicalRichness,
        "table3_syntactic" => Criterion::SyntacticMaturity,
        _ => Criterion::Overall,
    }
}

/// Reads the extracted CSVs from `cfg.out` and writes the four accuracy
/// tables (JSON and text), their confusion matrices and the per-cell label
/// counts.
pub fn evaluate(cfg: &RunConfig) -> Result<EvaluateSummary> {
    let corpus = corpus::load_corpus(&cfg.manifest)?;
    let presets = cfg.resolve_presets()?;
    let hash = cfg.config_hash();
    let report = |table: &str, title: &str, features: &str, n_features: usize, rows| EvalReport {
        table: table.into(),
        title: title.into(),
        features: features.into(),
        n_features,
        criterion: rated_criterion(table),
        config_hash: hash.clone(),
        seed: cfg.seed,
        split: SplitMeta {
            train_fraction: 0.7,
            stratified: true,
            seed: cfg.seed,
        },
        classifiers: cfg.models.iter().map(|m| m.kind).collect(),
        rows,
    };

    // Table 1: every reference set × day; sets without an extracted analog
    // are listed as not computed.
    let labels = labels_for(&corpus, Criterion::OralFluency)?;
    let mut rows = Vec::new();
    let mut done: Vec<&str> = Vec::new();
    for entry in preset_registry() {
        let group = format!("{} ({})", entry.name, entry.dim);
        match presets.iter().find(|p| Some(p.name.as_str()) == entry.analog) {
            Some(p) => {
                let m = labeled(read_features(&cfg.out.join(prosody_csv_name(&p.name)))?, &labels)?;
                rows.extend(grid_rows(&m, &Case::DAYS, cfg, &p.name, Some(&group))?);
                done.push(&p.name);
            }
            None => {
                for case in Case::DAYS {
                    rows.push(ReportRow {
                        group: Some(group.clone()),
                        case: case.to_string(),
                        cells: cfg.models.iter().map(|s| Cell::empty(s.kind, "not computed")).collect(),
                    });
                }
            }
        }
    }
    for p in presets.iter().filter(|p| !done.contains(&p.name.as_str()) && lookup(&p.name).is_none()) {
        let group = format!("{} ({})", p.name, p.declared_dim);
        let m = labeled(read_features(&cfg.out.join(prosody_csv_name(&p.name)))?, &labels)?;
        rows.extend(grid_rows(&m, &Case::DAYS, cfg, &p.name, Some(&group))?);
    }
    let t1 = report(
        TABLES[0],
        &format!("prosodic feature sets by day ({} instances)", cfg.mode),
        "prosody",
        0,
        rows,
    );

    let labels = labels_for(&corpus, Criterion::LexicalRichness)?;
    let lex = read_features(&cfg.out.join(LEXICAL_CSV))?;
    let lex_width = lex.columns.len();
    let m = labeled(lex, &labels)?;
    let t2 = report(
        TABLES[1],
        "lexical richness",
        "lexical",
        lex_width,
        grid_rows(&m, &Case::GRID, cfg, "lexical", None)?,
    );

    let labels = labels_for(&corpus, Criterion::SyntacticMaturity)?;
    let mut syn = read_features(&cfg.out.join(SYNTACTIC_CSV))?;
    // Only the ratios are classifier inputs; raw counts stay in the CSV.
    let n_ratios = SynMetricVector::NAMES.len();
    syn.columns.truncate(n_ratios);
    for r in &mut syn.rows {
        r.2.truncate(n_ratios);
    }
    let m = labeled(syn, &labels)?;
    let t3 = report(
        TABLES[2],
        "syntactic complexity",
        "syntactic",
        n_ratios,
        grid_rows(&m, &Case::GRID, cfg, "syntactic", None)?,
    );

    let labels = labels_for(&corpus, Criterion::Overall)?;
    let m = fused_matrix(cfg, &labels)?;
    let width = m.width();
    let t4 = report(
        TABLES[3],
        "early fusion of lexical, syntactic and prosodic features",
        "lexical+syntactic+prosody",
        width,
        grid_rows(&m, &Case::GRID, cfg, "fused", None)?,
    );

    let mut files = Vec::new();
    let reports = vec![t1, t2, t3, t4];
    for r in &reports {
        let json = cfg.out.join(format!("{}.json", r.table));
        write_file(&json, &r.to_json())?;
        let txt = cfg.out.join(format!("{}.txt", r.table));
        write_file(&txt, &r.render_text())?;
        let conf = cfg.out.join(CONFUSION_DIR).join(format!("{}.csv", r.table));
        write_file(&conf, &format!("{}{}", cfg.header("confusion"), r.confusion_csv()))?;
        files.extend([json, txt, conf]);
    }

    let mut counts = cfg.header("counts");
    counts.push_str("day,article,sessions,basic,average,advance\n");
    for c in corpus::corpus_summary(&corpus)? {
        let _ = writeln!(
            counts,
            "{},{},{},{},{},{}",
            c.day, c.article, c.sessions, c.counts[0], c.counts[1], c.counts[2]
        );
    }
    let path = cfg.out.join(COUNTS_CSV);
    write_file(&path, &counts)?;
    files.push(path);
    Ok(EvaluateSummary { reports, files })
}

fn fused_matrix(cfg: &RunConfig, labels: &BTreeMap<SessionKey, Label>) -> Result<LabeledMatrix> {
    let lex = read_features(&cfg.out.join(LEXICAL_CSV))?;
    let syn = read_features(&cfg.out.join(SYNTACTIC_CSV))?;
    let pro = read_features(&cfg.out.join(FUSION_PROSODY_CSV))?;
    let index = |t: &FeatureTable| -> BTreeMap<SessionKey, Vec<f64>> {
        t.rows.iter().map(|(k, _, v)| (k.clone(), v.clone())).collect()
    };
    let (lex_rows, syn_rows) = (index(&lex), index(&syn));
    let opt = |v: f64| (!v.is_nan()).then_some(v);
    let mut rows = Vec::new();
    for (key, _, values) in &pro.rows {
        let missing = |what: &str| Error::Format {
            path: key.to_string(),
            message: format!("no {what} features"),
        };
        let l = lex_rows.get(key).ok_or_else(|| missing("lexical"))?;
        let s = syn_rows.get(key).ok_or_else(|| missing("syntactic"))?;
        if l.len() != LexMetricVector::NAMES.len() {
            return Err(LearnError::DimensionMismatch {
                got: l.len(),
                expected: LexMetricVector::NAMES.len(),
            }
            .into());
        }
        let mut lv = LexMetricVector([None; 25]);
        for (o, &v) in lv.0.iter_mut().zip(l) {
            *o = opt(v);
        }
        let mut sv = SynMetricVector([None; 14]);
        for (o, &v) in sv.0.iter_mut().zip(s) {
            *o = opt(v);
        }
        let prosody = FeatureVector {
            preset: crate::functionals::EGEMAPS_ANALOG.into(),
            values: values.clone(),
            provenance: Provenance::WholeUtterance,
        };
        rows.push((key.clone(), None, fuse(&prosody, &lv, &sv)?));
    }
    labeled(
        FeatureTable {
            columns: fused_columns(&pro.columns),
            rows,
        },
        labels,
    )
}

/// Text renderings of the JSON reports found in `out`, in table order.
pub fn report(out: &Path) -> Result<String> {
    let mut s = String::new();
    for t in TABLES {
        let path = out.join(format!("{t}.json"));
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let r = EvalReport::from_json(&text).map_err(|e| Error::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        if !s.is_empty() {
            s.push('\n');
        }
        s.push_str(&r.render_text());
    }
    Ok(s)
}

/// Pairwise exact agreement per criterion.
pub fn agreement(manifest: &Path) -> Result<Vec<(Criterion, f64)>> {
    let corpus = corpus::load_corpus(manifest)?;
    Criterion::ALL
        .into_iter()
        .map(|c| Ok((c, corpus::inter_rater_agreement(&corpus, c)?)))
        .collect()
}
