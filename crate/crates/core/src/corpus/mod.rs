//! Session manifest, sidecar formats, label derivation and agreement.
//!
//! A manifest is a JSON document
//!
//! ```json
//! {"sessions": [{"participant_id": "p01", "day": 1, "article": 2,
//!                "audio": "p01_d1_a2.wav", "transcript": "p01_d1_a2.txt",
//!                "trees": "p01_d1_a2.mrg", "ratings": "p01_d1_a2.ratings.json",
//!                "disfluencies": "p01_d1_a2.disfl.json", "tags": "p01_d1_a2.tags"}]}
//! ```
//!
//! with paths relative to the manifest. `disfluencies` and `tags` are
//! optional. The ratings sidecar is
//! `{"raters": [{"rater_id": "r1", "scores": {"oral_fluency": 2, ...}}]}`.

mod transcript;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsp::{self, DspError};
use crate::synco::{self, ParseTree, SyntaxError};

pub use transcript::{
    tokenize, validate_transcript, DisfluencyCategory, DisfluencyEvent, DisfluencyLog,
    Transcript, Violation,
};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error("malformed {0}")]
    Malformed(String),
    #[error("duplicate session {0}")]
    DuplicateSession(SessionKey),
    #[error("day must be 1, 2 or 3, got {0}")]
    InvalidDay(u8),
    #[error("article must be 1 or 2, got {0}")]
    InvalidArticle(u8),
    #[error("rater {rater}: missing score for {criterion}")]
    MissingCriterion { rater: String, criterion: Criterion },
    #[error("rater {rater}: {criterion} score {score} is outside 1..=3")]
    ScoreOutOfRange {
        rater: String,
        criterion: Criterion,
        score: i64,
    },
    #[error("unknown criterion `{0}`")]
    UnknownCriterion(String),
    #[error("unknown disfluency category `{0}`")]
    UnknownDisfluency(String),
    #[error("no rater scores")]
    NoRaters,
    #[error("session {0} has fewer than two raters")]
    TooFewRaters(SessionKey),
    #[error("agreement is undefined on an empty corpus")]
    Empty,
    #[error("{path}: {source}")]
    Audio {
        path: String,
        #[source]
        source: DspError,
    },
    #[error("{path}: {source}")]
    Trees {
        path: String,
        #[source]
        source: SyntaxError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SessionKey {
    pub participant_id: String,
    pub day: u8,
    pub article: u8,
}

impl SessionKey {
    pub fn new(participant_id: impl Into<String>, day: u8, article: u8) -> Result<Self, CorpusError> {
        if !(1..=3).contains(&day) {
            return Err(CorpusError::InvalidDay(day));
        }
        if !(1..=2).contains(&article) {
            return Err(CorpusError::InvalidArticle(article));
        }
        Ok(Self {
            participant_id: participant_id.into(),
            day,
            article,
        })
    }
}

impl fmt::Display for SessionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/day{}/article{}", self.participant_id, self.day, self.article)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    OralFluency,
    LexicalRichness,
    SyntacticMaturity,
    Overall,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::OralFluency,
        Criterion::LexicalRichness,
        Criterion::SyntacticMaturity,
        Criterion::Overall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::OralFluency => "oral_fluency",
            Criterion::LexicalRichness => "lexical_richness",
            Criterion::SyntacticMaturity => "syntactic_maturity",
            Criterion::Overall => "overall",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Criterion {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CorpusError::UnknownCriterion(s.to_string()))
    }
}

/// Three-point proficiency scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Basic = 1,
    Average = 2,
    Advance = 3,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Basic, Label::Average, Label::Advance];

    pub fn from_score(score: u8) -> Option<Self> {
        match score {
            1 => Some(Label::Basic),
            2 => Some(Label::Average),
            3 => Some(Label::Advance),
            _ => None,
        }
    }

    pub fn score(self) -> u8 {
        self as u8
    }

    /// 0-based class index.
    pub fn index(self) -> usize {
        self as usize - 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::Basic => "basic",
            Label::Average => "average",
            Label::Advance => "advance",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One rater's scores on all four criteria.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RaterScoreSet {
    rater_id: String,
    scores: BTreeMap<Criterion, Label>,
}

impl RaterScoreSet {
    pub fn new(rater_id: impl Into<String>, scores: BTreeMap<Criterion, Label>) -> Result<Self, CorpusError> {
        let rater_id = rater_id.into();
        if let Some(&criterion) = Criterion::ALL.iter().find(|c| !scores.contains_key(c)) {
            return Err(CorpusError::MissingCriterion {
                rater: rater_id,
                criterion,
            });
        }
        Ok(Self { rater_id, scores })
    }

    /// Same label on every criterion.
    pub fn uniform(rater_id: impl Into<String>, label: Label) -> Self {
        Self {
            rater_id: rater_id.into(),
            scores: Criterion::ALL.iter().map(|&c| (c, label)).collect(),
        }
    }

    pub fn rater_id(&self) -> &str {
        &self.rater_id
    }

    pub fn score(&self, criterion: Criterion) -> Label {
        self.scores[&criterion]
    }
}

#[derive(Deserialize)]
struct RawRater {
    rater_id: String,
    scores: BTreeMap<String, i64>,
}

#[derive(Deserialize)]
struct RawRatings {
    raters: Vec<RawRater>,
}

/// Parses the ratings sidecar.
pub fn parse_ratings(text: &str) -> Result<Vec<RaterScoreSet>, CorpusError> {
    let raw: RawRatings =
        serde_json::from_str(text).map_err(|e| CorpusError::Malformed(format!("ratings: {e}")))?;
    raw.raters
        .into_iter()
        .map(|r| {
            let mut scores = BTreeMap::new();
            for (name, score) in r.scores {
                let criterion: Criterion = name.parse()?;
                let label = u8::try_from(score)
                    .ok()
                    .and_then(Label::from_score)
                    .ok_or_else(|| CorpusError::ScoreOutOfRange {
                        rater: r.rater_id.clone(),
                        criterion,
                        score,
                    })?;
                scores.insert(criterion, label);
            }
            RaterScoreSet::new(r.rater_id, scores)
        })
        .collect()
}

/// Mean of the numeric scores, rounded half up, mapped back to a label.
pub fn derive_label(scores: &[RaterScoreSet], criterion: Criterion) -> Result<Label, CorpusError> {
    if scores.is_empty() {
        return Err(CorpusError::NoRaters);
    }
    let n = scores.len() as u64;
    let sum: u64 = scores.iter().map(|s| u64::from(s.score(criterion).score())).sum();
    // floor(sum/n + 1/2) in integers.
    let rounded = (2 * sum + n) / (2 * n);
    Ok(Label::from_score(rounded as u8).expect("mean of 1..=3 scores stays in range"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelAssignment {
    pub key: SessionKey,
    pub criterion: Criterion,
    pub label: Label,
}

/// A loaded session with its parsed sidecars.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionRecord {
    pub key: SessionKey,
    pub audio_ref: PathBuf,
    pub transcript_ref: PathBuf,
    pub trees_ref: PathBuf,
    pub tags_ref: Option<PathBuf>,
    pub ratings: Vec<RaterScoreSet>,
    pub transcript: Transcript,
    pub disfluencies: DisfluencyLog,
    pub trees: Vec<ParseTree>,
}

impl SessionRecord {
    /// A record with ratings only; assets are empty.
    pub fn bare(key: SessionKey, ratings: Vec<RaterScoreSet>) -> Self {
        Self {
            key,
            audio_ref: PathBuf::new(),
            transcript_ref: PathBuf::new(),
            trees_ref: PathBuf::new(),
            tags_ref: None,
            ratings,
            transcript: Transcript::default(),
            disfluencies: DisfluencyLog::default(),
            trees: Vec::new(),
        }
    }

    pub fn label(&self, criterion: Criterion) -> Result<Label, CorpusError> {
        derive_label(&self.ratings, criterion)
    }

    /// Transcript convention checks plus the tree/sentence count match.
    pub fn violations(&self) -> Vec<Violation> {
        let mut v = validate_transcript(&self.transcript, &self.disfluencies);
        let sentences = self.transcript.sentences().len();
        if self.trees.len() != sentences {
            v.push(Violation::TreeCountMismatch {
                sentences,
                trees: self.trees.len(),
            });
        }
        v
    }
}

/// Immutable set of sessions, sorted by key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    root: PathBuf,
    sessions: Vec<SessionRecord>,
}

impl Corpus {
    pub fn new(root: impl Into<PathBuf>, mut sessions: Vec<SessionRecord>) -> Result<Self, CorpusError> {
        sessions.sort_by(|a, b| a.key.cmp(&b.key));
        if let Some(w) = sessions.windows(2).find(|w| w[0].key == w[1].key) {
            return Err(CorpusError::DuplicateSession(w[0].key.clone()));
        }
        if let Some(s) = sessions.iter().find(|s| s.ratings.is_empty()) {
            return Err(CorpusError::Malformed(format!("session {}: no raters", s.key)));
        }
        Ok(Self {
            root: root.into(),
            sessions,
        })
    }

    /// Directory the manifest's relative paths resolve against.
    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn sessions(&self) -> &[SessionRecord] {
        &self.sessions
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    pub fn labels(&self, criterion: Criterion) -> Result<Vec<LabelAssignment>, CorpusError> {
        self.sessions
            .iter()
            .map(|s| {
                Ok(LabelAssignment {
                    key: s.key.clone(),
                    criterion,
                    label: s.label(criterion)?,
                })
            })
            .collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    participant_id: String,
    day: u8,
    article: u8,
    audio: PathBuf,
    transcript: PathBuf,
    trees: PathBuf,
    ratings: PathBuf,
    #[serde(default)]
    disfluencies: Option<PathBuf>,
    #[serde(default)]
    tags: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    sessions: Vec<ManifestEntry>,
}

fn read(path: &Path) -> Result<String, CorpusError> {
    std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn in_file(path: &Path, e: CorpusError) -> CorpusError {
    match e {
        CorpusError::Malformed(message) => CorpusError::Json {
            path: path.display().to_string(),
            message,
        },
        other => other,
    }
}

/// Loads the manifest and every referenced asset: the audio header is
/// checked, transcripts, trees and sidecars are parsed.
pub fn load_corpus(manifest_path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let manifest_path = manifest_path.as_ref();
    let text = read(manifest_path)?;
    let root = manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    if text.trim().is_empty() {
        return Corpus::new(root, Vec::new());
    }
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| CorpusError::Json {
        path: manifest_path.display().to_string(),
        message: e.to_string(),
    })?;

    let mut seen = HashSet::new();
    let mut sessions = Vec::with_capacity(manifest.sessions.len());
    for entry in manifest.sessions {
        let key = SessionKey::new(entry.participant_id, entry.day, entry.article)?;
        if !seen.insert(key.clone()) {
            return Err(CorpusError::DuplicateSession(key));
        }
        let audio_ref = root.join(&entry.audio);
        dsp::probe_wav(&audio_ref).map_err(|source| CorpusError::Audio {
            path: audio_ref.display().to_string(),
            source,
        })?;

        let transcript_ref = root.join(&entry.transcript);
        let transcript = Transcript::parse(&read(&transcript_ref)?);

        let trees_ref = root.join(&entry.trees);
        let trees = synco::parse_bracketed(&read(&trees_ref)?).map_err(|source| {
            CorpusError::Trees {
                path: trees_ref.display().to_string(),
                source,
            }
        })?;

        let ratings_path = root.join(&entry.ratings);
        let ratings =
            parse_ratings(&read(&ratings_path)?).map_err(|e| in_file(&ratings_path, e))?;
        if ratings.is_empty() {
            return Err(CorpusError::Json {
                path: ratings_path.display().to_string(),
                message: "no raters".into(),
            });
        }

        let disfluencies = match entry.disfluencies {
            Some(p) => {
                let p = root.join(p);
                DisfluencyLog::from_json(&read(&p)?).map_err(|e| in_file(&p, e))?
            }
            None => DisfluencyLog::default(),
        };
        let tags_ref = entry.tags.map(|p| root.join(p));
        if let Some(p) = &tags_ref {
            read(p)?;
        }

        sessions.push(SessionRecord {
            key,
            audio_ref,
            transcript_ref,
            trees_ref,
            tags_ref,
            ratings,
            transcript,
            disfluencies,
            trees,
        });
    }
    Corpus::new(root, sessions)
}

/// Pairwise exact-agreement rate, pooled over every rater pair of every
/// session.
pub fn inter_rater_agreement(corpus: &Corpus, criterion: Criterion) -> Result<f64, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::Empty);
    }
    let (mut agree, mut pairs) = (0usize, 0usize);
    for s in corpus.sessions() {
        if s.ratings.len() < 2 {
            return Err(CorpusError::TooFewRaters(s.key.clone()));
        }
        for (i, a) in s.ratings.iter().enumerate() {
            for b in &s.ratings[i + 1..] {
                pairs += 1;
                if a.score(criterion) == b.score(criterion) {
                    agree += 1;
                }
            }
        }
    }
    Ok(agree as f64 / pairs as f64)
}

/// Overall-label counts for one (day, article) cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CellCounts {
    pub day: u8,
    pub article: u8,
    pub sessions: usize,
    /// Indexed by [`Label::index`].
    pub counts: [usize; 3],
}

/// The six (day, article) cells in day-major order.
pub fn corpus_summary(corpus: &Corpus) -> Result<[CellCounts; 6], CorpusError> {
    let mut cells = [CellCounts {
        day: 0,
        article: 0,
        sessions: 0,
        counts: [0; 3],
    }; 6];
    for (i, cell) in cells.iter_mut().enumerate() {
        cell.day = (i / 2) as u8 + 1;
        cell.article = (i % 2) as u8 + 1;
    }
    for s in corpus.sessions() {
        let cell = &mut cells[usize::from(s.key.day - 1) * 2 + usize::from(s.key.article - 1)];
        cell.sessions += 1;
        cell.counts[s.label(Criterion::Overall)?.index()] += 1;
    }
    Ok(cells)
}
