use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// A cleaned transcript: one sentence per line, brief pauses as commas,
/// long pauses as the sentence-final full stop.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    sentences: Vec<Vec<String>>,
    raw_text: String,
}

const CLITICS: [&str; 7] = ["n't", "'s", "'re", "'ve", "'ll", "'m", "'d"];

fn is_punct_char(c: char) -> bool {
    c.is_ascii_punctuation() && c != '\'' && c != '-'
}

fn is_punct_token(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| c.is_ascii_punctuation())
}

fn split_chunk(chunk: &str, out: &mut Vec<String>) {
    let start = chunk.find(|c: char| !is_punct_char(c)).unwrap_or(chunk.len());
    for c in chunk[..start].chars() {
        out.push(c.to_string());
    }
    let rest = &chunk[start..];
    let end = rest
        .char_indices()
        .rev()
        .take_while(|(_, c)| is_punct_char(*c))
        .last()
        .map_or(rest.len(), |(i, _)| i);
    let word = &rest[..end];
    if !word.is_empty() {
        let lower = word.to_ascii_lowercase();
        match CLITICS
            .iter()
            .find(|c| lower.ends_with(**c) && lower.len() > c.len())
        {
            Some(c) => {
                let cut = word.len() - c.len();
                out.push(word[..cut].to_string());
                out.push(word[cut..].to_string());
            }
            None => out.push(word.to_string()),
        }
    }
    for c in rest[end..].chars() {
        out.push(c.to_string());
    }
}

/// Splits one line into word and punctuation tokens; contractions are split
/// into stem and clitic (`didn't` → `did`, `n't`).
pub fn tokenize(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in line.split_whitespace() {
        split_chunk(chunk, &mut out);
    }
    out
}

fn attaches_left(tok: &str) -> bool {
    is_punct_token(tok) || CLITICS.iter().any(|c| tok.eq_ignore_ascii_case(c))
}

fn render(sentence: &[String]) -> String {
    let mut line = String::new();
    for tok in sentence {
        if !line.is_empty() && !attaches_left(tok) {
            line.push(' ');
        }
        line.push_str(tok);
    }
    line
}

impl Transcript {
    /// Reads text with one sentence per line; blank lines are skipped.
    pub fn parse(text: &str) -> Self {
        let sentences: Vec<Vec<String>> = text
            .lines()
            .map(tokenize)
            .filter(|s| !s.is_empty())
            .collect();
        Self {
            sentences,
            raw_text: text.to_string(),
        }
    }

    /// Builds a transcript that follows the pause convention: any interior
    /// stop or foreign mark becomes a comma and every sentence ends in a
    /// single full stop. Empty sentences are dropped.
    pub fn normalized(sentences: Vec<Vec<String>>) -> Self {
        let mut clean = Vec::new();
        for s in sentences {
            let mut out: Vec<String> = Vec::with_capacity(s.len() + 1);
            for tok in s.into_iter().filter(|t| !t.trim().is_empty()) {
                if is_punct_token(&tok) && tok != "," {
                    if out.last().is_some_and(|t| t != ",") {
                        out.push(",".into());
                    }
                } else if !tok.chars().any(char::is_whitespace) {
                    out.push(tok);
                }
            }
            while out.last().is_some_and(|t| t == ",") {
                out.pop();
            }
            if out.is_empty() {
                continue;
            }
            out.push(".".into());
            clean.push(out);
        }
        let raw_text = clean.iter().map(|s| render(s) + "\n").collect();
        Self {
            sentences: clean,
            raw_text,
        }
    }

    pub fn sentences(&self) -> &[Vec<String>] {
        &self.sentences
    }

    pub fn raw_text(&self) -> &str {
        &self.raw_text
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Serialises one sentence per line with punctuation attached.
    pub fn to_text(&self) -> String {
        self.sentences.iter().map(|s| render(s) + "\n").collect()
    }

    /// Non-punctuation tokens across all sentences.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.sentences
            .iter()
            .flatten()
            .map(String::as_str)
            .filter(|t| !is_punct_token(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisfluencyCategory {
    Mispronunciation,
    Hesitation,
    Repetition,
    Repair,
    Deletion,
    Substitution,
    Insertion,
    Incomplete,
    Incomprehensible,
}

impl DisfluencyCategory {
    pub const ALL: [DisfluencyCategory; 9] = [
        Self::Mispronunciation,
        Self::Hesitation,
        Self::Repetition,
        Self::Repair,
        Self::Deletion,
        Self::Substitution,
        Self::Insertion,
        Self::Incomplete,
        Self::Incomprehensible,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Mispronunciation => "mispronunciation",
            Self::Hesitation => "hesitation",
            Self::Repetition => "repetition",
            Self::Repair => "repair",
            Self::Deletion => "deletion",
            Self::Substitution => "substitution",
            Self::Insertion => "insertion",
            Self::Incomplete => "incomplete",
            Self::Incomprehensible => "incomprehensible",
        }
    }
}

impl fmt::Display for DisfluencyCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DisfluencyCategory {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CorpusError::UnknownDisfluency(s.to_string()))
    }
}

/// One removed token. `offset` indexes the sentence's token stream before
/// any disfluent token was removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisfluencyEvent {
    pub category: DisfluencyCategory,
    pub sentence: usize,
    pub offset: usize,
    pub surface: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisfluencyLog {
    pub events: Vec<DisfluencyEvent>,
}

#[derive(Deserialize)]
struct RawEvent {
    category: String,
    sentence: usize,
    offset: usize,
    surface: String,
}

#[derive(Deserialize)]
struct RawLog {
    #[serde(default)]
    events: Vec<RawEvent>,
}

impl DisfluencyLog {
    /// Parses the JSON sidecar `{"events": [...]}`.
    pub fn from_json(text: &str) -> Result<Self, CorpusError> {
        let raw: RawLog = serde_json::from_str(text)
            .map_err(|e| CorpusError::Malformed(format!("disfluency log: {e}")))?;
        let events = raw
            .events
            .into_iter()
            .map(|e| {
                Ok(DisfluencyEvent {
                    category: e.category.parse()?,
                    sentence: e.sentence,
                    offset: e.offset,
                    surface: e.surface,
                })
            })
            .collect::<Result<_, CorpusError>>()?;
        Ok(Self { events })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptySentence {
        sentence: usize,
    },
    MissingTerminalStop {
        sentence: usize,
    },
    InteriorStop {
        sentence: usize,
        token: usize,
    },
    ForeignPunctuation {
        sentence: usize,
        token: usize,
        mark: String,
    },
    DisfluencyRetained {
        sentence: usize,
        token: usize,
        category: DisfluencyCategory,
        surface: String,
    },
    DisfluencyOutOfRange {
        sentence: usize,
    },
    TreeCountMismatch {
        sentences: usize,
        trees: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptySentence { sentence } => write!(f, "sentence {sentence}: empty"),
            Self::MissingTerminalStop { sentence } => {
                write!(f, "sentence {sentence}: no terminal full stop")
            }
            Self::InteriorStop { sentence, token } => {
                write!(f, "sentence {sentence}, token {token}: full stop inside a sentence")
            }
            Self::ForeignPunctuation {
                sentence,
                token,
                mark,
            } => write!(
                f,
                "sentence {sentence}, token {token}: `{mark}` is not a pause mark"
            ),
            Self::DisfluencyRetained {
                sentence,
                token,
                category,
                surface,
            } => write!(
                f,
                "sentence {sentence}, token {token}: {category} `{surface}` still in transcript"
            ),
            Self::DisfluencyOutOfRange { sentence } => {
                write!(f, "disfluency logged in missing sentence {sentence}")
            }
            Self::TreeCountMismatch { sentences, trees } => {
                write!(f, "{sentences} transcript sentences but {trees} trees")
            }
        }
    }
}

/// Checks the pause convention and that no logged disfluency survives.
///
/// Logged offsets refer to the stream before removal, so an event maps to
/// cleaned index `offset - k`, `k` being the number of earlier events in the
/// same sentence. A non-repetition event is retained if its surface appears
/// within one token of that index; a repetition is retained if the surface
/// still appears twice in a row there.
pub fn validate_transcript(t: &Transcript, d: &DisfluencyLog) -> Vec<Violation> {
    let mut out = Vec::new();
    for (si, s) in t.sentences.iter().enumerate() {
        let Some(last) = s.last() else {
            out.push(Violation::EmptySentence { sentence: si });
            continue;
        };
        for (ti, tok) in s.iter().enumerate() {
            if !is_punct_token(tok) || tok == "," {
                continue;
            }
            if tok == "." {
                if ti + 1 != s.len() {
                    out.push(Violation::InteriorStop {
                        sentence: si,
                        token: ti,
                    });
                }
            } else {
                out.push(Violation::ForeignPunctuation {
                    sentence: si,
                    token: ti,
                    mark: tok.clone(),
                });
            }
        }
        if last != "." {
            out.push(Violation::MissingTerminalStop { sentence: si });
        }
    }

    let mut events: Vec<&DisfluencyEvent> = d.events.iter().collect();
    events.sort_by_key(|e| (e.sentence, e.offset));
    let mut earlier = 0usize;
    let mut prev_sentence = usize::MAX;
    for e in events {
        if e.sentence != prev_sentence {
            earlier = 0;
            prev_sentence = e.sentence;
        }
        let k = earlier;
        earlier += 1;
        let Some(s) = t.sentences.get(e.sentence) else {
            out.push(Violation::DisfluencyOutOfRange {
                sentence: e.sentence,
            });
            continue;
        };
        let at = e.offset.saturating_sub(k);
        let hit = |i: usize| s.get(i).is_some_and(|tok| tok.eq_ignore_ascii_case(&e.surface));
        let found = if e.category == DisfluencyCategory::Repetition {
            [at.checked_sub(1), Some(at)]
                .into_iter()
                .flatten()
                .find(|&i| hit(i) && hit(i + 1))
        } else {
            [Some(at), at.checked_sub(1), Some(at + 1)]
                .into_iter()
                .flatten()
                .find(|&i| hit(i))
        };
        if let Some(token) = found {
            out.push(Violation::DisfluencyRetained {
                sentence: e.sentence,
                token,
                category: e.category,
                surface: e.surface.clone(),
            });
        }
    }
    out
}
