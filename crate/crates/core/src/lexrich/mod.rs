//! Lexical richness: density, sophistication and variation.

mod tagger;

use std::collections::{HashMap, HashSet};
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Transcript;
use crate::synco::ParseTree;

/// Default sophistication threshold: lemmas ranked beyond this are
/// sophisticated.
pub const DEFAULT_SOPHISTICATION_RANK: usize = 2000;

/// Window size for NDW-50, the sampled NDW variants and MSTTR.
pub const SAMPLE_SIZE: usize = 50;

/// Samples drawn for NDW-ER50 and NDW-ES50.
pub const SAMPLE_COUNT: usize = 10;

#[derive(Debug, Error)]
pub enum LexError {
    #[error("sentence {sentence}: {tokens} tokens but {tags} gold tags")]
    TagCountMismatch {
        sentence: usize,
        tokens: usize,
        tags: usize,
    },
    #[error("{transcript} transcript sentences but {gold} gold-tag lines")]
    SentenceCountMismatch { transcript: usize, gold: usize },
    #[error("tag `{0}` is not in the Penn tag inventory")]
    UnknownTag(String),
    #[error("no word tokens")]
    Empty,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Penn Treebank part-of-speech tags, punctuation included.
pub const TAG_INVENTORY: [&str; 45] = [
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP",
    "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB",
    "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", ",", ".", ":", "``", "''",
    "-LRB-", "-RRB-", "#", "$",
];

const PUNCT_TAGS: [&str; 9] = [",", ".", ":", "``", "''", "-LRB-", "-RRB-", "#", "$"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    /// Lower-case.
    pub lemma: String,
    pub pos: String,
}

impl TaggedToken {
    pub fn new(surface: impl Into<String>, pos: impl Into<String>) -> Self {
        let surface = surface.into();
        let pos = pos.into();
        Self {
            lemma: tagger::lemmatize(&surface, &pos),
            surface,
            pos,
        }
    }

    pub fn is_word(&self) -> bool {
        !PUNCT_TAGS.contains(&self.pos.as_str()) && !tagger::is_punctuation(&self.surface)
    }
}

/// Gold tags, one line per sentence.
pub fn parse_gold_tags(text: &str) -> Result<Vec<Vec<String>>, LexError> {
    let gold: Vec<Vec<String>> = text
        .lines()
        .map(|l| l.split_whitespace().map(String::from).collect::<Vec<_>>())
        .filter(|l| !l.is_empty())
        .collect();
    if let Some(t) = gold.iter().flatten().find(|t| !TAG_INVENTORY.contains(&t.as_str())) {
        return Err(LexError::UnknownTag(t.clone()));
    }
    Ok(gold)
}

/// Preterminal labels of each tree, usable as gold tags.
pub fn tags_from_trees(trees: &[ParseTree]) -> Vec<Vec<String>> {
    trees
        .iter()
        .map(|t| t.tagged_leaves().into_iter().map(|(tag, _)| tag.to_string()).collect())
        .collect()
}

/// Tags a transcript with gold tags when given, else with the built-in
/// fallback tagger.
pub fn tag_tokens(t: &Transcript, gold: Option<&[Vec<String>]>) -> Result<Vec<TaggedToken>, LexError> {
    let sentences = t.sentences();
    if let Some(gold) = gold {
        if gold.len() != sentences.len() {
            return Err(LexError::SentenceCountMismatch {
                transcript: sentences.len(),
                gold: gold.len(),
            });
        }
        for (i, (s, g)) in sentences.iter().zip(gold).enumerate() {
            if s.len() != g.len() {
                return Err(LexError::TagCountMismatch {
                    sentence: i,
                    tokens: s.len(),
                    tags: g.len(),
                });
            }
        }
    }
    let mut out = Vec::new();
    for (i, s) in sentences.iter().enumerate() {
        let tags = match gold {
            Some(g) => g[i].clone(),
            None => tagger::tag_sentence(s),
        };
        out.extend(s.iter().zip(tags).map(|(w, tag)| TaggedToken::new(w.as_str(), tag)));
    }
    Ok(out)
}

/// Frequency-ranked lemma list; rank is the 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordList {
    ranks: HashMap<String, usize>,
    threshold: usize,
}

impl Default for WordList {
    fn default() -> Self {
        Self {
            ranks: HashMap::new(),
            threshold: DEFAULT_SOPHISTICATION_RANK,
        }
    }
}

impl WordList {
    /// Blank lines and lines starting with `#` keep their line number but
    /// name no lemma. Repeated lemmas keep their first rank.
    pub fn parse(text: &str, threshold: usize) -> Self {
        let mut ranks = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let w = line.trim();
            if w.is_empty() || w.starts_with('#') {
                continue;
            }
            ranks.entry(w.to_lowercase()).or_insert(i + 1);
        }
        Self { ranks, threshold }
    }

    pub fn from_file(path: impl AsRef<Path>, threshold: usize) -> Result<Self, LexError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LexError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::parse(&text, threshold))
    }

    pub fn rank(&self, lemma: &str) -> Option<usize> {
        self.ranks.get(lemma).copied()
    }

    pub fn is_sophisticated(&self, lemma: &str) -> bool {
        self.rank(lemma).is_none_or(|r| r > self.threshold)
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

const AUX_LEMMAS: [&str; 3] = ["be", "have", "do"];
const MODAL_LEMMAS: [&str; 10] = [
    "can", "could", "will", "would", "shall", "should", "may", "might", "must", "'ll",
];
/// `-ly` words that are not adverbs formed on an adjective.
const NON_ADJECTIVAL_LY: [&str; 8] = [
    "only", "early", "daily", "weekly", "monthly", "yearly", "hourly", "nightly",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WordClass {
    Noun,
    Adjective,
    Verb,
    Adverb,
}

fn lexical_class(t: &TaggedToken) -> Option<WordClass> {
    let pos = t.pos.as_str();
    let lemma = t.lemma.as_str();
    if pos.starts_with("NN") {
        Some(WordClass::Noun)
    } else if pos.starts_with("JJ") {
        Some(WordClass::Adjective)
    } else if pos.starts_with("VB") {
        (!AUX_LEMMAS.contains(&lemma) && !MODAL_LEMMAS.contains(&lemma)).then_some(WordClass::Verb)
    } else if pos.starts_with("RB") {
        (lemma.len() >= 5 && lemma.ends_with("ly") && !NON_ADJECTIVAL_LY.contains(&lemma))
            .then_some(WordClass::Adverb)
    } else {
        None
    }
}

/// Token and type counts behind the metric catalog. Types are distinct
/// lemmas.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexicalProfile {
    pub n: usize,
    pub t: usize,
    pub n_lex: usize,
    pub t_lex: usize,
    pub n_verb: usize,
    pub t_verb: usize,
    pub n_noun: usize,
    pub t_noun: usize,
    pub n_adj: usize,
    pub t_adj: usize,
    pub n_adv: usize,
    pub t_adv: usize,
    pub n_soph: usize,
    pub t_soph: usize,
    pub n_soph_lex: usize,
    pub t_sverb: usize,
}

pub fn build_profile(tokens: &[TaggedToken], wordlist: &WordList) -> Result<LexicalProfile, LexError> {
    let mut p = LexicalProfile::default();
    let mut types: HashSet<&str> = HashSet::new();
    let mut lex: HashSet<&str> = HashSet::new();
    let mut by_class: [HashSet<&str>; 4] = Default::default();
    let mut soph: HashSet<&str> = HashSet::new();
    let mut sverb: HashSet<&str> = HashSet::new();
    for tok in tokens.iter().filter(|t| t.is_word()) {
        let lemma = tok.lemma.as_str();
        let sophisticated = wordlist.is_sophisticated(lemma);
        p.n += 1;
        types.insert(lemma);
        if sophisticated {
            p.n_soph += 1;
            soph.insert(lemma);
        }
        let Some(class) = lexical_class(tok) else {
            continue;
        };
        p.n_lex += 1;
        lex.insert(lemma);
        if sophisticated {
            p.n_soph_lex += 1;
        }
        let slot = match class {
            WordClass::Noun => {
                p.n_noun += 1;
                0
            }
            WordClass::Adjective => {
                p.n_adj += 1;
                1
            }
            WordClass::Verb => {
                p.n_verb += 1;
                if sophisticated {
                    sverb.insert(lemma);
                }
                2
            }
            WordClass::Adverb => {
                p.n_adv += 1;
                3
            }
        };
        by_class[slot].insert(lemma);
    }
    if p.n == 0 {
        return Err(LexError::Empty);
    }
    p.t = types.len();
    p.t_lex = lex.len();
    p.t_noun = by_class[0].len();
    p.t_adj = by_class[1].len();
    p.t_verb = by_class[2].len();
    p.t_adv = by_class[3].len();
    p.t_soph = soph.len();
    p.t_sverb = sverb.len();
    Ok(p)
}

/// The 25 metrics in catalog order; `None` marks an undefined value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LexMetricVector(pub [Option<f64>; 25]);

impl LexMetricVector {
    pub const NAMES: [&'static str; 25] = [
        "LD", "LS1", "LS2", "VS1", "VS2", "CVS1", "NDW", "NDW-50", "NDW-ER50", "NDW-ES50", "TTR",
        "MSTTR-50", "CTTR", "RTTR", "LogTTR", "Uber", "LV", "VV1", "SVV1", "CVV1", "VV2", "NV",
        "AdjV", "AdvV", "ModV",
    ];

    pub fn get(&self, name: &str) -> Option<f64> {
        Self::NAMES
            .iter()
            .position(|n| *n == name)
            .and_then(|i| self.0[i])
    }

    pub fn values(&self) -> &[Option<f64>; 25] {
        &self.0
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den != 0.0).then(|| num / den)
}

fn distinct<'a>(lemmas: impl IntoIterator<Item = &'a str>) -> usize {
    lemmas.into_iter().collect::<HashSet<_>>().len()
}

/// Computes the catalog. `tokens` must be the ones the profile was built
/// from; the sampled NDW variants draw from a ChaCha8 stream seeded with
/// `seed` (ten index subsets for ER50, then ten window starts for ES50).
pub fn lexical_metrics(p: &LexicalProfile, tokens: &[TaggedToken], seed: u64) -> Result<LexMetricVector, LexError> {
    if p.n == 0 {
        return Err(LexError::Empty);
    }
    let lemmas: Vec<&str> = tokens
        .iter()
        .filter(|t| t.is_word())
        .map(|t| t.lemma.as_str())
        .collect();
    let n = p.n as f64;
    let t = p.t as f64;
    let n_lex = p.n_lex as f64;
    let n_verb = p.n_verb as f64;
    let t_verb = p.t_verb as f64;
    let t_sverb = p.t_sverb as f64;

    let (ndw50, er50, es50, msttr) = if lemmas.len() >= SAMPLE_SIZE {
        let len = lemmas.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let er = (0..SAMPLE_COUNT)
            .map(|_| {
                distinct(index::sample(&mut rng, len, SAMPLE_SIZE).into_iter().map(|i| lemmas[i]))
                    as f64
            })
            .sum::<f64>()
            / SAMPLE_COUNT as f64;
        let es = (0..SAMPLE_COUNT)
            .map(|_| {
                let start = rng.gen_range(0..=len - SAMPLE_SIZE);
                distinct(lemmas[start..start + SAMPLE_SIZE].iter().copied()) as f64
            })
            .sum::<f64>()
            / SAMPLE_COUNT as f64;
        let segments: Vec<f64> = lemmas
            .chunks_exact(SAMPLE_SIZE)
            .map(|c| distinct(c.iter().copied()) as f64 / SAMPLE_SIZE as f64)
            .collect();
        let msttr = segments.iter().sum::<f64>() / segments.len() as f64;
        (
            Some(distinct(lemmas[..SAMPLE_SIZE].iter().copied()) as f64),
            Some(er),
            Some(es),
            Some(msttr),
        )
    } else {
        (None, None, None, None)
    };

    Ok(LexMetricVector([
        Some(n_lex / n),
        ratio(p.n_soph_lex as f64, n_lex),
        ratio(p.t_soph as f64, t),
        ratio(t_sverb, n_verb),
        ratio(t_sverb * t_sverb, n_verb),
        ratio(t_sverb, (2.0 * n_verb).sqrt()),
        Some(t),
        ndw50,
        er50,
        es50,
        Some(t / n),
        msttr,
        Some(t / (2.0 * n).sqrt()),
        Some(t / n.sqrt()),
        ratio(t.ln(), n.ln()),
        ratio(n.ln() * n.ln(), (n / t).ln()),
        ratio(p.t_lex as f64, n_lex),
        ratio(t_verb, n_verb),
        ratio(t_verb * t_verb, n_verb),
        ratio(t_verb, (2.0 * n_verb).sqrt()),
        ratio(t_verb, n_lex),
        ratio(p.t_noun as f64, n_lex),
        ratio(p.t_adj as f64, n_lex),
        ratio(p.t_adv as f64, n_lex),
        ratio((p.t_adj + p.t_adv) as f64, n_lex),
    ]))
}
