//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use fluency_core::corpus::{Label, SessionKey};
use fluency_core::learn::{LabeledMatrix, RowMeta};
use fluency_core::lexrich::{TaggedToken, WordList};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn mini_corpus_manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/mini-corpus/manifest.json")
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

// ------------------------------------------------------------------ blobs

pub fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Three unit-variance blobs on an equilateral triangle of side `sep`.
pub fn blobs(per_class: usize, sep: f64, seed: u64) -> LabeledMatrix {
    let centres = [(0.0, 0.0), (sep, 0.0), (sep / 2.0, sep * 3f64.sqrt() / 2.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut meta = Vec::new();
    for (c, &(cx, cy)) in centres.iter().enumerate() {
        for i in 0..per_class {
            rows.push(vec![cx + gauss(&mut rng), cy + gauss(&mut rng)]);
            labels.push(Label::ALL[c]);
            meta.push(RowMeta {
                key: SessionKey::new(format!("s{c}_{i}"), 1, 1).unwrap(),
                fragment: None,
            });
        }
    }
    LabeledMatrix::new(vec!["x".into(), "y".into()], rows, labels, meta).unwrap()
}

// ------------------------------------------------------ syntax fixture

/// Counts for each line of `ten_sentences.mrg`, analysed by hand:
/// [W, S, C, T, CT, DC, CP, CN, VP].
pub const TEN_SENTENCE_COUNTS: [[usize; 9]; 10] = [
    // The crow sang.
    [3, 1, 1, 1, 0, 0, 0, 0, 1],
    // Adjective-modified subject: one complex nominal.
    [6, 1, 1, 1, 0, 0, 0, 1, 1],
    // "that" complement: dependent clause, complex T-unit; the SBAR under
    // VP and the JJ object are complex nominals.
    [9, 1, 2, 1, 1, 1, 0, 2, 2],
    // Coordinated VPs: one clause via CC, one coordinate phrase.
    [5, 1, 1, 1, 0, 0, 1, 0, 1],
    // Fronted WHADVP adverbial clause: not a complex nominal.
    [7, 1, 2, 1, 1, 1, 0, 0, 2],
    // Two coordinated main clauses: two T-units, no coordinate phrase.
    [7, 1, 2, 2, 0, 0, 0, 0, 2],
    // Relative clause inside the subject NP.
    [7, 1, 2, 1, 1, 1, 0, 1, 2],
    // Infinitival complement: not a clause, but its VP counts.
    [7, 1, 1, 1, 0, 0, 0, 0, 2],
    // Possessive subject; coordinated object NP.
    [10, 1, 1, 1, 0, 0, 1, 1, 1],
    // Gerund subject followed by VP: complex nominal.
    [4, 1, 1, 1, 0, 0, 0, 1, 2],
];

// -------------------------------------------------------- lexical oracle

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Class {
    Noun,
    Adj,
    Verb,
    Adv,
    Function,
    Punct,
}

/// (surface, tag, lemma, class)
pub const VOCAB: [(&str, &str, &str, Class); 34] = [
    ("dog", "NN", "dog", Class::Noun),
    ("dogs", "NNS", "dog", Class::Noun),
    ("river", "NN", "river", Class::Noun),
    ("cathedral", "NN", "cathedral", Class::Noun),
    ("ideas", "NNS", "idea", Class::Noun),
    ("walk", "NN", "walk", Class::Noun),
    ("green", "JJ", "green", Class::Adj),
    ("enormous", "JJ", "enormous", Class::Adj),
    ("happy", "JJ", "happy", Class::Adj),
    ("walk", "VB", "walk", Class::Verb),
    ("walked", "VBD", "walk", Class::Verb),
    ("ran", "VBD", "run", Class::Verb),
    ("runs", "VBZ", "run", Class::Verb),
    ("devour", "VB", "devour", Class::Verb),
    ("meandered", "VBD", "meander", Class::Verb),
    ("was", "VBD", "be", Class::Function),
    ("has", "VBZ", "have", Class::Function),
    ("did", "VBD", "do", Class::Function),
    ("can", "MD", "can", Class::Function),
    ("quickly", "RB", "quickly", Class::Adv),
    ("happily", "RB", "happily", Class::Adv),
    ("only", "RB", "only", Class::Function),
    ("very", "RB", "very", Class::Function),
    ("the", "DT", "the", Class::Function),
    ("a", "DT", "a", Class::Function),
    ("of", "IN", "of", Class::Function),
    ("and", "CC", "and", Class::Function),
    ("she", "PRP", "she", Class::Function),
    ("it", "PRP", "it", Class::Function),
    ("two", "CD", "two", Class::Function),
    ("to", "TO", "to", Class::Function),
    ("there", "EX", "there", Class::Function),
    (",", ",", ",", Class::Punct),
    (".", ".", ".", Class::Punct),
];

/// Rank list for the oracle; threshold 8 makes ranks 9+ and unlisted
/// lemmas sophisticated.
pub const ORACLE_LIST: &str = "the\na\nof\nand\nbe\nhave\ndo\nit\nshe\ndog\nwalk\nrun\nhappy\ngreen\nriver\n";
pub const ORACLE_THRESHOLD: usize = 8;

pub fn oracle_wordlist() -> WordList {
    WordList::parse(ORACLE_LIST, ORACLE_THRESHOLD)
}

fn oracle_rank(lemma: &str) -> Option<usize> {
    ORACLE_LIST.lines().position(|l| l == lemma).map(|i| i + 1)
}

fn oracle_sophisticated(lemma: &str) -> bool {
    oracle_rank(lemma).is_none_or(|r| r > ORACLE_THRESHOLD)
}

/// A random text of `len` vocabulary indices.
pub fn random_text(len: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(0..VOCAB.len())).collect()
}

pub fn tokens_of(text: &[usize]) -> Vec<TaggedToken> {
    text.iter().map(|&i| TaggedToken::new(VOCAB[i].0, VOCAB[i].1)).collect()
}

fn count_distinct(mut v: Vec<&str>) -> usize {
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// The 25 metrics by direct counting over the vocabulary's own lemma and
/// class annotations.
pub fn brute_force_metrics(text: &[usize], seed: u64) -> [Option<f64>; 25] {
    let words: Vec<(&str, Class)> = text
        .iter()
        .map(|&i| (VOCAB[i].2, VOCAB[i].3))
        .filter(|w| w.1 != Class::Punct)
        .collect();
    let lemmas: Vec<&str> = words.iter().map(|w| w.0).collect();
    let of = |c: Class| -> Vec<&str> { words.iter().filter(|w| w.1 == c).map(|w| w.0).collect() };
    let lexical: Vec<&str> = words
        .iter()
        .filter(|w| matches!(w.1, Class::Noun | Class::Adj | Class::Verb | Class::Adv))
        .map(|w| w.0)
        .collect();
    let verbs = of(Class::Verb);

    let n = lemmas.len() as f64;
    let t = count_distinct(lemmas.clone()) as f64;
    let n_lex = lexical.len() as f64;
    let t_lex = count_distinct(lexical.clone()) as f64;
    let n_verb = verbs.len() as f64;
    let t_verb = count_distinct(verbs.clone()) as f64;
    let t_noun = count_distinct(of(Class::Noun)) as f64;
    let t_adj = count_distinct(of(Class::Adj)) as f64;
    let t_adv = count_distinct(of(Class::Adv)) as f64;
    let n_soph_lex = lexical.iter().filter(|l| oracle_sophisticated(l)).count() as f64;
    let t_soph = count_distinct(lemmas.iter().copied().filter(|l| oracle_sophisticated(l)).collect()) as f64;
    let t_sverb = count_distinct(verbs.iter().copied().filter(|l| oracle_sophisticated(l)).collect()) as f64;

    let div = |a: f64, b: f64| if b == 0.0 { None } else { Some(a / b) };
    let sampled = if lemmas.len() >= 50 {
        let len = lemmas.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut er = 0.0;
        for _ in 0..10 {
            let pick: Vec<&str> = index::sample(&mut rng, len, 50).into_iter().map(|i| lemmas[i]).collect();
            er += count_distinct(pick) as f64;
        }
        let mut es = 0.0;
        for _ in 0..10 {
            let s = rng.gen_range(0..=len - 50);
            es += count_distinct(lemmas[s..s + 50].to_vec()) as f64;
        }
        let mut seg_sum = 0.0;
        let mut segs = 0.0;
        let mut k = 0;
        while k + 50 <= len {
            seg_sum += count_distinct(lemmas[k..k + 50].to_vec()) as f64 / 50.0;
            segs += 1.0;
            k += 50;
        }
        Some((count_distinct(lemmas[..50].to_vec()) as f64, er / 10.0, es / 10.0, seg_sum / segs))
    } else {
        None
    };
    [
        Some(n_lex / n),
        div(n_soph_lex, n_lex),
        div(t_soph, t),
        div(t_sverb, n_verb),
        div(t_sverb * t_sverb, n_verb),
        div(t_sverb, (2.0 * n_verb).sqrt()),
        Some(t),
        sampled.map(|s| s.0),
        sampled.map(|s| s.1),
        sampled.map(|s| s.2),
        Some(t / n),
        sampled.map(|s| s.3),
        Some(t / (2.0 * n).sqrt()),
        Some(t / n.sqrt()),
        div(t.ln(), n.ln()),
        div(n.ln().powi(2), (n / t).ln()),
        div(t_lex, n_lex),
        div(t_verb, n_verb),
        div(t_verb * t_verb, n_verb),
        div(t_verb, (2.0 * n_verb).sqrt()),
        div(t_verb, n_lex),
        div(t_noun, n_lex),
        div(t_adj, n_lex),
        div(t_adv, n_lex),
        div(t_adj + t_adv, n_lex),
    ]
}

/// First disagreement between the crate's metrics and the oracle, if any.
pub fn compare_metrics(got: &[Option<f64>; 25], want: &[Option<f64>; 25], tol: f64) -> Option<String> {
    use fluency_core::LexMetricVector;
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        let ok = match (g, w) {
            (None, None) => true,
            (Some(a), Some(b)) => (a - b).abs() <= tol * b.abs().max(1.0),
            _ => false,
        };
        if !ok {
            return Some(format!("{}: got {g:?}, oracle {w:?}", LexMetricVector::NAMES[i]));
        }
    }
    None
}
