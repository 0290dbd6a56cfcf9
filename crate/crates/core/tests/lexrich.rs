mod common;

use common::{brute_force_metrics, compare_metrics, oracle_wordlist, random_text, tokens_of, VOCAB};
use fluency_core::corpus::Transcript;
use fluency_core::lexrich::{build_profile, lexical_metrics, tag_tokens, LexError, TaggedToken, WordList};
use fluency_core::LexMetricVector;
use proptest::prelude::*;

fn metrics(text: &[usize], seed: u64) -> LexMetricVector {
    let toks = tokens_of(text);
    let p = build_profile(&toks, &oracle_wordlist()).unwrap();
    lexical_metrics(&p, &toks, seed).unwrap()
}

/// Splits a vocabulary-index text into sentences at each ".".
fn sentences(text: &[usize]) -> Vec<Vec<usize>> {
    let stop = VOCAB.iter().position(|v| v.0 == ".").unwrap();
    let mut out = vec![Vec::new()];
    for &i in text {
        out.last_mut().unwrap().push(i);
        if i == stop {
            out.push(Vec::new());
        }
    }
    out.retain(|s| !s.is_empty());
    out
}

const POSITIONAL: [&str; 3] = ["NDW-50", "NDW-ES50", "MSTTR-50"];

#[test]
fn oracle_agrees_on_fixed_texts() {
    for (len, seed) in [(20, 1), (49, 2), (50, 3), (51, 4), (137, 5), (300, 6)] {
        let text = random_text(len, seed);
        let got = metrics(&text, seed);
        let want = brute_force_metrics(&text, seed);
        assert_eq!(compare_metrics(got.values(), &want, 1e-9), None, "len {len}");
    }
}

#[test]
fn short_texts_leave_window_metrics_undefined() {
    let m = metrics(&random_text(30, 9), 0);
    for name in ["NDW-50", "NDW-ER50", "NDW-ES50", "MSTTR-50"] {
        assert_eq!(m.get(name), None, "{name}");
    }
    assert!(m.get("TTR").is_some());
}

#[test]
fn punctuation_only_is_an_error() {
    let toks = vec![TaggedToken::new(",", ","), TaggedToken::new(".", ".")];
    assert!(matches!(build_profile(&toks, &WordList::default()), Err(LexError::Empty)));
}

#[test]
fn fallback_tagger_feeds_the_profile() {
    let t = Transcript::parse("The enormous dogs quickly devoured two apples.\nShe was happy.\n");
    let toks = tag_tokens(&t, None).unwrap();
    let p = build_profile(&toks, &WordList::default()).unwrap();
    assert_eq!(p.n, 10);
    // dogs, devoured, apples, enormous, quickly, happy
    assert_eq!(p.n_lex, 6);
    assert_eq!(p.n_verb, 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_brute_force(len in 20usize..=300, seed: u64) {
        let text = random_text(len, seed);
        let got = metrics(&text, seed);
        let want = brute_force_metrics(&text, seed);
        prop_assert_eq!(compare_metrics(got.values(), &want, 1e-9), None);
    }

    #[test]
    fn self_concatenation(len in 20usize..=200, seed: u64) {
        let text = random_text(len, seed);
        let twice: Vec<usize> = text.iter().chain(&text).copied().collect();
        let (a, b) = (metrics(&text, seed), metrics(&twice, seed));
        prop_assert_eq!(a.get("NDW"), b.get("NDW"));
        prop_assert_eq!(b.get("TTR"), a.get("TTR").map(|v| v / 2.0));
        let (ra, rb) = (a.get("RTTR").unwrap(), b.get("RTTR").unwrap());
        prop_assert!((rb - ra / 2f64.sqrt()).abs() <= 1e-12 * ra);
    }

    #[test]
    fn er50_is_bounded(len in 80usize..=300, seed: u64) {
        let m = metrics(&random_text(len, seed), seed);
        // Undefined when punctuation leaves fewer than 50 words.
        prop_assume!(m.get("NDW-ER50").is_some());
        let er = m.get("NDW-ER50").unwrap();
        prop_assert!((1.0..=50.0).contains(&er));
        prop_assert!(er <= m.get("NDW").unwrap());
    }

    #[test]
    fn sentence_order_invariance(len in 20usize..=300, seed: u64, rot in 0usize..50) {
        let text = random_text(len, seed);
        let mut s = sentences(&text);
        let k = rot % s.len();
        s.rotate_left(k);
        s.reverse();
        let permuted: Vec<usize> = s.concat();
        let (a, b) = (metrics(&text, seed), metrics(&permuted, seed));
        for (i, name) in LexMetricVector::NAMES.iter().enumerate() {
            if POSITIONAL.contains(name) || *name == "NDW-ER50" {
                continue;
            }
            match (a.values()[i], b.values()[i]) {
                (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{}", name),
                (x, y) => prop_assert_eq!(x, y, "{}", name),
            }
        }
    }

    #[test]
    fn case_does_not_split_types(len in 20usize..=120, seed: u64) {
        let text = random_text(len, seed);
        let lower = tokens_of(&text);
        let upper: Vec<TaggedToken> = lower
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let s = if i % 2 == 0 { t.surface.to_uppercase() } else { t.surface.clone() };
                TaggedToken::new(s, t.pos.clone())
            })
            .collect();
        let list = oracle_wordlist();
        let a = build_profile(&lower, &list).unwrap();
        let b = build_profile(&upper, &list).unwrap();
        prop_assert_eq!(a, b);
    }
}
