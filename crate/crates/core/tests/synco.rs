mod common;

use common::{fixture, TEN_SENTENCE_COUNTS};
use fluency_core::synco::{count_tree, count_units, parse_bracketed, syntax_metrics, ParseTree, SyntaxError};
use proptest::prelude::*;

const PHRASES: [&str; 12] = [
    "S", "S", "SBAR", "SINV", "SQ", "SBARQ", "NP", "NP", "VP", "VP", "ADJP", "PP",
];
const TAGS: [(&str, &str); 12] = [
    ("DT", "the"),
    ("NN", "fox"),
    ("NNS", "grapes"),
    ("VBD", "ate"),
    ("VBZ", "sings"),
    ("MD", "can"),
    ("VB", "eat"),
    ("VBG", "singing"),
    ("TO", "to"),
    ("IN", "that"),
    ("CC", "and"),
    ("JJ", "sour"),
];

fn tree() -> impl Strategy<Value = ParseTree> {
    let leaf = (0..TAGS.len()).prop_map(|i| ParseTree::pre(TAGS[i].0, TAGS[i].1));
    leaf.prop_recursive(5, 48, 4, |inner| {
        (0..PHRASES.len(), prop::collection::vec(inner, 1..4))
            .prop_map(|(l, kids)| ParseTree::node(PHRASES[l], kids))
    })
}

#[test]
fn fixture_counts() {
    let trees = parse_bracketed(&std::fs::read_to_string(fixture("ten_sentences.mrg")).unwrap()).unwrap();
    assert_eq!(trees.len(), TEN_SENTENCE_COUNTS.len());
    for (i, (t, want)) in trees.iter().zip(TEN_SENTENCE_COUNTS).enumerate() {
        assert_eq!(count_tree(t).as_array(), want, "sentence {}: {t}", i + 1);
    }
    let total = count_units(&trees);
    let m = syntax_metrics(&total).unwrap();
    assert!((m.get("MLC").unwrap() * total.c as f64 - total.w as f64).abs() < 1e-12);
}

#[test]
fn malformed_brackets() {
    assert!(matches!(parse_bracketed("(S (NP fox)"), Err(SyntaxError::Unbalanced { .. })));
    assert!(matches!(parse_bracketed("fox (S)"), Err(SyntaxError::StrayToken { .. })));
    assert_eq!(parse_bracketed("  \n").unwrap(), Vec::new());
}

#[test]
fn punctuation_is_not_a_word() {
    let t = parse_bracketed("(ROOT (S (NP (NN fox)) (VP (VBD ran)) (. .)))").unwrap();
    assert_eq!(count_units(&t).w, 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bracketed_round_trip(t in tree()) {
        let text = t.to_string();
        let back = parse_bracketed(&text).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(back[0].to_string(), text);
        prop_assert_eq!(count_tree(&back[0]), count_tree(&t));
    }

    #[test]
    fn unit_bounds(t in tree()) {
        let pc = count_tree(&t);
        prop_assert_eq!(pc.s, 1);
        prop_assert_eq!(pc.w, t.leaves().len());
        prop_assert!(pc.dc <= pc.c, "{:?} {}", pc, t);
        prop_assert!(pc.ct <= pc.t, "{:?} {}", pc, t);
        prop_assert!(pc.t <= pc.c, "{:?} {}", pc, t);
    }

    #[test]
    fn counts_are_additive(ts in prop::collection::vec(tree(), 0..6)) {
        let whole = count_units(&ts);
        let parts: fluency_core::ProductionCounts = ts.iter().map(count_tree).sum();
        prop_assert_eq!(whole, parts);
        let text: String = ts.iter().map(|t| format!("{t}\n")).collect();
        prop_assert_eq!(count_units(&parse_bracketed(&text).unwrap()), whole);
    }
}
