mod common;

use std::collections::BTreeMap;
use std::path::Path;

use common::mini_corpus_manifest;
use fluency_core::corpus::{
    corpus_summary, derive_label, inter_rater_agreement, load_corpus, validate_transcript,
    CorpusError, DisfluencyCategory, DisfluencyEvent, DisfluencyLog, RaterScoreSet, SessionRecord,
    Transcript,
};
use fluency_core::{Corpus, Criterion, Label, SessionKey};
use proptest::prelude::*;

const WORDS: [&str; 8] = ["the", "fox", "crow", "sang", "cheese", "tree", "clever", "did"];

fn rater(id: String, scores: [u8; 4]) -> RaterScoreSet {
    let map: BTreeMap<Criterion, Label> = Criterion::ALL
        .iter()
        .zip(scores)
        .map(|(&c, s)| (c, Label::from_score(s).unwrap()))
        .collect();
    RaterScoreSet::new(id, map).unwrap()
}

fn copy_mini(dir: &Path) -> std::path::PathBuf {
    let src = mini_corpus_manifest();
    for entry in std::fs::read_dir(src.parent().unwrap()).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
    dir.join("manifest.json")
}

#[test]
fn mini_corpus_loads_clean() {
    let c = load_corpus(mini_corpus_manifest()).unwrap();
    assert_eq!(c.len(), 6);
    for s in c.sessions() {
        assert!(s.violations().is_empty(), "{}: {:?}", s.key, s.violations());
    }
}

#[test]
fn bundled_mini_corpus_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = fluency_core::synth::write_mini_corpus(dir.path()).unwrap();
    let bundled = mini_corpus_manifest();
    let bundled_dir = bundled.parent().unwrap();
    let mut names: Vec<_> = std::fs::read_dir(manifest.parent().unwrap())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), std::fs::read_dir(bundled_dir).unwrap().count());
    for name in names {
        let fresh = std::fs::read(dir.path().join(&name)).unwrap();
        let kept = std::fs::read(bundled_dir.join(&name)).unwrap();
        assert!(fresh == kept, "{name:?} differs from the bundled copy");
    }
}

#[test]
fn corrupted_ratings_name_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = copy_mini(dir.path());
    std::fs::write(dir.path().join("p01_d2_a1.ratings.json"), "{\"raters\": [").unwrap();
    let err = load_corpus(&manifest).unwrap_err();
    assert!(matches!(err, CorpusError::Json { .. }), "{err}");
    assert!(err.to_string().contains("p01_d2_a1.ratings.json"));

    std::fs::write(
        dir.path().join("p01_d2_a1.ratings.json"),
        r#"{"raters":[{"rater_id":"a","scores":{"oral_fluency":4,"lexical_richness":2,"syntactic_maturity":3,"overall":2}}]}"#,
    )
    .unwrap();
    let err = load_corpus(&manifest).unwrap_err();
    assert!(err.to_string().contains("outside 1..=3"), "{err}");
}

#[test]
fn missing_audio_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = copy_mini(dir.path());
    std::fs::remove_file(dir.path().join("p02_d3_a2.wav")).unwrap();
    let err = load_corpus(&manifest).unwrap_err();
    assert!(matches!(err, CorpusError::Audio { .. }), "{err}");
    assert!(err.to_string().contains("p02_d3_a2.wav"));
}

#[test]
fn duplicate_and_invalid_keys() {
    assert!(matches!(SessionKey::new("p", 4, 1), Err(CorpusError::InvalidDay(4))));
    assert!(matches!(SessionKey::new("p", 1, 0), Err(CorpusError::InvalidArticle(0))));
    let k = SessionKey::new("p", 1, 1).unwrap();
    let r = vec![RaterScoreSet::uniform("a", Label::Basic)];
    let dup = vec![SessionRecord::bare(k.clone(), r.clone()), SessionRecord::bare(k, r)];
    assert!(matches!(Corpus::new("", dup), Err(CorpusError::DuplicateSession(_))));
}

#[test]
fn empty_manifest_is_an_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("manifest.json");
    std::fs::write(&p, "{\"sessions\": []}").unwrap();
    let c = load_corpus(&p).unwrap();
    assert!(c.is_empty());
    assert!(matches!(inter_rater_agreement(&c, Criterion::Overall), Err(CorpusError::Empty)));
    assert!(corpus_summary(&c).unwrap().iter().all(|cell| cell.sessions == 0));
}

/// A word, optionally followed by a clitic and a pause comma.
fn sentence() -> impl Strategy<Value = Vec<(usize, bool, bool)>> {
    prop::collection::vec((0..WORDS.len(), any::<bool>(), prop::bool::weighted(0.2)), 1..12)
}

fn build(spec: &[Vec<(usize, bool, bool)>]) -> Vec<Vec<String>> {
    spec.iter()
        .map(|s| {
            let mut out = Vec::new();
            for &(w, clitic, comma) in s {
                out.push(WORDS[w].to_string());
                if clitic {
                    out.push("'s".into());
                }
                if comma {
                    out.push(",".into());
                }
            }
            out
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn transcript_round_trip(spec in prop::collection::vec(sentence(), 1..6)) {
        let t = Transcript::normalized(build(&spec));
        let back = Transcript::parse(&t.to_text());
        prop_assert_eq!(back.sentences(), t.sentences());
        prop_assert!(validate_transcript(&back, &DisfluencyLog::default()).is_empty());
    }

    #[test]
    fn removed_fillers_validate_clean(
        spec in prop::collection::vec(sentence(), 1..6),
        fillers in prop::collection::vec((0usize..6, 0usize..20), 0..8),
    ) {
        let clean = build(&spec);
        // Insert fillers into a copy, recording pre-removal offsets.
        let mut raw = clean.clone();
        for &(s, at) in &fillers {
            let s = s % raw.len();
            let at = at % (raw[s].len() + 1);
            raw[s].insert(at, "erm".into());
        }
        let events: Vec<DisfluencyEvent> = raw
            .iter()
            .enumerate()
            .flat_map(|(si, s)| {
                s.iter().enumerate().filter(|(_, t)| *t == "erm").map(move |(ti, _)| DisfluencyEvent {
                    category: DisfluencyCategory::Hesitation,
                    sentence: si,
                    offset: ti,
                    surface: "erm".into(),
                })
            })
            .collect();
        let log = DisfluencyLog { events };
        let t = Transcript::normalized(clean);
        prop_assert!(validate_transcript(&t, &log).is_empty());
        if !log.events.is_empty() {
            // Keeping the fillers in is caught.
            let kept = Transcript::normalized(raw);
            prop_assert!(!validate_transcript(&kept, &log).is_empty());
        }
    }

    #[test]
    fn label_ignores_rater_order(
        scores in prop::collection::vec(prop::array::uniform4(1u8..=3), 1..6),
        rot in 0usize..6,
    ) {
        let raters: Vec<_> = scores.iter().enumerate().map(|(i, s)| rater(format!("r{i}"), *s)).collect();
        let mut shuffled = raters.clone();
        shuffled.rotate_left(rot % raters.len());
        shuffled.reverse();
        for c in Criterion::ALL {
            let a = derive_label(&raters, c).unwrap();
            prop_assert_eq!(a, derive_label(&shuffled, c).unwrap());
            let mean = scores.iter().map(|s| f64::from(s[Criterion::ALL.iter().position(|&x| x == c).unwrap()])).sum::<f64>()
                / scores.len() as f64;
            prop_assert!((f64::from(a.score()) - mean).abs() <= 0.5);
        }
    }

    #[test]
    fn agreement_and_summary(
        sessions in prop::collection::vec((0u8..3, 0u8..2, prop::collection::vec(prop::array::uniform4(1u8..=3), 2..5)), 1..20),
        rot in 0usize..5,
    ) {
        let build = |rot: usize| {
            let records: Vec<_> = sessions
                .iter()
                .enumerate()
                .map(|(i, (d, a, s))| {
                    let mut r: Vec<_> = s.iter().enumerate().map(|(j, x)| rater(format!("r{j}"), *x)).collect();
                    let n = r.len();
                    r.rotate_left(rot % n);
                    SessionRecord::bare(SessionKey::new(format!("p{i}"), d + 1, a + 1).unwrap(), r)
                })
                .collect();
            Corpus::new("", records).unwrap()
        };
        let (a, b) = (build(0), build(rot));
        for c in Criterion::ALL {
            let x = inter_rater_agreement(&a, c).unwrap();
            prop_assert_eq!(x, inter_rater_agreement(&b, c).unwrap());
            prop_assert!((0.0..=1.0).contains(&x));
        }
        let cells = corpus_summary(&a).unwrap();
        prop_assert_eq!(cells.iter().map(|c| c.sessions).sum::<usize>(), sessions.len());
        for cell in cells {
            prop_assert_eq!(cell.counts.iter().sum::<usize>(), cell.sessions);
        }
    }
}
