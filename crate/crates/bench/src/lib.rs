//! Fixed inputs shared by the benchmarks.

use fluency_core::corpus::Transcript;
use fluency_core::lexrich::{tag_tokens, TaggedToken};
use fluency_core::synco::{parse_bracketed, ParseTree};
use fluency_core::synth::{self, Segment};
use fluency_core::{AudioSignal, Label};

const PASSAGE: &str = "The crow sat in a tall tree with a piece of cheese.
A clever fox saw her and wanted the cheese for himself.
He praised her feathers, and he asked her to sing a song.
When the crow opened her beak, the cheese fell to the ground.
The fox grabbed it quickly and ran into the forest.
";

const TREES: &str = "(ROOT (S (NP (DT The) (NN crow)) (VP (VBD sat) (PP (IN in) (NP (DT a) (JJ tall) (NN tree)))) (. .)))
(ROOT (S (NP (DT A) (JJ clever) (NN fox)) (VP (VBD saw) (NP (PRP her)) (SBAR (IN that) (S (NP (PRP she)) (VP (VBD had) (NP (NN cheese)))))) (. .)))
(ROOT (S (S (NP (PRP He)) (VP (VBD praised) (NP (PRP$ her) (NNS feathers)))) (, ,) (CC and) (S (NP (PRP he)) (VP (VBD asked) (S (NP (PRP her)) (VP (TO to) (VP (VB sing)))))) (. .)))
";

/// Speech-like audio: voiced stretches separated by pauses.
pub fn speech(seconds: f64) -> AudioSignal {
    let mut segs = Vec::new();
    let mut t = 0.0;
    let mut i = 0;
    while t < seconds {
        let f0 = 120.0 + 15.0 * f64::from(i % 5);
        segs.push(Segment::Voiced { seconds: 0.6, f0_start: f0, f0_end: f0 * 1.15, amplitude: 0.4 });
        segs.push(Segment::Pause { seconds: 0.2 });
        t += 0.8;
        i += 1;
    }
    synth::utterance(&segs, 16_000, 0.002, 7)
}

/// The passage repeated `times` times, tagged by the fallback tagger.
pub fn tokens(times: usize) -> Vec<TaggedToken> {
    let t = Transcript::parse(&PASSAGE.repeat(times));
    tag_tokens(&t, None).expect("passage tags")
}

pub fn trees(times: usize) -> Vec<ParseTree> {
    parse_bracketed(&TREES.repeat(times)).expect("fixture trees parse")
}

/// Three separated classes in `dim` dimensions, `per_class` rows each.
pub fn classes(per_class: usize, dim: usize) -> (Vec<Vec<f64>>, Vec<Label>) {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (c, label) in Label::ALL.into_iter().enumerate() {
        for i in 0..per_class {
            let row = (0..dim)
                .map(|j| 2.0 * c as f64 + ((i * 31 + j * 17 + c * 7) as f64).sin())
                .collect();
            x.push(row);
            y.push(label);
        }
    }
    (x, y)
}
