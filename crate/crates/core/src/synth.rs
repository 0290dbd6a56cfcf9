//! Deterministic synthetic signals used by tests, benches and the bundled
//! mini-corpus generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dsp::AudioSignal;

/// A sine of `freq` Hz and peak `amplitude`, `seconds` long.
pub fn sine(freq: f64, amplitude: f64, seconds: f64, sample_rate: u32) -> AudioSignal {
    let n = (seconds * f64::from(sample_rate)).round() as usize;
    let sr = f64::from(sample_rate);
    let samples = (0..n)
        .map(|i| amplitude * (2.0 * std::f64::consts::PI * freq * i as f64 / sr).sin())
        .collect();
    AudioSignal::new(samples, sample_rate).expect("positive sample rate")
}

/// All-zero signal.
pub fn silence(seconds: f64, sample_rate: u32) -> AudioSignal {
    let n = (seconds * f64::from(sample_rate)).round() as usize;
    AudioSignal::new(vec![0.0; n], sample_rate).expect("positive sample rate")
}

/// One voiced "syllable" or a pause in a synthetic utterance.
#[derive(Debug, Clone, Copy)]
pub enum Segment {
    /// Harmonic tone whose F0 glides linearly from `f0_start` to `f0_end`.
    Voiced {
        seconds: f64,
        f0_start: f64,
        f0_end: f64,
        amplitude: f64,
    },
    Pause { seconds: f64 },
}

/// Renders a sequence of segments into a speech-like signal: five decaying
/// harmonics under a raised-cosine envelope, plus low-level noise whose
/// level is set by `noise` (peak amplitude).
pub fn utterance(segments: &[Segment], sample_rate: u32, noise: f64, seed: u64) -> AudioSignal {
    let sr = f64::from(sample_rate);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for seg in segments {
        match *seg {
            Segment::Pause { seconds } => {
                let n = (seconds * sr).round() as usize;
                out.extend(std::iter::repeat(0.0).take(n));
            }
            Segment::Voiced {
                seconds,
                f0_start,
                f0_end,
                amplitude,
            } => {
                let n = (seconds * sr).round() as usize;
                let mut phase = 0.0f64;
                for i in 0..n {
                    let t = i as f64 / n.max(1) as f64;
                    let f0 = f0_start + (f0_end - f0_start) * t;
                    phase += 2.0 * std::f64::consts::PI * f0 / sr;
                    let env = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * t).cos();
                    let tone: f64 = (1..=5)
                        .map(|h| (phase * h as f64).sin() / h as f64)
                        .sum::<f64>()
                        / 1.5;
                    out.push(amplitude * env * tone);
                }
            }
        }
    }
    if noise > 0.0 {
        for s in &mut out {
            *s += rng.gen_range(-noise..noise);
        }
    }
    for s in &mut out {
        *s = s.clamp(-1.0, 1.0);
    }
    AudioSignal::new(out, sample_rate).expect("positive sample rate")
}

/// One session of the bundled mini-corpus.
struct MiniSession {
    participant: &'static str,
    day: u8,
    article: u8,
    /// Consensus score (1..=3) per criterion, in `Criterion::ALL` order.
    scores: [u8; 4],
    /// Index of the dissenting rater per criterion.
    dissent: [usize; 4],
    trees: &'static str,
    /// (sentence, pre-removal offset, category, surface)
    disfluencies: &'static [(usize, usize, &'static str, &'static str)],
}

const MINI: [MiniSession; 6] = [
    MiniSession {
        participant: "p01",
        day: 1,
        article: 1,
        scores: [1, 1, 1, 1],
        dissent: [0, 1, 2, 0],
        trees: "\
(ROOT (S (NP (DT The) (NN crow)) (VP (VBD had) (NP (DT a) (NN piece) (PP (IN of) (NP (NN cheese))))) (. .)))
(ROOT (S (NP (DT The) (NN fox)) (VP (VBD was) (ADJP (JJ hungry))) (. .)))
(ROOT (S (NP (PRP He)) (VP (VBD talked) (PP (TO to) (NP (DT the) (NN crow)))) (. .)))
(ROOT (S (NP (DT The) (NN crow)) (VP (VBD sang)) (. .)))
",
        disfluencies: &[(0, 1, "hesitation", "um"), (2, 1, "repetition", "he")],
    },
    MiniSession {
        participant: "p02",
        day: 1,
        article: 2,
        scores: [2, 2, 2, 2],
        dissent: [1, 2, 0, 1],
        trees: "\
(ROOT (S (NP (DT The) (NN ant)) (VP (VBD worked) (NP (DT every) (NN day)) (PP (IN in) (NP (DT the) (NN summer)))) (. .)))
(ROOT (S (NP (DT The) (NN grasshopper)) (VP (VP (VBD played)) (CC and) (VP (VBD sang))) (. .)))
(ROOT (S (SBAR (WHADVP (WRB When)) (S (NP (NN winter)) (VP (VBD came)))) (, ,) (NP (DT the) (NN grasshopper)) (VP (VBD had) (NP (DT no) (NN food))) (. .)))
",
        disfluencies: &[(1, 2, "hesitation", "uh")],
    },
    MiniSession {
        participant: "p01",
        day: 2,
        article: 1,
        scores: [2, 2, 2, 2],
        dissent: [2, 0, 1, 2],
        trees: "\
(ROOT (S (NP (DT A) (JJ clever) (NN fox)) (VP (VBD saw) (NP (DT a) (NN crow)) (PP (IN with) (NP (NN cheese)))) (. .)))
(ROOT (S (NP (DT The) (NN fox)) (VP (VBD wanted) (S (VP (TO to) (VP (VB eat) (NP (PRP it)))))) (. .)))
(ROOT (S (NP (PRP He)) (VP (VBD said) (SBAR (IN that) (S (NP (DT the) (NN crow)) (VP (VBD had) (NP (DT a) (JJ beautiful) (NN voice)))))) (. .)))
(ROOT (S (NP (DT The) (NN crow)) (VP (VBD opened) (NP (PRP$ her) (NN beak))) (. .)))
",
        disfluencies: &[(2, 3, "hesitation", "um")],
    },
    MiniSession {
        participant: "p02",
        day: 2,
        article: 2,
        scores: [3, 3, 3, 3],
        dissent: [0, 1, 2, 0],
        trees: "\
(ROOT (S (PP (IN During) (NP (DT the) (JJ warm) (NNS months))) (, ,) (NP (DT the) (JJ diligent) (NN ant)) (VP (VBD gathered) (NP (NN grain)) (SBAR (IN while) (S (NP (DT the) (NN grasshopper)) (VP (VBD spent) (NP (DT the) (NNS days)) (S (VP (VBG singing))))))) (. .)))
(ROOT (S (NP (DT The) (NN grasshopper) (, ,) (SBAR (WHNP (WP who)) (S (VP (VBD mocked) (NP (DT the) (NN ant))))) (, ,)) (VP (VBD believed) (SBAR (IN that) (S (NP (NN food)) (VP (MD would) (ADVP (RB always)) (VP (VB be) (ADJP (JJ plentiful))))))) (. .)))
(ROOT (S (SBAR (WHADVP (WRB When)) (S (NP (DT the) (JJ bitter) (NN winter)) (VP (VBD arrived)))) (, ,) (NP (PRP he)) (VP (VBD begged) (NP (DT the) (NN ant)) (PP (IN for) (NP (NN shelter)))) (. .)))
",
        disfluencies: &[],
    },
    MiniSession {
        participant: "p01",
        day: 3,
        article: 1,
        scores: [3, 3, 3, 3],
        dissent: [1, 2, 0, 1],
        trees: "\
(ROOT (S (NP (DT A) (JJ hungry) (NN fox)) (VP (VBD noticed) (NP (DT a) (NN crow) (SBAR (WHNP (WDT that)) (S (VP (VBD held) (NP (DT a) (NN piece) (PP (IN of) (NP (NN cheese))))))))) (. .)))
(ROOT (S (SBAR (IN Because) (S (NP (PRP he)) (VP (VBD wanted) (NP (DT the) (NN cheese))))) (, ,) (NP (DT the) (NN fox)) (VP (VBD praised) (NP (NP (DT the) (NN crow) (POS 's)) (JJ lovely) (NNS feathers))) (. .)))
(ROOT (S (NP (DT The) (JJ flattered) (NN crow)) (VP (VP (VBD began) (S (VP (TO to) (VP (VB sing))))) (CC and) (VP (VBD dropped) (NP (DT the) (NN cheese)))) (. .)))
(ROOT (S (NP (DT The) (NN fox)) (VP (ADVP (RB quickly)) (VBD grabbed) (NP (PRP it))) (. .)))
",
        disfluencies: &[(3, 2, "repair", "grab")],
    },
    MiniSession {
        participant: "p02",
        day: 3,
        article: 2,
        scores: [1, 1, 1, 1],
        dissent: [2, 0, 1, 2],
        trees: "\
(ROOT (S (NP (DT The) (NN ant)) (VP (VBD worked)) (. .)))
(ROOT (S (NP (DT The) (NN grasshopper)) (VP (VBD did) (RB n't) (VP (VB work))) (. .)))
(ROOT (S (NP (PRP It)) (VP (VBD was) (ADJP (JJ cold))) (. .)))
",
        disfluencies: &[(0, 0, "hesitation", "uh"), (2, 2, "incomplete", "co")],
    },
];

/// Common lemmas, most frequent first.
const MINI_WORDLIST: &str = "\
the be a of and to in have it that he for not with on do say they at this
but his by from we she or as what go their can who get if would her all my
make about know will up one time there year so think when which them some me
people take out into just see him your come could now than like other how
then its our two more these want way look first also new because day use no
man find here thing give many well only those tell very even back any good
woman through us life child work down may after should call world over school
still try last ask need too feel three state never become between high really
something most another family own leave put old while mean keep student why
let great same big group begin seem country help talk where turn problem every
start hand might show part against place such again few case week company
system each right program hear question during play government run small number
off always move night live point believe hold today bring happen next without
before large million must home under water room write mother area national
money story young fact month different lot study book eye job word business
issue side kind four head far black long both little house yes since provide
service around friend important father sit away until power hour game often yet
line political end among ever stand bad lose however member pay law meet car
city almost include continue set later community much name five once white
least president learn real change team minute best several idea kid body
information nothing ago lead social understand whether watch together follow
parent stop face anything create public already speak others read level allow
add office spend door health person art sure war history party within grow
result open morning walk reason low win research girl guy early food moment
himself air teacher force offer enough education across although remember foot
second boy maybe toward able age policy everything love process music include
buy human wait serve market die send expect sense build stay fall oh nation
plan cut college interest death course someone experience behind reach local
kill six remain effect yeah suggest class control raise care perhaps late hard
field else pass former sell major sometimes require along development themselves
report role better economic effort decide rate strong possible heart drug show
leader light voice wife whole police mind finally pull return free military
price less according decision explain son hope develop view relationship carry
town road drive arm true federal break difference thank receive value
international building action full model join season society tax director
position player agree especially record pick wear paper special space ground
form support event official whose matter everyone center couple site project
hit base activity star table need court produce eat american oil half situation
easy cost industry figure street image itself phone either data cover quite
picture clear practice piece land recent describe product doctor wall patient
worker news test movie certain north personal simply third technology catch step
baby computer type attention draw film tree source red nearly organization choose
cause hair century evidence window difficult listen soon culture billion chance
brother energy period summer realize hundred available plant likely opportunity
term short letter condition choice single rule daughter administration south
husband floor campaign material population economy medical hospital church close
thousand risk current fire future wrong involve defense anyone increase security
bank myself certainly west sport board seek per subject officer private rest
behavior deal performance fight throw top quickly past goal bed order author fill
represent focus foreign drop blood upon agency push nature color recently store
reduce sound note fine near movement page enter share common poor natural race
concern series significant similar hot language usually response dead rise
animal factor decade article shoot east save seven artist away scene stock
career despite central eight thus treatment beyond happy exactly protect approach
lie size dog fund serious occur media ready sign thought list individual simple
quality pressure accept answer resource identify left meeting determine prepare
disease whatever success argue cup particularly amount ability staff recognize
indicate character growth loss degree wonder attack herself region television
box training pretty trade election everybody physical lay general feeling
standard bill message fail outside arrive analysis benefit sex forward lawyer
present section environmental glass skill sister professor operation financial
crime stage ok compare authority miss design sort act ten knowledge gun station
blue state strategy clearly discuss indeed truth song example democratic check
environment leg dark various rather laugh guess executive prove hang entire rock
forget claim remove manager enjoy network legal religious cold final main
science green memory card above seat cell establish nice trial expert spring
firm radio visit management avoid imagine tonight huge ball finish yourself
theory impact respond statement maintain charge popular traditional onto reveal
direction weapon employee cultural contain peace pain apply play measure wide
shake fly interview manage chair fish particular camera structure politics
perform bit weight suddenly discover candidate production treat trip evening
affect inside conference unit style adult worry range mention deep edge specific
writer trouble necessary throughout challenge fear shoulder institution middle
sea dream bar beautiful property instead improve stuff
";

/// Writes the six-session synthetic mini-corpus (16 kHz audio of about
/// 3 s, transcripts, trees, gold tags, three raters, disfluency logs and a
/// word list) into `dir` and returns the manifest path. The output is a
/// pure function of the constants above.
pub fn write_mini_corpus(dir: &std::path::Path) -> std::io::Result<std::path::PathBuf> {
    use crate::corpus::{Criterion, Transcript};
    use serde_json::json;

    let io_err = |e: String| std::io::Error::new(std::io::ErrorKind::InvalidData, e);
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for (si, s) in MINI.iter().enumerate() {
        let stem = format!("{}_d{}_a{}", s.participant, s.day, s.article);
        let trees = crate::synco::parse_bracketed(s.trees).map_err(|e| io_err(e.to_string()))?;
        let leaves = trees
            .iter()
            .map(|t| t.leaves().into_iter().map(String::from).collect())
            .collect();
        let transcript = Transcript::normalized(leaves);
        let tags: String = crate::lexrich::tags_from_trees(&trees)
            .iter()
            .map(|s| s.join(" ") + "\n")
            .collect();
        std::fs::write(dir.join(format!("{stem}.mrg")), s.trees)?;
        std::fs::write(dir.join(format!("{stem}.txt")), transcript.to_text())?;
        std::fs::write(dir.join(format!("{stem}.tags")), tags)?;

        let raters: Vec<_> = (0..3)
            .map(|r| {
                let scores: serde_json::Map<_, _> = Criterion::ALL
                    .iter()
                    .enumerate()
                    .map(|(ci, c)| {
                        let base = s.scores[ci];
                        let v = if r == s.dissent[ci] {
                            if base == 3 { 2 } else { base + 1 }
                        } else {
                            base
                        };
                        (c.name().to_string(), json!(v))
                    })
                    .collect();
                json!({"rater_id": format!("r{}", r + 1), "scores": scores})
            })
            .collect();
        let ratings = serde_json::to_string_pretty(&json!({ "raters": raters }))?;
        std::fs::write(dir.join(format!("{stem}.ratings.json")), ratings + "\n")?;

        let events: Vec<_> = s
            .disfluencies
            .iter()
            .map(|&(sentence, offset, category, surface)| {
                json!({"category": category, "sentence": sentence, "offset": offset, "surface": surface})
            })
            .collect();
        let log = serde_json::to_string_pretty(&json!({ "events": events }))?;
        std::fs::write(dir.join(format!("{stem}.disfl.json")), log + "\n")?;

        let audio = mini_audio(s.scores[0], s.participant == "p02", 1000 + si as u64);
        crate::dsp::write_wav(dir.join(format!("{stem}.wav")), &audio)
            .map_err(|e| io_err(e.to_string()))?;

        entries.push(json!({
            "participant_id": s.participant,
            "day": s.day,
            "article": s.article,
            "audio": format!("{stem}.wav"),
            "transcript": format!("{stem}.txt"),
            "trees": format!("{stem}.mrg"),
            "ratings": format!("{stem}.ratings.json"),
            "disfluencies": format!("{stem}.disfl.json"),
            "tags": format!("{stem}.tags"),
        }));
    }
    std::fs::write(dir.join("wordlist.txt"), MINI_WORDLIST.split_whitespace().map(|w| format!("{w}\n")).collect::<String>())?;
    let manifest = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&json!({ "sessions": entries }))?;
    std::fs::write(&manifest, text + "\n")?;
    Ok(manifest)
}

/// About 3 s of synthetic speech whose pause density falls and F0 range
/// widens with the fluency score.
fn mini_audio(score: u8, high_voice: bool, seed: u64) -> AudioSignal {
    const SR: u32 = 16_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = if high_voice { 210.0 } else { 120.0 };
    let (pause_p, pause_s, swing) = match score {
        1 => (0.55, 0.45, 0.05),
        2 => (0.35, 0.25, 0.12),
        _ => (0.15, 0.12, 0.2),
    };
    let mut segments = Vec::new();
    let mut total = 0.0;
    while total < 3.0 {
        let seconds = rng.gen_range(0.14..0.26);
        let f0_start = base * (1.0 + rng.gen_range(-swing..swing));
        let f0_end = base * (1.0 + rng.gen_range(-swing..swing));
        segments.push(Segment::Voiced {
            seconds,
            f0_start,
            f0_end,
            amplitude: rng.gen_range(0.35..0.6),
        });
        total += seconds;
        if rng.gen_bool(pause_p) {
            let p = pause_s * rng.gen_range(0.6..1.4);
            segments.push(Segment::Pause { seconds: p });
            total += p;
        }
    }
    utterance(&segments, SR, 0.002, seed)
}
