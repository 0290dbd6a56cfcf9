//! Closed-class lexicon tagger with suffix fallbacks, and a rule-based
//! lemmatizer. Deterministic; intended only for transcripts without gold
//! tags.

use std::collections::HashMap;
use std::sync::OnceLock;

const CLOSED: &[(&str, &str)] = &[
    ("the", "DT"), ("a", "DT"), ("an", "DT"), ("this", "DT"), ("that", "DT"),
    ("these", "DT"), ("those", "DT"), ("some", "DT"), ("any", "DT"), ("each", "DT"),
    ("every", "DT"), ("no", "DT"), ("another", "DT"), ("all", "DT"), ("both", "DT"),
    ("either", "DT"), ("neither", "DT"),
    ("i", "PRP"), ("you", "PRP"), ("he", "PRP"), ("she", "PRP"), ("it", "PRP"),
    ("we", "PRP"), ("they", "PRP"), ("me", "PRP"), ("him", "PRP"), ("us", "PRP"),
    ("them", "PRP"), ("myself", "PRP"), ("himself", "PRP"), ("herself", "PRP"),
    ("itself", "PRP"), ("themselves", "PRP"), ("ourselves", "PRP"), ("yourself", "PRP"),
    ("my", "PRP$"), ("your", "PRP$"), ("his", "PRP$"), ("her", "PRP$"), ("its", "PRP$"),
    ("our", "PRP$"), ("their", "PRP$"),
    ("in", "IN"), ("on", "IN"), ("at", "IN"), ("of", "IN"), ("for", "IN"), ("with", "IN"),
    ("by", "IN"), ("from", "IN"), ("about", "IN"), ("into", "IN"), ("over", "IN"),
    ("after", "IN"), ("before", "IN"), ("under", "IN"), ("between", "IN"),
    ("through", "IN"), ("during", "IN"), ("without", "IN"), ("because", "IN"),
    ("if", "IN"), ("while", "IN"), ("although", "IN"), ("though", "IN"), ("since", "IN"),
    ("until", "IN"), ("as", "IN"), ("than", "IN"), ("upon", "IN"), ("against", "IN"),
    ("among", "IN"), ("across", "IN"), ("around", "IN"), ("behind", "IN"), ("like", "IN"),
    ("whether", "IN"), ("out", "IN"), ("up", "RP"), ("off", "RP"), ("down", "RP"),
    ("and", "CC"), ("or", "CC"), ("but", "CC"), ("nor", "CC"), ("so", "CC"), ("yet", "CC"),
    ("to", "TO"),
    ("can", "MD"), ("could", "MD"), ("will", "MD"), ("would", "MD"), ("shall", "MD"),
    ("should", "MD"), ("may", "MD"), ("might", "MD"), ("must", "MD"), ("'ll", "MD"),
    ("which", "WDT"), ("who", "WP"), ("whom", "WP"), ("what", "WP"), ("whose", "WP$"),
    ("where", "WRB"), ("when", "WRB"), ("why", "WRB"), ("how", "WRB"),
    ("there", "EX"),
    ("not", "RB"), ("n't", "RB"), ("very", "RB"), ("also", "RB"), ("too", "RB"),
    ("then", "RB"), ("now", "RB"), ("here", "RB"), ("just", "RB"), ("only", "RB"),
    ("even", "RB"), ("again", "RB"), ("still", "RB"), ("never", "RB"), ("always", "RB"),
    ("often", "RB"), ("already", "RB"), ("soon", "RB"), ("later", "RB"), ("ever", "RB"),
    ("much", "RB"), ("more", "RBR"), ("most", "RBS"), ("away", "RB"), ("back", "RB"),
    ("uh", "UH"), ("um", "UH"), ("oh", "UH"), ("yes", "UH"),
    ("'s", "POS"),
    ("one", "CD"), ("two", "CD"), ("three", "CD"), ("four", "CD"), ("five", "CD"),
    ("six", "CD"), ("seven", "CD"), ("eight", "CD"), ("nine", "CD"), ("ten", "CD"),
    ("hundred", "CD"), ("thousand", "CD"), ("million", "CD"),
];

/// Inflected form → (lemma, tag) for auxiliaries and irregular verbs.
const IRREGULAR: &[(&str, &str, &str)] = &[
    ("is", "be", "VBZ"), ("am", "be", "VBP"), ("are", "be", "VBP"), ("was", "be", "VBD"),
    ("were", "be", "VBD"), ("be", "be", "VB"), ("been", "be", "VBN"), ("being", "be", "VBG"),
    ("'m", "be", "VBP"), ("'re", "be", "VBP"),
    ("has", "have", "VBZ"), ("have", "have", "VBP"), ("had", "have", "VBD"),
    ("having", "have", "VBG"), ("'ve", "have", "VBP"),
    ("do", "do", "VBP"), ("does", "do", "VBZ"), ("did", "do", "VBD"), ("done", "do", "VBN"),
    ("doing", "do", "VBG"),
    ("went", "go", "VBD"), ("gone", "go", "VBN"), ("goes", "go", "VBZ"),
    ("saw", "see", "VBD"), ("seen", "see", "VBN"), ("came", "come", "VBD"),
    ("got", "get", "VBD"), ("gotten", "get", "VBN"), ("made", "make", "VBD"),
    ("said", "say", "VBD"), ("says", "say", "VBZ"), ("took", "take", "VBD"),
    ("taken", "take", "VBN"), ("knew", "know", "VBD"), ("known", "know", "VBN"),
    ("thought", "think", "VBD"), ("told", "tell", "VBD"), ("found", "find", "VBD"),
    ("gave", "give", "VBD"), ("given", "give", "VBN"), ("became", "become", "VBD"),
    ("left", "leave", "VBD"), ("felt", "feel", "VBD"), ("brought", "bring", "VBD"),
    ("began", "begin", "VBD"), ("begun", "begin", "VBN"), ("kept", "keep", "VBD"),
    ("held", "hold", "VBD"), ("wrote", "write", "VBD"), ("written", "write", "VBN"),
    ("stood", "stand", "VBD"), ("heard", "hear", "VBD"), ("ran", "run", "VBD"),
    ("sat", "sit", "VBD"), ("spoke", "speak", "VBD"), ("spoken", "speak", "VBN"),
    ("grew", "grow", "VBD"), ("grown", "grow", "VBN"), ("lost", "lose", "VBD"),
    ("paid", "pay", "VBD"), ("met", "meet", "VBD"), ("led", "lead", "VBD"),
    ("understood", "understand", "VBD"), ("ate", "eat", "VBD"), ("eaten", "eat", "VBN"),
    ("fought", "fight", "VBD"), ("built", "build", "VBD"), ("sent", "send", "VBD"),
    ("won", "win", "VBD"), ("chose", "choose", "VBD"), ("chosen", "choose", "VBN"),
    ("fell", "fall", "VBD"), ("fallen", "fall", "VBN"), ("taught", "teach", "VBD"),
    ("caught", "catch", "VBD"), ("bought", "buy", "VBD"), ("sold", "sell", "VBD"),
    ("meant", "mean", "VBD"), ("lay", "lie", "VBD"), ("rose", "rise", "VBD"),
    ("drank", "drink", "VBD"), ("slept", "sleep", "VBD"), ("spent", "spend", "VBD"),
    ("threw", "throw", "VBD"), ("thrown", "throw", "VBN"), ("wore", "wear", "VBD"),
    ("drove", "drive", "VBD"), ("driven", "drive", "VBN"), ("flew", "fly", "VBD"),
    ("broke", "break", "VBD"), ("broken", "break", "VBN"), ("forgot", "forget", "VBD"),
    ("forgotten", "forget", "VBN"), ("hid", "hide", "VBD"), ("hidden", "hide", "VBN"),
    ("swam", "swim", "VBD"), ("sang", "sing", "VBD"), ("rang", "ring", "VBD"),
    ("bit", "bite", "VBD"), ("shook", "shake", "VBD"), ("struck", "strike", "VBD"),
    ("woke", "wake", "VBD"),
];

/// Base-form lexical verbs recognised without a suffix.
const BASE_VERBS: &[&str] = &[
    "go", "get", "make", "know", "think", "take", "see", "come", "want", "look", "use",
    "find", "give", "tell", "work", "call", "try", "ask", "need", "feel", "become", "leave",
    "put", "mean", "keep", "let", "begin", "seem", "help", "show", "hear", "play", "run",
    "move", "live", "believe", "bring", "happen", "write", "sit", "stand", "lose", "pay",
    "meet", "include", "continue", "set", "learn", "change", "lead", "understand", "watch",
    "follow", "stop", "create", "speak", "read", "spend", "grow", "open", "walk", "win",
    "teach", "offer", "remember", "consider", "appear", "buy", "serve", "die", "send",
    "build", "stay", "fall", "cut", "reach", "kill", "raise", "pass", "sell", "decide",
    "return", "explain", "hope", "develop", "carry", "break", "receive", "agree", "support",
    "hit", "produce", "eat", "cover", "catch", "draw", "choose", "say", "work", "drink",
    "sleep", "refuse", "complain", "answer", "laugh", "cry", "wait", "vote", "elect",
    "rule", "govern", "argue", "summarize", "describe", "read",
];

/// Bases ending in `e` whose inflections drop it (moved → move).
const E_FINAL: &[&str] = &[
    "live", "love", "move", "decide", "use", "like", "hope", "arrive", "believe", "change",
    "close", "create", "dance", "describe", "escape", "force", "hate", "include",
    "introduce", "manage", "notice", "place", "prepare", "produce", "raise", "receive",
    "refuse", "remove", "save", "serve", "smile", "solve", "suppose", "continue", "argue",
    "behave", "complete", "compare", "face", "chase", "care", "agree", "improve", "realize",
    "realise", "promise", "practise", "practice", "race", "trade", "vote", "rule", "shape",
    "share", "name", "taste", "waste", "judge", "owe", "pause", "summarize", "emerge",
    "oppose", "propose", "become", "come", "make", "take", "give", "write", "drive", "ride",
    "hide", "bite", "wake", "shake", "state", "debate", "elect", "provide", "settle",
    "excuse", "tire", "bore", "scare", "imagine", "declare", "merge", "cause", "issue",
];

const IRREGULAR_NOUNS: &[(&str, &str)] = &[
    ("children", "child"), ("men", "man"), ("women", "woman"), ("people", "people"),
    ("feet", "foot"), ("teeth", "tooth"), ("mice", "mouse"), ("geese", "goose"),
    ("lives", "life"), ("wives", "wife"), ("knives", "knife"), ("leaves", "leaf"),
    ("news", "news"), ("series", "series"), ("politics", "politics"),
];

struct Lexicon {
    closed: HashMap<&'static str, &'static str>,
    irregular: HashMap<&'static str, (&'static str, &'static str)>,
    base_verbs: std::collections::HashSet<&'static str>,
    e_final: std::collections::HashSet<&'static str>,
    nouns: HashMap<&'static str, &'static str>,
}

fn lexicon() -> &'static Lexicon {
    static LEX: OnceLock<Lexicon> = OnceLock::new();
    LEX.get_or_init(|| Lexicon {
        closed: CLOSED.iter().copied().collect(),
        irregular: IRREGULAR.iter().map(|&(f, l, t)| (f, (l, t))).collect(),
        base_verbs: BASE_VERBS.iter().copied().collect(),
        e_final: E_FINAL.iter().copied().collect(),
        nouns: IRREGULAR_NOUNS.iter().copied().collect(),
    })
}

pub(crate) fn is_punctuation(surface: &str) -> bool {
    !surface.is_empty() && surface.chars().all(|c| c.is_ascii_punctuation())
}

fn punct_tag(surface: &str) -> &'static str {
    match surface {
        "," => ",",
        ";" | ":" | "-" | "--" => ":",
        "(" => "-LRB-",
        ")" => "-RRB-",
        "\"" | "``" => "``",
        "''" => "''",
        _ => ".",
    }
}

/// Tags one sentence.
pub(crate) fn tag_sentence(tokens: &[String]) -> Vec<String> {
    let lex = lexicon();
    let mut tags: Vec<String> = Vec::with_capacity(tokens.len());
    for (i, tok) in tokens.iter().enumerate() {
        let lower = tok.to_lowercase();
        let prev = tags.last().map(String::as_str);
        let tag: &str = if is_punctuation(tok) && tok != "'s" {
            punct_tag(tok)
        } else if let Some(t) = lex.closed.get(lower.as_str()) {
            t
        } else if let Some((_, t)) = lex.irregular.get(lower.as_str()) {
            t
        } else if lower.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',') {
            "CD"
        } else if i > 0 && tok.chars().next().is_some_and(char::is_uppercase) {
            "NNP"
        } else if lex.base_verbs.contains(lower.as_str()) {
            if matches!(prev, Some("TO" | "MD")) {
                "VB"
            } else if matches!(prev, Some("DT" | "PRP$" | "JJ")) {
                "NN"
            } else {
                "VBP"
            }
        } else {
            suffix_tag(&lower, prev)
        };
        tags.push(tag.to_string());
    }
    tags
}

fn suffix_tag(w: &str, prev: Option<&str>) -> &'static str {
    let ends = |s: &str| w.len() > s.len() + 1 && w.ends_with(s);
    if ends("ly") {
        "RB"
    } else if ends("ing") {
        if matches!(prev, Some("DT" | "PRP$" | "JJ")) {
            "NN"
        } else {
            "VBG"
        }
    } else if ends("ed") {
        if matches!(prev, Some("VBZ" | "VBP" | "VBD")) {
            "VBN"
        } else {
            "VBD"
        }
    } else if ["tion", "sion", "ment", "ness", "ity", "ance", "ence", "ship", "ism"]
        .iter()
        .any(|s| ends(s))
    {
        "NN"
    } else if ["tions", "sions", "ments", "nesses", "ities", "ances", "ences", "ships", "isms"]
        .iter()
        .any(|s| ends(s))
    {
        "NNS"
    } else if ["ous", "ful", "ive", "able", "ible", "al", "ic", "less", "ish", "ary", "ent", "ant"]
        .iter()
        .any(|s| ends(s))
    {
        "JJ"
    } else if ends("s") && !ends("ss") && !ends("us") && !ends("is") {
        if matches!(prev, Some("PRP" | "NN" | "NNP" | "WDT" | "WP")) {
            "VBZ"
        } else {
            "NNS"
        }
    } else {
        "NN"
    }
}

fn undouble(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 3 && b[n - 1] == b[n - 2] && !matches!(b[n - 1], b'l' | b's' | b'z' | b'f') {
        return stem[..n - 1].to_string();
    }
    stem.to_string()
}

fn restore_e(stem: String) -> String {
    let with_e = format!("{stem}e");
    let syllabic_l = stem.len() >= 3
        && stem.ends_with('l')
        && !matches!(stem.as_bytes()[stem.len() - 2], b'a' | b'e' | b'i' | b'o' | b'u' | b'l' | b'r' | b'w');
    if lexicon().e_final.contains(with_e.as_str()) || stem.ends_with('v') || syllabic_l {
        with_e
    } else {
        stem
    }
}

/// Lower-cased lemma of `surface` given its tag.
pub(crate) fn lemmatize(surface: &str, tag: &str) -> String {
    let w = surface.to_lowercase();
    let lex = lexicon();
    if tag.starts_with("VB") || tag == "MD" {
        if let Some((l, _)) = lex.irregular.get(w.as_str()) {
            return l.to_string();
        }
    }
    match tag {
        "NNS" | "NNPS" => {
            if let Some(l) = lex.nouns.get(w.as_str()) {
                return l.to_string();
            }
            plural_stem(&w)
        }
        "VBZ" => plural_stem(&w),
        "VBD" | "VBN" => {
            if let Some(s) = w.strip_suffix("ied") {
                format!("{s}y")
            } else if let Some(s) = w.strip_suffix("ed").filter(|s| s.len() >= 2) {
                let u = undouble(s);
                if u.len() < s.len() {
                    u
                } else {
                    restore_e(u)
                }
            } else {
                w
            }
        }
        "VBG" => match w.strip_suffix("ing").filter(|s| s.len() >= 2) {
            Some(s) => {
                let u = undouble(s);
                if u.len() < s.len() {
                    u
                } else {
                    restore_e(u)
                }
            }
            None => w,
        },
        "JJR" | "JJS" | "RBR" | "RBS" => match w.as_str() {
            "better" | "best" => "good".into(),
            "worse" | "worst" => "bad".into(),
            "more" | "most" => "much".into(),
            _ => {
                let s = w
                    .strip_suffix("est")
                    .or_else(|| w.strip_suffix("er"))
                    .filter(|s| s.len() >= 2);
                match s {
                    Some(s) if s.ends_with('i') => format!("{}y", &s[..s.len() - 1]),
                    Some(s) => undouble(s),
                    None => w,
                }
            }
        },
        _ => w,
    }
}

fn plural_stem(w: &str) -> String {
    if let Some(s) = w.strip_suffix("ies").filter(|s| s.len() >= 2) {
        return format!("{s}y");
    }
    for suf in ["sses", "xes", "zes", "ches", "shes", "oes"] {
        if w.ends_with(suf) {
            return w[..w.len() - 2].to_string();
        }
    }
    if w.ends_with('s') && !w.ends_with("ss") && w.len() > 2 {
        return w[..w.len() - 1].to_string();
    }
    w.to_string()
}
