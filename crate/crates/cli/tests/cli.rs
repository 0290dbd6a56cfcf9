use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fluency(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fluency"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn mini() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/mini-corpus")
}

fn copy_mini(dir: &Path) -> PathBuf {
    for entry in std::fs::read_dir(mini()).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
    dir.join("manifest.json")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Non-comment CSV lines.
fn rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[test]
fn validate_clean_corpus() {
    let o = fluency(&["validate", "--manifest", s(&mini().join("manifest.json"))]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("6 sessions, 0 violation"));
}

#[test]
fn corrupted_ratings_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = copy_mini(dir.path());
    std::fs::write(dir.path().join("p02_d1_a2.ratings.json"), "not json").unwrap();
    let o = fluency(&["validate", "--manifest", s(&manifest)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("p02_d1_a2.ratings.json"), "{}", stderr(&o));
}

#[test]
fn transcript_violation_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = copy_mini(dir.path());
    let p = dir.path().join("p01_d1_a1.txt");
    let text = std::fs::read_to_string(&p).unwrap().replacen('.', "!", 1);
    std::fs::write(&p, text).unwrap();
    let o = fluency(&["validate", "--manifest", s(&manifest)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("p01/day1/article1"));
}

#[test]
fn missing_audio_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = copy_mini(dir.path());
    std::fs::remove_file(dir.path().join("p01_d3_a1.wav")).unwrap();
    let out = dir.path().join("out");
    let o = fluency(&["extract", "--manifest", s(&manifest), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("p01_d3_a1.wav"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fluency(&["extract"]).status.code(), Some(2));
    assert_eq!(fluency(&["frobnicate"]).status.code(), Some(2));
    let o = fluency(&["extract", "--manifest", "m.json", "--out", "o", "--mode", "sideways"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_manifest_exit_1() {
    let o = fluency(&["agreement", "--manifest", "/nonexistent/manifest.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/manifest.json"));
}

#[test]
fn empty_manifest_gives_header_only_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.json");
    std::fs::write(&manifest, "{\"sessions\": []}").unwrap();
    let out = dir.path().join("out");
    let o = fluency(&["extract", "--manifest", s(&manifest), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["prosody_is09-analog.csv", "lexical.csv", "syntactic.csv", "fusion_prosody.csv"] {
        let r = rows(&out.join(name));
        assert_eq!(r.len(), 1, "{name}");
        assert!(r[0].starts_with("participant_id,day,article,instance"));
    }
}

#[test]
fn extract_is_deterministic_and_sized() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = mini().join("manifest.json");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = fluency(&["extract", "--manifest", s(&manifest), "--out", s(&out), "--seed", "3"]);
        assert!(o.status.success(), "{}", stderr(&o));
        out
    };
    let (a, b) = (run("a"), run("b"));
    let is09 = rows(&a.join("prosody_is09-analog.csv"));
    assert_eq!(is09[0].split(',').count(), 4 + 384);
    assert!(is09.len() > 1);
    let eg = rows(&a.join("prosody_egemaps-analog.csv"));
    assert_eq!(eg[0].split(',').count(), 4 + 88);
    for name in [
        "prosody_is09-analog.csv",
        "prosody_egemaps-analog.csv",
        "fusion_prosody.csv",
        "lexical.csv",
        "syntactic.csv",
    ] {
        let (x, y) = (std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap());
        assert!(x == y, "{name} differs between runs");
    }
    let header = std::fs::read_to_string(a.join("lexical.csv")).unwrap();
    assert!(header.starts_with("# fluency") && header.lines().next().unwrap().contains("seed=3"));
}

#[test]
fn evaluate_report_and_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = mini().join("manifest.json");
    let out = dir.path().join("out");
    let common = ["--manifest", s(&manifest), "--out", s(&out), "--forest-trees", "10"];
    let o = fluency(&[&["extract"], &common[..]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let o = fluency(&[&["evaluate"], &common[..]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    for t in ["table1_prosody", "table2_lexical", "table3_syntactic", "table4_fused"] {
        assert!(out.join(format!("{t}.json")).exists(), "{t}");
        assert!(out.join("confusion").join(format!("{t}.csv")).exists(), "{t}");
    }
    assert_eq!(rows(&out.join("fig1_counts.csv")).len(), 7);

    let o = fluency(&["report", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    for needle in ["SVM", "Random Forest", "Day-1"] {
        assert!(text.contains(needle), "report lacks {needle}");
    }

    let o = fluency(&["agreement", "--manifest", s(&manifest)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.ends_with("\t0.3333")), "{text}");
}
