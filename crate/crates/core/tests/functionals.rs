use fluency_core::dsp::{LldConfig, LldMatrix, SilenceFloor};
use fluency_core::functionals::{
    apply_functionals, assemble_preset, ExtractionMode, FeatureSetPreset, Functional, FunctionalSet,
};
use fluency_core::synth;
use proptest::prelude::*;

fn single(values: Vec<f64>) -> LldMatrix {
    LldMatrix::from_columns(0.025, 0.010, vec!["x".into()], vec![values])
}

fn set(fs: &[Functional]) -> FunctionalSet {
    FunctionalSet::new(fs.to_vec()).unwrap()
}

fn contour() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 2..200)
}

#[test]
fn presets_reject_silent_and_short_input() {
    let p = FeatureSetPreset::egemaps_analog();
    let cfg = LldConfig::default();
    let silent = synth::silence(2.0, 16_000);
    let frags = assemble_preset(&silent, &p, ExtractionMode::Fragment, SilenceFloor::default(), &cfg).unwrap();
    assert!(frags.is_empty());
    let whole = assemble_preset(&silent, &p, ExtractionMode::Utterance, SilenceFloor::default(), &cfg).unwrap();
    assert_eq!(whole.len(), 1);
    assert_eq!(whole[0].values.len(), 88);
    assert!(whole[0].values.iter().all(|v| v.is_finite()));
    assert!(p.compute(&synth::silence(0.01, 16_000), &cfg).is_err());
}

#[test]
fn builtin_names_resolve() {
    assert_eq!(FeatureSetPreset::builtin("is09-analog").unwrap(), FeatureSetPreset::is09_analog());
    assert_eq!(FeatureSetPreset::builtin("eGeMAPS").unwrap(), FeatureSetPreset::egemaps_analog());
    assert!(FeatureSetPreset::builtin("IS10 paraling").is_err());
    assert!(FeatureSetPreset::builtin("nonsense").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn time_reversal(values in contour()) {
        let fs = set(&[Functional::Mean, Functional::LinSlope]);
        let fwd = apply_functionals(&single(values.clone()), &fs).unwrap();
        let rev: Vec<f64> = values.iter().rev().copied().collect();
        let back = apply_functionals(&single(rev), &fs).unwrap();
        prop_assert!((fwd[0] - back[0]).abs() <= 1e-9 * fwd[0].abs().max(1.0));
        prop_assert!((fwd[1] + back[1]).abs() <= 1e-9 * fwd[1].abs().max(1.0));
    }

    #[test]
    fn mean_ignores_frame_duplication(values in contour(), k in 1usize..5) {
        let fs = set(&[Functional::Mean]);
        let once = apply_functionals(&single(values.clone()), &fs).unwrap()[0];
        let dup: Vec<f64> = values.iter().flat_map(|&v| std::iter::repeat(v).take(k)).collect();
        let many = apply_functionals(&single(dup), &fs).unwrap()[0];
        prop_assert!((once - many).abs() <= 1e-9 * once.abs().max(1.0));
    }

    #[test]
    fn functionals_are_finite_and_ordered(values in contour()) {
        let out = apply_functionals(&single(values.clone()), &set(&Functional::ALL)).unwrap();
        prop_assert_eq!(out.len(), 12);
        prop_assert!(out.iter().all(|v| v.is_finite()));
        let (min, max) = (out[2], out[3]);
        prop_assert!(min <= out[0] + 1e-9 && out[0] <= max + 1e-9);
        prop_assert!((out[4] - (max - min)).abs() <= 1e-9 * max.abs().max(1.0));
        prop_assert!((0.0..=1.0).contains(&out[5]) && (0.0..=1.0).contains(&out[6]));
    }

    #[test]
    fn preset_vectors_have_declared_length(f0 in 90.0f64..300.0, seed in 0u64..1000, utterance: bool) {
        let segs = [
            synth::Segment::Voiced { seconds: 0.7, f0_start: f0, f0_end: f0 * 1.1, amplitude: 0.5 },
            synth::Segment::Pause { seconds: 0.3 },
            synth::Segment::Voiced { seconds: 0.6, f0_start: f0 * 0.9, f0_end: f0, amplitude: 0.4 },
        ];
        let s = synth::utterance(&segs, 16_000, 0.003, seed);
        let mode = if utterance { ExtractionMode::Utterance } else { ExtractionMode::Fragment };
        for p in [FeatureSetPreset::is09_analog(), FeatureSetPreset::egemaps_analog()] {
            let a = assemble_preset(&s, &p, mode, SilenceFloor::default(), &LldConfig::default()).unwrap();
            let b = assemble_preset(&s, &p, mode, SilenceFloor::default(), &LldConfig::default()).unwrap();
            prop_assert!(!a.is_empty());
            for (x, y) in a.iter().zip(&b) {
                prop_assert_eq!(x.values.len(), p.declared_dim);
                let bits = |v: &[f64]| v.iter().map(|f| f.to_bits()).collect::<Vec<_>>();
                prop_assert_eq!(bits(&x.values), bits(&y.values));
            }
        }
    }
}
