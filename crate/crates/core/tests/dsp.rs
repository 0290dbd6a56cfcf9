use std::io::Write;

use fluency_core::dsp::{
    classify_silence, extract_lld, fragment_len, fragmentize, is_silent, load_wav, probe_wav,
    speech_fragments, AudioSignal, DspError, Fragment, LldConfig, SilenceFloor,
};
use fluency_core::synth;
use proptest::prelude::*;

fn write_pcm(path: &std::path::Path, channels: u16, rate: u32, samples: &[i16]) {
    let spec = hound::WavSpec {
        channels,
        sample_rate: rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut w = hound::WavWriter::create(path, spec).unwrap();
    for &s in samples {
        w.write_sample(s).unwrap();
    }
    w.finalize().unwrap();
}

/// A minimal RIFF header with an arbitrary format tag.
fn write_raw_wav(path: &std::path::Path, format_tag: u16, bits: u16, data: &[u8]) {
    let (channels, rate) = (1u16, 8000u32);
    let block = channels * bits / 8;
    let mut b = Vec::new();
    b.extend_from_slice(b"RIFF");
    b.extend_from_slice(&(36 + data.len() as u32).to_le_bytes());
    b.extend_from_slice(b"WAVEfmt ");
    b.extend_from_slice(&16u32.to_le_bytes());
    b.extend_from_slice(&format_tag.to_le_bytes());
    b.extend_from_slice(&channels.to_le_bytes());
    b.extend_from_slice(&rate.to_le_bytes());
    b.extend_from_slice(&(rate * u32::from(block)).to_le_bytes());
    b.extend_from_slice(&block.to_le_bytes());
    b.extend_from_slice(&bits.to_le_bytes());
    b.extend_from_slice(b"data");
    b.extend_from_slice(&(data.len() as u32).to_le_bytes());
    b.extend_from_slice(data);
    std::fs::File::create(path).unwrap().write_all(&b).unwrap();
}

#[test]
fn silent_file_loads_and_has_no_speech() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("silence.wav");
    write_pcm(&p, 1, 16_000, &vec![0; 48_000]);
    let s = load_wav(&p).unwrap();
    assert_eq!(s.samples().len(), 48_000);
    assert_eq!(fragmentize(&s).len(), 6);
    assert!(speech_fragments(&s, SilenceFloor::default()).is_empty());
    assert!((probe_wav(&p).unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn stereo_is_averaged_to_mono() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("stereo.wav");
    // L = 1000, R = -3000 on every frame.
    let frames: Vec<i16> = (0..800).flat_map(|_| [1000, -3000]).collect();
    write_pcm(&p, 2, 8000, &frames);
    let s = load_wav(&p).unwrap();
    assert_eq!(s.samples().len(), 800);
    assert!(s.samples().iter().all(|&v| v == -1000.0 / 32768.0));
}

#[test]
fn mu_law_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("mulaw.wav");
    write_raw_wav(&p, 7, 8, &[0xff; 800]);
    assert!(matches!(load_wav(&p), Err(DspError::UnsupportedEncoding { .. })));
    assert!(matches!(probe_wav(&p), Err(DspError::UnsupportedEncoding { .. })));
}

#[test]
fn eight_bit_and_float_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("u8.wav");
    write_raw_wav(&p, 1, 8, &[128; 800]);
    assert!(matches!(load_wav(&p), Err(DspError::UnsupportedEncoding { .. })));
    let p = dir.path().join("f32.wav");
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: 16_000,
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let mut w = hound::WavWriter::create(&p, spec).unwrap();
    for _ in 0..100 {
        w.write_sample(0.25f32).unwrap();
    }
    w.finalize().unwrap();
    assert!(matches!(load_wav(&p), Err(DspError::UnsupportedEncoding { .. })));
}

#[test]
fn truncated_data_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cut.wav");
    write_pcm(&p, 1, 16_000, &vec![100; 16_000]);
    let bytes = std::fs::read(&p).unwrap();
    std::fs::write(&p, &bytes[..bytes.len() - 1001]).unwrap();
    let err = load_wav(&p).unwrap_err();
    assert!(matches!(err, DspError::Truncated { .. }), "{err}");
    assert!(err.to_string().contains("cut.wav"));
}

#[test]
fn low_rate_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("low.wav");
    write_pcm(&p, 1, 4000, &[0; 400]);
    assert!(matches!(load_wav(&p), Err(DspError::SampleRate(4000))));
    let missing = dir.path().join("nope.wav");
    let err = load_wav(&missing).unwrap_err();
    assert!(err.to_string().contains("nope.wav"));
}

#[test]
fn wav_round_trip_is_within_quantisation() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("tone.wav");
    let s = synth::sine(220.0, 0.7, 0.3, 16_000);
    fluency_core::dsp::write_wav(&p, &s).unwrap();
    let back = load_wav(&p).unwrap();
    assert_eq!(back.sample_rate(), 16_000);
    for (a, b) in s.samples().iter().zip(back.samples()) {
        assert!((a - b).abs() <= 1.0 / 32768.0 + 1e-12);
    }
}

#[test]
fn identical_frames_give_identical_mfccs() {
    // One exact 40-sample period tiled: every 400-sample frame at a
    // 160-sample hop holds the same samples.
    let period: Vec<f64> = (0..40).map(|i| (std::f64::consts::TAU * i as f64 / 40.0).sin() * 0.5).collect();
    let samples: Vec<f64> = period.iter().copied().cycle().take(8000).collect();
    let m = extract_lld(&AudioSignal::new(samples, 16_000).unwrap(), &LldConfig::default()).unwrap();
    for k in 1..=13 {
        let col = m.column(&format!("mfcc{k}")).unwrap();
        assert!(col.iter().all(|&v| v.to_bits() == col[0].to_bits()), "mfcc{k}");
    }
}

fn tone(freq: f64, amp: f64) -> AudioSignal {
    synth::sine(freq, amp, 0.3, 16_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fragments_tile_the_input(len in 0usize..40_000, rate in prop::sample::select(vec![8000u32, 11025, 16000, 22050])) {
        let samples: Vec<f64> = (0..len).map(|i| ((i * 7919) % 200) as f64 / 200.0 - 0.5).collect();
        let s = AudioSignal::new(samples.clone(), rate).unwrap();
        let frags = fragmentize(&s);
        let flen = fragment_len(rate);
        prop_assert_eq!(flen, (0.5 * f64::from(rate)).round() as usize);
        prop_assert_eq!(frags.len(), len / flen);
        let mut joined: Vec<f64> = frags.iter().flat_map(|f| f.samples.iter().copied()).collect();
        prop_assert!(frags.iter().all(|f| f.samples.len() == flen));
        joined.extend_from_slice(&samples[joined.len()..]);
        prop_assert_eq!(joined, samples);
    }

    #[test]
    fn amplitude_scaling_invariance(freq in 100.0f64..400.0, amp in 0.05f64..0.5, gain in 0.25f64..2.0) {
        let cfg = LldConfig::default();
        let a = extract_lld(&tone(freq, amp), &cfg).unwrap();
        let b = extract_lld(&tone(freq, amp).scaled(gain), &cfg).unwrap();
        for name in ["zcr", "voicing"] {
            prop_assert_eq!(a.column(name), b.column(name), "{}", name);
        }
        for (x, y) in a.column("f0").unwrap().iter().zip(b.column("f0").unwrap()) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "f0: {} vs {}", x, y);
        }
        for name in ["jitter", "shimmer"] {
            for (x, y) in a.column(name).unwrap().iter().zip(b.column(name).unwrap()) {
                prop_assert!((x - y).abs() <= 1e-9, "{}: {} vs {}", name, x, y);
            }
        }
        for k in 2..=13 {
            let name = format!("mfcc{k}");
            for (x, y) in a.column(&name).unwrap().iter().zip(b.column(&name).unwrap()) {
                prop_assert!((x - y).abs() <= 1e-6 * x.abs().max(1.0), "{}: {} vs {}", name, x, y);
            }
        }
        for (x, y) in a.column("rms").unwrap().iter().zip(b.column("rms").unwrap()) {
            prop_assert!((x * gain - y).abs() <= 1e-12 * y.abs().max(1e-12));
        }
    }

    #[test]
    fn silence_verdict_is_monotone_in_floor(level in 1e-6f64..1.0, peak in 1e-3f64..1.0, lo in -120.0f64..-1.0, hi in -120.0f64..-1.0) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let f = Fragment { offset: 0, samples: vec![level; 64], sample_rate: 8000 };
        let quiet_lo = is_silent(&f, peak, SilenceFloor::new(lo).unwrap());
        let quiet_hi = is_silent(&f, peak, SilenceFloor::new(hi).unwrap());
        // A silent verdict survives any raise of the floor.
        prop_assert!(!quiet_lo || quiet_hi);
    }

    #[test]
    fn silence_classification_ignores_gain(gain in 0.01f64..10.0) {
        let segs = [
            synth::Segment::Voiced { seconds: 0.6, f0_start: 150.0, f0_end: 180.0, amplitude: 0.5 },
            synth::Segment::Pause { seconds: 1.1 },
            synth::Segment::Voiced { seconds: 0.4, f0_start: 170.0, f0_end: 140.0, amplitude: 0.3 },
        ];
        let s = synth::utterance(&segs, 16_000, 0.0, 1);
        let a = classify_silence(&fragmentize(&s), SilenceFloor::default());
        let b = classify_silence(&fragmentize(&s.scaled(gain)), SilenceFloor::default());
        prop_assert_eq!(a, b);
    }
}
