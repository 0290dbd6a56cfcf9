//! Audio ingestion, fragmentation, silence handling and low-level
//! descriptor extraction.

mod delta;
mod lld;
mod pitch;
mod spectrum;

use std::io::Write;
use std::path::Path;

use thiserror::Error;

pub use delta::delta;
pub use lld::{extract_lld, LldConfig, LldMatrix, SampleSource, LLD_COLUMNS};

/// Fragment length in seconds.
pub const FRAGMENT_SECONDS: f64 = 0.5;

/// Default silence floor, dB relative to the loudest fragment.
pub const DEFAULT_SILENCE_FLOOR_DB: f64 = -40.0;

/// Lowest accepted sample rate.
pub const MIN_SAMPLE_RATE: u32 = 8000;

#[derive(Debug, Error)]
pub enum DspError {
    #[error("{path}: unsupported encoding ({detail})")]
    UnsupportedEncoding { path: String, detail: String },
    #[error("{path}: truncated or unreadable WAV data ({detail})")]
    Truncated { path: String, detail: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("sample rate {0} Hz is below the supported minimum of 8000 Hz")]
    SampleRate(u32),
    #[error("input has {got} samples, shorter than one {need}-sample analysis frame")]
    TooShort { got: usize, need: usize },
    #[error("delta needs at least 3 frames, got {0}")]
    TooFewFrames(usize),
    #[error("silence floor must be negative, got {0} dB")]
    InvalidFloor(f64),
    #[error("signal has no non-silent fragment; silence/speech ratio is undefined")]
    UndefinedRatio,
    #[error("empty signal")]
    Empty,
}

/// Mono audio with samples in [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct AudioSignal {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl AudioSignal {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self, DspError> {
        if sample_rate == 0 {
            return Err(DspError::SampleRate(0));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate)
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Returns a copy with every sample multiplied by `gain`.
    pub fn scaled(&self, gain: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * gain).collect(),
            sample_rate: self.sample_rate,
        }
    }
}

/// Reads a 16-bit PCM WAV file. Stereo (or wider) input is averaged to mono.
pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioSignal, DspError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let reader = hound::WavReader::open(path).map_err(|e| wav_error(&shown, e))?;
    let spec = check_spec(&shown, reader.spec())?;
    let channels = usize::from(spec.channels.max(1));
    let declared = reader.len() as usize;
    let raw: Vec<i16> = reader
        .into_samples::<i16>()
        .collect::<Result<_, _>>()
        .map_err(|e| match e {
            // hound reports a short sample read as a generic I/O error.
            hound::Error::IoError(io) => DspError::Truncated {
                path: shown.clone(),
                detail: io.to_string(),
            },
            e => wav_error(&shown, e),
        })?;
    if raw.len() < declared || raw.len() % channels != 0 {
        return Err(DspError::Truncated {
            path: shown,
            detail: format!("expected {declared} samples, read {}", raw.len()),
        });
    }
    let samples = raw
        .chunks_exact(channels)
        .map(|frame| {
            frame.iter().map(|&s| f64::from(s) / 32768.0).sum::<f64>() / channels as f64
        })
        .collect();
    AudioSignal::new(samples, spec.sample_rate)
}

/// Header-only check of a WAV file: the encoding and rate `load_wav`
/// accepts. Returns the duration in seconds.
pub fn probe_wav(path: impl AsRef<Path>) -> Result<f64, DspError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let reader = hound::WavReader::open(path).map_err(|e| wav_error(&shown, e))?;
    let spec = check_spec(&shown, reader.spec())?;
    Ok(f64::from(reader.duration()) / f64::from(spec.sample_rate))
}

fn check_spec(path: &str, spec: hound::WavSpec) -> Result<hound::WavSpec, DspError> {
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(DspError::UnsupportedEncoding {
            path: path.to_string(),
            detail: format!(
                "{:?} {}-bit, expected 16-bit integer PCM",
                spec.sample_format, spec.bits_per_sample
            ),
        });
    }
    if spec.sample_rate < MIN_SAMPLE_RATE {
        return Err(DspError::SampleRate(spec.sample_rate));
    }
    Ok(spec)
}

fn wav_error(path: &str, e: hound::Error) -> DspError {
    match e {
        hound::Error::IoError(io) if io.kind() == std::io::ErrorKind::UnexpectedEof => {
            DspError::Truncated {
                path: path.to_string(),
                detail: io.to_string(),
            }
        }
        hound::Error::IoError(io) => DspError::Io {
            path: path.to_string(),
            source: io,
        },
        hound::Error::Unsupported => DspError::UnsupportedEncoding {
            path: path.to_string(),
            detail: "format not supported".into(),
        },
        hound::Error::InvalidSampleFormat => DspError::UnsupportedEncoding {
            path: path.to_string(),
            detail: "sample format mismatch".into(),
        },
        other => DspError::Truncated {
            path: path.to_string(),
            detail: other.to_string(),
        },
    }
}

/// Writes `signal` as 16-bit mono PCM.
pub fn write_wav(path: impl AsRef<Path>, signal: &AudioSignal) -> Result<(), DspError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: signal.sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut buf = std::io::Cursor::new(Vec::new());
    {
        let mut w = hound::WavWriter::new(&mut buf, spec).map_err(|e| wav_error(&shown, e))?;
        for &s in &signal.samples {
            let q = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
            w.write_sample(q).map_err(|e| wav_error(&shown, e))?;
        }
        w.finalize().map_err(|e| wav_error(&shown, e))?;
    }
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(buf.get_ref()))
        .map_err(|source| DspError::Io {
            path: shown,
            source,
        })
}

/// A fixed 0.5 s window of a parent signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Fragment {
    /// Index of the first sample in the parent signal.
    pub offset: usize,
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl Fragment {
    pub fn rms(&self) -> f64 {
        rms(&self.samples)
    }
}

/// Number of samples in one fragment at `sample_rate`.
pub fn fragment_len(sample_rate: u32) -> usize {
    (FRAGMENT_SECONDS * f64::from(sample_rate)).round() as usize
}

/// Splits `signal` into consecutive non-overlapping 0.5 s fragments. A
/// trailing remainder shorter than one fragment is dropped.
pub fn fragmentize(signal: &AudioSignal) -> Vec<Fragment> {
    let len = fragment_len(signal.sample_rate);
    if len == 0 {
        return Vec::new();
    }
    signal
        .samples
        .chunks_exact(len)
        .enumerate()
        .map(|(i, chunk)| Fragment {
            offset: i * len,
            samples: chunk.to_vec(),
            sample_rate: signal.sample_rate,
        })
        .collect()
}

pub(crate) fn rms(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// Relative silence threshold in dB (strictly negative).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SilenceFloor(f64);

impl SilenceFloor {
    pub fn new(db: f64) -> Result<Self, DspError> {
        if db.is_finite() && db < 0.0 {
            Ok(Self(db))
        } else {
            Err(DspError::InvalidFloor(db))
        }
    }

    pub fn db(self) -> f64 {
        self.0
    }
}

impl Default for SilenceFloor {
    fn default() -> Self {
        Self(DEFAULT_SILENCE_FLOOR_DB)
    }
}

/// True iff the fragment RMS is below `floor` dB relative to `peak_rms`,
/// the loudest fragment RMS of the parent utterance. Zero-energy fragments
/// are always silent.
pub fn is_silent(fragment: &Fragment, peak_rms: f64, floor: SilenceFloor) -> bool {
    let r = fragment.rms();
    if r <= 0.0 || peak_rms <= 0.0 {
        return true;
    }
    20.0 * (r / peak_rms).log10() < floor.db()
}

/// Silence verdict for every fragment, relative to the loudest one.
pub fn classify_silence(fragments: &[Fragment], floor: SilenceFloor) -> Vec<bool> {
    let peak = fragments.iter().map(Fragment::rms).fold(0.0, f64::max);
    fragments
        .iter()
        .map(|f| is_silent(f, peak, floor))
        .collect()
}

/// Fragments that survive silence removal.
pub fn speech_fragments(signal: &AudioSignal, floor: SilenceFloor) -> Vec<Fragment> {
    let fragments = fragmentize(signal);
    let silent = classify_silence(&fragments, floor);
    fragments
        .into_iter()
        .zip(silent)
        .filter_map(|(f, s)| (!s).then_some(f))
        .collect()
}

/// Total silent duration over total speech duration, both counted in whole
/// fragments.
pub fn silence_speech_ratio(signal: &AudioSignal, floor: SilenceFloor) -> Result<f64, DspError> {
    let fragments = fragmentize(signal);
    let silent = classify_silence(&fragments, floor);
    let n_silent = silent.iter().filter(|&&s| s).count();
    let n_speech = silent.len() - n_silent;
    if n_speech == 0 {
        return Err(DspError::UndefinedRatio);
    }
    Ok((n_silent as f64 * FRAGMENT_SECONDS) / (n_speech as f64 * FRAGMENT_SECONDS))
}
