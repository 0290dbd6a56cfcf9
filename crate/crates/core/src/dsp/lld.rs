use std::io::Write;

use super::pitch::{hnr_db, PitchTracker};
use super::spectrum::{flux, SpectralAnalyzer};
use super::{AudioSignal, DspError, Fragment};

/// Descriptor columns emitted by [`extract_lld`], in order.
pub const LLD_COLUMNS: [&str; 23] = [
    "f0", "voicing", "rms", "zcr", "mfcc1", "mfcc2", "mfcc3", "mfcc4", "mfcc5", "mfcc6", "mfcc7",
    "mfcc8", "mfcc9", "mfcc10", "mfcc11", "mfcc12", "mfcc13", "jitter", "shimmer", "hnr",
    "centroid", "rolloff", "flux",
];

/// Frame geometry and analysis constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LldConfig {
    pub frame_seconds: f64,
    pub hop_seconds: f64,
    pub f0_min: f64,
    pub f0_max: f64,
    /// Minimum normalized autocorrelation peak for a voiced frame.
    pub voicing_threshold: f64,
    pub n_mel: usize,
    pub n_mfcc: usize,
    pub rolloff: f64,
}

impl Default for LldConfig {
    fn default() -> Self {
        Self {
            frame_seconds: 0.025,
            hop_seconds: 0.010,
            f0_min: 50.0,
            f0_max: 600.0,
            voicing_threshold: 0.45,
            n_mel: 26,
            n_mfcc: 13,
            rolloff: 0.85,
        }
    }
}

/// Anything that can be analysed frame by frame.
pub trait SampleSource {
    fn samples(&self) -> &[f64];
    fn sample_rate(&self) -> u32;
}

impl SampleSource for AudioSignal {
    fn samples(&self) -> &[f64] {
        AudioSignal::samples(self)
    }
    fn sample_rate(&self) -> u32 {
        AudioSignal::sample_rate(self)
    }
}

impl SampleSource for Fragment {
    fn samples(&self) -> &[f64] {
        &self.samples
    }
    fn sample_rate(&self) -> u32 {
        self.sample_rate
    }
}

/// Frame-indexed descriptor contours. Column-major: every column holds one
/// value per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LldMatrix {
    pub frame_len: f64,
    pub frame_hop: f64,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl LldMatrix {
    /// Builds a matrix from named columns of equal length.
    ///
    /// # Panics
    /// If the columns differ in length or the name count does not match.
    pub fn from_columns(
        frame_len: f64,
        frame_hop: f64,
        names: Vec<String>,
        columns: Vec<Vec<f64>>,
    ) -> Self {
        assert_eq!(names.len(), columns.len(), "one name per column");
        if let Some(first) = columns.first() {
            assert!(
                columns.iter().all(|c| c.len() == first.len()),
                "columns must share the row count"
            );
        }
        Self {
            frame_len,
            frame_hop,
            names,
            columns,
        }
    }

    pub fn n_frames(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    /// Sub-matrix with the named columns in the given order.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Option<LldMatrix> {
        let columns = names
            .iter()
            .map(|n| self.column(n.as_ref()).map(<[f64]>::to_vec))
            .collect::<Option<Vec<_>>>()?;
        Some(LldMatrix {
            frame_len: self.frame_len,
            frame_hop: self.frame_hop,
            names: names.iter().map(|n| n.as_ref().to_string()).collect(),
            columns,
        })
    }

    /// Appends the columns of `other` (same row count).
    pub fn hstack(mut self, other: LldMatrix) -> LldMatrix {
        assert_eq!(self.n_frames(), other.n_frames());
        self.names.extend(other.names);
        self.columns.extend(other.columns);
        self
    }

    /// CSV dump with a header row of descriptor names.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.names)?;
        for row in 0..self.n_frames() {
            w.write_record(self.columns.iter().map(|c| c[row].to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Computes the descriptor contours of `input` on 25 ms Hamming frames at a
/// 10 ms hop (with the default config).
///
/// F0 comes from the normalized autocorrelation over a pitch window of at
/// least two periods of the lowest admissible F0, centred on the frame, so
/// that low voices still see two full cycles. Jitter and shimmer are
/// measured on the same window by marking successive waveform peaks one
/// period apart. Unvoiced frames report F0, jitter and shimmer as 0.
pub fn extract_lld<S: SampleSource + ?Sized>(
    input: &S,
    config: &LldConfig,
) -> Result<LldMatrix, DspError> {
    let x = input.samples();
    let sr = input.sample_rate();
    let srf = f64::from(sr);
    let frame_len = ((config.frame_seconds * srf).round() as usize).max(1);
    let hop = ((config.hop_seconds * srf).round() as usize).max(1);
    if x.len() < frame_len {
        return Err(DspError::TooShort {
            got: x.len(),
            need: frame_len,
        });
    }
    let n_frames = 1 + (x.len() - frame_len) / hop;
    let pitch_window = frame_len
        .max((2.0 * srf / config.f0_min).ceil() as usize)
        .min(x.len());
    let tracker = PitchTracker::new(
        sr,
        pitch_window,
        config.f0_min,
        config.f0_max,
        config.voicing_threshold,
    );
    let spectral = SpectralAnalyzer::new(sr, frame_len, config.n_mel, config.n_mfcc, config.rolloff);

    let n_cols = 4 + config.n_mfcc + 6;
    let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(n_frames); n_cols];
    let mut prev_mag: Option<Vec<f64>> = None;
    for t in 0..n_frames {
        let start = t * hop;
        let frame = &x[start..start + frame_len];

        let centre = start + frame_len / 2;
        let w = tracker.window();
        let pstart = centre.saturating_sub(w / 2).min(x.len() - w);
        let pitch = tracker.analyse(&x[pstart..pstart + w]);

        let spec = spectral.analyse(frame);
        let fl = prev_mag.as_ref().map_or(0.0, |p| flux(&spec.magnitude, p));

        let mut c = 0;
        let mut push = |v: f64| {
            cols[c].push(v);
            c += 1;
        };
        push(if pitch.voiced { pitch.f0 } else { 0.0 });
        push(if pitch.voiced { 1.0 } else { 0.0 });
        push(super::rms(frame));
        push(zero_crossing_rate(frame, srf));
        for v in &spec.mfcc {
            push(*v);
        }
        push(pitch.jitter);
        push(pitch.shimmer);
        push(hnr_db(pitch.strength));
        push(spec.centroid);
        push(spec.rolloff);
        push(fl);
        prev_mag = Some(spec.magnitude);
    }

    let names = if config.n_mfcc == 13 {
        LLD_COLUMNS.iter().map(|s| s.to_string()).collect()
    } else {
        let mut n: Vec<String> = ["f0", "voicing", "rms", "zcr"].iter().map(|s| s.to_string()).collect();
        n.extend((1..=config.n_mfcc).map(|i| format!("mfcc{i}")));
        n.extend(
            ["jitter", "shimmer", "hnr", "centroid", "rolloff", "flux"]
                .iter()
                .map(|s| s.to_string()),
        );
        n
    };
    Ok(LldMatrix::from_columns(
        frame_len as f64 / srf,
        hop as f64 / srf,
        names,
        cols,
    ))
}

/// Sign changes per second. Zero counts as positive.
fn zero_crossing_rate(frame: &[f64], sample_rate: f64) -> f64 {
    let crossings = frame
        .windows(2)
        .filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0))
        .count();
    crossings as f64 * sample_rate / frame.len() as f64
}
