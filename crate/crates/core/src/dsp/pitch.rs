//! Normalized-autocorrelation pitch tracking, HNR and cycle-to-cycle
//! perturbation (jitter, shimmer).

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

/// Result of analysing one pitch window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PitchEstimate {
    /// F0 in Hz, 0 when unvoiced.
    pub f0: f64,
    pub voiced: bool,
    /// Normalized autocorrelation at the selected peak (or the best peak
    /// found when unvoiced), in [-1, 1].
    pub strength: f64,
    pub jitter: f64,
    pub shimmer: f64,
}

impl PitchEstimate {
    const UNVOICED: Self = Self {
        f0: 0.0,
        voiced: false,
        strength: 0.0,
        jitter: 0.0,
        shimmer: 0.0,
    };
}

/// Candidates within this fraction of the strongest peak compete on lag;
/// the shortest lag wins, which suppresses octave-down errors.
const PEAK_PICK_RATIO: f64 = 0.9;

/// Reusable pitch analyser for a fixed window length and sample rate.
pub(crate) struct PitchTracker {
    sample_rate: f64,
    window: usize,
    min_lag: usize,
    max_lag: usize,
    f0_min: f64,
    f0_max: f64,
    voicing_threshold: f64,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    nfft: usize,
}

impl PitchTracker {
    pub fn new(
        sample_rate: u32,
        window: usize,
        f0_min: f64,
        f0_max: f64,
        voicing_threshold: f64,
    ) -> Self {
        let sr = f64::from(sample_rate);
        let min_lag = ((sr / f0_max).floor() as usize).max(2);
        let max_lag = ((sr / f0_min).ceil() as usize).min(window.saturating_sub(2));
        let nfft = (window + max_lag + 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        Self {
            sample_rate: sr,
            window,
            min_lag,
            max_lag,
            f0_min,
            f0_max,
            voicing_threshold,
            fft: planner.plan_fft_forward(nfft),
            ifft: planner.plan_fft_inverse(nfft),
            nfft,
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Analyses `segment` (at most `window` samples; shorter inputs are
    /// analysed as-is).
    pub fn analyse(&self, segment: &[f64]) -> PitchEstimate {
        let n = segment.len();
        if n < 3 || self.max_lag <= self.min_lag {
            return PitchEstimate::UNVOICED;
        }
        let mean = segment.iter().sum::<f64>() / n as f64;
        let y: Vec<f64> = segment.iter().map(|v| v - mean).collect();
        let energy: f64 = y.iter().map(|v| v * v).sum();
        if energy <= 1e-18 * n as f64 {
            return PitchEstimate::UNVOICED;
        }
        let max_lag = self.max_lag.min(n - 2);
        if max_lag <= self.min_lag {
            return PitchEstimate::UNVOICED;
        }
        let ncc = self.normalized_autocorrelation(&y, max_lag + 1);

        // Local maxima of the positive lobes inside the search band.
        let mut candidates = Vec::new();
        for lag in self.min_lag.max(1)..=max_lag {
            let v = ncc[lag];
            if v > 0.0 && v > ncc[lag - 1] && v >= ncc[lag + 1] {
                candidates.push(lag);
            }
        }
        let best = candidates.iter().map(|&l| ncc[l]).fold(f64::NEG_INFINITY, f64::max);
        if candidates.is_empty() {
            return PitchEstimate::UNVOICED;
        }
        let chosen = candidates
            .iter()
            .copied()
            .find(|&l| ncc[l] >= PEAK_PICK_RATIO * best)
            .expect("best candidate satisfies the ratio");
        let (lag, strength) = parabolic_peak(&ncc, chosen);
        let strength = strength.min(1.0);
        let f0 = self.sample_rate / lag;
        let voiced =
            strength >= self.voicing_threshold && f0 >= self.f0_min && f0 <= self.f0_max;
        if !voiced {
            return PitchEstimate {
                strength: best.min(1.0),
                ..PitchEstimate::UNVOICED
            };
        }
        let (jitter, shimmer) = perturbation(&y, lag);
        PitchEstimate {
            f0,
            voiced,
            strength,
            jitter,
            shimmer,
        }
    }

    /// r(τ) = Σ y_i y_{i+τ} / sqrt(Σ y_i² · Σ y_{i+τ}²) over the overlap,
    /// for τ in 0..=max_lag.
    fn normalized_autocorrelation(&self, y: &[f64], max_lag: usize) -> Vec<f64> {
        let n = y.len();
        let mut buf: Vec<Complex<f64>> = y
            .iter()
            .map(|&v| Complex::new(v, 0.0))
            .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
            .take(self.nfft)
            .collect();
        self.fft.process(&mut buf);
        for c in &mut buf {
            *c = Complex::new(c.norm_sqr(), 0.0);
        }
        self.ifft.process(&mut buf);
        let scale = 1.0 / self.nfft as f64;

        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(0.0);
        for v in y {
            prefix.push(prefix.last().unwrap() + v * v);
        }
        (0..=max_lag.min(n - 1))
            .map(|lag| {
                let head = prefix[n - lag];
                let tail = prefix[n] - prefix[lag];
                let denom = (head * tail).sqrt();
                if denom <= 0.0 {
                    0.0
                } else {
                    buf[lag].re * scale / denom
                }
            })
            .collect()
    }
}

/// Vertex of the parabola through (i-1, i, i+1).
fn parabolic_peak(v: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 >= v.len() {
        return (i as f64, v[i]);
    }
    let (a, b, c) = (v[i - 1], v[i], v[i + 1]);
    let denom = a - 2.0 * b + c;
    if denom.abs() < 1e-300 {
        return (i as f64, b);
    }
    let delta = (0.5 * (a - c) / denom).clamp(-0.5, 0.5);
    (i as f64 + delta, b - 0.25 * (a - c) * delta)
}

/// Marks successive positive waveform peaks one period apart and returns
/// (jitter, shimmer): mean absolute difference of consecutive periods
/// (peak amplitudes) over the mean period (amplitude).
fn perturbation(y: &[f64], period: f64) -> (f64, f64) {
    let n = y.len();
    // Peaks are searched in 1..n-1 so every one can be refined.
    let first_end = (period.ceil() as usize + 1).min(n - 1);
    if first_end <= 1 {
        return (0.0, 0.0);
    }
    let argmax = |lo: usize, hi: usize| -> usize {
        (lo..hi)
            .max_by(|&a, &b| y[a].total_cmp(&y[b]))
            .expect("non-empty search range")
    };
    let mut peaks = vec![parabolic_peak(y, argmax(1, first_end))];
    loop {
        let expected = peaks.last().unwrap().0 + period;
        let lo = ((expected - 0.3 * period).round() as usize).max(1);
        let hi = (expected + 0.3 * period).round() as usize + 1;
        if hi > n - 1 || lo >= hi {
            break;
        }
        peaks.push(parabolic_peak(y, argmax(lo, hi)));
    }
    if peaks.len() < 3 {
        return (0.0, 0.0);
    }
    let periods: Vec<f64> = peaks.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let amps: Vec<f64> = peaks.iter().map(|p| p.1).collect();
    (relative_perturbation(&periods), relative_perturbation(&amps))
}

fn relative_perturbation(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    if mean <= 0.0 {
        return 0.0;
    }
    let diff = v.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>() / (v.len() - 1) as f64;
    diff / mean
}

/// 10·log10(r / (1 - r)) clamped to [-10, 40] dB.
pub(crate) fn hnr_db(r: f64) -> f64 {
    if r <= 0.0 {
        return -10.0;
    }
    if r >= 1.0 {
        return 40.0;
    }
    (10.0 * (r / (1.0 - r)).log10()).clamp(-10.0, 40.0)
}
