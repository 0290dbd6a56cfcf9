//! Short-time spectrum, mel cepstrum and spectral shape descriptors.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

const LOG_FLOOR: f64 = 1e-20;

fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Per-frame spectral analysis: Hamming window, power spectrum, triangular
/// mel filterbank and orthonormal DCT-II.
pub(crate) struct SpectralAnalyzer {
    window: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    nfft: usize,
    bin_hz: f64,
    /// Sparse filters: (first bin, weights).
    filters: Vec<(usize, Vec<f64>)>,
    dct: Vec<Vec<f64>>,
    rolloff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct FrameSpectrum {
    pub magnitude: Vec<f64>,
    pub mfcc: Vec<f64>,
    pub centroid: f64,
    pub rolloff: f64,
}

impl SpectralAnalyzer {
    pub fn new(sample_rate: u32, frame_len: usize, n_mel: usize, n_mfcc: usize, rolloff: f64) -> Self {
        let nfft = frame_len.next_power_of_two();
        let sr = f64::from(sample_rate);
        let window = (0..frame_len)
            .map(|i| {
                if frame_len == 1 {
                    1.0
                } else {
                    0.54 - 0.46
                        * (2.0 * std::f64::consts::PI * i as f64 / (frame_len - 1) as f64).cos()
                }
            })
            .collect();
        let bin_hz = sr / nfft as f64;
        let n_bins = nfft / 2 + 1;

        let mel_hi = hz_to_mel(sr / 2.0);
        let edges: Vec<f64> = (0..n_mel + 2)
            .map(|i| mel_to_hz(mel_hi * i as f64 / (n_mel + 1) as f64))
            .collect();
        let filters = (0..n_mel)
            .map(|m| {
                let (lo, mid, hi) = (edges[m], edges[m + 1], edges[m + 2]);
                let first = (lo / bin_hz).ceil() as usize;
                let last = ((hi / bin_hz).floor() as usize).min(n_bins - 1);
                let weights = (first..=last.max(first))
                    .map(|k| {
                        let f = k as f64 * bin_hz;
                        if f <= lo || f >= hi {
                            0.0
                        } else if f <= mid {
                            (f - lo) / (mid - lo)
                        } else {
                            (hi - f) / (hi - mid)
                        }
                    })
                    .collect();
                (first, weights)
            })
            .collect();

        let dct = (0..n_mfcc)
            .map(|k| {
                let scale = if k == 0 {
                    (1.0 / n_mel as f64).sqrt()
                } else {
                    (2.0 / n_mel as f64).sqrt()
                };
                (0..n_mel)
                    .map(|m| {
                        scale
                            * (std::f64::consts::PI * k as f64 * (m as f64 + 0.5) / n_mel as f64)
                                .cos()
                    })
                    .collect()
            })
            .collect();

        Self {
            window,
            fft: FftPlanner::new().plan_fft_forward(nfft),
            nfft,
            bin_hz,
            filters,
            dct,
            rolloff,
        }
    }

    pub fn analyse(&self, frame: &[f64]) -> FrameSpectrum {
        let mut buf: Vec<Complex<f64>> = frame
            .iter()
            .zip(&self.window)
            .map(|(x, w)| Complex::new(x * w, 0.0))
            .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
            .take(self.nfft)
            .collect();
        self.fft.process(&mut buf);
        let n_bins = self.nfft / 2 + 1;
        let power: Vec<f64> = buf[..n_bins].iter().map(|c| c.norm_sqr()).collect();
        let magnitude: Vec<f64> = power.iter().map(|p| p.sqrt()).collect();

        let log_mel: Vec<f64> = self
            .filters
            .iter()
            .map(|(first, w)| {
                let e: f64 = w
                    .iter()
                    .enumerate()
                    .filter_map(|(j, wj)| power.get(first + j).map(|p| p * wj))
                    .sum();
                e.max(LOG_FLOOR).ln()
            })
            .collect();
        let mfcc = self
            .dct
            .iter()
            .map(|row| row.iter().zip(&log_mel).map(|(a, b)| a * b).sum())
            .collect();

        let total: f64 = power.iter().sum();
        let centroid = if total > 0.0 {
            power
                .iter()
                .enumerate()
                .map(|(k, p)| k as f64 * self.bin_hz * p)
                .sum::<f64>()
                / total
        } else {
            0.0
        };
        let rolloff = if total > 0.0 {
            let target = self.rolloff * total;
            let mut acc = 0.0;
            let mut bin = n_bins - 1;
            for (k, p) in power.iter().enumerate() {
                acc += p;
                if acc >= target {
                    bin = k;
                    break;
                }
            }
            bin as f64 * self.bin_hz
        } else {
            0.0
        };
        FrameSpectrum {
            magnitude,
            mfcc,
            centroid,
            rolloff,
        }
    }
}

/// Σ_k (|X_t(k)| − |X_{t−1}(k)|)².
pub(crate) fn flux(current: &[f64], previous: &[f64]) -> f64 {
    current
        .iter()
        .zip(previous)
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}
