use super::{DspError, LldMatrix};

/// Regression half-window in frames.
const DELTA_WINDOW: usize = 2;

/// First-order regression deltas of every column,
/// d_t = Σ_{n=1..2} n·(c_{t+n} − c_{t−n}) / (2·Σ n²),
/// with out-of-range frames replaced by the nearest edge frame. Delta
/// columns are named `<name>_de`.
pub fn delta(m: &LldMatrix) -> Result<LldMatrix, DspError> {
    let n = m.n_frames();
    if n < 3 {
        return Err(DspError::TooFewFrames(n));
    }
    let norm = 2.0 * (1..=DELTA_WINDOW).map(|k| (k * k) as f64).sum::<f64>();
    let at = |c: &[f64], i: isize| c[i.clamp(0, n as isize - 1) as usize];
    let columns = m
        .columns()
        .iter()
        .map(|c| {
            (0..n as isize)
                .map(|t| {
                    (1..=DELTA_WINDOW as isize)
                        .map(|k| k as f64 * (at(c, t + k) - at(c, t - k)))
                        .sum::<f64>()
                        / norm
                })
                .collect()
        })
        .collect();
    let names = m.names().iter().map(|s| format!("{s}_de")).collect();
    Ok(LldMatrix::from_columns(m.frame_len, m.frame_hop, names, columns))
}
