use chrono::{NaiveDateTime, Timelike};
use ndarray::{s, Array2};

use super::{Result, SeriesError, SeriesFrame};

/// One forecasting instance anchored at origin `t`: the model sees the past
/// `w` rows and the future covariates of the next `h` rows, and is scored
/// against the next `h` target rows.
#[derive(Debug, Clone)]
pub struct ForecastWindow {
    pub origin: usize,
    pub past_targets: Array2<f64>,
    pub past_context: Array2<f64>,
    pub future_context: Array2<f64>,
    pub target: Array2<f64>,
    pub past_timestamps: Vec<NaiveDateTime>,
    pub future_timestamps: Vec<NaiveDateTime>,
}

impl SeriesFrame {
    /// Extracts the window anchored at `t` (requires `t >= w`, `t + h <= T`).
    pub fn window_at(&self, t: usize, w: usize, h: usize) -> Result<ForecastWindow> {
        if w == 0 || h == 0 || t < w || t + h > self.len() {
            return Err(SeriesError::InsufficientData {
                required: w + h,
                actual: self.len(),
            });
        }
        Ok(ForecastWindow {
            origin: t,
            past_targets: self.targets().slice(s![t - w..t, ..]).to_owned(),
            past_context: self.past_covariates().slice(s![t - w..t, ..]).to_owned(),
            future_context: self.future_covariates().slice(s![t..t + h, ..]).to_owned(),
            target: self.targets().slice(s![t..t + h, ..]).to_owned(),
            past_timestamps: self.timestamps()[t - w..t].to_vec(),
            future_timestamps: self.timestamps()[t..t + h].to_vec(),
        })
    }
}

/// Number of windows produced by [`make_windows`]: floor((T-w-h)/stride) + 1.
pub fn window_count(t_len: usize, w: usize, h: usize, stride: usize) -> usize {
    if t_len < w + h {
        0
    } else {
        (t_len - w - h) / stride + 1
    }
}

/// Strided window extraction with origins `w, w+stride, w+2*stride, ...`.
pub fn make_windows(frame: &SeriesFrame, w: usize, h: usize, stride: usize) -> Result<Vec<ForecastWindow>> {
    assert!(stride >= 1, "stride must be >= 1");
    assert!(w >= 1 && h >= 1, "window and horizon must be >= 1");
    if frame.len() < w + h {
        return Err(SeriesError::InsufficientData {
            required: w + h,
            actual: frame.len(),
        });
    }
    window_origins(frame.len(), w, h, stride)
        .map(|t| frame.window_at(t, w, h))
        .collect()
}

/// Iterator over valid origins for the strided scheme.
pub fn window_origins(t_len: usize, w: usize, h: usize, stride: usize) -> impl Iterator<Item = usize> {
    (0..window_count(t_len, w, h, stride)).map(move |i| w + i * stride)
}

/// Origins of day-ahead evaluation windows: every 00:00 instant `t` with a
/// full `w`-row history inside `rows` and `h` future rows in the frame. This
/// matches the day-ahead setting where plans arrive daily for the next 24 h.
pub fn daily_origins(
    frame: &SeriesFrame,
    w: usize,
    h: usize,
    rows: std::ops::Range<usize>,
) -> Vec<usize> {
    let ts = frame.timestamps();
    rows.filter(move |&t| {
        t >= w
            && t + h <= frame.len()
            && ts[t].time().hour() == 0
            && ts[t].time().minute() == 0
    })
    .collect()
}
