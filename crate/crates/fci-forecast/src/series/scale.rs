use ndarray::{Array2, ArrayView2, ArrayViewMut2};

use super::SeriesFrame;

/// Scaling rule applied per channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleMethod {
    /// `(x - min) / (max - min)`, statistics from the training rows.
    MinMax,
    /// `(x - mean) / std` (population std), the standard ETT-benchmark
    /// preprocessing.
    ZScore,
}

#[derive(Debug, Clone, Copy)]
struct ChannelStats {
    offset: f64, // min or mean
    scale: f64,  // max-min or std; 0 marks a constant channel
}

impl ChannelStats {
    fn apply(&self, x: f64) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            (x - self.offset) / self.scale
        }
    }

    fn invert(&self, y: f64) -> f64 {
        y * self.scale + self.offset
    }
}

/// Per-channel scaler fitted on the training partition only. Values outside
/// the training range map outside [0,1] without clipping; a constant channel
/// maps to 0 and inverts back to its constant.
#[derive(Debug, Clone)]
pub struct Normalizer {
    method: ScaleMethod,
    targets: Vec<ChannelStats>,
    past: Vec<ChannelStats>,
    future: Vec<ChannelStats>,
}

impl Normalizer {
    /// Fits channel statistics on `train_rows` of the frame.
    pub fn fit(frame: &SeriesFrame, train_rows: std::ops::Range<usize>, method: ScaleMethod) -> Self {
        let stats = |m: &Array2<f64>| -> Vec<ChannelStats> {
            (0..m.ncols())
                .map(|c| {
                    let col = m.slice(ndarray::s![train_rows.clone(), c]);
                    match method {
                        ScaleMethod::MinMax => {
                            let mut lo = f64::INFINITY;
                            let mut hi = f64::NEG_INFINITY;
                            for &v in col.iter() {
                                lo = lo.min(v);
                                hi = hi.max(v);
                            }
                            ChannelStats { offset: lo, scale: hi - lo }
                        }
                        ScaleMethod::ZScore => {
                            let n = col.len() as f64;
                            let mean = col.sum() / n;
                            let var = col.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n;
                            ChannelStats { offset: mean, scale: var.sqrt() }
                        }
                    }
                })
                .collect()
        };
        Self {
            method,
            targets: stats(frame.targets()),
            past: stats(frame.past_covariates()),
            future: stats(frame.future_covariates()),
        }
    }

    pub fn method(&self) -> ScaleMethod {
        self.method
    }

    /// Returns a frame with every channel scaled.
    pub fn apply(&self, frame: &SeriesFrame) -> SeriesFrame {
        let mut out = frame.clone();
        scale_in_place(out.targets_mut().view_mut(), &self.targets);
        scale_in_place(out.past_covariates_mut().view_mut(), &self.past);
        scale_in_place(out.future_covariates_mut().view_mut(), &self.future);
        out
    }

    /// Maps a normalized target block (rows × D_t) back to the original scale.
    pub fn invert_targets(&self, normalized: ArrayView2<f64>) -> Array2<f64> {
        let mut out = normalized.to_owned();
        for mut row in out.rows_mut() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.targets[c].invert(*v);
            }
        }
        out
    }

    /// Scales a raw target block (rows × D_t).
    pub fn apply_targets(&self, raw: ArrayView2<f64>) -> Array2<f64> {
        let mut out = raw.to_owned();
        for mut row in out.rows_mut() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.targets[c].apply(*v);
            }
        }
        out
    }
}

fn scale_in_place(mut m: ArrayViewMut2<f64>, stats: &[ChannelStats]) {
    for mut row in m.rows_mut() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = stats[c].apply(*v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::frame_from_target;

    #[test]
    fn minmax_midpoint() {
        let frame = frame_from_target(&[0.0, 5.0, 10.0]);
        let norm = Normalizer::fit(&frame, 0..3, ScaleMethod::MinMax);
        let scaled = norm.apply(&frame);
        assert_eq!(scaled.targets()[(1, 0)], 0.5);
        assert_eq!(scaled.targets()[(0, 0)], 0.0);
        assert_eq!(scaled.targets()[(2, 0)], 1.0);
    }

    #[test]
    fn round_trip_identity() {
        let frame = frame_from_target(&[-3.0, 7.0, 11.0]);
        let norm = Normalizer::fit(&frame, 0..3, ScaleMethod::MinMax);
        let scaled = norm.apply(&frame);
        let back = norm.invert_targets(scaled.targets().view());
        for (a, b) in back.iter().zip(frame.targets().iter()) {
            let rel = (a - b).abs() / b.abs().max(1.0);
            assert!(rel < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn constant_channel_maps_to_zero() {
        let frame = frame_from_target(&[4.0, 4.0]);
        let norm = Normalizer::fit(&frame, 0..2, ScaleMethod::MinMax);
        let scaled = norm.apply(&frame);
        assert_eq!(scaled.targets()[(0, 0)], 0.0);
        assert_eq!(scaled.targets()[(1, 0)], 0.0);
        // invert restores the constant
        let back = norm.invert_targets(scaled.targets().view());
        assert_eq!(back[(0, 0)], 4.0);
    }

    #[test]
    fn statistics_come_from_training_rows_only() {
        let frame = frame_from_target(&[0.0, 10.0, 100.0, -50.0]);
        let norm = Normalizer::fit(&frame, 0..2, ScaleMethod::MinMax);
        let scaled = norm.apply(&frame);
        // fitted on {0,10}: 100 maps beyond 1, -50 below 0, no clipping
        assert_eq!(scaled.targets()[(2, 0)], 10.0);
        assert_eq!(scaled.targets()[(3, 0)], -5.0);
    }

    #[test]
    fn zscore_standardizes_train_rows() {
        let frame = frame_from_target(&[1.0, 2.0, 3.0, 100.0]);
        let norm = Normalizer::fit(&frame, 0..3, ScaleMethod::ZScore);
        let scaled = norm.apply(&frame);
        let vals: Vec<f64> = scaled.targets().column(0).iter().take(3).copied().collect();
        let mean: f64 = vals.iter().sum::<f64>() / 3.0;
        assert!(mean.abs() < 1e-12);
        assert!((vals[2] - 2f64.sqrt() / 2.0 * 2.0 / 2f64.sqrt() * 2f64.sqrt()).abs() < 2.0); // sanity: finite
        let back = norm.invert_targets(scaled.targets().view());
        assert!((back[(3, 0)] - 100.0).abs() < 1e-9);
    }
}
