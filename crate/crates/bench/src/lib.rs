//! Inputs shared by the criterion benches in `benches/`.

use trendstat::{synth_gbm, CandleSeries};

/// Seeded GBM candles with 2% daily volatility.
pub fn gbm(bars: usize, seed: u64) -> CandleSeries {
    synth_gbm(100.0, 0.0, 0.02, bars, seed).expect("valid parameters")
}

/// Positive, roughly log-normal samples: the closes of a GBM path.
pub fn positive_samples(n: usize, seed: u64) -> Vec<f64> {
    gbm(n, seed).closes()
}
