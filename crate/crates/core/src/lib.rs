//! Market-technical (Dow) trend detection on OHLC candles and the statistics
//! of the trend variables it produces.
//!
//! The pipeline is
//!
//! ```text
//! CandleSeries -> macd_sar -> run_minmax -> detect_trends -> extract_samples
//!                                                              |
//!                       lognormal_mle / anderson_darling <-----+
//!                       expected_return / backtest_anticyclic
//! ```
//!
//! Every stage is a pure function of its inputs; the MinMax sweep is causal,
//! so an extremum fixed at bar `k` never changes when more candles arrive.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod indicators;
pub mod market_data;
pub mod minmax;
pub mod stats;
pub mod synth;
pub mod trading;
pub mod trend;

pub use config::{default_histogram, parse_range, ScalingRange, DEFAULT_SCALINGS, DEFAULT_SWEEP};
pub use error::{Error, Result};
pub use indicators::{ema, macd, macd_sar, Macd, SarSeries, ScalingConfig};
pub use market_data::{parse_candles, synth_gbm, Candle, CandleSeries, Timestamp};
pub use minmax::{relative_delay, run_minmax, ExtremumKind, ExtremumPoint, MinMaxProcess};
pub use stats::{
    anderson_darling_lognormal, bivariate_lognormal_density, conditional_cross_mean, histogram,
    log_correlation, lognormal_cdf, lognormal_mle, lognormal_moments, normal_cdf,
    truncated_lognormal_mean, AdResult, BivariateLogNormalParams, FitReport, Histogram,
    HistogramSpec, LogNormalParams,
};
pub use synth::{planted_trend, PlantedSeries, PlantedTrend};
pub use trading::{
    backtest_anticyclic, expected_return, simulate_expected_return, trade_return, Backtest,
    TradeOutcome, TradeSpec,
};
pub use trend::{
    detect_trends, extract_samples, mean_period, period_scaling_fit, Direction, LinearFit,
    SampleSet, TrendPhase, TrendSample, TrendVariable,
};
