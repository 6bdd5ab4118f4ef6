//! Synthetic up-trend with planted log-normal retracements.
//!
//! The path alternates linear movement and correction legs. Movement sizes
//! are a uniform fraction of the current price; each correction retraces a
//! log-normal multiple of the movement before it. Candles have no wicks, so
//! every turning point is an exact bar extreme that the MinMax sweep can
//! recover. A descending lead-in places the first low after the MACD
//! warm-up so every planted correction is measurable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_data::{Candle, CandleSeries, Timestamp};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedTrend {
    pub start_price: f64,
    /// Number of movement/correction pairs.
    pub legs: usize,
    pub mu_x: f64,
    pub sigma_x: f64,
    /// Movement size as a fraction of price, drawn uniformly from this range.
    pub movement: (f64, f64),
    pub movement_bars: usize,
    /// Corrections last `max(min_correction_bars, x * movement_bars)` bars.
    pub min_correction_bars: usize,
}

impl Default for PlantedTrend {
    fn default() -> Self {
        PlantedTrend {
            start_price: 100.0,
            legs: 120,
            mu_x: 0.5f64.ln(),
            sigma_x: 0.3,
            movement: (0.06, 0.12),
            movement_bars: 30,
            min_correction_bars: 15,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSeries {
    pub series: CandleSeries,
    /// Planted retracement of every correction, in path order.
    pub retracements: Vec<f64>,
}

const LEAD_IN_BARS: usize = 40;

fn push_leg(closes: &mut Vec<f64>, to: f64, bars: usize) {
    let from = *closes.last().expect("path starts non-empty");
    for k in 1..=bars {
        closes.push(from + (to - from) * k as f64 / bars as f64);
    }
}

pub fn planted_trend(cfg: &PlantedTrend, seed: u64) -> Result<PlantedSeries> {
    let (lo, hi) = cfg.movement;
    if !(cfg.start_price > 0.0 && lo > 0.0 && hi >= lo && hi < 1.0) {
        return Err(Error::InvalidParameter(
            "need start_price > 0 and 0 < movement range < 1".into(),
        ));
    }
    if cfg.movement_bars == 0 || cfg.min_correction_bars == 0 || cfg.legs == 0 {
        return Err(Error::InvalidParameter(
            "leg lengths and count must be >= 1".into(),
        ));
    }
    let dist = LogNormal::new(cfg.mu_x, cfg.sigma_x)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // descend into the first low so it is fixed after the indicator warm-up
    let mut closes = vec![cfg.start_price * (1.0 + hi)];
    push_leg(&mut closes, cfg.start_price, LEAD_IN_BARS);
    let mut retracements = Vec::with_capacity(cfg.legs);
    for _ in 0..cfg.legs {
        let low = *closes.last().expect("non-empty");
        let movement = low * rng.gen_range(lo..=hi);
        let high = low + movement;
        push_leg(&mut closes, high, cfg.movement_bars);

        // keep the price positive; a retracement that deep never occurs at
        // the default parameters
        let x = dist.sample(&mut rng).min(0.95 * high / movement);
        retracements.push(x);
        let bars = ((x * cfg.movement_bars as f64).round() as usize).max(cfg.min_correction_bars);
        push_leg(&mut closes, high - x * movement, bars);
    }
    // a final movement so the last correction's low gets fixed
    let low = *closes.last().expect("non-empty");
    push_leg(&mut closes, low * (1.0 + hi), cfg.movement_bars);

    let mut candles = Vec::with_capacity(closes.len());
    let mut open = closes[0];
    for (i, &close) in closes.iter().enumerate() {
        candles.push(Candle {
            timestamp: Timestamp::Index(i as i64),
            open,
            high: open.max(close),
            low: open.min(close),
            close,
        });
        open = close;
    }
    Ok(PlantedSeries {
        series: CandleSeries::new(format!("PLANT{seed}"), candles)?,
        retracements,
    })
}
