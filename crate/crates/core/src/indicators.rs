//! EMA, MACD and the two-valued MACD SAR process.
//!
//! One scaling parameter `s` drives all three MACD periods:
//! fast = 12s, slow = 26s, signal = 9s. Periods may be fractional; the EMA
//! smoothing factor is `2 / (period + 1)` in every case.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_data::CandleSeries;

const FAST: f64 = 12.0;
const SLOW: f64 = 26.0;
const SIGNAL: f64 = 9.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    scaling: f64,
}

impl ScalingConfig {
    pub fn new(scaling: f64) -> Result<Self> {
        if !(scaling > 0.0 && scaling.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scaling must be > 0, got {scaling}"
            )));
        }
        Ok(ScalingConfig { scaling })
    }

    pub fn scaling(&self) -> f64 {
        self.scaling
    }

    pub fn fast(&self) -> f64 {
        FAST * self.scaling
    }

    pub fn slow(&self) -> f64 {
        SLOW * self.scaling
    }

    pub fn signal(&self) -> f64 {
        SIGNAL * self.scaling
    }

    /// Number of leading bars with an undefined SAR value: `ceil(26s)`.
    pub fn warmup(&self) -> usize {
        // the epsilon keeps 26 * 1.5000000000000002 at 39
        (self.slow() - 1e-9).ceil().max(0.0) as usize
    }
}

/// Exponential moving average seeded with the first value.
pub fn ema(values: &[f64], period: f64) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(period >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "EMA period must be >= 1, got {period}"
        )));
    }
    let alpha = 2.0 / (period + 1.0);
    let mut out = Vec::with_capacity(values.len());
    let mut prev = values[0];
    out.push(prev);
    for &v in &values[1..] {
        prev = alpha * v + (1.0 - alpha) * prev;
        out.push(prev);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Macd {
    pub line: Vec<f64>,
    pub signal: Vec<f64>,
}

pub fn macd(series: &CandleSeries, cfg: ScalingConfig) -> Result<Macd> {
    let closes = series.closes();
    let fast = ema(&closes, cfg.fast())?;
    let slow = ema(&closes, cfg.slow())?;
    let line: Vec<f64> = fast.iter().zip(&slow).map(|(f, s)| f - s).collect();
    let signal = ema(&line, cfg.signal())?;
    Ok(Macd { line, signal })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sar {
    Up,
    Down,
}

impl Sar {
    pub fn sign(self) -> i8 {
        match self {
            Sar::Up => 1,
            Sar::Down => -1,
        }
    }
}

/// SAR values aligned with a candle series; `None` only in a leading warm-up
/// prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SarSeries {
    values: Vec<Option<Sar>>,
}

impl SarSeries {
    /// Wraps values from any SAR process. Fails if an undefined value follows
    /// a defined one.
    pub fn from_values(values: Vec<Option<Sar>>) -> Result<Self> {
        if let Some(first) = values.iter().position(Option::is_some) {
            if let Some(gap) = values[first..].iter().position(Option::is_none) {
                return Err(Error::InvalidParameter(format!(
                    "undefined SAR value at index {} after warm-up",
                    first + gap
                )));
            }
        }
        Ok(SarSeries { values })
    }

    pub fn values(&self) -> &[Option<Sar>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Sar> {
        self.values.get(i).copied().flatten()
    }
}

/// MACD SAR: up while the MACD line is above its signal line, down while
/// below; an exact tie repeats the previous value (down if there is none).
pub fn macd_sar(series: &CandleSeries, cfg: ScalingConfig) -> Result<SarSeries> {
    if series.is_empty() {
        return Err(Error::EmptyInput);
    }
    let m = macd(series, cfg)?;
    let warmup = cfg.warmup();
    let mut values = Vec::with_capacity(series.len());
    let mut prev = Sar::Down;
    for (t, (l, s)) in m.line.iter().zip(&m.signal).enumerate() {
        if t < warmup {
            values.push(None);
            continue;
        }
        let v = if l > s {
            Sar::Up
        } else if l < s {
            Sar::Down
        } else {
            prev
        };
        prev = v;
        values.push(Some(v));
    }
    Ok(SarSeries { values })
}
