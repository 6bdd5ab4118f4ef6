//! OHLC candles: parsing, validation, serialization and a GBM generator.
//!
//! Candle files are comma separated with a `date,open,high,low,close[,volume]`
//! header. The date column holds either ISO dates (`YYYY-MM-DD`) or integer
//! bar indices; a file must use one form throughout. Volume is accepted and
//! dropped. Bar distance is always the index difference inside the series.

use std::fmt;
use std::fmt::Write as _;

use chrono::NaiveDate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Timestamp {
    Date(NaiveDate),
    Index(i64),
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timestamp::Date(d) => write!(f, "{}", d.format("%Y-%m-%d")),
            Timestamp::Index(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candle {
    pub timestamp: Timestamp,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
}

impl Candle {
    /// Builds a candle after checking `0 < low <= open, close <= high`.
    pub fn new(timestamp: Timestamp, open: f64, high: f64, low: f64, close: f64) -> Result<Self> {
        let c = Candle {
            timestamp,
            open,
            high,
            low,
            close,
        };
        c.validate().map_err(Error::InvalidParameter)?;
        Ok(c)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let Candle {
            open,
            high,
            low,
            close,
            ..
        } = *self;
        if ![open, high, low, close].iter().all(|v| v.is_finite()) {
            return Err("non-finite price".into());
        }
        if high < low {
            return Err("high < low".into());
        }
        if low <= 0.0 {
            return Err("non-positive price".into());
        }
        if open < low || open > high {
            return Err("open outside [low, high]".into());
        }
        if close < low || close > high {
            return Err("close outside [low, high]".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandleSeries {
    pub symbol: String,
    candles: Vec<Candle>,
}

impl CandleSeries {
    /// Validates every candle and the strict timestamp ordering.
    pub fn new(symbol: impl Into<String>, candles: Vec<Candle>) -> Result<Self> {
        for (i, c) in candles.iter().enumerate() {
            c.validate().map_err(|message| Error::Parse {
                row: i + 1,
                message,
            })?;
            if i > 0 && candles[i - 1].timestamp >= c.timestamp {
                return Err(Error::Parse {
                    row: i + 1,
                    message: "non-increasing timestamp".into(),
                });
            }
        }
        Ok(CandleSeries {
            symbol: symbol.into(),
            candles,
        })
    }

    pub fn candles(&self) -> &[Candle] {
        &self.candles
    }

    pub fn len(&self) -> usize {
        self.candles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candles.is_empty()
    }

    pub fn closes(&self) -> Vec<f64> {
        self.candles.iter().map(|c| c.close).collect()
    }

    /// The first `n` candles (or all of them).
    pub fn prefix(&self, n: usize) -> CandleSeries {
        CandleSeries {
            symbol: self.symbol.clone(),
            candles: self.candles[..n.min(self.candles.len())].to_vec(),
        }
    }

    /// Writes the series in the candle file format. Prices use the shortest
    /// decimal form that parses back to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("date,open,high,low,close\n");
        for c in &self.candles {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.timestamp, c.open, c.high, c.low, c.close
            );
        }
        out
    }
}

fn parse_timestamp(field: &str) -> Option<Timestamp> {
    if let Ok(i) = field.parse::<i64>() {
        return Some(Timestamp::Index(i));
    }
    NaiveDate::parse_from_str(field, "%Y-%m-%d")
        .ok()
        .map(Timestamp::Date)
}

/// Parses candle text into a validated series.
///
/// Rows are numbered from 1, not counting the header. Blank lines are
/// skipped but still counted so messages point at the right line.
pub fn parse_candles(text: &str, symbol: &str) -> Result<CandleSeries> {
    let mut lines = text.lines().peekable();
    if let Some(first) = lines.peek() {
        let head = first.split(',').next().unwrap_or("").trim();
        if head.eq_ignore_ascii_case("date") {
            lines.next();
        }
    }

    let mut candles: Vec<Candle> = Vec::new();
    let mut indexed: Option<bool> = None;
    for (i, line) in lines.enumerate() {
        let row = i + 1;
        let err = |message: String| Error::Parse { row, message };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 && fields.len() != 6 {
            return Err(err(format!(
                "expected 5 or 6 fields, found {}",
                fields.len()
            )));
        }
        let timestamp = parse_timestamp(fields[0])
            .ok_or_else(|| err(format!("unreadable date '{}'", fields[0])))?;
        let is_index = matches!(timestamp, Timestamp::Index(_));
        match indexed {
            None => indexed = Some(is_index),
            Some(prev) if prev != is_index => {
                return Err(err("mixed date and index timestamps".into()))
            }
            _ => {}
        }
        let mut prices = [0.0f64; 4];
        for (slot, raw) in prices.iter_mut().zip(&fields[1..5]) {
            *slot = raw
                .parse::<f64>()
                .map_err(|_| err(format!("non-numeric price '{raw}'")))?;
        }
        if let Some(vol) = fields.get(5) {
            if !vol.is_empty() {
                vol.parse::<f64>()
                    .map_err(|_| err(format!("non-numeric volume '{vol}'")))?;
            }
        }
        let candle = Candle {
            timestamp,
            open: prices[0],
            high: prices[1],
            low: prices[2],
            close: prices[3],
        };
        candle.validate().map_err(err)?;
        if let Some(prev) = candles.last() {
            if prev.timestamp >= candle.timestamp {
                return Err(err("non-increasing timestamp".into()));
            }
        }
        candles.push(candle);
    }
    Ok(CandleSeries {
        symbol: symbol.to_string(),
        candles,
    })
}

/// Geometric Brownian motion candles with integer bar timestamps.
///
/// `close_t = close_{t-1} * exp(drift - vol^2/2 + vol * z_t)`, the first open is
/// `s0` and each open is the previous close. Wicks extend the body by
/// `|N(0, vol/2)|` (capped at 50% on the low side) so the OHLC ordering holds.
pub fn synth_gbm(s0: f64, drift: f64, vol: f64, n: usize, seed: u64) -> Result<CandleSeries> {
    if !(s0 > 0.0 && s0.is_finite()) {
        return Err(Error::InvalidParameter(format!("s0 must be > 0, got {s0}")));
    }
    if !(vol >= 0.0 && vol.is_finite()) || !drift.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need finite drift and vol >= 0, got drift={drift} vol={vol}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = drift - 0.5 * vol * vol;
    let wick = 0.5 * vol;
    let mut candles = Vec::with_capacity(n);
    let mut prev = s0;
    for t in 0..n {
        let z: f64 = StandardNormal.sample(&mut rng);
        let eh: f64 = StandardNormal.sample(&mut rng);
        let el: f64 = StandardNormal.sample(&mut rng);
        let close = prev * (step + vol * z).exp();
        let open = prev;
        let high = open.max(close) * (1.0 + (wick * eh).abs());
        let low = open.min(close) * (1.0 - (wick * el).abs().min(0.5));
        candles.push(Candle {
            timestamp: Timestamp::Index(t as i64),
            open,
            high,
            low,
            close,
        });
        prev = close;
    }
    Ok(CandleSeries {
        symbol: format!("GBM{seed}"),
        candles,
    })
}
