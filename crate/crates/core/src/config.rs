//! Defaults shared by the library and the command line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::HistogramSpec;
use crate::trend::TrendVariable;

/// Scalings evaluated when none are given.
pub const DEFAULT_SCALINGS: [f64; 5] = [1.0, 1.2, 1.5, 2.0, 3.0];

pub const DEFAULT_SWEEP: &str = "0.5:5:0.1";

/// Inclusive arithmetic range `lo:hi:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl ScalingRange {
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || Error::InvalidParameter(format!("expected lo:hi:step, got '{text}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut v = [0.0f64; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.trim().parse().map_err(|_| bad())?;
        }
        let [lo, hi, step] = v;
        if !(lo > 0.0 && hi >= lo && step > 0.0 && hi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < lo <= hi and step > 0, got '{text}'"
            )));
        }
        Ok(ScalingRange { lo, hi, step })
    }

    /// Grid values, rounded to 10 decimals so `0.5 + 7 * 0.1` prints as 1.2.
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((self.lo + i as f64 * self.step) * 1e10).round() / 1e10)
            .collect()
    }
}

/// Parses `lo:hi` for histogram ranges.
pub fn parse_range(text: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidParameter(format!("expected lo:hi, got '{text}'"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

/// Histogram layout per variable: retracement-scale variables on `[0, 5)`
/// with width 0.11, price-relative ones on `[0, 1)` with width 0.01, bar
/// counts in unit bins.
pub fn default_histogram(variable: TrendVariable) -> HistogramSpec {
    use TrendVariable::*;
    let (lo, hi, w) = match variable {
        Retracement | DelayX => (0.0, 5.0, 0.11),
        RelMovement | RelCorrection | DelayM | DelayC => (0.0, 1.0, 0.01),
        Duration => (0.0, 100.0, 1.0),
        PeriodGap => (0.0, 300.0, 1.0),
    };
    HistogramSpec {
        lo,
        hi,
        bin_width: w,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_grid() {
        let v = ScalingRange::parse(DEFAULT_SWEEP).unwrap().values();
        assert_eq!(v.len(), 46);
        assert_eq!(v[0], 0.5);
        assert_eq!(v[7], 1.2);
        assert_eq!(*v.last().unwrap(), 5.0);
        assert_eq!(
            ScalingRange::parse("1:2:1").unwrap().values(),
            vec![1.0, 2.0]
        );
        assert!(ScalingRange::parse("1:2").is_err());
        assert!(ScalingRange::parse("0:2:1").is_err());
        assert!(ScalingRange::parse("2:1:0.1").is_err());
        assert!(ScalingRange::parse("1:2:0").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:5").unwrap(), (0.0, 5.0));
        assert!(parse_range("5").is_err());
        assert_eq!(
            default_histogram(TrendVariable::Retracement),
            HistogramSpec::retracement_default()
        );
    }
}
