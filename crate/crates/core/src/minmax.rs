//! The MinMax process: relevant highs and lows fixed in real time by a SAR.
//!
//! While the SAR points up the sweep tracks the running maximum of candle
//! highs, while it points down the running minimum of candle lows. A SAR
//! sign change against the current search fixes the running extreme at the
//! current bar, records the close of that bar as the detection price, and
//! starts the opposite search on the bar after the fixed extreme.
//!
//! One exception overrides the SAR: if, during a high search, a candle's low
//! undercuts the last fixed low, the candidate high is fixed on that bar and
//! the sweep switches to a low search (mirrored for low searches). After such
//! an override the search kind and the SAR may disagree; only a sign change
//! against the search kind fixes a point, so no extremum is fixed twice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicators::{Sar, SarSeries};
use crate::market_data::{Candle, CandleSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    High,
    Low,
}

impl ExtremumKind {
    pub fn opposite(self) -> Self {
        match self {
            ExtremumKind::High => ExtremumKind::Low,
            ExtremumKind::Low => ExtremumKind::High,
        }
    }

    fn of(sar: Sar) -> Self {
        match sar {
            Sar::Up => ExtremumKind::High,
            Sar::Down => ExtremumKind::Low,
        }
    }

    fn price(self, c: &Candle) -> f64 {
        match self {
            ExtremumKind::High => c.high,
            ExtremumKind::Low => c.low,
        }
    }

    /// Strict improvement, so the earliest of equal extremes is kept.
    fn improves(self, new: f64, current: f64) -> bool {
        match self {
            ExtremumKind::High => new > current,
            ExtremumKind::Low => new < current,
        }
    }
}

/// A provisional extremum that is still being searched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub kind: ExtremumKind,
    pub price: f64,
    pub bar: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremumPoint {
    pub kind: ExtremumKind,
    pub price: f64,
    /// Bar on which the extreme price occurred.
    pub bar: usize,
    /// Bar on which the point became fixed.
    pub detection_bar: usize,
    pub detection_close: f64,
    /// `|price - detection_close|`.
    pub d_abs: f64,
    /// First bar of the search window that produced this point.
    pub search_start: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MinMaxProcess {
    pub points: Vec<ExtremumPoint>,
    pub open_candidate: Option<Candidate>,
}

impl MinMaxProcess {
    /// Checks strict alternation and strictly increasing extremum bars.
    pub fn validate(&self) -> Result<()> {
        for (i, w) in self.points.windows(2).enumerate() {
            if w[0].kind == w[1].kind
                || w[0].bar >= w[1].bar
                || w[0].detection_bar > w[1].detection_bar
            {
                return Err(Error::NotAlternating(i + 1));
            }
        }
        Ok(())
    }

    /// Points fixed no later than bar `k`.
    pub fn fixed_by(&self, k: usize) -> &[ExtremumPoint] {
        let n = self.points.partition_point(|p| p.detection_bar <= k);
        &self.points[..n]
    }
}

fn scan(kind: ExtremumKind, candles: &[Candle], from: usize, to: usize) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for (bar, c) in candles.iter().enumerate().take(to + 1).skip(from) {
        let price = kind.price(c);
        if best.is_none_or(|b| kind.improves(price, b.price)) {
            best = Some(Candidate { kind, price, bar });
        }
    }
    best
}

struct Sweep<'a> {
    candles: &'a [Candle],
    points: Vec<ExtremumPoint>,
    kind: ExtremumKind,
    search_start: usize,
    candidate: Option<Candidate>,
}

impl Sweep<'_> {
    /// Fixes the candidate on bar `t` and opens the opposite search.
    fn fix(&mut self, t: usize) {
        let Some(c) = self.candidate else { return };
        let close = self.candles[t].close;
        self.points.push(ExtremumPoint {
            kind: c.kind,
            price: c.price,
            bar: c.bar,
            detection_bar: t,
            detection_close: close,
            d_abs: (c.price - close).abs(),
            search_start: self.search_start,
        });
        self.kind = self.kind.opposite();
        self.search_start = c.bar + 1;
        self.candidate = scan(self.kind, self.candles, self.search_start, t);
    }
}

/// Runs the MinMax sweep over `series` steered by `sar`.
pub fn run_minmax(series: &CandleSeries, sar: &SarSeries) -> Result<MinMaxProcess> {
    if series.len() != sar.len() {
        return Err(Error::Misaligned {
            series: series.len(),
            indicator: sar.len(),
        });
    }
    let candles = series.candles();
    let Some(first) = sar.values().iter().position(Option::is_some) else {
        return Ok(MinMaxProcess::default());
    };

    let mut sw = Sweep {
        candles,
        points: Vec::new(),
        kind: ExtremumKind::of(sar.get(first).expect("defined")),
        search_start: first,
        candidate: None,
    };

    for (t, c) in candles.iter().enumerate().skip(first) {
        let price = sw.kind.price(c);
        if sw
            .candidate
            .is_none_or(|cand| sw.kind.improves(price, cand.price))
        {
            sw.candidate = Some(Candidate {
                kind: sw.kind,
                price,
                bar: t,
            });
        }

        if let Some(last) = sw.points.last() {
            let opposite = last.kind.price(c);
            if last.kind.improves(opposite, last.price) && sw.candidate.is_some() {
                sw.fix(t);
                continue;
            }
        }

        let now = sar.get(t).expect("SAR defined after warm-up");
        let flipped = t > first && sar.get(t - 1) != Some(now);
        if flipped && ExtremumKind::of(now) != sw.kind {
            sw.fix(t);
        }
    }

    Ok(MinMaxProcess {
        points: sw.points,
        open_candidate: sw.candidate,
    })
}

/// `d_abs / denom`, the delay expressed in units of a movement or price level.
pub fn relative_delay(point: &ExtremumPoint, denom: f64) -> Result<f64> {
    if !(denom > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delay denominator must be > 0, got {denom}"
        )));
    }
    Ok(point.d_abs / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicators::{macd_sar, ScalingConfig};
    use crate::market_data::{synth_gbm, Timestamp};

    fn point(d_abs: f64) -> ExtremumPoint {
        ExtremumPoint {
            kind: ExtremumKind::Low,
            price: 100.0,
            bar: 0,
            detection_bar: 1,
            detection_close: 100.0 + d_abs,
            d_abs,
            search_start: 0,
        }
    }

    fn candles(rows: &[(f64, f64)]) -> CandleSeries {
        // (high, low) pairs, close at the midpoint
        let cs = rows
            .iter()
            .enumerate()
            .map(|(i, &(h, l))| {
                let m = 0.5 * (h + l);
                Candle::new(Timestamp::Index(i as i64), m, h, l, m).unwrap()
            })
            .collect();
        CandleSeries::new("T", cs).unwrap()
    }

    #[test]
    fn relative_delay_cases() {
        assert_eq!(relative_delay(&point(2.0), 10.0).unwrap(), 0.2);
        assert_eq!(relative_delay(&point(0.0), 3.7).unwrap(), 0.0);
        assert!((relative_delay(&point(5.0), 110.0).unwrap() - 0.045454545454545456).abs() < 1e-15);
        assert!(relative_delay(&point(1.0), 0.0).is_err());
        assert!(relative_delay(&point(1.0), -2.0).is_err());
    }

    #[test]
    fn constant_sar_fixes_nothing() {
        let s = synth_gbm(100.0, 0.0, 0.01, 50, 1).unwrap();
        let sar = SarSeries::from_values(vec![Some(Sar::Up); 50]).unwrap();
        let mm = run_minmax(&s, &sar).unwrap();
        assert!(mm.points.is_empty());
        let cand = mm.open_candidate.unwrap();
        assert_eq!(cand.kind, ExtremumKind::High);
        let max = s.candles().iter().map(|c| c.high).fold(f64::MIN, f64::max);
        assert_eq!(cand.price, max);
    }

    #[test]
    fn misaligned_inputs() {
        let s = synth_gbm(100.0, 0.0, 0.01, 50, 1).unwrap();
        let sar = SarSeries::from_values(vec![Some(Sar::Up); 49]).unwrap();
        assert!(matches!(
            run_minmax(&s, &sar),
            Err(Error::Misaligned { .. })
        ));
    }

    #[test]
    fn hand_steered_sweep() {
        // bar:     0      1      2      3      4      5      6
        let s = candles(&[
            (10.0, 9.0),
            (12.0, 10.0),
            (11.0, 8.0),
            (9.5, 7.0),
            (9.0, 7.5),
            (13.0, 8.5),
            (12.5, 11.0),
        ]);
        use Sar::*;
        let sar = SarSeries::from_values(vec![
            Some(Up),
            Some(Up),
            Some(Up),
            Some(Down),
            Some(Down),
            Some(Up),
            Some(Up),
        ])
        .unwrap();
        let mm = run_minmax(&s, &sar).unwrap();
        // high 12 at bar 1 fixed on bar 3; low 7 at bar 3 fixed on bar 5
        assert_eq!(mm.points.len(), 2);
        let h = mm.points[0];
        assert_eq!(
            (h.kind, h.price, h.bar, h.detection_bar),
            (ExtremumKind::High, 12.0, 1, 3)
        );
        assert_eq!(h.detection_close, 8.25);
        assert_eq!(h.d_abs, 3.75);
        let l = mm.points[1];
        assert_eq!(
            (l.kind, l.price, l.bar, l.detection_bar),
            (ExtremumKind::Low, 7.0, 3, 5)
        );
        assert_eq!(l.search_start, 2);
        assert_eq!(l.d_abs, 3.75);
        assert_eq!(mm.open_candidate.unwrap().price, 13.0);
    }

    #[test]
    fn exception_fixes_high_when_last_low_breaks() {
        use Sar::*;
        // low 5 at bar 1 is fixed on bar 2; the SAR stays up, yet bar 4
        // undercuts 5, which fixes the running high 9 (bar 3) on bar 4.
        let s = candles(&[
            (7.0, 6.0),
            (6.0, 5.0),
            (8.0, 6.0),
            (9.0, 7.0),
            (8.0, 4.0),
            (6.0, 3.5),
        ]);
        let sar = SarSeries::from_values(vec![
            Some(Down),
            Some(Down),
            Some(Up),
            Some(Up),
            Some(Up),
            Some(Up),
        ])
        .unwrap();
        let mm = run_minmax(&s, &sar).unwrap();
        assert_eq!(mm.points.len(), 2);
        assert_eq!(mm.points[0].price, 5.0);
        assert_eq!(mm.points[1].kind, ExtremumKind::High);
        assert_eq!(
            (
                mm.points[1].price,
                mm.points[1].bar,
                mm.points[1].detection_bar
            ),
            (9.0, 3, 4)
        );
        let cand = mm.open_candidate.unwrap();
        assert_eq!(
            (cand.kind, cand.price, cand.bar),
            (ExtremumKind::Low, 3.5, 5)
        );
        mm.validate().unwrap();
    }

    #[test]
    fn gbm_alternates_and_envelope_holds() {
        let cfg = ScalingConfig::new(1.0).unwrap();
        for seed in 0..20 {
            let s = synth_gbm(100.0, 0.0, 0.015, 1500, seed).unwrap();
            let mm = run_minmax(&s, &macd_sar(&s, cfg).unwrap()).unwrap();
            mm.validate().unwrap();
            for p in &mm.points {
                assert!(p.detection_bar >= p.bar && p.bar >= p.search_start);
                assert_eq!(p.d_abs, (p.price - p.detection_close).abs());
                let window = &s.candles()[p.search_start..=p.detection_bar];
                let expect = match p.kind {
                    ExtremumKind::High => window.iter().map(|c| c.high).fold(f64::MIN, f64::max),
                    ExtremumKind::Low => window.iter().map(|c| c.low).fold(f64::MAX, f64::min),
                };
                assert_eq!(p.price, expect);
            }
        }
    }
}
