//! Dow-trend state machine over a MinMax process and the trend variables
//! measured inside each trend.
//!
//! An up-trend is established at the point that completes two strictly
//! rising lows and two strictly rising highs; it lasts until a point fails to
//! beat its same-kind predecessor. Down-trends are mirrored. A phase spans
//! the four points of the establishing pattern through the violating point.
//!
//! Up-trend variables, with `P3` the low before the movement, `P2` the high
//! ending it and `P3new` the low ending the correction:
//!
//! ```text
//! X   = (P2 - P3new) / (P2 - P3)      Y   = bar(P3new) - bar(P2)
//! M   = (P2 - P3) / P3                D_M = d_abs(P2) / P3
//! C   = (P2 - P3new) / P2             D_C = d_abs(P3new) / P2
//! D_X = d_abs(P3new) / (P2 - P3)
//! ```
//!
//! Down-trends swap the roles of highs and lows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minmax::{ExtremumKind, ExtremumPoint, MinMaxProcess};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    /// Kind of the extremum that ends a movement in this direction.
    pub fn movement_end(self) -> ExtremumKind {
        match self {
            Direction::Up => ExtremumKind::High,
            Direction::Down => ExtremumKind::Low,
        }
    }

    /// Whether `new` continues the trend against its same-kind predecessor.
    /// Ties break the trend.
    pub fn continues(self, new: f64, prev: f64) -> bool {
        match self {
            Direction::Up => new > prev,
            Direction::Down => new < prev,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendPhase {
    pub direction: Direction,
    /// First point of the establishing pattern.
    pub start_point_index: usize,
    /// Point whose detection established the trend (`start_point_index + 3`).
    pub established_point_index: usize,
    /// Violating point, or the last fixed point if the trend is still running.
    pub end_point_index: usize,
    pub start_detection_bar: usize,
    pub end_detection_bar: usize,
    /// False when the series ended while the trend was intact.
    pub ended: bool,
}

pub fn detect_trends(mm: &MinMaxProcess) -> Result<Vec<TrendPhase>> {
    mm.validate()?;
    let p = &mm.points;
    let mut phases = Vec::new();
    let mut active: Option<(Direction, usize, usize)> = None;

    for k in 0..p.len() {
        if let Some((dir, start, est)) = active {
            if dir.continues(p[k].price, p[k - 2].price) {
                continue;
            }
            phases.push(TrendPhase {
                direction: dir,
                start_point_index: start,
                established_point_index: est,
                end_point_index: k,
                start_detection_bar: p[est].detection_bar,
                end_detection_bar: p[k].detection_bar,
                ended: true,
            });
            active = None;
        }
        if k >= 3 {
            for dir in [Direction::Up, Direction::Down] {
                if dir.continues(p[k].price, p[k - 2].price)
                    && dir.continues(p[k - 1].price, p[k - 3].price)
                {
                    active = Some((dir, k - 3, k));
                }
            }
        }
    }
    if let Some((dir, start, est)) = active {
        let last = p.len() - 1;
        phases.push(TrendPhase {
            direction: dir,
            start_point_index: start,
            established_point_index: est,
            end_point_index: last,
            start_detection_bar: p[est].detection_bar,
            end_detection_bar: p[last].detection_bar,
            ended: false,
        });
    }
    Ok(phases)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrendVariable {
    Retracement,
    Duration,
    RelMovement,
    RelCorrection,
    DelayX,
    DelayM,
    DelayC,
    PeriodGap,
}

impl TrendVariable {
    pub const ALL: [TrendVariable; 8] = [
        TrendVariable::Retracement,
        TrendVariable::Duration,
        TrendVariable::RelMovement,
        TrendVariable::RelCorrection,
        TrendVariable::DelayX,
        TrendVariable::DelayM,
        TrendVariable::DelayC,
        TrendVariable::PeriodGap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TrendVariable::Retracement => "retracement",
            TrendVariable::Duration => "duration",
            TrendVariable::RelMovement => "rel-movement",
            TrendVariable::RelCorrection => "rel-correction",
            TrendVariable::DelayX => "delay-x",
            TrendVariable::DelayM => "delay-m",
            TrendVariable::DelayC => "delay-c",
            TrendVariable::PeriodGap => "period-gap",
        }
    }
}

impl fmt::Display for TrendVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TrendVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TrendVariable::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown variable '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSample {
    pub variable: TrendVariable,
    pub value: f64,
    pub direction: Direction,
    pub scaling: f64,
    pub symbol: String,
    /// Shared by samples measured on the same movement or correction, so
    /// (X, D_X), (X, Y), (M, D_M) and (C, D_C) can be re-paired.
    pub pair: u64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SampleSet {
    pub samples: Vec<TrendSample>,
    /// Movements with zero or negative size; none of their samples exist.
    pub degenerate_movements: usize,
    /// Individual values that came out `<= 0` (for example a zero delay).
    pub nonpositive_values: usize,
}

impl SampleSet {
    pub fn values(&self, variable: TrendVariable, direction: Option<Direction>) -> Vec<f64> {
        self.samples
            .iter()
            .filter(|s| s.variable == variable && direction.is_none_or(|d| d == s.direction))
            .map(|s| s.value)
            .collect()
    }

    /// Values of two variables measured on the same event, in event order.
    pub fn pairs(
        &self,
        first: TrendVariable,
        second: TrendVariable,
        direction: Option<Direction>,
    ) -> Vec<(f64, f64)> {
        let keep = |s: &&TrendSample| direction.is_none_or(|d| d == s.direction);
        let seconds: std::collections::HashMap<(&str, u64), f64> = self
            .samples
            .iter()
            .filter(keep)
            .filter(|s| s.variable == second)
            .map(|s| ((s.symbol.as_str(), s.pair), s.value))
            .collect();
        self.samples
            .iter()
            .filter(keep)
            .filter(|s| s.variable == first)
            .filter_map(|s| {
                seconds
                    .get(&(s.symbol.as_str(), s.pair))
                    .map(|&d| (s.value, d))
            })
            .collect()
    }

    pub fn extend(&mut self, other: SampleSet) {
        self.samples.extend(other.samples);
        self.degenerate_movements += other.degenerate_movements;
        self.nonpositive_values += other.nonpositive_values;
    }
}

struct Emitter<'a> {
    set: SampleSet,
    symbol: &'a str,
    scaling: f64,
    next_pair: u64,
}

impl Emitter<'_> {
    fn push(&mut self, variable: TrendVariable, value: f64, direction: Direction, pair: u64) {
        if value > 0.0 {
            self.set.samples.push(TrendSample {
                variable,
                value,
                direction,
                scaling: self.scaling,
                symbol: self.symbol.to_string(),
                pair,
            });
        } else {
            self.set.nonpositive_values += 1;
        }
    }

    fn pair(&mut self) -> u64 {
        let id = self.next_pair;
        self.next_pair += 1;
        id
    }
}

/// Signed move from `from` to `to` measured along `dir`.
fn along(dir: Direction, from: &ExtremumPoint, to: &ExtremumPoint) -> f64 {
    match dir {
        Direction::Up => to.price - from.price,
        Direction::Down => from.price - to.price,
    }
}

/// Measures every movement and correction whose points all lie inside a
/// phase. `symbol` and `scaling` label the samples.
pub fn extract_samples(
    mm: &MinMaxProcess,
    phases: &[TrendPhase],
    symbol: &str,
    scaling: f64,
) -> Result<SampleSet> {
    mm.validate()?;
    let p = &mm.points;
    let mut out = Emitter {
        set: SampleSet::default(),
        symbol,
        scaling,
        next_pair: 0,
    };
    use TrendVariable::*;

    for ph in phases {
        if ph.end_point_index >= p.len() || ph.start_point_index > ph.end_point_index {
            return Err(Error::InvalidParameter(format!(
                "phase {}..{} outside {} points",
                ph.start_point_index,
                ph.end_point_index,
                p.len()
            )));
        }
        let dir = ph.direction;
        for j in ph.start_point_index..=ph.end_point_index {
            if j >= ph.start_point_index + 2 {
                let gap = p[j].bar - p[j - 2].bar;
                let id = out.pair();
                out.push(PeriodGap, gap as f64, dir, id);
            }
            if p[j].kind != dir.movement_end() || j == ph.start_point_index {
                continue;
            }
            let (last, top) = (&p[j - 1], &p[j]);
            let movement = along(dir, last, top);
            if !(movement > 0.0) {
                out.set.degenerate_movements += 1;
                continue;
            }
            let id = out.pair();
            out.push(RelMovement, movement / last.price, dir, id);
            out.push(DelayM, top.d_abs / last.price, dir, id);

            if j + 1 > ph.end_point_index {
                continue;
            }
            let new = &p[j + 1];
            let correction = along(dir, new, top);
            let id = out.pair();
            out.push(Retracement, correction / movement, dir, id);
            out.push(Duration, (new.bar - top.bar) as f64, dir, id);
            out.push(DelayX, new.d_abs / movement, dir, id);
            out.push(RelCorrection, correction / top.price, dir, id);
            out.push(DelayC, new.d_abs / top.price, dir, id);
        }
    }
    Ok(out.set)
}

/// Mean bar distance between consecutive same-kind extrema inside trends.
pub fn mean_period(mm: &MinMaxProcess, phases: &[TrendPhase]) -> Result<f64> {
    let p = &mm.points;
    let mut sum = 0.0;
    let mut count = 0usize;
    for ph in phases {
        let end = ph.end_point_index.min(p.len().saturating_sub(1));
        for j in ph.start_point_index + 2..=end {
            sum += (p[j].bar - p[j - 2].bar) as f64;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InsufficientData {
            required: 1,
            available: 0,
        });
    }
    Ok(sum / count as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub residual_rms: f64,
}

/// Ordinary least squares `T = intercept + slope * s`.
pub fn period_scaling_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            available: points.len(),
        });
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("scalings"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(LinearFit {
        intercept,
        slope,
        residual_rms: (sse / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    /// Points with detection one bar after the extreme and the given d_abs.
    pub(crate) fn process(spec: &[(ExtremumKind, f64, usize, f64)]) -> MinMaxProcess {
        MinMaxProcess {
            points: spec
                .iter()
                .map(|&(kind, price, bar, d_abs)| ExtremumPoint {
                    kind,
                    price,
                    bar,
                    detection_bar: bar + 1,
                    detection_close: match kind {
                        ExtremumKind::High => price - d_abs,
                        ExtremumKind::Low => price + d_abs,
                    },
                    d_abs,
                    search_start: bar,
                })
                .collect(),
            open_candidate: None,
        }
    }

    use ExtremumKind::{High as H, Low as L};

    #[test]
    fn up_trend_established_and_ended() {
        let mm = process(&[
            (L, 100.0, 0, 1.0),
            (H, 110.0, 5, 1.0),
            (L, 105.0, 10, 1.0),
            (H, 115.0, 15, 1.0),
        ]);
        let ph = detect_trends(&mm).unwrap();
        assert_eq!(ph.len(), 1);
        assert_eq!(ph[0].direction, Direction::Up);
        assert_eq!(ph[0].established_point_index, 3);
        assert_eq!(ph[0].start_detection_bar, 16);
        assert!(!ph[0].ended);

        let mut lower = mm.clone();
        lower.points.extend(process(&[(L, 103.0, 20, 1.0)]).points);
        let ph = detect_trends(&lower).unwrap();
        assert_eq!(
            (ph[0].end_point_index, ph[0].end_detection_bar, ph[0].ended),
            (4, 21, true)
        );

        let mut equal = mm.clone();
        equal.points.extend(process(&[(L, 105.0, 20, 1.0)]).points);
        let ph = detect_trends(&equal).unwrap();
        assert_eq!((ph[0].end_point_index, ph[0].ended), (4, true));
    }

    #[test]
    fn down_trend_is_mirrored() {
        let mm = process(&[
            (H, 120.0, 0, 1.0),
            (L, 110.0, 4, 1.0),
            (H, 115.0, 8, 1.0),
            (L, 100.0, 12, 1.0),
            (H, 116.0, 16, 1.0),
        ]);
        let ph = detect_trends(&mm).unwrap();
        assert_eq!(ph.len(), 1);
        assert_eq!(ph[0].direction, Direction::Down);
        assert_eq!(
            (
                ph[0].start_point_index,
                ph[0].established_point_index,
                ph[0].end_point_index
            ),
            (0, 3, 4)
        );
    }

    #[test]
    fn non_alternating_input_is_rejected() {
        let mm = process(&[(L, 100.0, 0, 1.0), (L, 99.0, 3, 1.0)]);
        assert!(matches!(detect_trends(&mm), Err(Error::NotAlternating(1))));
    }

    #[test]
    fn up_trend_sample_arithmetic() {
        // P3 = 100, P2 = 110 (d_abs 1.5), P3new = 105 (d_abs 2)
        let mm = process(&[
            (L, 100.0, 0, 1.0),
            (H, 110.0, 20, 1.5),
            (L, 105.0, 28, 2.0),
            (H, 115.0, 40, 1.0),
        ]);
        let ph = detect_trends(&mm).unwrap();
        let set = extract_samples(&mm, &ph, "T", 1.0).unwrap();
        let one = |v| set.values(v, None);
        assert_eq!(one(TrendVariable::Retracement), vec![0.5]);
        assert_eq!(one(TrendVariable::DelayX), vec![0.2]);
        assert_eq!(one(TrendVariable::Duration), vec![8.0]);
        assert_eq!(one(TrendVariable::RelCorrection), vec![5.0 / 110.0]);
        assert_eq!(one(TrendVariable::DelayC), vec![2.0 / 110.0]);
        assert_eq!(one(TrendVariable::RelMovement), vec![0.1, 10.0 / 105.0]);
        assert_eq!(one(TrendVariable::DelayM), vec![1.5 / 100.0, 1.0 / 105.0]);
        assert_eq!(one(TrendVariable::PeriodGap), vec![28.0, 20.0]);
        assert_eq!(
            set.pairs(
                TrendVariable::Retracement,
                TrendVariable::DelayX,
                Some(Direction::Up)
            ),
            vec![(0.5, 0.2)]
        );
        assert!(set
            .pairs(
                TrendVariable::Retracement,
                TrendVariable::DelayX,
                Some(Direction::Down)
            )
            .is_empty());
    }

    #[test]
    fn down_trend_sample_arithmetic() {
        // P3 = 120 (high), P2 = 100 (low, d_abs 3), P3new = 108 (high, d_abs 4)
        let mm = process(&[
            (H, 130.0, 0, 1.0),
            (L, 110.0, 5, 1.0),
            (H, 120.0, 10, 1.0),
            (L, 100.0, 15, 3.0),
            (H, 108.0, 22, 4.0),
        ]);
        let ph = detect_trends(&mm).unwrap();
        assert_eq!(ph[0].direction, Direction::Down);
        let set = extract_samples(&mm, &ph, "T", 1.0).unwrap();
        let x = set.values(TrendVariable::Retracement, Some(Direction::Down));
        // corrections 110 -> 120 after 130 -> 110, and 100 -> 108 after 120 -> 100
        assert_eq!(x, vec![0.5, 0.4]);
        assert_eq!(
            set.values(TrendVariable::RelMovement, None),
            vec![20.0 / 130.0, 20.0 / 120.0]
        );
        assert_eq!(
            set.values(TrendVariable::DelayM, None),
            vec![1.0 / 130.0, 3.0 / 120.0]
        );
        assert_eq!(
            set.values(TrendVariable::RelCorrection, None)[1],
            8.0 / 100.0
        );
        assert_eq!(set.values(TrendVariable::DelayC, None)[1], 4.0 / 100.0);
        assert_eq!(set.values(TrendVariable::DelayX, None)[1], 4.0 / 20.0);
        assert_eq!(set.values(TrendVariable::Duration, None), vec![5.0, 7.0]);
    }

    #[test]
    fn violating_correction_still_counts_and_zero_delay_is_tallied() {
        let mm = process(&[
            (L, 100.0, 0, 1.0),
            (H, 110.0, 5, 1.0),
            (L, 105.0, 10, 1.0),
            (H, 120.0, 15, 1.0),
            (L, 90.0, 20, 0.0),
        ]);
        let ph = detect_trends(&mm).unwrap();
        assert!(ph[0].ended);
        let set = extract_samples(&mm, &ph, "T", 1.0).unwrap();
        assert_eq!(set.values(TrendVariable::Retracement, None), vec![0.5, 2.0]);
        // D_X and D_C of the last correction are zero
        assert_eq!(set.nonpositive_values, 2);
        assert_eq!(set.values(TrendVariable::DelayX, None).len(), 1);
    }

    #[test]
    fn samples_per_phase_match_corrections() {
        let mut spec = vec![(L, 100.0, 0, 1.0)];
        for k in 0..6 {
            let base = 100.0 + 10.0 * k as f64;
            spec.push((H, base + 20.0, 10 * k + 5, 1.0));
            spec.push((L, base + 10.0, 10 * k + 10, 1.0));
        }
        let mm = process(&spec);
        let ph = detect_trends(&mm).unwrap();
        assert_eq!(ph.len(), 1);
        let set = extract_samples(&mm, &ph, "T", 1.0).unwrap();
        assert_eq!(set.values(TrendVariable::Retracement, None).len(), 6);
        assert!(set
            .values(TrendVariable::Retracement, None)
            .iter()
            .all(|&x| x < 1.0));
    }

    #[test]
    fn mean_period_cases() {
        let mm = process(&[
            (L, 100.0, 0, 1.0),
            (H, 110.0, 5, 1.0),
            (L, 105.0, 10, 1.0),
            (H, 115.0, 15, 1.0),
        ]);
        let ph = detect_trends(&mm).unwrap();
        assert_eq!(mean_period(&mm, &ph).unwrap(), 10.0);

        let mm2 = process(&[
            (L, 100.0, 0, 1.0),
            (H, 110.0, 5, 1.0),
            (L, 105.0, 8, 1.0),
            (H, 115.0, 17, 1.0),
        ]);
        assert_eq!(
            mean_period(&mm2, &detect_trends(&mm2).unwrap()).unwrap(),
            10.0
        );

        let short = process(&[(L, 100.0, 0, 1.0), (H, 110.0, 5, 1.0)]);
        let single = TrendPhase {
            direction: Direction::Up,
            start_point_index: 0,
            established_point_index: 1,
            end_point_index: 1,
            start_detection_bar: 6,
            end_detection_bar: 6,
            ended: false,
        };
        assert!(matches!(
            mean_period(&short, &[single]),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn ols_cases() {
        let f = period_scaling_fit(&[(1.0, 10.0), (2.0, 20.0)]).unwrap();
        assert_eq!((f.intercept, f.slope), (0.0, 10.0));
        let pts: Vec<(f64, f64)> = (0..10)
            .map(|i| (0.5 * i as f64, 3.0 + 4.0 * 0.5 * i as f64))
            .collect();
        let f = period_scaling_fit(&pts).unwrap();
        assert!((f.intercept - 3.0).abs() < 1e-12 && (f.slope - 4.0).abs() < 1e-12);
        assert!(f.residual_rms < 1e-12);
        assert!(period_scaling_fit(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(period_scaling_fit(&[(1.0, 1.0)]).is_err());
    }

    #[test]
    fn ols_noisy_slope() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let noise = Normal::new(0.0, 0.5).unwrap();
        let pts: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let s = 0.5 + 0.1 * i as f64;
                (s, 2.0 + 7.0 * s + noise.sample(&mut rng))
            })
            .collect();
        let f = period_scaling_fit(&pts).unwrap();
        assert!((f.slope - 7.0).abs() < 0.2, "slope {}", f.slope);
    }

    #[test]
    fn variable_names_round_trip() {
        for v in TrendVariable::ALL {
            assert_eq!(v.as_str().parse::<TrendVariable>().unwrap(), v);
        }
        assert!("nope".parse::<TrendVariable>().is_err());
    }
}
