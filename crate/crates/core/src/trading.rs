//! Anti-cyclic trading on trend corrections.
//!
//! The position is opened against the trend once a correction reaches
//! retracement level `a` (in units of the preceding movement) and is closed
//! either at target level `t` or, if the correction ends first, at the close
//! of the bar on which its end is detected. With realized retracement `x` and
//! relative delay `d` the return in movement units is
//!
//! ```text
//! R(x, d) = x - a - d   if a <= x < t
//!         = t - a       if x >= t
//! ```
//!
//! and for log-normal `(X, D)` the conditional expectation is
//!
//! ```text
//! E(R | X >= a) = E(X | X >= a) - a - E(D | X >= a)
//!               + P(X >= t)/P(X >= a) [t + E(D | X >= t) - E(X | X >= t)]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicators::{macd_sar, ScalingConfig};
use crate::market_data::CandleSeries;
use crate::minmax::run_minmax;
use crate::stats::{
    conditional_cross_mean, truncated_lognormal_mean, BivariateLogNormalParams, TAIL_FLOOR,
};
use crate::trend::{detect_trends, Direction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeSpec {
    pub entry: f64,
    /// May be `f64::INFINITY` for a trade without target.
    pub target: f64,
}

impl TradeSpec {
    pub fn new(entry: f64, target: f64) -> Result<Self> {
        if !(entry > 0.0 && entry.is_finite() && target > entry) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < entry < target, got entry={entry} target={target}"
            )));
        }
        Ok(TradeSpec { entry, target })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeOutcome {
    /// Return in units of the movement preceding the correction.
    pub ret: f64,
    pub reached_target: bool,
    pub x: f64,
    pub d: f64,
}

/// `None` when `x < a`: the entry level was never touched, so no trade.
pub fn trade_return(x: f64, d: f64, spec: TradeSpec) -> Option<TradeOutcome> {
    if x < spec.entry {
        return None;
    }
    let (ret, reached_target) = if x >= spec.target {
        (spec.target - spec.entry, true)
    } else {
        (x - spec.entry - d, false)
    };
    Some(TradeOutcome {
        ret,
        reached_target,
        x,
        d,
    })
}

/// Closed-form `E(R | X >= a)` under the bivariate log-normal model.
pub fn expected_return(params: BivariateLogNormalParams, spec: TradeSpec) -> Result<f64> {
    let (a, t) = (spec.entry, spec.target);
    let px = params.marginal_x();
    let base = truncated_lognormal_mean(px, a)? - a - conditional_cross_mean(params, a)?;
    if t.is_infinite() {
        return Ok(base);
    }
    let survive_a = px.survival(a);
    let survive_t = px.survival(t);
    if survive_t < TAIL_FLOOR {
        // the target branch carries no probability mass
        return Ok(base);
    }
    let bracket = t + conditional_cross_mean(params, t)? - truncated_lognormal_mean(px, t)?;
    Ok(base + survive_t / survive_a * bracket)
}

/// Monte Carlo estimate of `E(R | X >= a)`: mean and standard error over the
/// draws with `X >= a`.
pub fn simulate_expected_return(
    params: BivariateLogNormalParams,
    spec: TradeSpec,
    n: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n < 10_000 {
        return Err(Error::InvalidParameter(format!(
            "need at least 10000 draws, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cross = (1.0 - params.rho * params.rho).sqrt();
    let mut count = 0usize;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for _ in 0..n {
        let z1: f64 = StandardNormal.sample(&mut rng);
        let z2: f64 = StandardNormal.sample(&mut rng);
        let x = (params.mu_x + params.sigma_x * z1).exp();
        let d = (params.mu_d + params.sigma_d * (params.rho * z1 + cross * z2)).exp();
        if let Some(o) = trade_return(x, d, spec) {
            count += 1;
            let delta = o.ret - mean;
            mean += delta / count as f64;
            m2 += delta * (o.ret - mean);
        }
    }
    if count < 100 {
        return Err(Error::TooFewAccepted { accepted: count });
    }
    let var = m2 / (count - 1) as f64;
    Ok((mean, (var / count as f64).sqrt()))
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Backtest {
    pub outcomes: Vec<TradeOutcome>,
    /// Entered trades whose correction had not ended when the data ran out.
    pub truncated: usize,
    /// Corrections that never reached the entry level.
    pub not_entered: usize,
}

impl Backtest {
    pub fn mean_return(&self) -> Option<f64> {
        (!self.outcomes.is_empty())
            .then(|| self.outcomes.iter().map(|o| o.ret).sum::<f64>() / self.outcomes.len() as f64)
    }
}

/// Replays the anti-cyclic system on candles.
///
/// For every correction that starts at or after a trend's establishing
/// point, an order rests at `P2 ∓ a * movement` from the bar after `P2`. It
/// fills at that price on the first bar whose range reaches it (no
/// slippage); the same bar may then also fill the target. Without a target
/// fill the position is closed at the close of the bar on which the
/// correction's end is detected. Up-trends are always traded; down-trends
/// only with `include_down`.
pub fn backtest_anticyclic(
    series: &CandleSeries,
    scaling: f64,
    spec: TradeSpec,
    include_down: bool,
) -> Result<Backtest> {
    let cfg = ScalingConfig::new(scaling)?;
    let sar = macd_sar(series, cfg)?;
    let mm = run_minmax(series, &sar)?;
    let phases = detect_trends(&mm)?;
    let candles = series.candles();
    let p = &mm.points;
    let mut bt = Backtest::default();

    for ph in &phases {
        if ph.direction == Direction::Down && !include_down {
            continue;
        }
        // +1 for a short against an up-trend, -1 for a long against a down-trend
        let side = match ph.direction {
            Direction::Up => 1.0,
            Direction::Down => -1.0,
        };
        for j in ph.established_point_index..=ph.end_point_index {
            if p[j].kind != ph.direction.movement_end() || j == ph.start_point_index {
                continue;
            }
            let (last, top) = (p[j - 1], p[j]);
            let movement = side * (top.price - last.price);
            if !(movement > 0.0) {
                continue;
            }
            let entry = top.price - side * spec.entry * movement;
            let target = top.price - side * spec.target * movement;
            let reaches = |level: f64, c: &crate::market_data::Candle| {
                if side > 0.0 {
                    c.low <= level
                } else {
                    c.high >= level
                }
            };

            let end = if j < ph.end_point_index {
                Some(p[j + 1])
            } else if j + 1 == p.len() && !ph.ended {
                None
            } else {
                continue;
            };
            let last_bar = end.map_or(candles.len() - 1, |e| e.detection_bar);

            let Some(entry_bar) = (top.bar + 1..=last_bar).find(|&b| reaches(entry, &candles[b]))
            else {
                if end.is_some() {
                    bt.not_entered += 1;
                }
                continue;
            };
            let hit_target = (entry_bar..=last_bar).any(|b| reaches(target, &candles[b]));

            let Some(new) = end else {
                bt.truncated += 1;
                continue;
            };
            let x = side * (top.price - new.price) / movement;
            let d = new.d_abs / movement;
            let outcome = if hit_target {
                TradeOutcome {
                    ret: spec.target - spec.entry,
                    reached_target: true,
                    x,
                    d,
                }
            } else {
                let exit = candles[new.detection_bar].close;
                TradeOutcome {
                    ret: side * (entry - exit) / movement,
                    reached_target: false,
                    x,
                    d,
                }
            };
            bt.outcomes.push(outcome);
        }
    }
    Ok(bt)
}
