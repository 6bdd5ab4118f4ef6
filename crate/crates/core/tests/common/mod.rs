#![allow(dead_code)]

pub mod oracle;

use trendstat::{Candle, CandleSeries, Timestamp};

/// Piecewise linear closes: a flat run of `flat` bars at `start`, then one
/// straight leg per `(target, bars)` pair.
pub fn zigzag(start: f64, flat: usize, legs: &[(f64, usize)]) -> Vec<f64> {
    let mut closes = vec![start; flat];
    let mut from = start;
    for &(to, bars) in legs {
        let step = (to - from) / bars as f64;
        for k in 1..=bars {
            closes.push(from + step * k as f64);
        }
        from = to;
    }
    closes
}

/// Candles with open = high = low = close.
pub fn flat_candles(symbol: &str, closes: &[f64]) -> CandleSeries {
    let candles = closes
        .iter()
        .enumerate()
        .map(|(i, &c)| Candle::new(Timestamp::Index(i as i64), c, c, c, c).unwrap())
        .collect();
    CandleSeries::new(symbol, candles).unwrap()
}

/// Up-trend fixture, 176 bars of integer prices.
///
/// Turning points: 100 (flat to bar 29), 120 @49, 110 @59, 135 @84,
/// 122 @97, 150 @125, 130 @145, 160 @175 (last bar).
pub fn up_fixture() -> CandleSeries {
    flat_candles(
        "UP",
        &zigzag(
            100.0,
            30,
            &[
                (120.0, 20),
                (110.0, 10),
                (135.0, 25),
                (122.0, 13),
                (150.0, 28),
                (130.0, 20),
                (160.0, 30),
            ],
        ),
    )
}

/// Down-trend that breaks into an up-trend, 200 bars.
///
/// Turning points: 200 (flat to bar 29), 180 @49, 190 @59, 170 @79,
/// 185 @94, 160 @119, 195 @154, 175 @174, 200 @199 (last bar).
pub fn down_up_fixture() -> CandleSeries {
    flat_candles(
        "DOWNUP",
        &zigzag(
            200.0,
            30,
            &[
                (180.0, 20),
                (190.0, 10),
                (170.0, 20),
                (185.0, 15),
                (160.0, 25),
                (195.0, 35),
                (175.0, 20),
                (200.0, 25),
            ],
        ),
    )
}

/// The minmax fixture: flat 100 for 30 bars, rise to 120 over 20 bars, fall
/// to 104 over 20 bars, rise to 130 over 30 bars.
pub fn minmax_fixture() -> CandleSeries {
    flat_candles(
        "MM",
        &zigzag(100.0, 30, &[(120.0, 20), (104.0, 20), (130.0, 30)]),
    )
}

/// Up-trend whose traded corrections cover the three backtest branches at
/// entry 0.3 / target 1.0: 160 -> 150 never reaches the entry (X = 0.25),
/// 200 -> 175 exits on detection (X = 0.5, the rebound puts the detection
/// close at 180, d = 0.1), 225 -> 165 runs through the target (X = 1.2).
pub fn backtest_fixture() -> CandleSeries {
    flat_candles(
        "BT",
        &zigzag(
            100.0,
            30,
            &[
                (130.0, 30),
                (120.0, 10),
                (160.0, 40),
                (150.0, 10),
                (200.0, 40),
                (175.0, 25),
                (225.0, 60),
                (165.0, 30),
                (200.0, 30),
            ],
        ),
    )
}
