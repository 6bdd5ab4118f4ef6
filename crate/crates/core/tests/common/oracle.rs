//! Reference computations that share no code path with the library.

/// EMA at every index as an explicit weighted sum of the inputs:
/// `e_t = (1-α)^t v_0 + Σ_{k=1..t} α (1-α)^(t-k) v_k`.
#[allow(clippy::needless_range_loop)] // the weighted sum is written out on purpose
pub fn ema_direct(v: &[f64], period: f64) -> Vec<f64> {
    let alpha = 2.0 / (period + 1.0);
    let keep = 1.0 - alpha;
    (0..v.len())
        .map(|t| {
            let mut acc = keep.powi(t as i32) * v[0];
            for k in 1..=t {
                acc += alpha * keep.powi((t - k) as i32) * v[k];
            }
            acc
        })
        .collect()
}

/// +1 / -1 per bar from the direct EMAs, `None` during the warm-up.
pub fn sar_direct(closes: &[f64], scaling: f64) -> Vec<Option<i8>> {
    let fast = ema_direct(closes, 12.0 * scaling);
    let slow = ema_direct(closes, 26.0 * scaling);
    let line: Vec<f64> = fast.iter().zip(&slow).map(|(f, s)| f - s).collect();
    let signal = ema_direct(&line, 9.0 * scaling);
    let warm = (26.0 * scaling).ceil() as usize;
    let mut prev = -1i8;
    line.iter()
        .zip(&signal)
        .enumerate()
        .map(|(t, (l, s))| {
            if t < warm {
                return None;
            }
            let diff = l - s;
            // the two EMA routes round differently; treat near-ties as ties
            let v = if diff > 1e-9 {
                1
            } else if diff < -1e-9 {
                -1
            } else {
                prev
            };
            prev = v;
            Some(v)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePoint {
    pub is_high: bool,
    pub price: f64,
    pub bar: usize,
    pub detection_bar: usize,
    pub detection_close: f64,
}

/// Extrema between SAR flips for close-only charts without exception
/// events: every flip fixes the extreme close since the previous point.
pub fn extrema_between_flips(closes: &[f64], sar: &[Option<i8>]) -> Vec<OraclePoint> {
    let first = sar.iter().position(Option::is_some).unwrap();
    let flips: Vec<usize> = (first + 1..sar.len())
        .filter(|&t| sar[t] != sar[t - 1])
        .collect();
    let mut out = Vec::new();
    let mut from = first;
    let mut is_high = sar[first] == Some(1);
    for t in flips {
        let window = from..=t;
        let bar = if is_high {
            window
                .max_by(|&a, &b| closes[a].total_cmp(&closes[b]).then(b.cmp(&a)))
                .unwrap()
        } else {
            window
                .min_by(|&a, &b| closes[a].total_cmp(&closes[b]).then(a.cmp(&b)))
                .unwrap()
        };
        out.push(OraclePoint {
            is_high,
            price: closes[bar],
            bar,
            detection_bar: t,
            detection_close: closes[t],
        });
        from = bar + 1;
        is_high = !is_high;
    }
    out
}
