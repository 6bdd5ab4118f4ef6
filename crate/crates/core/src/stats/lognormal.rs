use serde::{Deserialize, Serialize};

use super::normal::{normal_cdf, normal_sf};
use crate::error::{Error, Result};

/// Survival probabilities below this are treated as underflow.
pub const TAIL_FLOOR: f64 = 1e-300;

/// Log-normal law of `X` with `ln X ~ N(mu, sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormalParams {
    pub mu: f64,
    pub sigma: f64,
}

impl LogNormalParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "log-normal needs finite mu and sigma >= 0, got ({mu}, {sigma})"
            )));
        }
        Ok(LogNormalParams { mu, sigma })
    }

    pub fn median(&self) -> f64 {
        self.mu.exp()
    }

    pub fn mean(&self) -> f64 {
        (self.mu + 0.5 * self.sigma * self.sigma).exp()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 || self.sigma == 0.0 {
            return 0.0;
        }
        let z = (x.ln() - self.mu) / self.sigma;
        (-0.5 * z * z).exp() / (x * self.sigma * (2.0 * std::f64::consts::PI).sqrt())
    }

    /// `P(X >= a)`.
    pub fn survival(&self, a: f64) -> f64 {
        if a <= 0.0 {
            return 1.0;
        }
        if self.sigma == 0.0 {
            return if a <= self.median() { 1.0 } else { 0.0 };
        }
        normal_sf((a.ln() - self.mu) / self.sigma)
    }
}

fn positive_logs(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    samples
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            if value > 0.0 && value.is_finite() {
                Ok(value.ln())
            } else {
                Err(Error::NonPositiveSample { index, value })
            }
        })
        .collect()
}

/// Mean and 1/n standard deviation.
pub(crate) fn mean_and_mle_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Maximum likelihood estimates: `mu = mean(ln x)`, `sigma^2 = mean((ln x - mu)^2)`.
pub fn lognormal_mle(samples: &[f64]) -> Result<LogNormalParams> {
    let logs = positive_logs(samples)?;
    let (mu, sigma) = mean_and_mle_sd(&logs);
    Ok(LogNormalParams { mu, sigma })
}

/// `(median, mean) = (e^mu, e^(mu + sigma^2 / 2))`.
pub fn lognormal_moments(params: LogNormalParams) -> (f64, f64) {
    (params.median(), params.mean())
}

/// `P(X <= x)`. With `sigma = 0` this is the step at `e^mu` (1 at and above).
pub fn lognormal_cdf(x: f64, params: LogNormalParams) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if params.sigma == 0.0 {
        return if x >= params.median() { 1.0 } else { 0.0 };
    }
    normal_cdf((x.ln() - params.mu) / params.sigma)
}

pub(crate) fn check_truncation(sigma: f64, a: f64) -> Result<()> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(
            "truncated moments need sigma > 0".into(),
        ));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "truncation point must be > 0, got {a}"
        )));
    }
    Ok(())
}

/// `E(X | X >= a) = e^(mu + sigma^2/2) Φ((mu + sigma^2 - ln a)/sigma) / Φ((mu - ln a)/sigma)`.
pub fn truncated_lognormal_mean(params: LogNormalParams, a: f64) -> Result<f64> {
    check_truncation(params.sigma, a)?;
    let LogNormalParams { mu, sigma } = params;
    let la = a.ln();
    let survival = normal_cdf((mu - la) / sigma);
    if survival < TAIL_FLOOR {
        return Err(Error::TailTooDeep(survival));
    }
    Ok(params.mean() * normal_cdf((mu + sigma * sigma - la) / sigma) / survival)
}
