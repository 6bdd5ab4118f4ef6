use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::lognormal::{check_truncation, mean_and_mle_sd, LogNormalParams, TAIL_FLOOR};
use super::normal::normal_cdf;
use crate::error::{Error, Result};

/// Joint log-normal law of a pair `(X, D)`: `(ln X, ln D)` is bivariate
/// normal with correlation `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BivariateLogNormalParams {
    pub mu_x: f64,
    pub mu_d: f64,
    pub sigma_x: f64,
    pub sigma_d: f64,
    pub rho: f64,
}

impl BivariateLogNormalParams {
    pub fn new(mu_x: f64, mu_d: f64, sigma_x: f64, sigma_d: f64, rho: f64) -> Result<Self> {
        let ok = mu_x.is_finite()
            && mu_d.is_finite()
            && sigma_x > 0.0
            && sigma_x.is_finite()
            && sigma_d > 0.0
            && sigma_d.is_finite()
            && rho > -1.0
            && rho < 1.0;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "need sigmas > 0 and |rho| < 1, got sigma_x={sigma_x} sigma_d={sigma_d} rho={rho}"
            )));
        }
        Ok(BivariateLogNormalParams {
            mu_x,
            mu_d,
            sigma_x,
            sigma_d,
            rho,
        })
    }

    /// MLE fit of both marginals plus the log-correlation.
    pub fn fit(pairs: &[(f64, f64)]) -> Result<Self> {
        let (xs, ds): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
        let px = super::lognormal::lognormal_mle(&xs)?;
        let pd = super::lognormal::lognormal_mle(&ds)?;
        let rho = log_correlation(pairs)?;
        // |rho| = 1 only for exactly collinear logs
        let rho = rho.clamp(-1.0 + 1e-12, 1.0 - 1e-12);
        BivariateLogNormalParams::new(px.mu, pd.mu, px.sigma, pd.sigma, rho)
    }

    pub fn marginal_x(&self) -> LogNormalParams {
        LogNormalParams {
            mu: self.mu_x,
            sigma: self.sigma_x,
        }
    }

    pub fn marginal_d(&self) -> LogNormalParams {
        LogNormalParams {
            mu: self.mu_d,
            sigma: self.sigma_d,
        }
    }
}

/// Correlation of `(ln x, ln d)` with 1/n moments throughout.
pub fn log_correlation(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            available: pairs.len(),
        });
    }
    let mut lx = Vec::with_capacity(pairs.len());
    let mut ld = Vec::with_capacity(pairs.len());
    for (index, &(x, d)) in pairs.iter().enumerate() {
        for value in [x, d] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveSample { index, value });
            }
        }
        lx.push(x.ln());
        ld.push(d.ln());
    }
    let (mx, sx) = mean_and_mle_sd(&lx);
    let (md, sd) = mean_and_mle_sd(&ld);
    if sx == 0.0 {
        return Err(Error::ZeroVariance("ln x"));
    }
    if sd == 0.0 {
        return Err(Error::ZeroVariance("ln d"));
    }
    let n = pairs.len() as f64;
    let cov = lx
        .iter()
        .zip(&ld)
        .map(|(a, b)| (a - mx) * (b - md))
        .sum::<f64>()
        / n;
    Ok((cov / (sx * sd)).clamp(-1.0, 1.0))
}

/// Joint density of `(X, D)`; zero outside the positive quadrant.
pub fn bivariate_lognormal_density(x: f64, d: f64, p: BivariateLogNormalParams) -> f64 {
    if x <= 0.0 || d <= 0.0 {
        return 0.0;
    }
    let one_m_r2 = 1.0 - p.rho * p.rho;
    let u = (x.ln() - p.mu_x) / p.sigma_x;
    let v = (d.ln() - p.mu_d) / p.sigma_d;
    let q = (u * u + v * v - 2.0 * p.rho * u * v) / one_m_r2;
    (-0.5 * q).exp() / (2.0 * PI * x * d * p.sigma_x * p.sigma_d * one_m_r2.sqrt())
}

/// `E(D | X >= a) = e^(mu_d + sigma_d^2/2) Φ((mu_x + rho sigma_x sigma_d - ln a)/sigma_x) / Φ((mu_x - ln a)/sigma_x)`.
///
/// Conditioning on `ln X >= ln a` tilts `ln X` by `rho sigma_x sigma_d` under
/// the measure weighted by `D`; the ratio is the tilted over the plain tail.
pub fn conditional_cross_mean(p: BivariateLogNormalParams, a: f64) -> Result<f64> {
    check_truncation(p.sigma_x, a)?;
    let la = a.ln();
    let survival = normal_cdf((p.mu_x - la) / p.sigma_x);
    if survival < TAIL_FLOOR {
        return Err(Error::TailTooDeep(survival));
    }
    let tilted = normal_cdf((p.mu_x + p.rho * p.sigma_x * p.sigma_d - la) / p.sigma_x);
    Ok(p.marginal_d().mean() * tilted / survival)
}
