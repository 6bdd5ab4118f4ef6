//! Log-normal modelling of trend variables.

mod anderson_darling;
mod bivariate;
mod histogram;
mod lognormal;
mod normal;

pub use anderson_darling::{ad_p_value, anderson_darling_lognormal, AdResult, MIN_SAMPLES};
pub use bivariate::{
    bivariate_lognormal_density, conditional_cross_mean, log_correlation, BivariateLogNormalParams,
};
pub use histogram::{histogram, Histogram, HistogramSpec};
pub use lognormal::{
    lognormal_cdf, lognormal_mle, lognormal_moments, truncated_lognormal_mean, LogNormalParams,
    TAIL_FLOOR,
};
pub use normal::{normal_cdf, normal_pdf, normal_sf};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One fitted cell: a variable in one direction, scaling and market.
///
/// `mu`/`sigma` are the 1/n maximum likelihood estimates; the AD test
/// inside uses the n-1 variance. `p_value` is absent (and `note` says why)
/// when fewer than eight samples exist or the logs have no spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub variable: String,
    pub direction: String,
    pub scaling: f64,
    pub market: String,
    pub n: usize,
    pub mu: f64,
    pub sigma: f64,
    pub median: f64,
    pub mean: f64,
    pub ad_stat: Option<f64>,
    pub p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_with: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl FitReport {
    pub fn fit(
        samples: &[f64],
        variable: &str,
        direction: &str,
        scaling: f64,
        market: &str,
    ) -> Result<FitReport> {
        let params = lognormal_mle(samples)?;
        let (median, mean) = lognormal_moments(params);
        let (ad_stat, p_value, note) = match anderson_darling_lognormal(samples) {
            Ok(ad) => (
                Some(ad.modified),
                Some(ad.p_value),
                ad.clamped.then(|| "extreme z values clamped".to_string()),
            ),
            Err(e) => (None, None, Some(e.to_string())),
        };
        Ok(FitReport {
            variable: variable.to_string(),
            direction: direction.to_string(),
            scaling,
            market: market.to_string(),
            n: samples.len(),
            mu: params.mu,
            sigma: params.sigma,
            median,
            mean,
            ad_stat,
            p_value,
            rho: None,
            rho_with: None,
            note,
        })
    }

    pub fn params(&self) -> LogNormalParams {
        LogNormalParams {
            mu: self.mu,
            sigma: self.sigma,
        }
    }
}
