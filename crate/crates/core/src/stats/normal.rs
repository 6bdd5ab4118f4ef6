//! Standard normal distribution function.
//!
//! `Φ(z) = erfc(-z / √2) / 2` with `erfc` from the `libm` crate, a port of the
//! fdlibm/msun rational approximations (Sun Microsystems, 1993). Its error is
//! below one ulp of the result over the whole real line, far inside the
//! 1e-7 absolute budget the fitting code needs, and it keeps relative
//! accuracy deep in the lower tail where truncated moments divide by Φ.

use std::f64::consts::FRAC_1_SQRT_2;

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// `1 - Φ(z)` without cancellation.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z * FRAC_1_SQRT_2)
}

pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}
