//! Sample minimum and maximum of `n` independent draws from the
//! two-parameter family.
//!
//! The maximum is closed under the family: the largest of `n` draws from
//! parameters `(a0, a1)` is again a member, at `(n a0, n a1)`. The
//! densities here are computed from the generic order-statistic formulas
//! `n f (1-F)^(n-1)` and `n f F^(n-1)` rather than through that closure, so
//! the two routes can be checked against each other.

use crate::epd2::EpdParams;
use crate::error::{Error, Result};

fn check_sample_size(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            requirement: "at least 1",
            value: 0.0,
        });
    }
    Ok(f64::from(n))
}

/// Density of the minimum of `n` draws: `n f(t) (1 - F(t))^(n-1)`.
pub fn min_pdf(params: &EpdParams, n: u32, t: f64) -> Result<f64> {
    let nf = check_sample_size(n)?;
    let f = params.pdf(t)?;
    let cdf = params.cdf(t)?;
    Ok(nf * f * (1.0 - cdf).powf(nf - 1.0))
}

/// Distribution function of the minimum: `1 - (1 - F(t))^n`.
pub fn min_cdf(params: &EpdParams, n: u32, t: f64) -> Result<f64> {
    let nf = check_sample_size(n)?;
    let cdf = params.cdf(t)?;
    Ok(1.0 - (1.0 - cdf).powf(nf))
}

/// Density of the maximum of `n` draws: `n f(t) F(t)^(n-1)`.
pub fn max_pdf(params: &EpdParams, n: u32, t: f64) -> Result<f64> {
    let nf = check_sample_size(n)?;
    let f = params.pdf(t)?;
    let cdf = params.cdf(t)?;
    Ok(nf * f * cdf.powf(nf - 1.0))
}

/// Distribution function of the maximum: `F(t)^n`.
pub fn max_cdf(params: &EpdParams, n: u32, t: f64) -> Result<f64> {
    let nf = check_sample_size(n)?;
    let cdf = params.cdf(t)?;
    Ok(cdf.powf(nf))
}

/// Parameters of the maximum's own distribution: `(n a0, n a1)`. The
/// maximum of `n` draws is itself a member of the family.
pub fn max_order_params(params: &EpdParams, n: u32) -> Result<EpdParams> {
    let nf = check_sample_size(n)?;
    EpdParams::new(nf * params.alpha0(), nf * params.alpha1())
}
