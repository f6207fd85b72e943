//! Two-parameter extended power distribution on (0, 1].
//!
//! The distribution function is `F(t) = exp(a0 ln t - a1 (ln t)^2)` with
//! shape parameters `a0 > 0`, `a1 >= 0`. At `a1 = 0` it collapses to the
//! power-function distribution `t^a0` (a Beta(a0, 1)), and that case is
//! served by dedicated analytic branches throughout rather than by limits
//! of the general expressions. Exact 1.0 lies inside the support and has
//! positive density `f(1) = a0`, which is the point of the family: data
//! with a boundary atom of observations at one remain fittable.
//!
//! In the log scale `V = -ln T` the model is exactly the linear failure
//! rate distribution with density `(a0 + 2 a1 v) exp(-a0 v - a1 v^2)`;
//! several formulas below are easiest to read through that lens.

use serde::Serialize;

use crate::error::{
    check_finite, check_probability_open_closed, check_unit_support, Error, Result,
};
use crate::dataio::Dataset;
use crate::specfun::erfcx_raw;

/// Location of a density maximum over (0, 1].
///
/// `LowerBoundary` means the density is unbounded as `t -> 0` and the
/// supremum is not attained; `Flat` marks the uniform case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Mode {
    Interior(f64),
    UpperBoundary,
    LowerBoundary,
    Flat,
}

impl Mode {
    /// The maximizing point when one exists in (0, 1].
    pub fn location(&self) -> Option<f64> {
        match self {
            Mode::Interior(t) => Some(*t),
            Mode::UpperBoundary => Some(1.0),
            Mode::LowerBoundary | Mode::Flat => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpdParams {
    alpha0: f64,
    alpha1: f64,
}

impl EpdParams {
    /// Requires `alpha0 > 0` and `alpha1 >= 0`, both finite.
    pub fn new(alpha0: f64, alpha1: f64) -> Result<Self> {
        check_finite("alpha0", alpha0)?;
        check_finite("alpha1", alpha1)?;
        if !(alpha0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha0",
                requirement: "strictly positive",
                value: alpha0,
            });
        }
        if !(alpha1 >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha1",
                requirement: "non-negative",
                value: alpha1,
            });
        }
        Ok(Self { alpha0, alpha1 })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    /// Density `{(a0 - 2 a1 ln t)/t} exp(a0 ln t - a1 (ln t)^2)`; `f(1) = a0`.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_unit_support("t", t)?;
        let l = t.ln();
        Ok((self.alpha0 - 2.0 * self.alpha1 * l) / t * self.log_cdf_at(l).exp())
    }

    /// Log density, finite on the whole support.
    pub fn log_pdf(&self, t: f64) -> Result<f64> {
        check_unit_support("t", t)?;
        let l = t.ln();
        Ok((self.alpha0 - 2.0 * self.alpha1 * l).ln() - l + self.log_cdf_at(l))
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_unit_support("t", t)?;
        Ok(self.log_cdf_at(t.ln()).exp())
    }

    fn log_cdf_at(&self, l: f64) -> f64 {
        self.alpha0 * l - self.alpha1 * l * l
    }

    /// Inverse distribution function for `p` in (0, 1].
    ///
    /// The quadratic inversion is evaluated as
    /// `exp(2 ln p / (a0 + sqrt(a0^2 - 4 a1 ln p)))`; the textbook root
    /// `(a0 - sqrt(...)) / (2 a1)` cancels catastrophically as `a1 -> 0`,
    /// while this rationalized form passes smoothly into `p^(1/a0)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        check_probability_open_closed(p)?;
        if self.alpha1 == 0.0 {
            return Ok(p.powf(1.0 / self.alpha0));
        }
        let lp = p.ln();
        let disc = self.alpha0 * self.alpha0 - 4.0 * self.alpha1 * lp;
        Ok((2.0 * lp / (self.alpha0 + disc.sqrt())).exp())
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is a valid probability")
    }

    /// Density maximum over (0, 1].
    ///
    /// For `a1 > 0` the stationary point of the log density sits at
    /// `exp(((2 a0 - 1) - sqrt(1 + 8 a1)) / (4 a1))`; when that exponent is
    /// non-negative the maximum is pinned to the right boundary instead.
    pub fn mode(&self) -> Mode {
        if self.alpha1 == 0.0 {
            return if self.alpha0 > 1.0 {
                Mode::UpperBoundary
            } else if self.alpha0 < 1.0 {
                Mode::LowerBoundary
            } else {
                Mode::Flat
            };
        }
        let x = (2.0 * self.alpha0 - 1.0 - (1.0 + 8.0 * self.alpha1).sqrt()) / (4.0 * self.alpha1);
        if x < 0.0 {
            Mode::Interior(x.exp())
        } else {
            Mode::UpperBoundary
        }
    }

    /// Inverse-transform draw from one uniform `u` in (0, 1].
    pub fn sample(&self, u: f64) -> Result<f64> {
        self.quantile(u)
    }

    /// `n` deterministic draws from the stream keyed by `seed`.
    pub fn sample_n(&self, n: usize, seed: u64) -> Vec<f64> {
        crate::random::uniform_open_closed(n, seed)
            .into_iter()
            .map(|u| self.quantile(u).expect("stream stays within (0, 1]"))
            .collect()
    }

    /// Raw moment `E[T^k]` for integer `k >= 1`, in closed form.
    ///
    /// For `a1 > 0` this is `1 - (k/2) sqrt(pi/a1) erfcx((a0 + k)/(2 sqrt(a1)))`.
    /// The popular way of writing it, `exp(...) * erfc(...)`, overflows for
    /// moderate parameters even though the product is tame, hence the scaled
    /// function.
    pub fn moment(&self, k: u32) -> Result<f64> {
        if k == 0 {
            return Err(Error::ZeroMomentOrder);
        }
        let k = f64::from(k);
        if self.alpha1 == 0.0 {
            return Ok(self.alpha0 / (self.alpha0 + k));
        }
        let s = (self.alpha0 + k) / (2.0 * self.alpha1.sqrt());
        Ok(1.0 - 0.5 * k * (std::f64::consts::PI / self.alpha1).sqrt() * erfcx_raw(s))
    }

    /// Mean and variance. The variance combines the scaled-erfc terms
    /// `A = sqrt(pi/a1) erfcx((a0+1)/(2 sqrt(a1)))` and the analogous `B`
    /// for the second moment as `A (1 - A/4) - B`, which is algebraically
    /// `E[T^2] - E[T]^2`; tiny negatives from rounding are clamped.
    pub fn mean_var(&self) -> (f64, f64) {
        if self.alpha1 == 0.0 {
            let a = self.alpha0;
            let mean = a / (a + 1.0);
            let var = a / (a + 2.0) - mean * mean;
            return (mean, var.max(0.0));
        }
        let root = self.alpha1.sqrt();
        let scale = (std::f64::consts::PI / self.alpha1).sqrt();
        let a = scale * erfcx_raw((self.alpha0 + 1.0) / (2.0 * root));
        let b = scale * erfcx_raw((self.alpha0 + 2.0) / (2.0 * root));
        let mean = 1.0 - 0.5 * a;
        let var = a * (1.0 - 0.25 * a) - b;
        (mean, var.max(0.0))
    }

    /// Density of `V = -ln T`, the linear failure rate law
    /// `(a0 + 2 a1 v) exp(-a0 v - a1 v^2)` on `v >= 0`.
    pub fn neglog_transform_pdf(&self, v: f64) -> Result<f64> {
        linear_failure_rate_pdf(self.alpha0, self.alpha1, v)
    }

    /// Log likelihood of a dataset.
    pub fn loglik(&self, data: &Dataset) -> f64 {
        let mut ll = 0.0;
        for &t in data.values() {
            let l = t.ln();
            ll += (self.alpha0 - 2.0 * self.alpha1 * l).ln() - l + self.log_cdf_at(l);
        }
        ll
    }

    /// Gradient of the log likelihood in `(a0, a1)`.
    ///
    /// Component one is `sum 1/(a0 - 2 a1 ln t_i) + sum ln t_i`; component
    /// two is `-2 sum ln t_i/(a0 - 2 a1 ln t_i) - sum (ln t_i)^2`, i.e. the
    /// derivative itself, signed so that central finite differences of
    /// [`EpdParams::loglik`] reproduce both components.
    pub fn score(&self, data: &Dataset) -> (f64, f64) {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for &t in data.values() {
            let l = t.ln();
            let w = self.alpha0 - 2.0 * self.alpha1 * l;
            d0 += 1.0 / w + l;
            d1 += -2.0 * l / w - l * l;
        }
        (d0, d1)
    }

    /// Observed information, the negative Hessian of the log likelihood:
    /// `[[sum 1/w^2, -2 sum l/w^2], [-2 sum l/w^2, 4 sum l^2/w^2]]` with
    /// `w = a0 - 2 a1 l`. Each summand is a rank-one outer product, so the
    /// matrix is positive semidefinite at every parameter point.
    pub fn observed_information(&self, data: &Dataset) -> [[f64; 2]; 2] {
        let mut h00 = 0.0;
        let mut h01 = 0.0;
        let mut h11 = 0.0;
        for &t in data.values() {
            let l = t.ln();
            let w2 = {
                let w = self.alpha0 - 2.0 * self.alpha1 * l;
                w * w
            };
            h00 += 1.0 / w2;
            h01 += -2.0 * l / w2;
            h11 += 4.0 * l * l / w2;
        }
        [[h00, h01], [h01, h11]]
    }
}

/// Linear failure rate density `(a0 + 2 a1 v) exp(-a0 v - a1 v^2)` on `v >= 0`.
///
/// Unlike [`EpdParams`], `a0 = 0` is admitted here (the Rayleigh subfamily)
/// as long as `a1 > 0`; `a1 = 0` with `a0 > 0` is the exponential.
pub fn linear_failure_rate_pdf(alpha0: f64, alpha1: f64, v: f64) -> Result<f64> {
    check_finite("alpha0", alpha0)?;
    check_finite("alpha1", alpha1)?;
    check_finite("v", v)?;
    if !(alpha0 >= 0.0) || !(alpha1 >= 0.0) || (alpha0 == 0.0 && alpha1 == 0.0) {
        return Err(Error::InvalidParameter {
            name: "(alpha0, alpha1)",
            requirement: "non-negative with at least one positive",
            value: alpha0.min(alpha1),
        });
    }
    if v < 0.0 {
        return Err(Error::OutsideSupport {
            name: "v",
            value: v,
        });
    }
    Ok((alpha0 + 2.0 * alpha1 * v) * (-alpha0 * v - alpha1 * v * v).exp())
}
