//! Kumaraswamy distribution, the comparison baseline for model selection.
//!
//! Density `a b t^(a-1) (1 - t^a)^(b-1)` with shapes `a, b > 0`. Both the
//! cdf and the quantile function are closed-form, which keeps sampling and
//! goodness-of-fit checks cheap. With `b = 1` the family coincides with the
//! two-parameter power family at `(a, 0)`.
//!
//! The point `t = 1` needs care: the density has a finite value there only
//! when `b = 1` (namely `a`). For any other `b` the log density is
//! unbounded (below for `b > 1`, above for `b < 1`), so evaluation and
//! likelihoods on data containing exact ones are refused with a typed error
//! instead of silently producing `-inf` or `NaN`.

use serde::Serialize;

use crate::dataio::Dataset;
use crate::error::{
    check_finite, check_probability_open_closed, check_unit_support, Error, Result,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KumaraswamyParams {
    a: f64,
    b: f64,
}

impl KumaraswamyParams {
    /// Requires `a > 0` and `b > 0`, both finite.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_finite("a", a)?;
        check_finite("b", b)?;
        if !(a > 0.0) {
            return Err(Error::InvalidParameter {
                name: "a",
                requirement: "strictly positive",
                value: a,
            });
        }
        if !(b > 0.0) {
            return Err(Error::InvalidParameter {
                name: "b",
                requirement: "strictly positive",
                value: b,
            });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    fn undefined_at_one(&self) -> Error {
        Error::UndefinedLikelihood {
            reason: format!(
                "density at t = 1 is finite only for b = 1; with b = {} the log density \
                 is unbounded there",
                self.b
            ),
        }
    }

    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_unit_support("t", t)?;
        if t == 1.0 {
            return if self.b == 1.0 {
                Ok(self.a)
            } else {
                Err(self.undefined_at_one())
            };
        }
        let base = self.a * self.b * t.powf(self.a - 1.0);
        if self.b == 1.0 {
            return Ok(base);
        }
        Ok(base * (1.0 - t.powf(self.a)).powf(self.b - 1.0))
    }

    pub fn log_pdf(&self, t: f64) -> Result<f64> {
        check_unit_support("t", t)?;
        if t == 1.0 {
            return if self.b == 1.0 {
                Ok(self.a.ln())
            } else {
                Err(self.undefined_at_one())
            };
        }
        let la = (self.a * self.b).ln() + (self.a - 1.0) * t.ln();
        if self.b == 1.0 {
            // skip the (b-1) ln(1-t^a) term entirely: 0 * ln(...) must not
            // turn into NaN as t -> 1
            return Ok(la);
        }
        Ok(la + (self.b - 1.0) * (-t.powf(self.a)).ln_1p())
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_unit_support("t", t)?;
        // 1 - (1 - t^a)^b, expanded through ln_1p/exp_m1 for accuracy at
        // both ends
        Ok(-(self.b * (-t.powf(self.a)).ln_1p()).exp_m1())
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        check_probability_open_closed(p)?;
        if p == 1.0 {
            return Ok(1.0);
        }
        // (1 - (1-p)^(1/b))^(1/a)
        let inner = -((1.0 - p).powf(1.0 / self.b) - 1.0);
        Ok(inner.powf(1.0 / self.a))
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is a valid probability")
    }

    pub fn sample_from_u(&self, u: f64) -> Result<f64> {
        self.quantile(u)
    }

    /// `n` deterministic draws from the stream keyed by `seed`.
    pub fn sample_n(&self, n: usize, seed: u64) -> Vec<f64> {
        crate::random::uniform_open_closed(n, seed)
            .into_iter()
            .map(|u| self.quantile(u).expect("stream stays within (0, 1]"))
            .collect()
    }

    /// `E[T^k]` by adaptive quadrature of `t^k` against the density. The
    /// endpoint singularities (`a < 1` at zero, `b < 1` at one) are
    /// integrable and handled by panel refinement.
    pub fn moment_numeric(&self, k: u32) -> Result<crate::quad::QuadResult> {
        if k == 0 {
            return Err(Error::ZeroMomentOrder);
        }
        let kf = f64::from(k);
        crate::quad::integrate(
            |t| {
                if t <= 0.0 || t >= 1.0 {
                    0.0
                } else {
                    t.powf(kf) * self.pdf(t).expect("interior point of the support")
                }
            },
            0.0,
            1.0,
            5e-10,
            0.0,
            400,
        )
    }

    /// Log likelihood. Refused when the data contain exact ones and
    /// `b != 1`, because the log density is unbounded at that point; with
    /// `b = 1` the offending term vanishes identically and the ones
    /// contribute `ln a` each.
    pub fn loglik(&self, data: &Dataset) -> Result<f64> {
        if data.contains_one() && self.b != 1.0 {
            return Err(self.undefined_at_one());
        }
        let n = data.n() as f64;
        let sum_l: f64 = data.values().iter().map(|t| t.ln()).sum();
        let base = n * (self.a * self.b).ln() + (self.a - 1.0) * sum_l;
        if self.b == 1.0 {
            return Ok(base);
        }
        let sum_tail: f64 = data
            .values()
            .iter()
            .map(|&t| (-t.powf(self.a)).ln_1p())
            .sum();
        Ok(base + (self.b - 1.0) * sum_tail)
    }
}
