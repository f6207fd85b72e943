//! Complementary extended power distribution on (0, 1].
//!
//! Its distribution function is the quantile function of the two-parameter
//! family: `C(t) = exp((a0 - sqrt(s)) / (2 a1))` with
//! `s = a0^2 - 4 a1 ln t`, evaluated here in the rationalized form
//! `exp(2 ln t / (a0 + sqrt(s)))` that stays stable as `a1 -> 0`, where the
//! family collapses to Beta(1/a0, 1). Because the pair (distribution,
//! complement) swaps cdf and quantile, sampling is a single closed-form
//! expression and the round trip through the cdf is exact to rounding.
//!
//! One structural fact worth knowing: for every `a1 > 0` the density grows
//! without bound as `t -> 0` (in `v = -ln t` the log density behaves like
//! `v - sqrt(v / a1)`), so the maximum over the support is never attained at
//! an interior point. The stationary condition `s - sqrt(s) = 2 a1` locates
//! a local minimum instead. [`CepdParams::mode_cubic`] reports the boundary
//! behavior, that stationary point, and how both relate to the cubic-in-ln-t
//! characterization that floats around for this family, which does not match
//! the actual stationary condition.

use serde::Serialize;

use crate::dataio::Dataset;
use crate::epd2::Mode;
use crate::error::{
    check_finite, check_probability_open_closed, check_unit_support, Error, Result,
};
use crate::quad::QuadResult;
use crate::specfun::erfcx_raw;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CepdParams {
    alpha0: f64,
    alpha1: f64,
}

/// What [`CepdParams::mode_cubic`] found.
///
/// `mode` is the authoritative classification of the density maximum.
/// `stationary_point` is the interior root of the log-density derivative
/// when one exists, with `stationary_is_max` telling whether the density is
/// locally maximal there (for this family it is a local minimum whenever
/// `alpha1 > 0`). `cubic_roots_t` are the candidate points `exp(L)` from the
/// published cubic `A3 L^3 + A2 L^2 + A1 L + A0 = 0` restricted to `L <= 0`,
/// and `cubic_matches_stationary` records whether any of them lands within
/// 1e-6 of the true stationary point. The observed stationary condition
/// itself is `s - sqrt(s) - 2 alpha1 = 0` in `s = alpha0^2 - 4 alpha1 ln t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeDiagnostics {
    pub mode: Mode,
    pub stationary_point: Option<f64>,
    pub stationary_is_max: Option<bool>,
    pub cubic_roots_t: Vec<f64>,
    pub cubic_matches_stationary: bool,
    pub stationary_condition: String,
}

impl CepdParams {
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

    fn s_of_l(&self, l: f64) -> f64 {
        self.alpha0 * self.alpha0 - 4.0 * self.alpha1 * l
    }

    /// Rationalized exponent `2 ln t / (a0 + sqrt(s))` of the cdf.
    fn log_cdf_at(&self, l: f64) -> f64 {
        if self.alpha1 == 0.0 {
            return l / self.alpha0;
        }
        2.0 * l / (self.alpha0 + self.s_of_l(l).sqrt())
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_unit_support("t", t)?;
        Ok(self.log_cdf_at(t.ln()).exp())
    }

    /// Density `exp(2 ln t / (a0 + sqrt(s))) / (t sqrt(s))`; at `t = 1` this
    /// is `1/a0`.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_unit_support("t", t)?;
        let l = t.ln();
        if self.alpha1 == 0.0 {
            return Ok(((1.0 / self.alpha0 - 1.0) * l).exp() / self.alpha0);
        }
        Ok(self.log_cdf_at(l).exp() / (t * self.s_of_l(l).sqrt()))
    }

    pub fn log_pdf(&self, t: f64) -> Result<f64> {
        check_unit_support("t", t)?;
        let l = t.ln();
        if self.alpha1 == 0.0 {
            return Ok((1.0 / self.alpha0 - 1.0) * l - self.alpha0.ln());
        }
        Ok(self.log_cdf_at(l) - l - 0.5 * self.s_of_l(l).ln())
    }

    /// Inverse-transform draw: the quantile function of this family is the
    /// cdf of the two-parameter family, so a draw is the single expression
    /// `exp(a0 ln u - a1 (ln u)^2)`.
    ///
    /// For extreme `u` with a large quadratic coefficient the exact quantile
    /// lies below the smallest positive float; the draw is clamped there so
    /// every returned value stays inside the support.
    pub fn sample_from_u(&self, u: f64) -> Result<f64> {
        check_probability_open_closed(u)?;
        let lu = u.ln();
        let t = (self.alpha0 * lu - self.alpha1 * lu * lu).exp();
        Ok(t.max(f64::MIN_POSITIVE))
    }

    /// `n` deterministic draws from the stream keyed by `seed`.
    pub fn sample_n(&self, n: usize, seed: u64) -> Vec<f64> {
        crate::random::uniform_open_closed(n, seed)
            .into_iter()
            .map(|u| {
                self.sample_from_u(u)
                    .expect("stream stays within (0, 1]")
            })
            .collect()
    }

    pub fn median(&self) -> f64 {
        self.sample_from_u(0.5).expect("0.5 is a valid probability")
    }

    /// Raw moment `E[T^k]` for integer `k >= 1`:
    /// `(1/2) sqrt(pi/(a1 k)) erfcx((k a0 + 1) / (2 sqrt(a1 k)))` for
    /// `a1 > 0`, `1 / (1 + k a0)` at `a1 = 0`. The first moment satisfies
    /// the exact complement identity `E[T] + E[T']` = 1 against the
    /// two-parameter family with the same parameters.
    pub fn moment(&self, k: u32) -> Result<f64> {
        if k == 0 {
            return Err(Error::ZeroMomentOrder);
        }
        let k = f64::from(k);
        if self.alpha1 == 0.0 {
            return Ok(1.0 / (1.0 + k * self.alpha0));
        }
        let a1k = self.alpha1 * k;
        let s = (k * self.alpha0 + 1.0) / (2.0 * a1k.sqrt());
        Ok(0.5 * (std::f64::consts::PI / a1k).sqrt() * erfcx_raw(s))
    }

    /// `E[T^k]` by adaptive quadrature of `t^k` against the density, for
    /// cross-checking the closed form. The integrand is bounded on (0, 1]
    /// for `k >= 1` (the density's blow-up at the origin is slower than any
    /// power), so the absolute error estimate in the result is reliable.
    pub fn moment_numeric(&self, k: u32) -> Result<QuadResult> {
        if k == 0 {
            return Err(Error::ZeroMomentOrder);
        }
        let kf = f64::from(k);
        crate::quad::integrate(
            |t| {
                if t <= 0.0 || t > 1.0 {
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

    /// Log likelihood. For `a1 > 0` this is
    /// `-(1/2) sum ln s_i - sum ln t_i + n a0 / (2 a1) - (1/(2 a1)) sum sqrt(s_i)`;
    /// at `a1 = 0` it reduces to `-n ln a0 + (1/a0 - 1) sum ln t_i`.
    pub fn loglik(&self, data: &Dataset) -> f64 {
        let n = data.n() as f64;
        if self.alpha1 == 0.0 {
            let sum_l: f64 = data.values().iter().map(|t| t.ln()).sum();
            return -n * self.alpha0.ln() + (1.0 / self.alpha0 - 1.0) * sum_l;
        }
        let mut sum_ln_s = 0.0;
        let mut sum_l = 0.0;
        let mut sum_sqrt_s = 0.0;
        for &t in data.values() {
            let l = t.ln();
            let s = self.s_of_l(l);
            sum_ln_s += s.ln();
            sum_l += l;
            sum_sqrt_s += s.sqrt();
        }
        -0.5 * sum_ln_s - sum_l + (n * self.alpha0 - sum_sqrt_s) / (2.0 * self.alpha1)
    }

    /// Gradient of the log likelihood in `(a0, a1)`, differentiated from the
    /// expression in [`CepdParams::loglik`] and signed to match central
    /// finite differences:
    ///
    /// `d/da0 = -a0 sum 1/s_i + n/(2 a1) - (a0/(2 a1)) sum 1/sqrt(s_i)`
    ///
    /// `d/da1 = 2 sum ln t_i / s_i - n a0 / (2 a1^2) + (1/(2 a1^2)) sum sqrt(s_i)
    ///          + (1/a1) sum ln t_i / sqrt(s_i)`
    ///
    /// At `a1 = 0` the second component is the one-sided limit
    /// `sum (2 ln t_i / a0^2 + (ln t_i)^2 / a0^3)`.
    pub fn score(&self, data: &Dataset) -> (f64, f64) {
        if self.alpha1 == 0.0 {
            let mut d0 = 0.0;
            let mut d1 = 0.0;
            let a = self.alpha0;
            for &t in data.values() {
                let l = t.ln();
                d0 += -1.0 / a - l / (a * a);
                d1 += 2.0 * l / (a * a) + l * l / (a * a * a);
            }
            return (d0, d1);
        }
        let n = data.n() as f64;
        let a0 = self.alpha0;
        let a1 = self.alpha1;
        let mut inv_s = 0.0;
        let mut inv_sqrt_s = 0.0;
        let mut sqrt_s = 0.0;
        let mut l_over_s = 0.0;
        let mut l_over_sqrt_s = 0.0;
        for &t in data.values() {
            let l = t.ln();
            let s = self.s_of_l(l);
            let rs = s.sqrt();
            inv_s += 1.0 / s;
            inv_sqrt_s += 1.0 / rs;
            sqrt_s += rs;
            l_over_s += l / s;
            l_over_sqrt_s += l / rs;
        }
        let d0 = -a0 * inv_s + n / (2.0 * a1) - a0 / (2.0 * a1) * inv_sqrt_s;
        let d1 = 2.0 * l_over_s - n * a0 / (2.0 * a1 * a1)
            + sqrt_s / (2.0 * a1 * a1)
            + l_over_sqrt_s / a1;
        (d0, d1)
    }

    /// Classifies the density maximum and reports stationary-point and
    /// cubic diagnostics; see [`ModeDiagnostics`].
    ///
    /// The stationary point is found by safeguarded Newton on the
    /// log-density derivative `phi(L) = -1 + 2 a1 / s + 1 / sqrt(s)` (a
    /// strictly increasing function of `L = ln t`), then cross-checked in
    /// the tests against the closed-form root of `s - sqrt(s) = 2 a1`.
    pub fn mode_cubic(&self) -> ModeDiagnostics {
        let condition =
            "s - sqrt(s) - 2*alpha1 = 0 with s = alpha0^2 - 4*alpha1*ln(t)".to_string();

        if self.alpha1 == 0.0 {
            let mode = if self.alpha0 < 1.0 {
                Mode::UpperBoundary
            } else if self.alpha0 > 1.0 {
                Mode::LowerBoundary
            } else {
                Mode::Flat
            };
            return ModeDiagnostics {
                mode,
                stationary_point: None,
                stationary_is_max: None,
                cubic_roots_t: Vec::new(),
                cubic_matches_stationary: false,
                stationary_condition: condition,
            };
        }

        let stationary = self.stationary_log_point();
        let stationary_t = stationary.map(f64::exp);

        // the log density grows like v - sqrt(v/a1) as v = -ln t -> inf, so
        // the supremum always sits at the lower boundary; confirm the trend
        // numerically rather than asserting it
        let increasing_toward_zero = {
            let a = self.log_pdf(1e-12).unwrap();
            let b = self.log_pdf(1e-6).unwrap();
            a > b
        };
        let boundary_beats_interior = match stationary_t {
            Some(t_star) => {
                self.log_pdf(1e-12).unwrap() > self.log_pdf(t_star).unwrap()
            }
            None => true,
        };
        let mode = if increasing_toward_zero && boundary_beats_interior {
            Mode::LowerBoundary
        } else if let Some(t_star) = stationary_t {
            Mode::Interior(t_star)
        } else {
            Mode::UpperBoundary
        };

        let stationary_is_max = stationary_t.map(|t_star| {
            let h = 1e-5 * t_star;
            let mid = self.log_pdf(t_star).unwrap();
            mid >= self.log_pdf(t_star - h).unwrap() && mid >= self.log_pdf(t_star + h).unwrap()
        });

        let cubic_roots_t: Vec<f64> = self
            .published_cubic_roots()
            .into_iter()
            .filter(|&l| l <= 1e-12)
            .map(|l| l.min(0.0).exp())
            .collect();
        let cubic_matches_stationary = match stationary_t {
            Some(t_star) => cubic_roots_t.iter().any(|&t| (t - t_star).abs() <= 1e-6),
            None => false,
        };

        ModeDiagnostics {
            mode,
            stationary_point: stationary_t,
            stationary_is_max,
            cubic_roots_t,
            cubic_matches_stationary,
            stationary_condition: condition,
        }
    }

    /// Root of `phi(L) = -1 + 2 a1/s + 1/sqrt(s)` over `L < 0`, or None when
    /// the density is monotone on the support. `phi` is strictly increasing
    /// in `L`, so a sign change against `phi(0)` settles existence.
    fn stationary_log_point(&self) -> Option<f64> {
        let a1 = self.alpha1;
        let phi = |l: f64| {
            let s = self.s_of_l(l);
            -1.0 + 2.0 * a1 / s + 1.0 / s.sqrt()
        };
        if phi(0.0) <= 0.0 {
            return None;
        }
        let mut hi = 0.0f64;
        let mut lo = -1.0f64;
        let mut guard = 0;
        while phi(lo) > 0.0 {
            hi = lo;
            lo *= 2.0;
            guard += 1;
            if guard > 1100 {
                return None;
            }
        }
        let mut l = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = phi(l);
            if f == 0.0 {
                break;
            }
            if f > 0.0 {
                hi = l;
            } else {
                lo = l;
            }
            let s = self.s_of_l(l);
            let dphi = 4.0 * a1 * (2.0 * a1 / (s * s) + 0.5 * s.powf(-1.5));
            let newton = l - f / dphi;
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - l).abs() <= 1e-14 * (1.0 + l.abs()) {
                l = next;
                break;
            }
            l = next;
        }
        Some(l)
    }

    /// Real roots in `L` of the published cubic
    /// `A3 L^3 + A2 L^2 + A1 L + A0 = 0` with
    /// `A0 = a0^2 - 4 a0^4 a1 + 4 a0^6 a1^2 - 1`,
    /// `A1 = -48 a0^4 a1^3 - 4 a1`,
    /// `A2 = 192 a0^2 a1^4 - 64 a1^3`,
    /// `A3 = -256 a1^5`. Kept verbatim as a diagnostic; its roots are
    /// compared against the observed stationary condition rather than used
    /// for anything.
    fn published_cubic_roots(&self) -> Vec<f64> {
        let a0 = self.alpha0;
        let a1 = self.alpha1;
        let c0 = a0.powi(2) - 4.0 * a0.powi(4) * a1 + 4.0 * a0.powi(6) * a1.powi(2) - 1.0;
        let c1 = -48.0 * a0.powi(4) * a1.powi(3) - 4.0 * a1;
        let c2 = 192.0 * a0.powi(2) * a1.powi(4) - 64.0 * a1.powi(3);
        let c3 = -256.0 * a1.powi(5);
        real_cubic_roots(c3, c2, c1, c0)
    }
}

/// Real roots of `a x^3 + b x^2 + c x + d = 0`, degrading gracefully to the
/// quadratic and linear cases. Roots are Newton-polished on the original
/// polynomial.
fn real_cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let eval = |x: f64| ((a * x + b) * x + c) * x + d;
    let deriv = |x: f64| (3.0 * a * x + 2.0 * b) * x + c;

    let mut roots = if a == 0.0 {
        if b == 0.0 {
            if c == 0.0 {
                Vec::new()
            } else {
                vec![-d / c]
            }
        } else {
            let disc = c * c - 4.0 * b * d;
            if disc < 0.0 {
                Vec::new()
            } else {
                let r = disc.sqrt();
                vec![(-c + r) / (2.0 * b), (-c - r) / (2.0 * b)]
            }
        }
    } else {
        // depressed cubic y^3 + p y + q with x = y - b/(3a)
        let shift = b / (3.0 * a);
        let p = c / a - shift * shift * 3.0;
        let q = 2.0 * shift.powi(3) - shift * c / a + d / a;
        let disc = -4.0 * p.powi(3) - 27.0 * q * q;
        if disc > 0.0 {
            // three real roots, trigonometric form
            let m = 2.0 * (-p / 3.0).sqrt();
            let theta = (3.0 * q / (p * m)).clamp(-1.0, 1.0).acos() / 3.0;
            (0..3)
                .map(|k| {
                    m * (theta - 2.0 * std::f64::consts::PI * f64::from(k) / 3.0).cos() - shift
                })
                .collect()
        } else {
            // one real root, Cardano
            let half_q = q / 2.0;
            let inner = (half_q * half_q + p.powi(3) / 27.0).max(0.0).sqrt();
            let u = (-half_q + inner).cbrt();
            let v = (-half_q - inner).cbrt();
            vec![u + v - shift]
        }
    };

    for r in roots.iter_mut() {
        for _ in 0..3 {
            let dy = deriv(*r);
            if dy != 0.0 {
                *r -= eval(*r) / dy;
            }
        }
    }
    roots.retain(|r| r.is_finite());
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * (1.0 + y.abs()));
    roots
}
