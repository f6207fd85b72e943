//! Shared helpers for the integration suites, implemented independently of
//! the library's own numerics: a series/continued-fraction complementary
//! error function, fixed-grid Simpson quadrature, central finite
//! differences, bracketed search, and the goodness-of-fit statistics used
//! by the sampler tests.

#![allow(dead_code)]

/// Complementary error function by Taylor series (small arguments) and the
/// classical continued fraction via modified Lentz (large arguments).
/// Accurate to well under 1e-13 absolute on [-6, 6].
pub fn erfc_oracle(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc_oracle(-x);
    }
    if x <= 2.0 {
        // erf by its entire Taylor series, converged to machine precision
        let mut term = x;
        let mut sum = x;
        let x2 = x * x;
        for n in 1..200 {
            let nf = n as f64;
            term *= -x2 / nf;
            let contrib = term / (2.0 * nf + 1.0);
            sum += contrib;
            if contrib.abs() < 1e-18 * sum.abs().max(1.0) {
                break;
            }
        }
        1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum
    } else {
        (-x * x).exp() / std::f64::consts::PI.sqrt() / laplace_cf_denominator(x)
    }
}

/// Denominator of the Laplace continued fraction by modified Lentz:
/// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + (2/2)/(x + ...))).
/// Converges for x > 2 well inside 400 iterations.
fn laplace_cf_denominator(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..400 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-15 {
            break;
        }
    }
    f
}

/// Scaled complementary error function, exp(x^2) erfc(x), for x >= 0.
/// Below 2 the exponential factor cannot overflow and the Taylor branch of
/// `erfc_oracle` applies; above 2 the continued fraction gives the scaled
/// value directly with no exponential at all.
pub fn erfcx_oracle(x: f64) -> f64 {
    assert!(x >= 0.0, "scaled complement oracle is for the right half line");
    if x <= 2.0 {
        (x * x).exp() * erfc_oracle(x)
    } else {
        1.0 / (std::f64::consts::PI.sqrt() * laplace_cf_denominator(x))
    }
}

/// Upper limit where exp(-(b v + a v^2)) has decayed to about 1e-19, so a
/// fixed Simpson grid spends its panels on the live part of the integrand.
pub fn decay_cutoff(b: f64, a: f64) -> f64 {
    if a > 0.0 {
        (-b + (b * b + 4.0 * a * 44.0).sqrt()) / (2.0 * a)
    } else {
        44.0 / b
    }
}

/// Composite Simpson rule with `panels` even subdivisions.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels >= 2 && panels % 2 == 0, "panels must be even");
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Central-difference gradient with per-coordinate relative steps.
pub fn fd_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() {
        let step = h * (1.0 + x[i].abs());
        let mut hi = x.to_vec();
        let mut lo = x.to_vec();
        hi[i] += step;
        lo[i] -= step;
        g[i] = (f(&hi) - f(&lo)) / (2.0 * step);
    }
    g
}

/// Central-difference Hessian; symmetric by construction.
pub fn fd_hessian(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let k = x.len();
    let mut out = vec![vec![0.0; k]; k];
    let f0 = f(x);
    for i in 0..k {
        let si = h * (1.0 + x[i].abs());
        for j in 0..=i {
            let sj = h * (1.0 + x[j].abs());
            let v = if i == j {
                let mut hi = x.to_vec();
                let mut lo = x.to_vec();
                hi[i] += si;
                lo[i] -= si;
                (f(&hi) - 2.0 * f0 + f(&lo)) / (si * si)
            } else {
                let mut pp = x.to_vec();
                let mut pm = x.to_vec();
                let mut mp = x.to_vec();
                let mut mm = x.to_vec();
                pp[i] += si;
                pp[j] += sj;
                pm[i] += si;
                pm[j] -= sj;
                mp[i] -= si;
                mp[j] += sj;
                mm[i] -= si;
                mm[j] -= sj;
                (f(&pp) - f(&pm) - f(&mp) + f(&mm)) / (4.0 * si * sj)
            };
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

/// Two-sided Kolmogorov-Smirnov statistic of probability-integral-transform
/// values against the uniform law. `u` need not be sorted.
pub fn ks_statistic(u: &[f64]) -> f64 {
    let mut s = u.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d = 0.0f64;
    for (i, &ui) in s.iter().enumerate() {
        let hi = (i as f64 + 1.0) / n - ui;
        let lo = ui - i as f64 / n;
        d = d.max(hi).max(lo);
    }
    d
}

/// Critical KS value at significance 0.01 for large n:
/// sqrt(-ln(0.005)/2) / sqrt(n).
pub fn ks_critical_01(n: usize) -> f64 {
    1.627_623_611_518_950_4 / (n as f64).sqrt()
}

/// Pearson chi-square statistic for observed counts against expected
/// probabilities summing to one.
pub fn chi_square(counts: &[usize], probs: &[f64], n: usize) -> f64 {
    assert_eq!(counts.len(), probs.len());
    counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = p * n as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum()
}

/// 0.99 quantiles of the chi-square law for the degrees of freedom the
/// sampler tests use.
pub fn chi_square_99(df: usize) -> f64 {
    match df {
        9 => 21.665994333461924,
        19 => 36.19086912927004,
        29 => 49.58788447289881,
        other => panic!("no frozen 0.99 quantile for df={other}"),
    }
}

/// Argmax of a unimodal function on [lo, hi] by golden-section search.
pub fn golden_argmax(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, iterations: usize) -> f64 {
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iterations {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Inverts a monotone cdf by bisection to absolute tolerance `tol`.
pub fn bisect_quantile(cdf: &dyn Fn(f64) -> f64, p: f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < tol {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Deterministic xorshift stream for test-local pseudo-random draws that
/// must not depend on the library's generator choices.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform draw in (0, 1).
    pub fn uniform(&mut self) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        u.clamp(1e-16, 1.0 - 1e-16)
    }

    /// Uniform draw in [lo, hi].
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}
