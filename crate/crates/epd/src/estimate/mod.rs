//! Maximum-likelihood fitting, information criteria, model comparison, and
//! parameter-recovery simulation.
//!
//! The power-family likelihoods (any polynomial order) are globally concave
//! in their coefficients: the observed information is a sum of rank-one
//! outer products, hence positive semidefinite everywhere. Those fits run
//! a projected, damped Newton ascent seeded from quantile-matching starts,
//! with an active-set rule on the non-negativity floors. The complementary
//! and Kumaraswamy likelihoods carry no such guarantee, so they go through
//! a multi-start Nelder-Mead (coarse pass over every start, fine pass on
//! the winner), and the complementary fit is then polished with its
//! analytic gradient.
//!
//! Standard errors come from the inverse observed information at the
//! optimum and are withheld (None) when any estimate sits on a constraint
//! floor, where the usual asymptotics do not apply.

mod simplex;

use serde::Serialize;

use crate::cepd::CepdParams;
use crate::dataio::Dataset;
use crate::error::{Error, Result};
use crate::gepd::GepdParams;
use crate::kumaraswamy::KumaraswamyParams;

/// Estimates within this distance of a constraint floor are reported as
/// boundary solutions.
const BOUNDARY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Power family with `r` polynomial coefficients; `r = 2` is the
    /// two-parameter distribution, larger `r` the generalized one.
    Epd { r: usize },
    /// Complementary two-parameter family.
    Cepd,
    /// Kumaraswamy baseline.
    Kumaraswamy,
}

impl Family {
    /// Number of free parameters.
    pub fn k(&self) -> usize {
        match self {
            Family::Epd { r } => *r,
            Family::Cepd | Family::Kumaraswamy => 2,
        }
    }

    /// Short display name: `epd2`, `gepd3`, ..., `cepd`, `kumaraswamy`.
    pub fn label(&self) -> String {
        match self {
            Family::Epd { r: 2 } => "epd2".to_string(),
            Family::Epd { r } => format!("gepd{r}"),
            Family::Cepd => "cepd".to_string(),
            Family::Kumaraswamy => "kumaraswamy".to_string(),
        }
    }

    /// Lower bounds the optimizer projects onto. The leading power-family
    /// coefficient may sit at exactly zero only when no observation equals
    /// one (the density at one is that coefficient).
    fn floors(&self, contains_one: bool) -> Vec<f64> {
        match self {
            Family::Epd { r } => {
                let mut f = vec![0.0; *r];
                if contains_one {
                    f[0] = 1e-10;
                }
                f
            }
            Family::Cepd => vec![1e-10, 0.0],
            Family::Kumaraswamy => vec![1e-10, 1e-10],
        }
    }

    /// Log likelihood at `x`, or None where it is undefined.
    fn loglik_at(&self, x: &[f64], data: &Dataset) -> Option<f64> {
        match self {
            Family::Epd { .. } => GepdParams::new(x.to_vec()).ok()?.loglik(data).ok(),
            Family::Cepd => Some(CepdParams::new(x[0], x[1]).ok()?.loglik(data)),
            Family::Kumaraswamy => KumaraswamyParams::new(x[0], x[1]).ok()?.loglik(data).ok(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Iteration budget of the fine simplex stage (the Newton stages use
    /// their own small fixed budgets).
    pub max_iterations: usize,
    /// Additional starting points to try besides the built-in lattice and
    /// quantile-matching heuristics.
    pub extra_starts: Vec<Vec<f64>>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            extra_starts: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub family: Family,
    pub label: String,
    pub estimates: Vec<f64>,
    pub loglik: f64,
    /// Asymptotic standard errors from the inverse observed information;
    /// None when an estimate is on a constraint floor or the information
    /// matrix is not invertible.
    pub std_errors: Option<Vec<f64>>,
    pub converged: bool,
    pub iterations: usize,
    /// Per-parameter indicator that the estimate sits on its floor.
    pub boundary_flags: Vec<bool>,
    pub n: usize,
}

/// Penalized-fit summaries. `aicc` is None when `n <= k + 1`, where the
/// small-sample correction divides by zero or goes negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Criteria {
    pub aic: f64,
    pub aicc: Option<f64>,
    pub bic: f64,
}

pub fn information_criteria(loglik: f64, k: usize, n: usize) -> Criteria {
    let kf = k as f64;
    let nf = n as f64;
    let aic = 2.0 * kf - 2.0 * loglik;
    let aicc = if nf > kf + 1.0 {
        Some(aic + 2.0 * kf * (kf + 1.0) / (nf - kf - 1.0))
    } else {
        None
    };
    let bic = kf * nf.ln() - 2.0 * loglik;
    Criteria { aic, aicc, bic }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub label: String,
    /// None when the model could not be fit to this dataset; `note` says
    /// why (for instance a likelihood undefined at exact ones).
    pub fit: Option<FitResult>,
    pub criteria: Option<Criteria>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub dataset: String,
    pub n: usize,
    pub rows: Vec<ComparisonRow>,
    pub best_aic: Option<String>,
    pub best_aicc: Option<String>,
    pub best_bic: Option<String>,
}

/// Summary of repeated simulate-then-fit rounds at a known truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryReport {
    pub label: String,
    pub truth: Vec<f64>,
    pub n: usize,
    pub replications: usize,
    pub convergence_failures: usize,
    pub mean_estimates: Vec<f64>,
    pub bias: Vec<f64>,
    pub rmse: Vec<f64>,
}

/// Fits `family` to `data` by maximum likelihood.
///
/// Returns a typed error when the likelihood is undefined for the whole
/// family on this data (Kumaraswamy with exact ones and `b != 1`), and a
/// result with `converged: false` when the optimizer merely ran out of
/// budget.
pub fn fit_mle(family: Family, data: &Dataset, options: &FitOptions) -> Result<FitResult> {
    if family.k() == 0 {
        return Err(Error::InvalidParameter {
            name: "r",
            requirement: "at least one coefficient",
            value: 0.0,
        });
    }
    if matches!(family, Family::Kumaraswamy) && data.contains_one() {
        return Err(Error::UndefinedLikelihood {
            reason: format!(
                "{} observation(s) equal to 1: the Kumaraswamy log density is unbounded \
                 there for every b != 1, so no maximum-likelihood fit exists",
                data.summarize().ones_count
            ),
        });
    }

    for s in &options.extra_starts {
        if s.len() != family.k() {
            return Err(Error::InvalidParameter {
                name: "extra_starts",
                requirement: "one value per model parameter",
                value: s.len() as f64,
            });
        }
    }

    let floors = family.floors(data.contains_one());
    let mut starts = starting_points(&family, data);
    starts.extend(options.extra_starts.iter().cloned());

    let (x, iterations, converged) = match family {
        Family::Epd { r } => {
            // nested families: seed with the zero-padded lower-order optimum
            // so the fitted loglik is nondecreasing in the polynomial order
            if r > 1 {
                let inner = FitOptions {
                    extra_starts: Vec::new(),
                    ..options.clone()
                };
                if let Ok(lower) = fit_mle(Family::Epd { r: r - 1 }, data, &inner) {
                    let mut padded = lower.estimates;
                    padded.push(0.0);
                    starts.insert(0, padded);
                }
            }
            fit_epd_newton(&family, data, &floors, &starts, options)
        }
        Family::Cepd => {
            let (x, iters, conv) = nm_stages(&family, data, &floors, &starts, options);
            polish_cepd(data, &floors, x, iters, conv)
        }
        Family::Kumaraswamy => nm_stages(&family, data, &floors, &starts, options),
    };

    let loglik = family
        .loglik_at(&x, data)
        .ok_or_else(|| Error::Optimization("optimizer returned an infeasible point".into()))?;
    let boundary_flags: Vec<bool> = x
        .iter()
        .zip(&floors)
        .map(|(&xi, &lo)| xi <= lo + BOUNDARY_TOLERANCE)
        .collect();
    let std_errors = standard_errors(&family, &x, data, &floors, &boundary_flags);

    Ok(FitResult {
        family,
        label: family.label(),
        estimates: x,
        loglik,
        std_errors,
        converged,
        iterations,
        boundary_flags,
        n: data.n(),
    })
}

/// Fits every family and tabulates the information criteria side by side.
/// Models whose likelihood is undefined on this data get a note instead of
/// a fit.
pub fn compare_models(
    data: &Dataset,
    families: &[Family],
    options: &FitOptions,
) -> ComparisonTable {
    let mut rows = Vec::with_capacity(families.len());
    for &family in families {
        match fit_mle(family, data, options) {
            Ok(fit) => {
                let criteria = information_criteria(fit.loglik, family.k(), fit.n);
                rows.push(ComparisonRow {
                    label: family.label(),
                    fit: Some(fit),
                    criteria: Some(criteria),
                    note: None,
                });
            }
            Err(e) => rows.push(ComparisonRow {
                label: family.label(),
                fit: None,
                criteria: None,
                note: Some(e.to_string()),
            }),
        }
    }

    let best_by = |pick: &dyn Fn(&Criteria) -> Option<f64>| -> Option<String> {
        rows.iter()
            .filter_map(|r| {
                r.criteria
                    .as_ref()
                    .and_then(pick)
                    .map(|v| (v, r.label.clone()))
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, label)| label)
    };

    ComparisonTable {
        dataset: data.name().to_string(),
        n: data.n(),
        best_aic: best_by(&|c| Some(c.aic)),
        best_aicc: best_by(&|c| c.aicc),
        best_bic: best_by(&|c| Some(c.bic)),
        rows,
    }
}

/// Simulates `seeds.len()` datasets of size `n` at the given truth, refits
/// each one, and reports mean estimate, bias, and root-mean-square error
/// per parameter. Replications that fail to converge are counted and
/// excluded from the averages.
pub fn simulation_study(
    family: Family,
    truth: &[f64],
    n: usize,
    seeds: &[u64],
    options: &FitOptions,
) -> Result<RecoveryReport> {
    if truth.len() != family.k() {
        return Err(Error::InvalidParameter {
            name: "truth",
            requirement: "one value per model parameter",
            value: truth.len() as f64,
        });
    }
    if seeds.is_empty() || n == 0 {
        return Err(Error::InvalidParameter {
            name: "replications",
            requirement: "at least one seed and a positive sample size",
            value: 0.0,
        });
    }

    let label = family.label();
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(seeds.len());
    let mut failures = 0usize;
    for &seed in seeds {
        let data = crate::dataio::simulate_dataset(family, truth, n, seed)?;
        match fit_mle(family, &data, options) {
            Ok(fit) if fit.converged => kept.push(fit.estimates),
            _ => failures += 1,
        }
    }
    if kept.is_empty() {
        return Err(Error::Optimization(
            "no simulation replication produced a converged fit".into(),
        ));
    }

    let k = family.k();
    let m = kept.len() as f64;
    let mut mean = vec![0.0; k];
    let mut mse = vec![0.0; k];
    for est in &kept {
        for j in 0..k {
            mean[j] += est[j] / m;
            mse[j] += (est[j] - truth[j]).powi(2) / m;
        }
    }
    let bias: Vec<f64> = mean.iter().zip(truth).map(|(&e, &t)| e - t).collect();
    let rmse: Vec<f64> = mse.iter().map(|&v| v.sqrt()).collect();

    Ok(RecoveryReport {
        label,
        truth: truth.to_vec(),
        n,
        replications: seeds.len(),
        convergence_failures: failures,
        mean_estimates: mean,
        bias,
        rmse,
    })
}

// ---------------------------------------------------------------------------
// starting points

fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = p * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let w = h - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

/// Solves the 2x2 system `a0 m[i][0] + a1 m[i][1] = y[i]`.
fn solve_2x2(m: [[f64; 2]; 2], y: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() < 1e-14 {
        return None;
    }
    let a = (y[0] * m[1][1] - m[0][1] * y[1]) / det;
    let b = (m[0][0] * y[1] - y[0] * m[1][0]) / det;
    if a.is_finite() && b.is_finite() {
        Some([a, b])
    } else {
        None
    }
}

const QUANTILE_PAIRS: [(f64, f64); 4] = [(0.25, 0.75), (0.2, 0.6), (0.1, 0.5), (0.3, 0.9)];

/// Matches two sample quantiles to the two-parameter cdf
/// `ln F(t) = a0 ln t - a1 (ln t)^2`, giving a linear system in the
/// parameters.
fn quantile_start_epd2(sorted: &[f64]) -> Option<[f64; 2]> {
    for (pa, pb) in QUANTILE_PAIRS {
        let qa = empirical_quantile(sorted, pa);
        let qb = empirical_quantile(sorted, pb);
        if !(qa < 1.0 && qb < 1.0) {
            continue;
        }
        let la = qa.ln();
        let lb = qb.ln();
        if (la - lb).abs() < 1e-9 {
            continue;
        }
        let sol = solve_2x2([[la, -la * la], [lb, -lb * lb]], [pa.ln(), pb.ln()]);
        if let Some([a0, a1]) = sol {
            return Some([a0.max(1e-6), a1.max(0.0)]);
        }
    }
    None
}

/// Same idea for the complementary family, whose quantile function gives
/// `ln t_p = a0 ln p - a1 (ln p)^2` at the p-quantile `t_p`.
fn quantile_start_cepd(sorted: &[f64]) -> Option<[f64; 2]> {
    for (pa, pb) in QUANTILE_PAIRS {
        let qa = empirical_quantile(sorted, pa);
        let qb = empirical_quantile(sorted, pb);
        if !(qa < 1.0 && qb < 1.0) {
            continue;
        }
        let la = pa.ln();
        let lb = pb.ln();
        let sol = solve_2x2([[la, -la * la], [lb, -lb * lb]], [qa.ln(), qb.ln()]);
        if let Some([a0, a1]) = sol {
            return Some([a0.max(1e-6), a1.max(0.0)]);
        }
    }
    None
}

fn lattice(k: usize) -> Vec<Vec<f64>> {
    let grid: &[f64] = if k <= 2 { &[0.1, 1.0, 5.0] } else { &[0.1, 1.0] };
    let mut points = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(points.len() * grid.len());
        for p in &points {
            for &g in grid {
                let mut q = p.clone();
                q.push(g);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

fn starting_points(family: &Family, data: &Dataset) -> Vec<Vec<f64>> {
    let k = family.k();
    let mut sorted = data.values().to_vec();
    sorted.sort_by(f64::total_cmp);

    let mut starts = lattice(k);
    starts.push(vec![0.5; k]);
    match family {
        Family::Epd { r } => {
            if let Some([a0, a1]) = quantile_start_epd2(&sorted) {
                let mut s = vec![0.01; *r];
                s[0] = a0;
                if *r >= 2 {
                    s[1] = a1;
                }
                starts.insert(0, s);
            }
        }
        Family::Cepd => {
            if let Some([a0, a1]) = quantile_start_cepd(&sorted) {
                starts.insert(0, vec![a0, a1]);
            }
        }
        Family::Kumaraswamy => starts.insert(0, vec![1.0, 1.0]),
    }
    starts
}

// ---------------------------------------------------------------------------
// optimizers

/// Coarse simplex pass over every start, fine pass from the winner.
fn nm_stages(
    family: &Family,
    data: &Dataset,
    floors: &[f64],
    starts: &[Vec<f64>],
    options: &FitOptions,
) -> (Vec<f64>, usize, bool) {
    let mut obj = |x: &[f64]| family.loglik_at(x, data).map_or(f64::INFINITY, |v| -v);
    let coarse = simplex::Options {
        max_iterations: 300,
        x_tolerance: 1e-6,
        f_tolerance: 1e-8,
    };
    let mut total = 0usize;
    let mut best: Option<simplex::Outcome> = None;
    for s in starts {
        let out = simplex::minimize(&mut obj, s, floors, 0.35, &coarse);
        total += out.iterations;
        if best.as_ref().is_none_or(|b| out.value < b.value) {
            best = Some(out);
        }
    }
    let seed = best.expect("at least one start is always supplied");
    let fine = simplex::Options {
        max_iterations: options.max_iterations,
        x_tolerance: 1e-10,
        f_tolerance: 1e-12,
    };
    let out = simplex::minimize(&mut obj, &seed.x, floors, 0.05, &fine);
    total += out.iterations;
    if out.value <= seed.value {
        (out.x, total, out.converged)
    } else {
        (seed.x, total, false)
    }
}

fn project_onto(x: &mut [f64], floors: &[f64]) {
    for (xi, &lo) in x.iter_mut().zip(floors) {
        if *xi < lo {
            *xi = lo;
        }
    }
}

/// Projected damped Newton ascent for the power-family likelihood, which is
/// concave in the coefficients. Coordinates pinned at their floor with an
/// outward-pointing gradient are frozen; the step solves the reduced system
/// on the free coordinates and is halved until the likelihood improves.
fn newton_epd(
    start: &[f64],
    data: &Dataset,
    floors: &[f64],
    max_iter: usize,
) -> Option<(Vec<f64>, usize, bool)> {
    let ll_of = |x: &[f64]| GepdParams::new(x.to_vec()).ok().and_then(|p| p.loglik(data).ok());
    let mut x = start.to_vec();
    project_onto(&mut x, floors);
    let mut ll = ll_of(&x)?;
    let grad_tol = 1e-9 * (data.n() as f64).max(1.0);
    let mut iterations = 0usize;
    let mut converged = false;

    for _ in 0..max_iter {
        iterations += 1;
        let params = GepdParams::new(x.clone()).ok()?;
        let g = params.score(data).ok()?;
        let free: Vec<usize> = (0..x.len())
            .filter(|&i| x[i] > floors[i] + 1e-12 || g[i] > 0.0)
            .collect();
        if free.is_empty() {
            converged = true;
            break;
        }
        if free.iter().map(|&i| g[i].abs()).fold(0.0, f64::max) <= grad_tol {
            converged = true;
            break;
        }

        let h = params.hessian(data).ok()?;
        let m = free.len();
        let mut a = vec![vec![0.0; m]; m];
        let mut b = vec![0.0; m];
        for (p, &i) in free.iter().enumerate() {
            b[p] = g[i];
            for (q, &j) in free.iter().enumerate() {
                a[p][q] = -h[i][j];
            }
        }
        let d = solve_small(a, b)?;
        // ascent is guaranteed by concavity; a non-positive slope means the
        // reduced system was numerically singular
        if free.iter().enumerate().map(|(p, &i)| g[i] * d[p]).sum::<f64>() <= 0.0 {
            break;
        }

        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..50 {
            let mut trial = x.clone();
            for (p, &i) in free.iter().enumerate() {
                trial[i] += step * d[p];
            }
            project_onto(&mut trial, floors);
            if let Some(trial_ll) = ll_of(&trial) {
                if trial_ll > ll {
                    let move_size = trial
                        .iter()
                        .zip(&x)
                        .fold(0.0f64, |mx, (&a, &b)| mx.max((a - b).abs()));
                    let scale = 1.0 + trial.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
                    x = trial;
                    ll = trial_ll;
                    accepted = true;
                    if move_size <= 1e-12 * scale {
                        converged = true;
                    }
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            // no improving step exists along the Newton direction: we are at
            // the constrained optimum up to rounding
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }
    Some((x, iterations, converged))
}

/// Newton-first driver for power-family fits, with the simplex pipeline as
/// a fallback when the Newton pass cannot certify convergence.
fn fit_epd_newton(
    family: &Family,
    data: &Dataset,
    floors: &[f64],
    starts: &[Vec<f64>],
    options: &FitOptions,
) -> (Vec<f64>, usize, bool) {
    let mut ranked: Vec<(f64, &Vec<f64>)> = starts
        .iter()
        .filter_map(|s| family.loglik_at(s, data).map(|ll| (ll, s)))
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut iterations = 0usize;
    for (_, s) in ranked.iter().take(3) {
        if let Some((x, iters, converged)) = newton_epd(s, data, floors, 100) {
            iterations += iters;
            if converged {
                return (x, iterations, true);
            }
        }
    }
    let (x, nm_iters, nm_converged) = nm_stages(family, data, floors, starts, options);
    iterations += nm_iters;
    // one more Newton pass from the simplex solution sharpens the optimum
    if let Some((xp, iters, converged)) = newton_epd(&x, data, floors, 50) {
        iterations += iters;
        let better = family
            .loglik_at(&xp, data)
            .zip(family.loglik_at(&x, data))
            .is_some_and(|(a, b)| a >= b);
        if better {
            return (xp, iterations, converged || nm_converged);
        }
    }
    (x, iterations, nm_converged)
}

/// Newton polish for the complementary fit: analytic gradient, finite
/// difference Jacobian, floor-aware steps. Falls back to the simplex point
/// if no improvement is possible.
fn polish_cepd(
    data: &Dataset,
    floors: &[f64],
    x0: Vec<f64>,
    iters_so_far: usize,
    nm_converged: bool,
) -> (Vec<f64>, usize, bool) {
    let ll_of = |x: &[f64]| CepdParams::new(x[0], x[1]).ok().map(|p| p.loglik(data));
    let score_of = |x: &[f64]| CepdParams::new(x[0], x[1]).ok().map(|p| p.score(data));
    let grad_tol = 1e-8 * (data.n() as f64).max(1.0);

    let mut x = x0;
    let Some(mut ll) = ll_of(&x) else {
        return (x, iters_so_far, nm_converged);
    };
    let mut iterations = iters_so_far;
    let mut sharp = false;

    for _ in 0..30 {
        iterations += 1;
        let Some((g0, g1)) = score_of(&x) else { break };
        let g = [g0, g1];
        let active: Vec<bool> = x
            .iter()
            .zip(floors)
            .zip(&g)
            .map(|((&xi, &lo), &gi)| xi <= lo + 1e-12 && gi <= 0.0)
            .collect();
        let free: Vec<usize> = (0..2).filter(|&i| !active[i]).collect();
        if free.is_empty() {
            sharp = true;
            break;
        }
        if free.iter().map(|&i| g[i].abs()).fold(0.0, f64::max) <= grad_tol {
            sharp = true;
            break;
        }

        let Some(j) = fd_score_jacobian(&x, floors, &score_of) else {
            break;
        };
        let m = free.len();
        let mut a = vec![vec![0.0; m]; m];
        let mut b = vec![0.0; m];
        for (p, &i) in free.iter().enumerate() {
            b[p] = g[i];
            for (q, &jj) in free.iter().enumerate() {
                // observed information is the negated symmetrized Jacobian
                a[p][q] = -0.5 * (j[i][jj] + j[jj][i]);
            }
        }
        let Some(d) = solve_small(a, b) else { break };

        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let mut trial = x.clone();
            for (p, &i) in free.iter().enumerate() {
                trial[i] += step * d[p];
            }
            project_onto(&mut trial, floors);
            if let Some(trial_ll) = ll_of(&trial) {
                if trial_ll > ll {
                    let move_size = (trial[0] - x[0]).abs().max((trial[1] - x[1]).abs());
                    x = trial;
                    ll = trial_ll;
                    accepted = true;
                    if move_size <= 1e-12 * (1.0 + x[0].abs().max(x[1].abs())) {
                        sharp = true;
                    }
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            sharp = true;
            break;
        }
        if sharp {
            break;
        }
    }
    (x, iterations, nm_converged || sharp)
}

// ---------------------------------------------------------------------------
// derivatives and standard errors

/// Central-difference step that keeps both evaluation points above the
/// floor; None means there is no room for a central difference.
fn central_step(x: f64, floor: f64) -> Option<f64> {
    let h = 1e-6 * x.abs().max(1.0);
    let room = x - floor;
    if room > 2.0 * h {
        Some(h)
    } else if room * 0.45 > 1e-12 {
        Some(room * 0.45)
    } else {
        None
    }
}

/// Finite-difference Jacobian of a 2-vector gradient function, one-sided
/// where the floor leaves no room.
fn fd_score_jacobian(
    x: &[f64],
    floors: &[f64],
    score_of: &dyn Fn(&[f64]) -> Option<(f64, f64)>,
) -> Option<[[f64; 2]; 2]> {
    let mut j = [[0.0; 2]; 2];
    for col in 0..2 {
        let (gp, gm, denom) = match central_step(x[col], floors[col]) {
            Some(h) => {
                let mut xp = x.to_vec();
                xp[col] += h;
                let mut xm = x.to_vec();
                xm[col] -= h;
                (score_of(&xp)?, score_of(&xm)?, 2.0 * h)
            }
            None => {
                let h = 1e-6 * x[col].abs().max(1.0);
                let mut xp = x.to_vec();
                xp[col] += h;
                (score_of(&xp)?, score_of(x)?, h)
            }
        };
        j[0][col] = (gp.0 - gm.0) / denom;
        j[1][col] = (gp.1 - gm.1) / denom;
    }
    Some(j)
}

/// Central-difference Hessian of a scalar log likelihood in two variables.
fn fd_hessian_2(
    x: &[f64],
    floors: &[f64],
    f: &dyn Fn(&[f64]) -> Option<f64>,
) -> Option<[[f64; 2]; 2]> {
    let h0 = central_step(x[0], floors[0])?;
    let h1 = central_step(x[1], floors[1])?;
    let h = [h0, h1];
    let at = |d0: f64, d1: f64| f(&[x[0] + d0, x[1] + d1]);
    let f00 = at(0.0, 0.0)?;
    let mut hess = [[0.0; 2]; 2];
    hess[0][0] = (at(h[0], 0.0)? - 2.0 * f00 + at(-h[0], 0.0)?) / (h[0] * h[0]);
    hess[1][1] = (at(0.0, h[1])? - 2.0 * f00 + at(0.0, -h[1])?) / (h[1] * h[1]);
    let cross = (at(h[0], h[1])? - at(h[0], -h[1])? - at(-h[0], h[1])? + at(-h[0], -h[1])?)
        / (4.0 * h[0] * h[1]);
    hess[0][1] = cross;
    hess[1][0] = cross;
    Some(hess)
}

fn standard_errors(
    family: &Family,
    x: &[f64],
    data: &Dataset,
    floors: &[f64],
    boundary_flags: &[bool],
) -> Option<Vec<f64>> {
    if boundary_flags.iter().any(|&b| b) {
        return None;
    }
    let info: Vec<Vec<f64>> = match family {
        Family::Epd { .. } => {
            let h = GepdParams::new(x.to_vec()).ok()?.hessian(data).ok()?;
            h.into_iter()
                .map(|row| row.into_iter().map(|v| -v).collect())
                .collect()
        }
        Family::Cepd => {
            let score_of =
                |y: &[f64]| CepdParams::new(y[0], y[1]).ok().map(|p| p.score(data));
            let j = fd_score_jacobian(x, floors, &score_of)?;
            vec![
                vec![-j[0][0], -0.5 * (j[0][1] + j[1][0])],
                vec![-0.5 * (j[0][1] + j[1][0]), -j[1][1]],
            ]
        }
        Family::Kumaraswamy => {
            let f = |y: &[f64]| {
                KumaraswamyParams::new(y[0], y[1])
                    .ok()
                    .and_then(|p| p.loglik(data).ok())
            };
            let h = fd_hessian_2(x, floors, &f)?;
            vec![vec![-h[0][0], -h[0][1]], vec![-h[1][0], -h[1][1]]]
        }
    };
    let inv = invert_small(info)?;
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let v = inv[i][i];
        if !(v > 0.0) || !v.is_finite() {
            return None;
        }
        out.push(v.sqrt());
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// dense linear algebra for systems no larger than the parameter count

/// Gaussian elimination with partial pivoting.
fn solve_small(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
        if !x[col].is_finite() {
            return None;
        }
    }
    Some(x)
}

/// Gauss-Jordan inverse with partial pivoting.
fn invert_small(mut a: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col];
        for k in 0..n {
            a[col][k] /= scale;
            inv[col][k] /= scale;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row][col];
            if factor == 0.0 {
                continue;
            }
            for k in 0..n {
                a[row][k] -= factor * a[col][k];
                inv[row][k] -= factor * inv[col][k];
            }
        }
    }
    if inv.iter().flatten().all(|v| v.is_finite()) {
        Some(inv)
    } else {
        None
    }
}
