//! Nelder-Mead simplex minimization over a domain bounded below per
//! coordinate. Candidate points are projected onto the floors before
//! evaluation, which is enough structure for likelihoods whose parameters
//! live on half-open intervals. Objectives signal infeasibility by
//! returning infinity (NaN is treated the same way).

pub(crate) struct Options {
    pub max_iterations: usize,
    /// Convergence threshold on the simplex diameter, relative to the best
    /// vertex.
    pub x_tolerance: f64,
    /// Convergence threshold on the spread of objective values, relative
    /// to the best value.
    pub f_tolerance: f64,
}

pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn project(x: &mut [f64], floors: &[f64]) {
    for (xi, &lo) in x.iter_mut().zip(floors) {
        if *xi < lo {
            *xi = lo;
        }
    }
}

/// Minimizes `f` from `start`, projecting onto `floors`. After the simplex
/// converges, a fresh simplex is re-expanded around the candidate and run
/// again (twice at most): a collapsed simplex inside a curved valley can
/// satisfy the diameter test far from any minimum, and the restart escapes
/// exactly that trap.
pub(crate) fn minimize(
    f: &mut dyn FnMut(&[f64]) -> f64,
    start: &[f64],
    floors: &[f64],
    scale: f64,
    opts: &Options,
) -> Outcome {
    let mut out = minimize_once(f, start, floors, scale, opts);
    for _ in 0..2 {
        if !out.converged {
            break;
        }
        let mut again = minimize_once(f, &out.x, floors, (scale * 0.25).max(1e-4), opts);
        again.iterations += out.iterations;
        let significant = out.value - again.value > opts.f_tolerance * (1.0 + out.value.abs());
        if again.value <= out.value {
            out = again;
        } else {
            out.iterations = again.iterations;
        }
        if !significant {
            break;
        }
    }
    out
}

fn minimize_once(
    f: &mut dyn FnMut(&[f64]) -> f64,
    start: &[f64],
    floors: &[f64],
    scale: f64,
    opts: &Options,
) -> Outcome {
    let dim = start.len();
    assert_eq!(dim, floors.len(), "one floor per coordinate");
    let mut eval = |x: &[f64]| {
        let y = f(x);
        if y.is_nan() {
            f64::INFINITY
        } else {
            y
        }
    };

    let mut base = start.to_vec();
    project(&mut base, floors);
    let mut verts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    verts.push(base.clone());
    for i in 0..dim {
        let mut x = base.clone();
        x[i] += scale * x[i].abs().max(0.25);
        verts.push(x);
    }
    let mut vals: Vec<f64> = verts.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        // ascending by objective value; worst vertex last
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        let best_scale = 1.0 + verts[best].iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let diameter = verts
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&verts[best])
                    .fold(0.0f64, |m, (&a, &b)| m.max((a - b).abs()))
            })
            .fold(0.0f64, f64::max);
        let spread = vals[worst] - vals[best];
        if diameter <= opts.x_tolerance * best_scale
            && (spread <= opts.f_tolerance * (1.0 + vals[best].abs()) || !spread.is_finite())
        {
            converged = spread.is_finite();
            break;
        }

        iterations += 1;

        let mut centroid = vec![0.0; dim];
        for &i in order.iter().take(dim) {
            for (c, &x) in centroid.iter_mut().zip(&verts[i]) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let blend = |a: f64| -> Vec<f64> {
            // a = 1 reflects the worst vertex through the centroid,
            // a = -0.5 contracts toward it
            let mut x: Vec<f64> = centroid
                .iter()
                .zip(&verts[worst])
                .map(|(&c, &w)| c + a * (c - w))
                .collect();
            project(&mut x, floors);
            x
        };

        let reflected = blend(1.0);
        let fr = eval(&reflected);
        if fr < vals[best] {
            let expanded = blend(2.0);
            let fe = eval(&expanded);
            if fe < fr {
                verts[worst] = expanded;
                vals[worst] = fe;
            } else {
                verts[worst] = reflected;
                vals[worst] = fr;
            }
            continue;
        }
        if fr < vals[second_worst] {
            verts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        let (contracted, threshold) = if fr < vals[worst] {
            (blend(0.5), fr)
        } else {
            (blend(-0.5), vals[worst])
        };
        let fc = eval(&contracted);
        if fc < threshold {
            verts[worst] = contracted;
            vals[worst] = fc;
            continue;
        }
        // shrink everything toward the best vertex
        let anchor = verts[best].clone();
        for (i, v) in verts.iter_mut().enumerate() {
            if i == best {
                continue;
            }
            for (x, &a) in v.iter_mut().zip(&anchor) {
                *x = a + 0.5 * (*x - a);
            }
            project(v, floors);
            vals[i] = eval(v);
        }
    }

    let mut best = 0;
    for i in 1..=dim {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    Outcome {
        x: verts.swap_remove(best),
        value: vals[best],
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> Options {
        Options {
            max_iterations: 2000,
            x_tolerance: 1e-10,
            f_tolerance: 1e-12,
        }
    }

    #[test]
    fn finds_quadratic_bowl_minimum() {
        let mut f = |x: &[f64]| (x[0] - 3.0).powi(2) + 2.0 * (x[1] - 2.0).powi(2);
        let out = minimize(&mut f, &[0.5, 0.5], &[0.0, 0.0], 0.5, &opts());
        assert!(out.converged);
        assert!((out.x[0] - 3.0).abs() < 1e-7);
        assert!((out.x[1] - 2.0).abs() < 1e-7);
    }

    #[test]
    fn respects_floor_when_minimum_is_outside() {
        // unconstrained minimum at (-1, 2); floor clips the first coordinate
        let mut f = |x: &[f64]| (x[0] + 1.0).powi(2) + (x[1] - 2.0).powi(2);
        let out = minimize(&mut f, &[1.0, 1.0], &[0.0, 0.0], 0.5, &opts());
        assert!(out.x[0].abs() < 1e-8);
        assert!((out.x[1] - 2.0).abs() < 1e-7);
    }

    #[test]
    fn survives_infinite_regions() {
        // objective undefined left of x = 1, minimum at x = 2
        let mut f = |x: &[f64]| {
            if x[0] < 1.0 {
                f64::INFINITY
            } else {
                (x[0] - 2.0).powi(2)
            }
        };
        let out = minimize(&mut f, &[1.2], &[0.0], 0.5, &opts());
        assert!((out.x[0] - 2.0).abs() < 1e-7);
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let mut f = |x: &[f64]| (x[0] - 3.0).powi(2);
        let capped = Options {
            max_iterations: 3,
            ..opts()
        };
        let out = minimize(&mut f, &[100.0], &[0.0], 0.1, &capped);
        assert!(!out.converged);
        assert_eq!(out.iterations, 3);
    }

    #[test]
    fn valley_with_curvature() {
        // banana-shaped valley; generous tolerance, many iterations
        let mut f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let out = minimize(
            &mut f,
            &[0.2, 1.8],
            &[0.0, 0.0],
            0.5,
            &Options {
                max_iterations: 5000,
                ..opts()
            },
        );
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6);
        assert!((out.x[1] - 1.0).abs() < 1e-6);
    }
}
