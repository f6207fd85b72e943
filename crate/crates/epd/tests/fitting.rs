//! Contracts of the estimation layer: analytic derivatives against finite
//! differences, score norms at interior optima, iteration-budget
//! monotonicity, nested-order monotonicity, and the inapplicability path
//! for data containing exact ones.

mod common;

use common::{fd_gradient, fd_hessian, TestRng};
use epd::{
    compare_models, fit_mle, information_criteria, simulate_dataset, simulation_study,
    CepdParams, Column, Dataset, EpdParams, Error, Family, FitOptions, GepdParams,
    KumaraswamyParams,
};
use std::path::Path;

fn bundled(name: &str) -> Dataset {
    Dataset::load_csv(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name),
        Column::Name("value"),
    )
    .unwrap()
}

fn random_dataset(rng: &mut TestRng, n: usize) -> Dataset {
    let p = EpdParams::new(rng.range(0.3, 3.0), rng.range(0.0, 3.0)).unwrap();
    Dataset::new(p.sample_n(n, rng.next_u64()), "fd probe", "test").unwrap()
}

#[test]
fn analytic_score_matches_finite_differences_for_the_two_parameter_family() {
    let mut rng = TestRng::new(5150);
    for trial in 0..15 {
        let data = random_dataset(&mut rng, 60);
        let a0 = rng.range(0.3, 3.0);
        let a1 = rng.range(0.1, 3.0);
        let p = EpdParams::new(a0, a1).unwrap();
        let (s0, s1) = p.score(&data);
        let ll = |x: &[f64]| EpdParams::new(x[0], x[1]).unwrap().loglik(&data);
        let g = fd_gradient(&ll, &[a0, a1], 1e-6);
        let scale = 1.0 + s0.abs().max(s1.abs());
        assert!(
            (s0 - g[0]).abs() / scale < 1e-6 && (s1 - g[1]).abs() / scale < 1e-6,
            "trial {trial}: analytic ({s0},{s1}) vs fd ({},{})",
            g[0],
            g[1]
        );

        let info = p.observed_information(&data);
        let h = fd_hessian(&ll, &[a0, a1], 1e-4);
        for i in 0..2 {
            for j in 0..2 {
                let hs = 1.0 + info[i][j].abs();
                assert!(
                    (info[i][j] + h[i][j]).abs() / hs < 1e-5,
                    "information[{i}][{j}] {} vs -fd {}",
                    info[i][j],
                    -h[i][j]
                );
            }
        }
    }
}

#[test]
fn analytic_score_matches_finite_differences_for_higher_orders() {
    let mut rng = TestRng::new(7878);
    for _ in 0..10 {
        let data = random_dataset(&mut rng, 50);
        let coeffs: Vec<f64> = (0..4).map(|_| rng.range(0.1, 2.0)).collect();
        let p = GepdParams::new(coeffs.clone()).unwrap();
        let s = p.score(&data).unwrap();
        let ll = |x: &[f64]| GepdParams::new(x.to_vec()).unwrap().loglik(&data).unwrap();
        let g = fd_gradient(&ll, &coeffs, 1e-6);
        for i in 0..4 {
            let scale = 1.0 + s[i].abs();
            assert!((s[i] - g[i]).abs() / scale < 1e-6, "coefficient {i}");
        }

        let hess = p.hessian(&data).unwrap();
        let h = fd_hessian(&ll, &coeffs, 1e-4);
        for i in 0..4 {
            for j in 0..4 {
                let scale = 1.0 + hess[i][j].abs();
                assert!((hess[i][j] - h[i][j]).abs() / scale < 1e-5, "h[{i}][{j}]");
            }
        }
    }
}

#[test]
fn analytic_score_matches_finite_differences_for_the_complementary_family() {
    let mut rng = TestRng::new(9119);
    for _ in 0..10 {
        let gen = CepdParams::new(rng.range(0.5, 2.0), rng.range(0.2, 2.0)).unwrap();
        let data = Dataset::new(gen.sample_n(60, rng.next_u64()), "probe", "test").unwrap();
        let a0 = rng.range(0.4, 2.5);
        let a1 = rng.range(0.1, 2.5);
        let p = CepdParams::new(a0, a1).unwrap();
        let (s0, s1) = p.score(&data);
        let ll = |x: &[f64]| CepdParams::new(x[0], x[1]).unwrap().loglik(&data);
        let g = fd_gradient(&ll, &[a0, a1], 1e-6);
        let scale = 1.0 + s0.abs().max(s1.abs());
        assert!(
            (s0 - g[0]).abs() / scale < 1e-6 && (s1 - g[1]).abs() / scale < 1e-6,
            "analytic ({s0},{s1}) vs fd ({},{})",
            g[0],
            g[1]
        );
    }
}

#[test]
fn interior_optima_have_negligible_score_norm() {
    let options = FitOptions::default();
    let cases: Vec<(Family, Dataset)> = vec![
        (
            Family::Epd { r: 2 },
            simulate_dataset(Family::Epd { r: 2 }, &[2.0, 1.0], 800, 41).unwrap(),
        ),
        (
            Family::Cepd,
            simulate_dataset(Family::Cepd, &[1.0, 1.0], 800, 42).unwrap(),
        ),
        (
            Family::Kumaraswamy,
            simulate_dataset(Family::Kumaraswamy, &[2.0, 3.0], 800, 43).unwrap(),
        ),
    ];
    for (family, data) in cases {
        let fit = fit_mle(family, &data, &options).unwrap();
        assert!(fit.converged, "{}", fit.label);
        assert!(
            fit.boundary_flags.iter().all(|&b| !b),
            "{} unexpectedly pinned",
            fit.label
        );
        // measure the gradient by central differences on the reported
        // likelihood so the check also covers families without an
        // analytic score
        let f = fit.clone();
        let ll = move |x: &[f64]| match f.family {
            Family::Epd { .. } => GepdParams::new(x.to_vec()).unwrap().loglik(&data).unwrap(),
            Family::Cepd => CepdParams::new(x[0], x[1]).unwrap().loglik(&data),
            Family::Kumaraswamy => KumaraswamyParams::new(x[0], x[1])
                .unwrap()
                .loglik(&data)
                .unwrap(),
        };
        let g = fd_gradient(&ll, &fit.estimates, 1e-6);
        let norm = g.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let budget = 1e-4 * (1.0 + fit.loglik.abs());
        assert!(
            norm <= budget,
            "{}: score norm {norm:.3e} over budget {budget:.3e}",
            fit.label
        );
        assert!(fit.std_errors.is_some(), "{} interior fit has no SEs", fit.label);
    }
}

#[test]
fn doubling_the_iteration_budget_never_lowers_the_loglik() {
    let datasets = [
        simulate_dataset(Family::Cepd, &[0.8, 1.5], 300, 11).unwrap(),
        simulate_dataset(Family::Kumaraswamy, &[1.5, 0.7], 300, 12).unwrap(),
        simulate_dataset(Family::Epd { r: 3 }, &[1.0, 0.001, 4.0], 300, 13).unwrap(),
    ];
    for data in &datasets {
        for family in [Family::Epd { r: 3 }, Family::Cepd, Family::Kumaraswamy] {
            let base = fit_mle(
                family,
                data,
                &FitOptions { max_iterations: 2000, ..FitOptions::default() },
            )
            .unwrap();
            let doubled = fit_mle(
                family,
                data,
                &FitOptions { max_iterations: 4000, ..FitOptions::default() },
            )
            .unwrap();
            assert!(
                doubled.loglik >= base.loglik,
                "{} on {}: {} -> {}",
                family.label(),
                data.name(),
                base.loglik,
                doubled.loglik
            );
        }
    }
}

#[test]
fn nested_power_orders_never_lose_loglik() {
    for data in [
        bundled("vote_share.csv"),
        bundled("youth_literacy.csv"),
        bundled("employment_rate.csv"),
        simulate_dataset(Family::Epd { r: 3 }, &[1.0, 0.001, 4.0], 400, 99).unwrap(),
    ] {
        let options = FitOptions::default();
        let mut previous = f64::NEG_INFINITY;
        for r in 2..=4 {
            let fit = fit_mle(Family::Epd { r }, &data, &options).unwrap();
            assert!(
                fit.loglik >= previous,
                "order {r} on {}: {} < {}",
                data.name(),
                fit.loglik,
                previous
            );
            previous = fit.loglik;
        }
    }
}

#[test]
fn ones_data_is_typed_inapplicable_for_kumaraswamy_only() {
    let data = bundled("youth_literacy.csv");
    assert!(data.contains_one());

    for r in 2..=4 {
        let fit = fit_mle(Family::Epd { r }, &data, &FitOptions::default()).unwrap();
        assert!(fit.converged, "order {r} must fit ones data");
        assert!(fit.loglik.is_finite());
    }

    match fit_mle(Family::Kumaraswamy, &data, &FitOptions::default()) {
        Err(Error::UndefinedLikelihood { reason }) => {
            assert!(reason.contains("16"), "reason should count the ones: {reason}")
        }
        other => panic!("expected the typed inapplicability error, got {other:?}"),
    }

    let table = compare_models(
        &data,
        &[Family::Epd { r: 2 }, Family::Kumaraswamy],
        &FitOptions::default(),
    );
    assert_eq!(table.rows.len(), 2);
    assert!(table.rows[0].fit.is_some());
    assert!(table.rows[1].fit.is_none());
    assert!(table.rows[1].note.as_deref().unwrap().contains("undefined"));
    assert_eq!(table.best_aic.as_deref(), Some("epd2"));
}

#[test]
fn comparison_table_ranks_by_each_criterion() {
    let data = bundled("vote_share.csv");
    let families = [
        Family::Epd { r: 2 },
        Family::Epd { r: 3 },
        Family::Epd { r: 4 },
        Family::Cepd,
        Family::Kumaraswamy,
    ];
    let table = compare_models(&data, &families, &FitOptions::default());
    assert_eq!(table.rows.len(), 5);
    assert!(table.rows.iter().all(|r| r.fit.is_some()), "all applicable here");

    for pick in [table.best_aic.clone(), table.best_aicc.clone(), table.best_bic.clone()] {
        let best = pick.expect("a best label exists when any family fits");
        assert!(table.rows.iter().any(|r| r.label == best));
    }
    // the generator was Kumaraswamy(4,4), so the baseline should win AIC
    assert_eq!(table.best_aic.as_deref(), Some("kumaraswamy"));
}

#[test]
fn recovery_study_reports_small_bias_at_moderate_n() {
    let seeds: Vec<u64> = (1..=5).collect();
    let report = simulation_study(
        Family::Cepd,
        &[1.0, 1.0],
        600,
        &seeds,
        &FitOptions::default(),
    )
    .unwrap();
    assert_eq!(report.replications, 5);
    assert_eq!(report.convergence_failures, 0);
    for j in 0..2 {
        assert!(
            report.bias[j].abs() < 0.15,
            "parameter {j} bias {}",
            report.bias[j]
        );
        assert!(report.rmse[j] < 0.3);
    }

    let kuma = simulation_study(
        Family::Kumaraswamy,
        &[2.0, 3.0],
        600,
        &seeds,
        &FitOptions::default(),
    )
    .unwrap();
    assert!(kuma.bias.iter().all(|b| b.abs() < 0.3));
}

#[test]
fn criteria_and_option_validation() {
    let c = information_criteria(-100.0, 3, 50);
    assert!((c.aic - 206.0).abs() < 1e-12);
    assert!((c.bic - (3.0 * 50f64.ln() + 200.0)).abs() < 1e-12);
    assert!((c.aicc.unwrap() - (206.0 + 24.0 / 46.0)).abs() < 1e-12);
    assert!(information_criteria(-1.0, 3, 4).aicc.is_none());

    // user starts with the wrong arity are rejected, not silently reshaped
    let data = simulate_dataset(Family::Epd { r: 2 }, &[1.0, 1.0], 50, 1).unwrap();
    let bad = FitOptions {
        extra_starts: vec![vec![1.0, 1.0, 1.0]],
        ..FitOptions::default()
    };
    assert!(matches!(
        fit_mle(Family::Epd { r: 2 }, &data, &bad),
        Err(Error::InvalidParameter { name: "extra_starts", .. })
    ));
}

#[test]
fn boundary_fits_report_flags_and_withhold_standard_errors() {
    // dispersion beyond the exponential benchmark pins the curvature
    // coefficient at zero: crafted so the zero-curvature score condition
    // holds strictly
    let values = vec![(-0.001f64).exp(), (-0.001f64).exp(), (-9.0f64).exp()];
    let data = Dataset::new(values, "pinned", "test").unwrap();
    let fit = fit_mle(Family::Epd { r: 2 }, &data, &FitOptions::default()).unwrap();
    assert!(fit.boundary_flags[1], "curvature should pin at zero");
    assert!(fit.std_errors.is_none(), "no SEs at a boundary");
    assert!((fit.estimates[0] - 3.0 / 9.002).abs() < 1e-6);
}
