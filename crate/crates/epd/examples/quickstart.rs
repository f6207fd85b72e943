//! The README walkthrough: evaluate, sample, fit.

use epd::{fit_mle, Dataset, EpdParams, Family, FitOptions};

fn main() {
    let law = EpdParams::new(2.0, 1.0).unwrap();
    let p = law.cdf(0.5).unwrap();
    assert!((law.quantile(p).unwrap() - 0.5).abs() < 1e-14);
    let mean = law.moment(1).unwrap();
    let draws = law.sample_n(1000, 7);

    let data = Dataset::new(draws, "value", "simulated").unwrap();
    let fit = fit_mle(Family::Epd { r: 2 }, &data, &FitOptions::default()).unwrap();
    println!("mean {mean:.6}");
    println!("{:?} loglik {:.4}", fit.estimates, fit.loglik);
}
