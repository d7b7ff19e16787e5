mod common;

use common::InverseCdf;
use ratiokit::ratio::{fit_values, FitGrid};

#[test]
fn recovers_table_indices_exactly() {
    for (i, b) in [1.0, 2.0, 4.0, 7.0, 8.0, 13.0, 14.0, 23.0, 26.0, 43.0].into_iter().enumerate() {
        let sample = InverseCdf::new(b).sample(100_000, 1000 + i as u64);
        let fit = fit_values(&sample, FitGrid::default()).unwrap();
        assert_eq!(fit.beta_fit, b);
        assert_eq!(fit.at_boundary, b == 1.0);
        assert_eq!(fit.n, 100_000);
    }
}

#[test]
fn half_integer_grid() {
    let sample = InverseCdf::new(4.0).sample(100_000, 77);
    let grid = FitGrid {
        lo: 1.0,
        hi: 60.0,
        step: 0.5,
    };
    let fit = fit_values(&sample, grid).unwrap();
    assert!((fit.beta_fit - 4.0).abs() <= 0.5, "beta_fit = {}", fit.beta_fit);
    assert_eq!(fit.d_curve.len(), 119);
}

#[test]
fn ks_accepts_recovered_fit() {
    let sample = InverseCdf::new(13.0).sample(100_000, 4);
    let fit = fit_values(&sample, FitGrid::default()).unwrap();
    assert!(fit.ks_p > 0.01, "p = {}", fit.ks_p);
    let mean = sample.iter().sum::<f64>() / sample.len() as f64;
    assert_eq!(fit.mean_r, mean);
}
