//! Statistical checks that tie the simulator, the estimator and the Monte Carlo
//! harness together.

use leadlag_core::simulate::default_maxlag;
use leadlag_core::{
    base_filter, cascade, cross_cov, modwt_levels, run_mc, target_covariance_tables, CirculantSampler,
    Family, MCConfig, ObservationScheme, SpectralModel,
};

#[test]
fn wavelet_cross_covariance_matches_its_finite_filter_expectation() {
    let level = 2;
    let lag = -3;
    let model = SpectralModel::single_level(13, level, 0.6, lag as f64).unwrap();
    let tau = model.tau();
    let n = 1 << 14;
    let scheme = ObservationScheme::new(tau, n, 0.0, 0.0).unwrap();
    let tables = target_covariance_tables(&model, &scheme, default_maxlag(&model, n)).unwrap();
    let sampler = CirculantSampler::new(&tables, &scheme).unwrap();
    let base = base_filter(Family::La8);
    let h = cascade(&base, level).unwrap().coefficients;

    let mut expected = 0.0;
    for p in 0..h.len() {
        for q in 0..h.len() {
            expected += h[p] * h[q] * model.increment_cross_cov(lag + p as i64 - q as i64);
        }
    }
    expected /= tau;

    let estimates: Vec<f64> = (0..24)
        .map(|seed| {
            let (x, y) = sampler.sample(seed);
            let w1 = modwt_levels(&x, &base, level).unwrap().pop().unwrap();
            let w2 = modwt_levels(&y, &base, level).unwrap().pop().unwrap();
            cross_cov(&w1, &w2, lag, tau).unwrap()
        })
        .collect();
    let m = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / m;
    let se = (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (m - 1.0) / m).sqrt();
    assert!((mean - expected).abs() < 4.0 * se, "mean {mean}, expected {expected}, se {se}");
}

#[test]
fn single_scale_lag_is_recovered_at_its_own_level() {
    let model = SpectralModel::single_level(13, 3, 0.7, -4.0).unwrap();
    let scheme = ObservationScheme::new(model.tau(), 6000, 0.3, 0.3).unwrap();
    let config = MCConfig {
        model,
        scheme,
        families: vec![Family::La20],
        max_level: 3,
        max_lag: 30,
        replications: 16,
        master_seed: 3,
    };
    let summary = run_mc(&config).unwrap();
    assert!(summary.valid);
    assert_eq!(summary.family(Family::La20).unwrap().levels[2].median, -4);
    assert_eq!(summary.truth[2], -4.0);
}
