use leadlag_core::{
    align_to_grid, base_filter, cascade, cross_cov, cross_cov_curve, estimate_all_levels, estimate_lag,
    modwt, modwt_levels, summarize, AlignedReturns, Family, LagGrid, PriceScale, TickSeries,
};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Haar), Just(Family::La8), Just(Family::La20)]
}

fn series(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    len.prop_flat_map(|n| proptest::collection::vec(-1.0f64..1.0, n))
}

fn aligned(returns: Vec<f64>) -> AlignedReturns {
    let n = returns.len();
    AlignedReturns {
        t0: 0.0,
        tau: 1.0,
        n,
        returns,
        observed: vec![true; n + 1],
    }
}

proptest! {
    #[test]
    fn pyramid_matches_direct_filtering(x in series(200..=300), family in family(), level in 1usize..=3) {
        let base = base_filter(family);
        let pyramid = modwt_levels(&x, &base, level).unwrap();
        let direct = modwt(&x, &cascade(&base, level).unwrap()).unwrap();
        let last = pyramid.last().unwrap();
        prop_assert_eq!(last.first_index(), direct.first_index());
        for (a, b) in last.values.iter().zip(&direct.values) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn swapping_series_mirrors_the_lag(
        pair in (40usize..=120).prop_flat_map(|n| (
            proptest::collection::vec(-1.0f64..1.0, n),
            proptest::collection::vec(-1.0f64..1.0, n),
        )),
        family in prop_oneof![Just(Family::Haar), Just(Family::La8)],
        lag in -10i64..=10,
    ) {
        let filter = cascade(&base_filter(family), 1).unwrap();
        let w1 = modwt(&pair.0, &filter).unwrap();
        let w2 = modwt(&pair.1, &filter).unwrap();
        prop_assert_eq!(cross_cov(&w1, &w2, lag, 0.5).unwrap(), cross_cov(&w2, &w1, -lag, 0.5).unwrap());

        let grid = LagGrid::symmetric(10);
        let forward = estimate_lag(&cross_cov_curve(&w1, &w2, &grid, 0.5).unwrap(), 0.5);
        let backward = estimate_lag(&cross_cov_curve(&w2, &w1, &grid, 0.5).unwrap(), 0.5);
        if !forward.tie_broken {
            prop_assert_eq!(forward.lag_steps, -backward.lag_steps);
        }
    }

    #[test]
    fn lag_estimates_ignore_positive_rescaling(
        x in series(150..=150), y in series(150..=150), scale in 1e-3f64..1e3, level in 1usize..=2,
    ) {
        let grid = LagGrid::symmetric(12);
        let base = estimate_all_levels(&aligned(x.clone()), &aligned(y.clone()), Family::La8, level, &grid).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| v * scale).collect();
        let other = estimate_all_levels(&aligned(scaled), &aligned(y), Family::La8, level, &grid).unwrap();
        for (a, b) in base.iter().zip(&other) {
            if a.estimate.runner_up_gap > 1e-9 * a.estimate.peak_value {
                prop_assert_eq!(a.estimate.lag_steps, b.estimate.lag_steps);
            }
            for (p, q) in a.curve.rho_normalized.iter().zip(&b.curve.rho_normalized) {
                prop_assert!((p - q).abs() < 1e-9);
            }
            prop_assert!(a.estimate.lag_steps.abs() <= 12);
        }
    }

    #[test]
    fn normalized_curve_is_bounded(x in series(100..=100), y in series(100..=100)) {
        let grid = LagGrid::symmetric(5);
        let levels = estimate_all_levels(&aligned(x), &aligned(y), Family::Haar, 3, &grid).unwrap();
        for (j, level) in levels.into_iter().enumerate() {
            // Cauchy–Schwarz on the overlap; per-lag counts are smaller than the full count.
            let full = (100 - leadlag_core::filters::level_filter_len(2, j + 1) + 1) as f64;
            for (l, r) in level.curve.lags.iter().zip(level.curve.rho_normalized) {
                let count = full - l.unsigned_abs() as f64;
                prop_assert!(r.abs() <= full / count + 1e-12);
            }
        }
    }

    #[test]
    fn median_and_mad_are_order_free(mut values in proptest::collection::vec(-60i64..=60, 1..50)) {
        let summary = summarize(&values).unwrap();
        prop_assert!(values.contains(&summary.median));
        prop_assert!(summary.mad >= 0);
        values.reverse();
        prop_assert_eq!(summarize(&values).unwrap(), summary);
        let below = values.iter().filter(|&&v| v <= summary.median).count();
        prop_assert!(2 * below >= values.len());
    }

    #[test]
    fn aligned_returns_telescope(
        steps in proptest::collection::vec((0.01f64..2.0, -0.1f64..0.1), 1..60),
        tau in 0.1f64..3.0,
    ) {
        let mut t = 0.0;
        let mut level = 0.0;
        let (mut times, mut values) = (vec![0.0], vec![0.0]);
        for (dt, dx) in steps {
            t += dt;
            level += dx;
            times.push(t);
            values.push(level);
        }
        let ticks = TickSeries::new(times.clone(), values.clone(), PriceScale::LogPrice).unwrap();
        let n = (t / tau).ceil().max(1.0) as usize;
        let out = align_to_grid(&ticks, 0.0, tau, n).unwrap();
        let total: f64 = out.returns.iter().sum();
        let last = values[times.partition_point(|&s| s <= n as f64 * tau) - 1];
        prop_assert!((total - last).abs() < 1e-12);
        prop_assert_eq!(out.observed.len(), n + 1);
    }
}
