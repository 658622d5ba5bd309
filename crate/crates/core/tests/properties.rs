use nalgebra::DMatrix;
use proptest::prelude::*;
use tcfbm::analytics::{cov_gamma_exact, gamma_variance};
use tcfbm::estimation::{fit_power_law, CurveSeries};
use tcfbm::gaussian::covariance_matrix;
use tcfbm::{fbm_cov, mfbm_cov, Clock, GammaParams, HurstExponent, MfbmParams, RandomStream, TimePoints, TssParams};

fn hurst() -> impl Strategy<Value = f64> {
    0.02f64..0.98
}

fn times(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(1u32..100_000, 2..max_len)
        .prop_map(|s| s.into_iter().map(|k| k as f64 / 1000.0).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mfbm_cov_is_symmetric(t in 0.0f64..100.0, s in 0.0f64..100.0, a in -2.0f64..2.0, b in -2.0f64..2.0, h in hurst()) {
        let p = MfbmParams::new(a, b, h).unwrap();
        prop_assert_eq!(mfbm_cov(t, s, &p).unwrap(), mfbm_cov(s, t, &p).unwrap());
    }

    #[test]
    fn half_hurst_is_brownian(t in 0.0f64..100.0, s in 0.0f64..100.0) {
        let c = fbm_cov(t, s, HurstExponent::new(0.5).unwrap()).unwrap();
        prop_assert!((c - t.min(s)).abs() <= 1e-12 * (1.0 + t.max(s)));
    }

    #[test]
    fn covariance_matrix_is_psd(ts in times(10), a in -2.0f64..2.0, b in -2.0f64..2.0, h in hurst()) {
        let p = MfbmParams::new(a, b, h).unwrap();
        let n = ts.len();
        let m = DMatrix::from_row_slice(n, n, &covariance_matrix(&ts, &p));
        let eig = m.symmetric_eigenvalues();
        let scale = eig.amax().max(1e-300);
        prop_assert!(eig.min() >= -1e-9 * scale, "min eigenvalue {} of {}", eig.min(), scale);
    }

    #[test]
    fn clock_paths_increase(ts in times(20), alpha in 0.1f64..0.95, lambda in 0.01f64..3.0, nu in 0.1f64..4.0, seed in any::<u64>()) {
        let tp = TimePoints::new(ts).unwrap();
        let mut rng = RandomStream::new(seed);
        for clock in [Clock::Tss(TssParams::new(alpha, lambda).unwrap()), Clock::Gamma(GammaParams::new(nu).unwrap())] {
            let v = clock.sample_path(&tp, &mut rng).unwrap().values().to_vec();
            prop_assert!(v.iter().all(|x| x.is_finite() && *x >= 0.0));
            prop_assert!(v.windows(2).all(|w| w[1] >= w[0]));
        }
    }

    #[test]
    fn same_seed_same_path(ts in times(8), seed in any::<u64>()) {
        let tp = TimePoints::new(ts).unwrap();
        let clock = Clock::Tss(TssParams::new(0.5, 0.1).unwrap());
        let a = clock.sample_path(&tp, &mut RandomStream::for_path(seed, 3)).unwrap();
        let b = clock.sample_path(&tp, &mut RandomStream::for_path(seed, 3)).unwrap();
        prop_assert_eq!(a.values(), b.values());
    }

    #[test]
    fn time_points_reject_disorder(mut ts in times(10)) {
        ts.reverse();
        prop_assert!(TimePoints::new(ts.clone()).is_err());
        prop_assert!(serde_json::from_str::<TimePoints>(&serde_json::to_string(&ts).unwrap()).is_err());
        ts.reverse();
        let tp: TimePoints = serde_json::from_str(&serde_json::to_string(&ts).unwrap()).unwrap();
        prop_assert_eq!(tp.as_slice(), &ts[..]);
    }

    #[test]
    fn gamma_cov_diagonal_is_variance(s in 0.1f64..50.0, h in hurst(), nu in 0.2f64..3.0) {
        let m = MfbmParams::new(1.0, 1.0, h).unwrap();
        let p = GammaParams::new(nu).unwrap();
        let v = gamma_variance(s, &m, &p).unwrap();
        prop_assert!((cov_gamma_exact(s, s, &m, &p).unwrap() - v).abs() <= 1e-10 * v);
    }

    #[test]
    fn fit_recovers_exact_power_law(c in 0.01f64..100.0, d in 0.05f64..1.5, k in 0.1f64..10.0) {
        let ts = TimePoints::log_spaced(2.0, 500.0, 24).unwrap().into_vec();
        let vals: Vec<f64> = ts.iter().map(|t| c * t.powf(-d)).collect();
        let fit = fit_power_law(&CurveSeries::exact(1.0, &ts, &vals).unwrap(), (50.0, 500.0)).unwrap();
        prop_assert!((fit.d - d).abs() < 1e-9 && (fit.c / c - 1.0).abs() < 1e-9);
        // rescaling the curve moves c only
        let scaled: Vec<f64> = vals.iter().map(|v| k * v).collect();
        let fit2 = fit_power_law(&CurveSeries::exact(1.0, &ts, &scaled).unwrap(), (50.0, 500.0)).unwrap();
        prop_assert!((fit2.d - fit.d).abs() < 1e-9 && (fit2.c / (k * fit.c) - 1.0).abs() < 1e-9);
    }
}
