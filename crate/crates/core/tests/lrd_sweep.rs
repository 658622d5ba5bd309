//! Slow Monte Carlo sweeps over the Hurst index (2·10^5 paths per run).

use tcfbm::analytics::ModelSpec;
use tcfbm::estimation::{
    default_query_times, estimate_corr_curve, fit_power_law, lrd_verdict, simulate_ensemble, EnsembleConfig,
    PowerLawFit, StdErrorMethod, DEFAULT_WINDOW,
};
use tcfbm::{Clock, GammaParams, MfbmParams, TssParams};

const PATHS: usize = 200_000;

fn clocks() -> [Clock; 2] {
    [
        Clock::Tss(TssParams::new(0.5, 0.1).unwrap()),
        Clock::Gamma(GammaParams::new(0.75).unwrap()),
    ]
}

fn fitted(a: f64, b: f64, h: f64, clock: Clock, seed: u64) -> PowerLawFit {
    let cfg = EnsembleConfig {
        model: ModelSpec::new(MfbmParams::new(a, b, h).unwrap(), clock).unwrap(),
        s: 1.0,
        query_times: default_query_times(),
        paths: PATHS,
        seed,
    };
    let e = simulate_ensemble(&cfg).unwrap();
    let curve = estimate_corr_curve(&e, StdErrorMethod::default(), false).unwrap();
    fit_power_law(&curve, DEFAULT_WINDOW).unwrap()
}

#[test]
fn mixed_model_is_long_range_dependent_above_half() {
    for clock in clocks() {
        for (k, h) in [0.55, 0.66, 0.7, 0.8].into_iter().enumerate() {
            let fit = fitted(1.0, 1.0, h, clock, 50 + k as u64);
            let v = lrd_verdict(&fit, 0.95, None);
            assert!(v.lrd, "{} H={h}: d = {} in ({}, {})", clock.name(), v.d, v.d_ci_low, v.d_ci_high);
        }
    }
}

#[test]
fn pure_fbm_decay_above_half() {
    for clock in clocks() {
        for h in [0.5, 0.7] {
            let fit = fitted(0.0, 1.0, h, clock, 41);
            assert!((fit.d - (1.0 - h)).abs() <= 0.05, "{} H={h}: d = {}", clock.name(), fit.d);
        }
    }
}

// Below one half the pure fractional component on either clock decays like
// t^{-H}, not t^{H-1}.
#[test]
fn pure_fbm_decay_below_half() {
    for clock in clocks() {
        let fit = fitted(0.0, 1.0, 0.3, clock, 41);
        assert!((fit.d - 0.3).abs() <= 0.05, "{}: d = {}", clock.name(), fit.d);
    }
}
