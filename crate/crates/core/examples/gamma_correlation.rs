//! Monte Carlo correlation decay under the gamma clock
//! (s = 1, a = b = 1, nu = 0.75, H = 0.66) next to the exact correlation.
//!
//! `cargo run --release --example gamma_correlation -- [paths] [seed]`

use tcfbm::analytics::{cov_gamma_exact, gamma_variance, ModelSpec};
use tcfbm::estimation::{
    default_query_times, estimate_corr_curve, fit_power_law, lrd_verdict, simulate_ensemble, CurveSeries,
    EnsembleConfig, StdErrorMethod, DEFAULT_WINDOW,
};
use tcfbm::{Clock, GammaParams, MfbmParams};

fn main() -> tcfbm::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let paths = args.next().unwrap_or(20_000) as usize;
    let seed = args.next().unwrap_or(1);

    let (m, p) = (MfbmParams::new(1.0, 1.0, 0.66)?, GammaParams::new(0.75)?);
    let model = ModelSpec::new(m, Clock::Gamma(p))?;
    let times = default_query_times();
    let var_s = gamma_variance(1.0, &m, &p)?;
    let exact: Vec<f64> = times
        .as_slice()
        .iter()
        .map(|&t| Ok(cov_gamma_exact(t, 1.0, &m, &p)? / (gamma_variance(t, &m, &p)? * var_s).sqrt()))
        .collect::<tcfbm::Result<_>>()?;

    let cfg = EnsembleConfig { model, s: 1.0, query_times: times.clone(), paths, seed };
    let curve = estimate_corr_curve(&simulate_ensemble(&cfg)?, StdErrorMethod::Delta, false)?;
    println!("{:>9} {:>9} {:>9} {:>9}", "t", "corr", "se", "exact");
    for (pt, ex) in curve.points.iter().zip(&exact) {
        println!("{:>9.2} {:>9.4} {:>9.4} {:>9.4}", pt.t, pt.value, pt.std_error, ex);
    }
    let fit = fit_power_law(&curve, DEFAULT_WINDOW)?;
    let exact_fit = fit_power_law(&CurveSeries::exact(1.0, times.as_slice(), &exact)?, DEFAULT_WINDOW)?;
    let verdict = lrd_verdict(&fit, 0.95, Some(1.0 - 0.66));
    println!("fitted d = {:.4} (exact curve: {:.4}); LRD: {}", fit.d, exact_fit.d, verdict.lrd);
    Ok(())
}
