//! Monte Carlo correlation decay under the tempered stable clock
//! (s = 1, a = b = 1, lambda = 0.1, alpha = 0.5, H = 0.7), with a
//! power-law tail fit and the long-range-dependence verdict.
//!
//! `cargo run --release --example tss_correlation -- [paths] [seed]`

use tcfbm::analytics::{variance, CorrPrediction, FormulaVariant, ModelSpec};
use tcfbm::estimation::{
    default_query_times, estimate_corr_curve, fit_power_law, lrd_verdict, simulate_ensemble, EnsembleConfig,
    StdErrorMethod, DEFAULT_WINDOW,
};
use tcfbm::{Clock, MfbmParams, TssParams};

fn main() -> tcfbm::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let paths = args.next().unwrap_or(20_000) as usize;
    let seed = args.next().unwrap_or(1);

    let model = ModelSpec::new(MfbmParams::new(1.0, 1.0, 0.7)?, Clock::Tss(TssParams::new(0.5, 0.1)?))?;
    let cfg = EnsembleConfig { model, s: 1.0, query_times: default_query_times(), paths, seed };
    let ensemble = simulate_ensemble(&cfg)?;
    let curve = estimate_corr_curve(&ensemble, StdErrorMethod::Delta, false)?;
    let prediction = CorrPrediction::new(1.0, &model, variance(1.0, &model)?, FormulaVariant::PaperStated)?;

    println!("{:>9} {:>9} {:>9} {:>11}", "t", "corr", "se", "asymptotic");
    for p in &curve.points {
        println!("{:>9.2} {:>9.4} {:>9.4} {:>11.4}", p.t, p.value, p.std_error, prediction.eval(p.t));
    }
    let fit = fit_power_law(&curve, DEFAULT_WINDOW)?;
    let verdict = lrd_verdict(&fit, 0.95, Some(0.3));
    println!(
        "fit on [50, 500]: c = {:.4}, d = {:.4} ({:.4}, {:.4}), r2 = {:.4}; LRD: {}",
        fit.c, fit.d, verdict.d_ci_low, verdict.d_ci_high, fit.r_squared, verdict.lrd
    );
    Ok(())
}
