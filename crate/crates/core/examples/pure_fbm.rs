//! Pure fractional component (a = 0, b = 1) under both clocks: exponent of
//! the exact correlation tail on [50, 500] against 1 - H, and the ratio of
//! the exact correlation to `H s^{1-H} t^{H-1}`.

use tcfbm::analytics::{cov_reference, pure_fbm_tss_corr, variance, ModelSpec};
use tcfbm::estimation::{default_query_times, fit_power_law, CurveSeries, DEFAULT_WINDOW};
use tcfbm::{Clock, GammaParams, MfbmParams, TssParams};

fn main() -> tcfbm::Result<()> {
    let times = default_query_times();
    let clocks = [Clock::Tss(TssParams::new(0.5, 0.1)?), Clock::Gamma(GammaParams::new(0.75)?)];
    println!("{:>6} {:>5} {:>8} {:>8} {:>16}", "clock", "H", "d", "1-H", "ratio at t=500");
    for clock in clocks {
        for h in [0.3, 0.5, 0.7] {
            let model = ModelSpec::new(MfbmParams::new(0.0, 1.0, h)?, clock)?;
            let var_s = variance(1.0, &model)?;
            let corr: Vec<f64> = times
                .as_slice()
                .iter()
                .map(|&t| Ok(cov_reference(t, 1.0, &model)? / (variance(t, &model)? * var_s).sqrt()))
                .collect::<tcfbm::Result<_>>()?;
            let fit = fit_power_law(&CurveSeries::exact(1.0, times.as_slice(), &corr)?, DEFAULT_WINDOW)?;
            let ratio = corr[corr.len() - 1] / pure_fbm_tss_corr(500.0, 1.0, h);
            println!("{:>6} {h:>5} {:>8.4} {:>8.4} {ratio:>16.4}", clock.name(), fit.d, 1.0 - h);
        }
    }
    Ok(())
}
