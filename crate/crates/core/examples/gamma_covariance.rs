//! Exact covariance under the gamma clock against the two large-t
//! expansions, showing which constant matches.

use tcfbm::analytics::{cov_gamma_asymptotic, cov_gamma_exact, FormulaVariant};
use tcfbm::{GammaParams, MfbmParams};

fn main() -> tcfbm::Result<()> {
    let m = MfbmParams::new(1.0, 1.0, 0.66)?;
    let p = GammaParams::new(0.75)?;
    println!("{:>8} {:>14} {:>14} {:>14}", "t", "exact", "published", "rederived");
    for t in [1e1, 1e2, 1e3, 1e4, 1e5] {
        println!(
            "{t:>8} {:>14.6} {:>14.6} {:>14.6}",
            cov_gamma_exact(t, 1.0, &m, &p)?,
            cov_gamma_asymptotic(t, 1.0, &m, &p, FormulaVariant::PaperStated)?,
            cov_gamma_asymptotic(t, 1.0, &m, &p, FormulaVariant::Rederived)?,
        );
    }
    Ok(())
}
