//! Covariance kernels and exact Gaussian sampling.

use tcfbm::gaussian::fgn_autocov;
use tcfbm::{fbm_cov, mfbm_cov, sample_fgn_grid, sample_mfbm_at_times, HurstExponent, MfbmParams, RandomStream, TimePoints};

fn main() -> tcfbm::Result<()> {
    let h = HurstExponent::new(0.75)?;
    println!("fBm cov(4, 1), H = 0.75: {:.12}", fbm_cov(4.0, 1.0, h)?);
    let p = MfbmParams::new(1.0, 1.0, 0.75)?;
    println!("mfBm cov(4, 1), a = b = 1: {:.12}", mfbm_cov(4.0, 1.0, &p)?);

    let times = TimePoints::log_spaced(0.1, 100.0, 6)?;
    let mut rng = RandomStream::new(1);
    let path = sample_mfbm_at_times(&times, &p, &mut rng)?;
    for (t, y) in times.as_slice().iter().zip(&path) {
        println!("  N({t:8.3}) = {y:+.4}");
    }

    let n = 1 << 14;
    let fgn = sample_fgn_grid(n, 1.0, h, &mut rng)?;
    let lag1 = fgn.windows(2).map(|w| w[0] * w[1]).sum::<f64>() / (n - 1) as f64;
    let var = fgn.iter().map(|x| x * x).sum::<f64>() / n as f64;
    println!(
        "fGn, {n} points: variance {var:.4} (exact 1), lag-1 autocovariance {lag1:.4} (exact {:.4})",
        fgn_autocov(1, 1.0, 0.75)
    );
    Ok(())
}
