//! Sample tempered stable and gamma clocks and compare moments with theory.

use tcfbm::subordinators::{sample_gamma_path, TssSampler};
use tcfbm::{GammaParams, RandomStream, TimePoints, TssParams};

fn main() -> tcfbm::Result<()> {
    let tss = TssParams::new(0.5, 0.1)?;
    let sampler = TssSampler::new(tss)?;
    let mut rng = RandomStream::new(3);
    let n = 100_000;
    let draws: Vec<f64> = (0..n).map(|_| sampler.sample_increment(1.0, &mut rng)).collect::<Result<_, _>>()?;
    let mean = draws.iter().sum::<f64>() / n as f64;
    let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    println!("TSS(alpha = 0.5, lambda = 0.1), S_1 over {n} draws");
    println!("  mean     {mean:.4}  exact {:.4}", tss.mean_rate());
    println!("  variance {var:.4}  exact {:.4}", tss.variance_rate());
    println!("  acceptance per proposal exp(-lambda^alpha dt) at dt = 1: {:.4}", (-tss.lambda.powf(tss.alpha)).exp());

    let times = TimePoints::new(vec![1.0, 2.0, 5.0, 10.0])?;
    let path = sampler.sample_path(&times, &mut rng)?;
    println!("one TSS path:   {:?}", path.values());

    let gamma = GammaParams::new(0.75)?;
    let path = sample_gamma_path(&times, &gamma, &mut rng)?;
    println!("one gamma path: {:?}", path.values());
    Ok(())
}
