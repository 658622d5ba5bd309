//! One-sided stable and tempered stable densities, and fractional moments
//! of the tempered stable clock by quadrature.

use std::f64::consts::PI;

use tcfbm::subordinators::{stable_density, tss_density, tss_fractional_moment, tss_moment_asymptotic, tss_total_mass};
use tcfbm::TssParams;

fn main() -> tcfbm::Result<()> {
    println!("alpha = 1/2 against the Levy density");
    for x in [0.05f64, 0.25, 1.0, 4.0, 50.0] {
        let levy = (-0.25 / x).exp() / (2.0 * PI.sqrt() * x.powf(1.5));
        println!("  x = {x:6}: {:.12e}  closed form {levy:.12e}", stable_density(x, 1.0, 0.5)?);
    }

    let p = TssParams::new(0.5, 0.1)?;
    println!("tempered stable, alpha = 0.5, lambda = 0.1");
    for t in [1.0, 10.0] {
        println!("  t = {t}: mass {:.12}, f(1) = {:.6e}", tss_total_mass(t, &p)?, tss_density(1.0, t, &p)?);
    }
    for (t, q) in [(1.0, 1.0), (100.0, 1.4), (1000.0, 1.4)] {
        println!(
            "  E S_{t}^{q}: {:.6}  large-t form {:.6}",
            tss_fractional_moment(t, q, &p)?,
            tss_moment_asymptotic(t, q, &p)?
        );
    }
    Ok(())
}
