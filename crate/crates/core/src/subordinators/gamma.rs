//! Gamma subordinator: increments over a duration `t` are Gamma with shape
//! `t / nu` and unit rate.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::SubordinatorPath;
use crate::error::{domain, invalid, Result};
use crate::gaussian::TimePoints;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    pub nu: f64,
}

impl GammaParams {
    pub fn new(nu: f64) -> Result<Self> {
        let p = Self { nu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu > 0.0 && self.nu.is_finite() {
            Ok(())
        } else {
            Err(invalid(format!("gamma time scale nu must be positive, got {}", self.nu)))
        }
    }

    /// Gamma shape of an increment over `dt`.
    pub fn shape(&self, dt: f64) -> f64 {
        dt / self.nu
    }
}

/// `Gamma(q + x) / Gamma(x)` through log-gamma differences.
pub fn gamma_ratio(x: f64, q: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(domain(format!("gamma ratio argument must be positive, got {x}")));
    }
    let (num, den) = (ln_gamma(q + x), ln_gamma(x));
    if !num.is_finite() || !den.is_finite() {
        return Err(domain(format!("log-gamma not finite at x={x}, q={q}")));
    }
    Ok((num - den).exp())
}

/// `E Gamma_t^q = Gamma(q + t/nu) / Gamma(t/nu)`, asymptotically `(t/nu)^q`.
pub fn gamma_moment_exact(t: f64, q: f64, p: &GammaParams) -> Result<f64> {
    p.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("t must be positive, got {t}")));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(domain(format!("moment order must be positive, got {q}")));
    }
    let x = t / p.nu;
    if x < f64::MIN_POSITIVE {
        return Err(domain(format!("t/nu = {x} underflows the log-gamma evaluation")));
    }
    gamma_ratio(x, q)
}

/// Path of `Gamma` at `times` from independent Gamma increments.
///
/// Shapes below one use the boost `Gamma(k) = Gamma(k + 1) U^{1/k}`
/// (inside `rand_distr`); very small shapes can underflow to exact zeros.
pub fn sample_gamma_path<R: Rng + ?Sized>(
    times: &TimePoints,
    p: &GammaParams,
    rng: &mut R,
) -> Result<SubordinatorPath> {
    p.validate()?;
    if times.first() <= 0.0 {
        return Err(domain("subordinator path times must be strictly positive"));
    }
    let mut values = Vec::with_capacity(times.len());
    let mut prev_t = 0.0;
    let mut level = 0.0;
    for &t in times.as_slice() {
        let dist = Gamma::new(p.shape(t - prev_t), 1.0)
            .map_err(|e| invalid(format!("gamma increment: {e}")))?;
        level += dist.sample(rng);
        values.push(level);
        prev_t = t;
    }
    SubordinatorPath::new(times.clone(), values)
}
