//! Random clocks: the tempered stable and gamma subordinators.

pub mod gamma;
pub mod stable;
pub mod tss;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gaussian::TimePoints;

pub use gamma::{gamma_moment_exact, gamma_ratio, sample_gamma_path, GammaParams};
pub use stable::{
    ln_stable_density, sample_positive_stable, stable_density, stable_density_real_axis, stable_total_mass,
};
pub use tss::{
    ln_tss_density, sample_tss_path, tss_cdf, tss_density, tss_fractional_moment, tss_moment_asymptotic,
    tss_total_mass, TssParams, TssSampler,
};

/// Values of a subordinator at outer-clock times; the value at time 0 is 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SubordinatorPath {
    times: TimePoints,
    values: Vec<f64>,
}

impl SubordinatorPath {
    pub fn new(times: TimePoints, values: Vec<f64>) -> Result<Self> {
        if values.len() != times.len() {
            return Err(invalid("subordinator path needs one value per time"));
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(invalid("subordinator values must be finite and nonnegative"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("subordinator values must be nondecreasing"));
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &TimePoints {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Inner clock of the time-changed process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "clock", rename_all = "lowercase")]
pub enum Clock {
    Tss(TssParams),
    Gamma(GammaParams),
}

impl Clock {
    pub fn validate(&self) -> Result<()> {
        match self {
            Clock::Tss(p) => p.validate(),
            Clock::Gamma(p) => p.validate(),
        }
    }

    /// Exact `E S_t`.
    pub fn mean(&self, t: f64) -> f64 {
        match self {
            Clock::Tss(p) => p.mean_rate() * t,
            Clock::Gamma(p) => t / p.nu,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Clock::Tss(_) => "tss",
            Clock::Gamma(_) => "gamma",
        }
    }

    pub fn sample_path<R: Rng + ?Sized>(&self, times: &TimePoints, rng: &mut R) -> Result<SubordinatorPath> {
        match self {
            Clock::Tss(p) => sample_tss_path(times, p, rng),
            Clock::Gamma(p) => sample_gamma_path(times, p, rng),
        }
    }
}
