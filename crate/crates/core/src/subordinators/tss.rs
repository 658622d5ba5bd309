//! Tempered stable subordinator.
//!
//! Increments over a duration `t` have density
//! `exp(-lambda x + lambda^alpha t) f_alpha(x, t)` with `f_alpha` the
//! one-sided stable density, equivalently Laplace transform
//! `exp(-t ((lambda + u)^alpha - lambda^alpha))`. The mean is exactly
//! `alpha lambda^{alpha-1} t`; other moments are evaluated by quadrature.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::stable::{check_alpha, ln_stable_density, sample_positive_stable};
use super::SubordinatorPath;
use crate::error::{domain, invalid, Error, Result};
use crate::gaussian::TimePoints;
use crate::quadrature::Quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TssParams {
    pub alpha: f64,
    pub lambda: f64,
}

impl TssParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        let p = Self { alpha, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(invalid(format!("tempering rate lambda must be positive, got {}", self.lambda)));
        }
        Ok(())
    }

    /// `alpha lambda^{alpha - 1}`: `E S_t = mean_rate * t`.
    pub fn mean_rate(&self) -> f64 {
        self.alpha * self.lambda.powf(self.alpha - 1.0)
    }

    /// `alpha (1 - alpha) lambda^{alpha - 2}`: `Var S_t = variance_rate * t`.
    pub fn variance_rate(&self) -> f64 {
        self.alpha * (1.0 - self.alpha) * self.lambda.powf(self.alpha - 2.0)
    }

    /// `(lambda + u)^alpha - lambda^alpha`.
    pub fn laplace_exponent(&self, u: f64) -> f64 {
        (self.lambda + u).powf(self.alpha) - self.lambda.powf(self.alpha)
    }

    /// `E exp(-u S_t)`.
    pub fn laplace_transform(&self, u: f64, t: f64) -> f64 {
        (-t * self.laplace_exponent(u)).exp()
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Large-`t` equivalent of `E S_t^q`: `(alpha lambda^{alpha-1} t)^q`.
/// Exact for `q = 1`.
pub fn tss_moment_asymptotic(t: f64, q: f64, p: &TssParams) -> Result<f64> {
    p.validate()?;
    check_positive("t", t)?;
    check_positive("q", q)?;
    Ok((p.mean_rate() * t).powf(q))
}

pub const DEFAULT_MAX_PROPOSALS: u64 = 1_000_000;

/// Exponential-tilting rejection sampler.
///
/// A stable increment `x` over `dt` is accepted with probability
/// `exp(-lambda x)`; the acceptance rate is `exp(-lambda^alpha dt)`.
/// Durations longer than `max_step` are split into equal sub-steps, which
/// is exact because increments are infinitely divisible.
#[derive(Debug, Clone, Copy)]
pub struct TssSampler {
    params: TssParams,
    max_step: f64,
    max_proposals: u64,
}

impl TssSampler {
    /// Default sub-step `1 / lambda^alpha` (acceptance at least `e^{-1}`),
    /// which minimises the expected proposal count per unit time.
    pub fn new(params: TssParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            max_step: params.lambda.powf(-params.alpha),
            max_proposals: DEFAULT_MAX_PROPOSALS,
        })
    }

    pub fn with_max_step(mut self, max_step: f64) -> Result<Self> {
        check_positive("max_step", max_step)?;
        self.max_step = max_step;
        Ok(self)
    }

    pub fn with_max_proposals(mut self, cap: u64) -> Self {
        self.max_proposals = cap.max(1);
        self
    }

    pub fn params(&self) -> &TssParams {
        &self.params
    }

    pub fn max_step(&self) -> f64 {
        self.max_step
    }

    /// One tilted draw over `dt` without sub-stepping, plus the number of
    /// stable proposals it took.
    pub fn tilted_draw<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> Result<(f64, u64)> {
        let TssParams { alpha, lambda } = self.params;
        for n in 1..=self.max_proposals {
            let x = sample_positive_stable(alpha, dt, rng);
            let u: f64 = rng.random();
            if u < (-lambda * x).exp() {
                return Ok((x, n));
            }
        }
        Err(Error::RejectionCap {
            cap: self.max_proposals,
        })
    }

    /// Increment over a duration `dt > 0`.
    pub fn sample_increment<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> Result<f64> {
        check_positive("increment duration", dt)?;
        let pieces = (dt / self.max_step).ceil().max(1.0) as usize;
        let step = dt / pieces as f64;
        let mut total = 0.0;
        for _ in 0..pieces {
            total += self.tilted_draw(step, rng)?.0;
        }
        Ok(total)
    }

    pub fn sample_path<R: Rng + ?Sized>(&self, times: &TimePoints, rng: &mut R) -> Result<SubordinatorPath> {
        if times.first() <= 0.0 {
            return Err(domain("subordinator path times must be strictly positive"));
        }
        let mut values = Vec::with_capacity(times.len());
        let mut prev_t = 0.0;
        let mut level = 0.0;
        for &t in times.as_slice() {
            level += self.sample_increment(t - prev_t, rng)?;
            values.push(level);
            prev_t = t;
        }
        SubordinatorPath::new(times.clone(), values)
    }
}

/// Path of `S` at `times`, sampled with the default sampler settings.
pub fn sample_tss_path<R: Rng + ?Sized>(times: &TimePoints, p: &TssParams, rng: &mut R) -> Result<SubordinatorPath> {
    TssSampler::new(*p)?.sample_path(times, rng)
}

/// Natural log of the tempered density.
pub fn ln_tss_density(x: f64, t: f64, p: &TssParams) -> Result<f64> {
    p.validate()?;
    let ln_f = ln_stable_density(x, t, p.alpha)?;
    Ok(ln_f - p.lambda * x + p.lambda.powf(p.alpha) * t)
}

/// `exp(-lambda x + lambda^alpha t) f_alpha(x, t)`.
pub fn tss_density(x: f64, t: f64, p: &TssParams) -> Result<f64> {
    Ok(ln_tss_density(x, t, p)?.exp())
}

/// Quadrature layout for integrals against the density over `x > 0`.
fn panel_layout(t: f64, p: &TssParams) -> (f64, f64) {
    let mean = p.mean_rate() * t;
    let sd = (p.variance_rate() * t).sqrt();
    let initial = 0.25 * mean.min(sd);
    let extent = mean + 12.0 * sd;
    (initial, extent)
}

/// `E S_t^q = int_0^inf x^q f_{lambda,alpha}(x, t) dx` by quadrature.
pub fn tss_fractional_moment(t: f64, q: f64, p: &TssParams) -> Result<f64> {
    p.validate()?;
    check_positive("t", t)?;
    check_positive("q", q)?;
    let integrand = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        match ln_tss_density(x, t, p) {
            Ok(ln_f) => (ln_f + q * x.ln()).exp(),
            Err(_) => f64::NAN,
        }
    };
    let (initial, extent) = panel_layout(t, p);
    let est = Quadrature::default().integrate_to_infinity(integrand, 0.0, initial, extent)?;
    if !est.value.is_finite() {
        return Err(Error::Quadrature {
            achieved: f64::INFINITY,
            requested: crate::quadrature::REQUIRED_REL_TOL,
        });
    }
    Ok(est.value)
}

/// Total mass of the density, for normalization checks.
pub fn tss_total_mass(t: f64, p: &TssParams) -> Result<f64> {
    p.validate()?;
    check_positive("t", t)?;
    let integrand = |x: f64| if x <= 0.0 { 0.0 } else { tss_density(x, t, p).unwrap_or(f64::NAN) };
    let (initial, extent) = panel_layout(t, p);
    Ok(Quadrature::default()
        .integrate_to_infinity(integrand, 0.0, initial, extent)?
        .value)
}

/// Distribution function at sorted points `xs`, integrating the density
/// between consecutive points.
pub fn tss_cdf(xs: &[f64], t: f64, p: &TssParams) -> Result<Vec<f64>> {
    p.validate()?;
    check_positive("t", t)?;
    if xs.windows(2).any(|w| w[1] < w[0]) || xs.first().is_some_and(|x| *x < 0.0) {
        return Err(invalid("cdf points must be sorted and nonnegative"));
    }
    let q = Quadrature {
        max_subdivisions: 100,
        ..Quadrature::default()
    };
    let integrand = |x: f64| if x <= 0.0 { 0.0 } else { tss_density(x, t, p).unwrap_or(f64::NAN) };
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = 0.0;
    let mut lo = 0.0;
    for &x in xs {
        if x > lo {
            acc += q.integrate(integrand, lo, x)?.value;
            lo = x;
        }
        out.push(acc.min(1.0));
    }
    Ok(out)
}
