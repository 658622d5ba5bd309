//! Exact and large-time formulas for the time-changed process
//! `Y_t = a B_{S_t} + b B^H_{S_t}`.
//!
//! Conditioning on the clock and using independence of `B` and `B^H`,
//!
//! ```text
//! Cov(Y_t, Y_s) = a^2/2 [E S_t + E S_s - E S_{t-s}]
//!               + b^2/2 [E S_t^{2H} + E S_s^{2H} - E S_{t-s}^{2H}],   s <= t,
//! ```
//!
//! with `S_0 = 0`. The large-`t` constants come in two flavours
//! ([`FormulaVariant`]): the expressions as published, and a term-by-term
//! re-derivation that keeps the `O(1)` terms and fixes the factor-2
//! slips. Exponents agree between the two.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::gaussian::MfbmParams;
use crate::subordinators::gamma::gamma_ratio;
use crate::subordinators::tss::tss_fractional_moment;
use crate::subordinators::{Clock, GammaParams, TssParams};

/// The composite process: mixing weights plus inner clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub mixed: MfbmParams,
    pub clock: Clock,
}

impl ModelSpec {
    pub fn new(mixed: MfbmParams, clock: Clock) -> Result<Self> {
        clock.validate()?;
        Ok(Self { mixed, clock })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaVariant {
    /// Constants exactly as published.
    #[default]
    PaperStated,
    /// Constants from a full re-derivation of the same expansion.
    Rederived,
}

/// `constant + coefficient * t^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovAsymptote {
    pub constant: f64,
    pub coefficient: f64,
    pub exponent: f64,
}

impl CovAsymptote {
    pub fn eval(&self, t: f64) -> f64 {
        self.constant + self.coefficient * t.powf(self.exponent)
    }
}

/// `short * t^{-H} + long * t^{H-1}`: the two-power-law correlation decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrAsymptote {
    pub short: f64,
    pub long: f64,
    pub hurst: f64,
}

impl CorrAsymptote {
    pub fn eval(&self, t: f64) -> f64 {
        self.short * t.powf(-self.hurst) + self.long * t.powf(self.hurst - 1.0)
    }
}

fn check_ordered(t: f64, s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(domain(format!("s must be positive, got {s}")));
    }
    if !(t > s && t.is_finite()) {
        return Err(domain(format!("asymptotic formulas need s < t, got s={s}, t={t}")));
    }
    Ok(())
}

fn check_var(var_s: f64) -> Result<()> {
    if var_s > 0.0 && var_s.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("var_s must be positive, got {var_s}")))
    }
}

// ---------------------------------------------------------------------------
// Tempered stable clock
// ---------------------------------------------------------------------------

/// `E Y_s^2 = a^2 kappa s + b^2 E S_s^{2H}` with the fractional moment by quadrature.
pub fn tss_variance(s: f64, m: &MfbmParams, p: &TssParams) -> Result<f64> {
    let frac = tss_fractional_moment(s, 2.0 * m.h(), p)?;
    Ok(m.a * m.a * p.mean_rate() * s + m.b * m.b * frac)
}

/// Covariance with the fractional moments evaluated by quadrature.
pub fn cov_tss_exact(t: f64, s: f64, m: &MfbmParams, p: &TssParams) -> Result<f64> {
    if !(s > 0.0 && t >= s) {
        return Err(domain(format!("need 0 < s <= t, got s={s}, t={t}")));
    }
    let q = 2.0 * m.h();
    let mt = tss_fractional_moment(t, q, p)?;
    let ms = tss_fractional_moment(s, q, p)?;
    let mts = if t > s { tss_fractional_moment(t - s, q, p)? } else { 0.0 };
    Ok(m.a * m.a * p.mean_rate() * s + 0.5 * m.b * m.b * (mt + ms - mts))
}

pub fn cov_tss_asymptotic_terms(
    s: f64,
    m: &MfbmParams,
    p: &TssParams,
    variant: FormulaVariant,
) -> Result<CovAsymptote> {
    m.require_mixed()?;
    let (a, b, h) = (m.a, m.b, m.h());
    let kappa = p.mean_rate();
    let coefficient = b * b * h * s * kappa.powf(2.0 * h);
    let constant = match variant {
        FormulaVariant::PaperStated => 0.5 * a * a * s * kappa,
        FormulaVariant::Rederived => a * a * s * kappa + 0.5 * b * b * tss_fractional_moment(s, 2.0 * h, p)?,
    };
    Ok(CovAsymptote {
        constant,
        coefficient,
        exponent: 2.0 * h - 1.0,
    })
}

/// Large-`t` covariance for fixed `s`.
pub fn cov_tss_asymptotic(t: f64, s: f64, m: &MfbmParams, p: &TssParams, variant: FormulaVariant) -> Result<f64> {
    check_ordered(t, s)?;
    Ok(cov_tss_asymptotic_terms(s, m, p, variant)?.eval(t))
}

/// Large-`t` mean-squared displacement `E (Y_t - Y_s)^2`, as published.
pub fn msd_tss_asymptotic(t: f64, s: f64, m: &MfbmParams, p: &TssParams) -> Result<f64> {
    check_ordered(t, s)?;
    let (a2, b2, h) = (m.a * m.a, m.b * m.b, m.h());
    let k = p.mean_rate();
    let k2h = k.powf(2.0 * h);
    Ok(0.5 * a2 * t * k + b2 * h * k2h * t.powf(2.0 * h) - a2 * s * k - 2.0 * b2 * h * s * k2h * t.powf(2.0 * h - 1.0)
        + 0.5 * a2 * s * k
        + b2 * h * k2h * s.powf(2.0 * h))
}

/// Published two-power-law correlation decay for the TSS clock.
pub fn corr_tss_asymptotic_terms(s: f64, m: &MfbmParams, p: &TssParams, var_s: f64) -> Result<CorrAsymptote> {
    m.require_mixed()?;
    check_var(var_s)?;
    let (a, b, h) = (m.a, m.b.abs(), m.h());
    let k = p.mean_rate();
    let root = var_s.sqrt();
    Ok(CorrAsymptote {
        short: 0.5 * a * a * h.powf(-0.5) * s * k.powf(1.0 - h) / (b * root),
        long: b * h.sqrt() * s * k.powf(h) / root,
        hurst: h,
    })
}

pub fn corr_tss_asymptotic(t: f64, s: f64, m: &MfbmParams, p: &TssParams, var_s: f64) -> Result<f64> {
    check_ordered(t, s)?;
    Ok(corr_tss_asymptotic_terms(s, m, p, var_s)?.eval(t))
}

// ---------------------------------------------------------------------------
// Gamma clock
// ---------------------------------------------------------------------------

/// `G(u) = Gamma(2H + u/nu) / Gamma(u/nu)`, with `G(0) = 0`.
fn g_ratio(u: f64, nu: f64, h: f64) -> Result<f64> {
    if u == 0.0 {
        Ok(0.0)
    } else {
        gamma_ratio(u / nu, 2.0 * h)
    }
}

/// Exact `E Y_s^2 = a^2 s/nu + b^2 G(s)`.
pub fn gamma_variance(s: f64, m: &MfbmParams, p: &GammaParams) -> Result<f64> {
    if !(s > 0.0) {
        return Err(domain(format!("s must be positive, got {s}")));
    }
    Ok(m.a * m.a * s / p.nu + m.b * m.b * g_ratio(s, p.nu, m.h())?)
}

/// Exact covariance through gamma-function ratios, `0 < s <= t`.
pub fn cov_gamma_exact(t: f64, s: f64, m: &MfbmParams, p: &GammaParams) -> Result<f64> {
    p.validate()?;
    if !(s > 0.0 && t >= s && t.is_finite()) {
        return Err(domain(format!("need 0 < s <= t, got s={s}, t={t}")));
    }
    let (nu, h) = (p.nu, m.h());
    let f = |u: f64| u / nu;
    let brownian = 0.5 * m.a * m.a * (f(t) + f(s) - f(t - s));
    let fractional = 0.5 * m.b * m.b * (g_ratio(t, nu, h)? + g_ratio(s, nu, h)? - g_ratio(t - s, nu, h)?);
    Ok(brownian + fractional)
}

pub fn cov_gamma_asymptotic_terms(
    s: f64,
    m: &MfbmParams,
    p: &GammaParams,
    variant: FormulaVariant,
) -> Result<CovAsymptote> {
    m.require_mixed()?;
    let (a, b, h, nu) = (m.a, m.b, m.h(), p.nu);
    let nu2h = nu.powf(2.0 * h);
    let (constant, coefficient) = match variant {
        FormulaVariant::PaperStated => (a * a * s / nu, 2.0 * b * b * h * s / nu2h),
        FormulaVariant::Rederived => (
            a * a * s / nu + 0.5 * b * b * g_ratio(s, nu, h)?,
            b * b * h * s / nu2h,
        ),
    };
    Ok(CovAsymptote {
        constant,
        coefficient,
        exponent: 2.0 * h - 1.0,
    })
}

pub fn cov_gamma_asymptotic(t: f64, s: f64, m: &MfbmParams, p: &GammaParams, variant: FormulaVariant) -> Result<f64> {
    check_ordered(t, s)?;
    Ok(cov_gamma_asymptotic_terms(s, m, p, variant)?.eval(t))
}

/// Large-`t` mean-squared displacement, as published.
pub fn msd_gamma_asymptotic(t: f64, s: f64, m: &MfbmParams, p: &GammaParams) -> Result<f64> {
    check_ordered(t, s)?;
    let (a2, b2, h, nu) = (m.a * m.a, m.b * m.b, m.h(), p.nu);
    let c = 2.0 * b2 * h / nu.powf(2.0 * h);
    Ok(a2 * t / nu + c * t.powf(2.0 * h) - 2.0 * a2 * s / nu - 2.0 * c * s * t.powf(2.0 * h - 1.0)
        + a2 * s / nu
        + c * s.powf(2.0 * h))
}

/// Published two-power-law correlation decay for the gamma clock.
pub fn corr_gamma_asymptotic_terms(s: f64, m: &MfbmParams, p: &GammaParams, var_s: f64) -> Result<CorrAsymptote> {
    m.require_mixed()?;
    check_var(var_s)?;
    let (a, b, h, nu) = (m.a, m.b.abs(), m.h(), p.nu);
    let root = var_s.sqrt();
    Ok(CorrAsymptote {
        short: a * a * (2.0 * h).powf(-0.5) * s / (nu.powf(1.0 - h) * b * root),
        long: b * (2.0 * h).sqrt() * s / (nu.powf(h) * root),
        hurst: h,
    })
}

pub fn corr_gamma_asymptotic(t: f64, s: f64, m: &MfbmParams, p: &GammaParams, var_s: f64) -> Result<f64> {
    check_ordered(t, s)?;
    Ok(corr_gamma_asymptotic_terms(s, m, p, var_s)?.eval(t))
}

// ---------------------------------------------------------------------------
// Clock-generic entry points
// ---------------------------------------------------------------------------

/// `E Y_s^2`: exact for the gamma clock, quadrature for the TSS clock.
pub fn variance(s: f64, model: &ModelSpec) -> Result<f64> {
    match &model.clock {
        Clock::Tss(p) => tss_variance(s, &model.mixed, p),
        Clock::Gamma(p) => gamma_variance(s, &model.mixed, p),
    }
}

pub fn cov_asymptotic_terms(s: f64, model: &ModelSpec, variant: FormulaVariant) -> Result<CovAsymptote> {
    match &model.clock {
        Clock::Tss(p) => cov_tss_asymptotic_terms(s, &model.mixed, p, variant),
        Clock::Gamma(p) => cov_gamma_asymptotic_terms(s, &model.mixed, p, variant),
    }
}

/// Reference covariance: exact gamma ratios, or quadrature moments for TSS.
pub fn cov_reference(t: f64, s: f64, model: &ModelSpec) -> Result<f64> {
    match &model.clock {
        Clock::Tss(p) => cov_tss_exact(t, s, &model.mixed, p),
        Clock::Gamma(p) => cov_gamma_exact(t, s, &model.mixed, p),
    }
}

/// Large-`t` correlation prediction at fixed `s`.
///
/// `PaperStated` is the published two-power-law form. `Rederived` divides
/// the re-derived covariance asymptote by the leading-order standard
/// deviations, `sqrt((a^2 E S_t + b^2 (E S_t)^{2H}) var_s)`.
#[derive(Debug, Clone, Copy)]
pub enum CorrPrediction {
    Published(CorrAsymptote),
    Rederived {
        cov: CovAsymptote,
        model: ModelSpec,
        var_s: f64,
    },
}

impl CorrPrediction {
    pub fn new(s: f64, model: &ModelSpec, var_s: f64, variant: FormulaVariant) -> Result<Self> {
        match variant {
            FormulaVariant::PaperStated => Ok(Self::Published(match &model.clock {
                Clock::Tss(p) => corr_tss_asymptotic_terms(s, &model.mixed, p, var_s)?,
                Clock::Gamma(p) => corr_gamma_asymptotic_terms(s, &model.mixed, p, var_s)?,
            })),
            FormulaVariant::Rederived => {
                check_var(var_s)?;
                Ok(Self::Rederived {
                    cov: cov_asymptotic_terms(s, model, variant)?,
                    model: *model,
                    var_s,
                })
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Published(c) => c.eval(t),
            Self::Rederived { cov, model, var_s } => {
                let m = &model.mixed;
                let mean_t = model.clock.mean(t);
                let var_t = m.a * m.a * mean_t + m.b * m.b * mean_t.powf(2.0 * m.h());
                cov.eval(t) / (var_t * var_s).sqrt()
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Pure-fBm special case (a = 0, b = 1)
// ---------------------------------------------------------------------------

/// `Cov ~ H s kappa^{2H} t^{2H-1}` for `a = 0, b = 1`.
pub fn pure_fbm_tss_cov_terms(s: f64, h: f64, p: &TssParams) -> CovAsymptote {
    CovAsymptote {
        constant: 0.0,
        coefficient: h * s * p.mean_rate().powf(2.0 * h),
        exponent: 2.0 * h - 1.0,
    }
}

/// `Corr ~ H s^{1-H} t^{H-1}` for `a = 0, b = 1`.
pub fn pure_fbm_tss_corr(t: f64, s: f64, h: f64) -> f64 {
    h * s.powf(1.0 - h) * t.powf(h - 1.0)
}

/// `Cov ~ (2 H s / nu^{2H}) t^{2H-1}` for `a = 0, b = 1`.
pub fn pure_fbm_gamma_cov_terms(s: f64, h: f64, p: &GammaParams) -> CovAsymptote {
    CovAsymptote {
        constant: 0.0,
        coefficient: 2.0 * h * s / p.nu.powf(2.0 * h),
        exponent: 2.0 * h - 1.0,
    }
}

/// `Corr ~ 2 H s / (nu^H sqrt(var_s)) t^{H-1}` for `a = 0, b = 1`, printed constant.
pub fn pure_fbm_gamma_corr(t: f64, s: f64, h: f64, p: &GammaParams, var_s: f64) -> f64 {
    2.0 * h * s / (p.nu.powf(h) * var_s.sqrt()) * t.powf(h - 1.0)
}

// ---------------------------------------------------------------------------
// Gamma-ratio Taylor expansions
// ---------------------------------------------------------------------------

/// Exact shift ratios `g(x+h)/g(x)`, `f(x+h)/f(x)` for
/// `g(x) = Gamma(x + 2H)/Gamma(x)` and `f(x) = Gamma(x + 1)/Gamma(x) = x`,
/// next to their truncated expansions
/// `1 + 2H (h/x) + H (2H - 1) (h/x)^2` and `1 + h/x`. The `g` residual is
/// `-H (2H - 1) h / x^2` to leading order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioExpansion {
    pub g_exact: f64,
    pub g_expansion: f64,
    pub f_exact: f64,
    pub f_expansion: f64,
}

pub fn gamma_ratio_expansion_check(x: f64, step: f64, h: f64) -> Result<RatioExpansion> {
    if !(x > 0.0 && step.abs() < x) {
        return Err(domain(format!("expansion needs x > 0 and |h| < x, got x={x}, h={step}")));
    }
    let q = 2.0 * h;
    let g_exact = (statrs::function::gamma::ln_gamma(x + step + q)
        - statrs::function::gamma::ln_gamma(x + step)
        - statrs::function::gamma::ln_gamma(x + q)
        + statrs::function::gamma::ln_gamma(x))
    .exp();
    let r = step / x;
    Ok(RatioExpansion {
        g_exact,
        g_expansion: 1.0 + q * r + h * (q - 1.0) * r * r,
        f_exact: (x + step) / x,
        f_expansion: 1.0 + r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subordinators::gamma_moment_exact;

    fn mixed(a: f64, b: f64, h: f64) -> MfbmParams {
        MfbmParams::new(a, b, h).unwrap()
    }

    fn fig1() -> TssParams {
        TssParams::new(0.5, 0.1).unwrap()
    }

    fn fig2() -> GammaParams {
        GammaParams::new(0.75).unwrap()
    }

    #[test]
    fn tss_cov_published_fixture() {
        // mpmath: 0.5*kappa + 0.7*kappa^1.4*100^0.4 with kappa = 0.5*0.1^-0.5
        let v = cov_tss_asymptotic(100.0, 1.0, &mixed(1.0, 1.0, 0.7), &fig1(), FormulaVariant::PaperStated).unwrap();
        assert!((v - 9.178_523_530_532_26).abs() < 1e-9, "{v}");
    }

    #[test]
    fn tss_cov_rejects_degenerate_inputs() {
        let p = fig1();
        assert!(cov_tss_asymptotic(100.0, 1.0, &mixed(1.0, 0.0, 0.7), &p, FormulaVariant::PaperStated).is_err());
        assert!(cov_tss_asymptotic(1.0, 1.0, &mixed(1.0, 1.0, 0.7), &p, FormulaVariant::PaperStated).is_err());
        assert!(cov_tss_asymptotic(0.5, 1.0, &mixed(1.0, 1.0, 0.7), &p, FormulaVariant::PaperStated).is_err());
    }

    #[test]
    fn tss_cov_pure_fbm_leading_term_both_variants() {
        let p = fig1();
        let pure = pure_fbm_tss_cov_terms(1.0, 0.7, &p);
        for v in [FormulaVariant::PaperStated, FormulaVariant::Rederived] {
            let terms = cov_tss_asymptotic_terms(1.0, &mixed(0.0, 1.0, 0.7), &p, v).unwrap();
            assert_eq!(terms.coefficient, pure.coefficient);
            assert_eq!(terms.exponent, pure.exponent);
        }
        let published = cov_tss_asymptotic_terms(1.0, &mixed(0.0, 1.0, 0.7), &p, FormulaVariant::PaperStated).unwrap();
        assert_eq!(published.constant, 0.0);
    }

    #[test]
    fn tss_msd_fixture() {
        // H = 1/2, a = 0, b = 1: 0.5 k t - k s + 0.5 k s at s = 1, t = 100.
        let v = msd_tss_asymptotic(100.0, 1.0, &mixed(0.0, 1.0, 0.5), &fig1()).unwrap();
        assert!((v - 78.266_372_089_167_39).abs() < 1e-9, "{v}");
    }

    #[test]
    fn tss_msd_leading_order() {
        let m = mixed(1.0, 1.0, 0.7);
        let p = fig1();
        let t: f64 = 1e6;
        let ratio = msd_tss_asymptotic(t, 1.0, &m, &p).unwrap() / t.powf(1.4);
        let lead = 0.7 * p.mean_rate().powf(1.4);
        assert!((ratio / lead - 1.0).abs() < 0.01);
    }

    #[test]
    fn tss_msd_continuous_near_s() {
        let m = mixed(1.0, 1.0, 0.7);
        let p = fig1();
        let a = msd_tss_asymptotic(1.0 + 1e-9, 1.0, &m, &p).unwrap();
        let b = msd_tss_asymptotic(1.0 + 2e-9, 1.0, &m, &p).unwrap();
        assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn tss_corr_pure_fbm_against_remark() {
        // With var_s = (kappa s)^{2H} the published theorem constant is
        // H^{1/2} s^{1-H} from the mixed result; the pure-fBm shortcut uses H s^{1-H}. Exponents agree.
        let (h, s, t) = (0.7, 1.0, 250.0);
        let p = fig1();
        let var_s = (p.mean_rate() * s).powf(2.0 * h);
        let terms = corr_tss_asymptotic_terms(s, &mixed(0.0, 1.0, h), &p, var_s).unwrap();
        assert_eq!(terms.short, 0.0);
        let ratio = terms.eval(t) / pure_fbm_tss_corr(t, s, h);
        assert!((ratio - h.powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn corr_rejects_nonpositive_variance() {
        let m = mixed(1.0, 1.0, 0.7);
        assert!(corr_tss_asymptotic(10.0, 1.0, &m, &fig1(), 0.0).is_err());
        assert!(corr_gamma_asymptotic(10.0, 1.0, &m, &fig2(), -1.0).is_err());
    }

    #[test]
    fn corr_mixture_decay() {
        let m = mixed(1.0, 1.0, 0.7);
        let terms = corr_tss_asymptotic_terms(1.0, &m, &fig1(), 3.0).unwrap();
        let scaled: Vec<f64> = [1e2, 1e4, 1e6, 1e8].iter().map(|t| terms.eval(*t) * t.powf(0.3)).collect();
        assert!(scaled.windows(2).all(|w| w[1] < w[0]));
        assert!((scaled[3] / terms.long - 1.0).abs() < 1e-3);
        assert!(terms.eval(1e12) < 1e-3);
    }

    #[test]
    fn gamma_cov_exact_examples() {
        let p = fig2();
        let m = mixed(1.0, 1.0, 0.66);
        for t in [0.5, 1.0, 10.0] {
            let var = cov_gamma_exact(t, t, &m, &p).unwrap();
            let exact = t / 0.75 + gamma_moment_exact(t, 1.32, &p).unwrap();
            assert!((var - exact).abs() < 1e-12 * exact);
        }
        let v = cov_gamma_exact(2.0, 1.0, &mixed(0.0, 1.0, 0.5), &p).unwrap();
        assert!((v - 1.0 / 0.75).abs() < 1e-12);
        for h in [0.2, 0.9] {
            let v = cov_gamma_exact(7.0, 3.0, &mixed(1.0, 0.0, h), &p).unwrap();
            assert!((v - 3.0 / 0.75).abs() < 1e-12);
        }
        assert!(cov_gamma_exact(1.0, 2.0, &m, &p).is_err());
    }

    #[test]
    fn gamma_cov_h_half_degeneracy() {
        let p = fig2();
        let m = mixed(0.8, 1.3, 0.5);
        let v = cov_gamma_exact(9.0, 2.0, &m, &p).unwrap();
        assert!((v - (0.64 + 1.69) * 2.0 / 0.75).abs() < 1e-10);
    }

    #[test]
    fn gamma_cov_published_fixture() {
        // mpmath: 1/0.75 + 2*0.66/0.75^1.32 * 100^0.32
        let v = cov_gamma_asymptotic(100.0, 1.0, &mixed(1.0, 1.0, 0.66), &fig2(), FormulaVariant::PaperStated).unwrap();
        assert!((v - 9.756_842_707_908_12).abs() < 1e-9, "{v}");
    }

    #[test]
    fn gamma_variant_adjudication() {
        let m = mixed(1.0, 1.0, 0.66);
        let p = fig2();
        let exact = cov_gamma_exact(1e4, 1.0, &m, &p).unwrap();
        let published = cov_gamma_asymptotic(1e4, 1.0, &m, &p, FormulaVariant::PaperStated).unwrap();
        let red = cov_gamma_asymptotic(1e4, 1.0, &m, &p, FormulaVariant::Rederived).unwrap();
        assert!((exact - red).abs() < (exact - published).abs());
    }

    #[test]
    fn gamma_pure_fbm_leading_term() {
        let p = fig2();
        let published = cov_gamma_asymptotic_terms(1.0, &mixed(0.0, 1.0, 0.66), &p, FormulaVariant::PaperStated).unwrap();
        let pure = pure_fbm_gamma_cov_terms(1.0, 0.66, &p);
        assert_eq!(published.coefficient, pure.coefficient);
        assert_eq!(published.constant, pure.constant);
    }

    #[test]
    fn gamma_corr_pure_fbm_constant_gap() {
        // Mixed-result constant (2H)^{1/2} against the pure-fBm shortcut 2H.
        let (h, s, t) = (0.66, 1.0, 300.0);
        let p = fig2();
        let m = mixed(0.0, 1.0, h);
        let var_s = gamma_variance(s, &m, &p).unwrap();
        let terms = corr_gamma_asymptotic_terms(s, &m, &p, var_s).unwrap();
        assert_eq!(terms.short, 0.0);
        let ratio = terms.eval(t) / pure_fbm_gamma_corr(t, s, h, &p, var_s);
        assert!((ratio - (2.0 * h).powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn gamma_msd_examples() {
        let p = fig2();
        let v = msd_gamma_asymptotic(9.0, 2.0, &mixed(1.0, 0.0, 0.3), &p).unwrap();
        assert!((v - 7.0 / 0.75).abs() < 1e-12);
        let t: f64 = 1e6;
        let m = mixed(1.0, 1.0, 0.66);
        let ratio = msd_gamma_asymptotic(t, 1.0, &m, &p).unwrap() / t.powf(1.32);
        assert!((ratio / (2.0 * 0.66 / 0.75f64.powf(1.32)) - 1.0).abs() < 0.01);
    }

    #[test]
    fn gamma_msd_fixture() {
        // mpmath: t/nu + c t^{2H} - 2 s/nu - 2 c s t^{2H-1} + s/nu + c s^{2H}, c = 2H/nu^{2H}
        let v = msd_gamma_asymptotic(100.0, 1.0, &mixed(1.0, 1.0, 0.66), &fig2()).unwrap();
        assert!((v - 959.433_633_223_228_9).abs() < 1e-8, "{v}");
    }

    #[test]
    fn gamma_corr_fixture() {
        let m = mixed(1.0, 1.0, 0.66);
        let p = fig2();
        let var_s = gamma_variance(1.0, &m, &p).unwrap();
        let v = corr_gamma_asymptotic(100.0, 1.0, &m, &p, var_s).unwrap();
        // mpmath with var_s = 1/0.75 + Gamma(1.32 + 4/3)/Gamma(4/3)
        assert!((v - 0.194_062_928_266_540_5).abs() < 1e-10, "{v}");
    }

    #[test]
    fn expansion_orders() {
        let r = gamma_ratio_expansion_check(100.0, 1.0, 0.7).unwrap();
        assert!((r.f_exact - r.f_expansion).abs() < 1e-15);
        // The residual is -H (2H - 1) h / x^2 + O(x^-3), second order.
        let d1 = (r.g_exact - r.g_expansion).abs();
        assert!((d1 / (0.7 * 0.4 / 1e4) - 1.0).abs() < 0.05, "{d1}");
        let r2 = gamma_ratio_expansion_check(200.0, 1.0, 0.7).unwrap();
        let d2 = (r2.g_exact - r2.g_expansion).abs();
        let shrink = d1 / d2;
        assert!((3.5..=4.5).contains(&shrink), "shrink {shrink}");
    }
}
