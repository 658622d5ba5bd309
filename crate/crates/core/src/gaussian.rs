//! Fractional and mixed fractional Brownian motion: covariance kernels and
//! exact Gaussian sampling.
//!
//! Sampling at arbitrary time points factorizes the pairwise covariance
//! matrix (lower Cholesky). Subordinated time points are random and can
//! nearly coincide, so the factorization retries with a small diagonal
//! jitter before giving up. A circulant-embedding generator for fractional
//! Gaussian noise on a uniform grid is provided for throughput work.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};

/// Hurst exponent, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstExponent(f64);

impl HurstExponent {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(invalid(format!("Hurst exponent must lie in (0, 1), got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `2H`, the exponent of the variance function.
    pub fn twice(self) -> f64 {
        2.0 * self.0
    }
}

impl TryFrom<f64> for HurstExponent {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<HurstExponent> for f64 {
    fn from(h: HurstExponent) -> f64 {
        h.0
    }
}

/// Weights of `a * B_t + b * B^H_t` with independent `B` and `B^H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MfbmParams {
    pub a: f64,
    pub b: f64,
    pub hurst: HurstExponent,
}

impl MfbmParams {
    pub fn new(a: f64, b: f64, hurst: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(invalid(format!("mixing weights must be finite, got a={a}, b={b}")));
        }
        Ok(Self {
            a,
            b,
            hurst: HurstExponent::new(hurst)?,
        })
    }

    pub fn h(&self) -> f64 {
        self.hurst.value()
    }

    /// The mixed-process contracts require a nonzero fBm weight.
    pub fn require_mixed(&self) -> Result<()> {
        if self.b == 0.0 {
            Err(invalid("the fBm weight b must be nonzero for this formula"))
        } else {
            Ok(())
        }
    }
}

/// Strictly increasing, finite, nonnegative, nonempty list of times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>")]
pub struct TimePoints(Vec<f64>);

impl TryFrom<Vec<f64>> for TimePoints {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl TimePoints {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("time points must be nonempty"));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(domain(format!("time points must be finite and nonnegative, got {bad}")));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("time points must be strictly increasing"));
        }
        Ok(Self(values))
    }

    /// `n` points spaced evenly in log scale over `[min, max]`.
    pub fn log_spaced(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min > 0.0 && max > min && min.is_finite() && max.is_finite()) {
            return Err(invalid(format!("log-spaced grid needs 0 < min < max, got [{min}, {max}]")));
        }
        match n {
            0 => Err(invalid("log-spaced grid needs at least one point")),
            1 => Self::new(vec![min]),
            _ => {
                let (lo, hi) = (min.ln(), max.ln());
                let step = (hi - lo) / (n - 1) as f64;
                let mut v: Vec<f64> = (0..n).map(|i| (lo + step * i as f64).exp()).collect();
                v[0] = min;
                v[n - 1] = max;
                Self::new(v)
            }
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.0[0]
    }

    pub fn last(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("time must be finite and nonnegative, got {t}")))
    }
}

/// `(t^{2H} + s^{2H} - |t - s|^{2H}) / 2`.
pub fn fbm_cov(t: f64, s: f64, h: HurstExponent) -> Result<f64> {
    check_time(t)?;
    check_time(s)?;
    Ok(fbm_cov_unchecked(t, s, h.value()))
}

#[inline]
pub(crate) fn fbm_cov_unchecked(t: f64, s: f64, h: f64) -> f64 {
    if h == 0.5 {
        return t.min(s);
    }
    let e = 2.0 * h;
    0.5 * (t.powf(e) + s.powf(e) - (t - s).abs().powf(e))
}

/// `a^2 min(t, s) + b^2 fbm_cov(t, s, H)`.
pub fn mfbm_cov(t: f64, s: f64, p: &MfbmParams) -> Result<f64> {
    check_time(t)?;
    check_time(s)?;
    Ok(mfbm_cov_unchecked(t, s, p))
}

#[inline]
pub(crate) fn mfbm_cov_unchecked(t: f64, s: f64, p: &MfbmParams) -> f64 {
    p.a * p.a * t.min(s) + p.b * p.b * fbm_cov_unchecked(t, s, p.h())
}

/// Row-major `n x n` matrix of pairwise `mfbm_cov`.
pub fn covariance_matrix(times: &[f64], p: &MfbmParams) -> Vec<f64> {
    let n = times.len();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let c = mfbm_cov_unchecked(times[i], times[j], p);
            m[i * n + j] = c;
            m[j * n + i] = c;
        }
    }
    m
}

const JITTER_BASE: f64 = 1e-12;
const JITTER_ESCALATIONS: usize = 3;

/// Lower-triangular Cholesky factor of a row-major symmetric matrix.
///
/// On failure the diagonal is loaded with `1e-12 * trace / n` and the
/// factorization retried, escalating the jitter tenfold up to three times.
pub fn cholesky_with_jitter(matrix: &[f64], n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(matrix.len(), n * n);
    let mut failed_minor = match cholesky(matrix, n, 0.0) {
        Ok(l) => return Ok(l),
        Err(minor) => minor,
    };
    let trace: f64 = (0..n).map(|i| matrix[i * n + i]).sum();
    let mut jitter = JITTER_BASE * trace / n as f64;
    for _ in 0..=JITTER_ESCALATIONS {
        match cholesky(matrix, n, jitter) {
            Ok(l) => return Ok(l),
            Err(minor) => failed_minor = minor,
        }
        jitter *= 10.0;
    }
    Err(Error::Factorization {
        minor: failed_minor,
        escalations: JITTER_ESCALATIONS,
    })
}

/// Returns the 1-based order of the failing leading minor on error.
fn cholesky(a: &[f64], n: usize, jitter: f64) -> std::result::Result<Vec<f64>, usize> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j] + jitter;
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(j + 1);
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in (j + 1)..n {
            let mut v = a[i * n + j];
            for k in 0..j {
                v -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = v / djj;
        }
    }
    Ok(l)
}

/// `L z` for a row-major lower-triangular `L` and standard normal `z`.
fn correlate<R: Rng + ?Sized>(l: &[f64], n: usize, rng: &mut R) -> Vec<f64> {
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    (0..n)
        .map(|i| l[i * n..i * n + i + 1].iter().zip(&z).map(|(a, b)| a * b).sum())
        .collect()
}

/// One exact draw of `(N_{t_1}, ..., N_{t_k})` at strictly positive times.
pub fn sample_mfbm_at_times<R: Rng + ?Sized>(
    times: &TimePoints,
    p: &MfbmParams,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if times.first() <= 0.0 {
        return Err(domain("sampling times must be strictly positive"));
    }
    sample_mfbm_at_inner_times(times.as_slice(), p, rng)
}

/// Exact draw at nondecreasing, nonnegative times that may repeat or be zero.
///
/// Coincident times share one Gaussian coordinate; time zero maps to 0.
pub(crate) fn sample_mfbm_at_inner_times<R: Rng + ?Sized>(
    times: &[f64],
    p: &MfbmParams,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let mut distinct: Vec<f64> = Vec::with_capacity(times.len());
    let mut slot: Vec<Option<usize>> = Vec::with_capacity(times.len());
    for &t in times {
        if t <= 0.0 {
            slot.push(None);
            continue;
        }
        if distinct.last() != Some(&t) {
            distinct.push(t);
        }
        slot.push(Some(distinct.len() - 1));
    }
    if distinct.is_empty() {
        return Ok(vec![0.0; times.len()]);
    }
    let n = distinct.len();
    let cov = covariance_matrix(&distinct, p);
    let l = cholesky_with_jitter(&cov, n)?;
    let values = correlate(&l, n, rng);
    Ok(slot.into_iter().map(|s| s.map_or(0.0, |i| values[i])).collect())
}

/// Autocovariance of fractional Gaussian noise with step `dt` at integer lag `k`.
pub fn fgn_autocov(k: usize, dt: f64, h: f64) -> f64 {
    let e = 2.0 * h;
    let k = k as f64;
    0.5 * dt.powf(e) * ((k + 1.0).powf(e) - 2.0 * k.powf(e) + (k - 1.0).abs().powf(e))
}

const CIRCULANT_NEG_TOL: f64 = 1e-10;

/// `n` increments of fBm on the grid `dt, 2 dt, ..., n dt` (fractional
/// Gaussian noise) via circulant embedding.
///
/// A negative embedding eigenvalue beyond tolerance falls back to the exact
/// factorization path with a warning.
pub fn sample_fgn_grid<R: Rng + ?Sized>(
    n: usize,
    dt: f64,
    h: HurstExponent,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(invalid("fGn grid needs n >= 1"));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(domain(format!("grid step must be positive, got {dt}")));
    }
    let h = h.value();
    if n == 1 {
        let z: f64 = rng.sample(StandardNormal);
        return Ok(vec![fgn_autocov(0, dt, h).sqrt() * z]);
    }
    let m = 2 * n;
    let mut row: Vec<Complex64> = (0..m)
        .map(|j| {
            let lag = if j <= n { j } else { m - j };
            Complex64::new(fgn_autocov(lag, dt, h), 0.0)
        })
        .collect();
    let mut planner = FftPlanner::new();
    let fft: Arc<dyn rustfft::Fft<f64>> = planner.plan_fft_forward(m);
    fft.process(&mut row);
    let max_eig = row.iter().map(|c| c.re).fold(f64::MIN, f64::max);
    if row.iter().any(|c| c.re < -CIRCULANT_NEG_TOL * max_eig) {
        log::warn!("circulant embedding not nonnegative for H={h}, n={n}; using exact factorization");
        return sample_fgn_exact(n, dt, h, rng);
    }
    let mut w: Vec<Complex64> = row
        .iter()
        .map(|eig| {
            let scale = (eig.re.max(0.0) / m as f64).sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * scale
        })
        .collect();
    fft.process(&mut w);
    Ok(w[..n].iter().map(|c| c.re).collect())
}

fn sample_fgn_exact<R: Rng + ?Sized>(n: usize, dt: f64, h: f64, rng: &mut R) -> Result<Vec<f64>> {
    let mut cov = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            cov[i * n + j] = fgn_autocov(i.abs_diff(j), dt, h);
        }
    }
    let l = cholesky_with_jitter(&cov, n)?;
    Ok(correlate(&l, n, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;
    use approx::assert_relative_eq;

    fn hurst(h: f64) -> HurstExponent {
        HurstExponent::new(h).unwrap()
    }

    #[test]
    fn hurst_rejects_boundaries() {
        for h in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(HurstExponent::new(h).is_err());
        }
    }

    #[test]
    fn fbm_cov_examples() {
        assert_eq!(fbm_cov(1.0, 1.0, hurst(0.5)).unwrap(), 1.0);
        assert_eq!(fbm_cov(2.0, 1.0, hurst(0.5)).unwrap(), 1.0);
        assert_relative_eq!(fbm_cov(4.0, 1.0, hurst(0.75)).unwrap(), 1.901_923_788_646_684, epsilon = 1e-12);
        assert!(fbm_cov(-1.0, 1.0, hurst(0.5)).is_err());
    }

    #[test]
    fn mfbm_cov_examples() {
        let brown = MfbmParams::new(1.0, 0.0, 0.7).unwrap();
        assert_eq!(mfbm_cov(2.0, 1.0, &brown).unwrap(), 1.0);
        let pure = MfbmParams::new(0.0, 1.0, 0.75).unwrap();
        assert_relative_eq!(mfbm_cov(4.0, 1.0, &pure).unwrap(), 1.901_923_788_646_684, epsilon = 1e-12);
        let mixed = MfbmParams::new(1.0, 1.0, 0.5).unwrap();
        assert_eq!(mfbm_cov(1.0, 1.0, &mixed).unwrap(), 2.0);
        assert!(mfbm_cov(1.0, -2.0, &mixed).is_err());
    }

    #[test]
    fn time_points_validation() {
        assert!(TimePoints::new(vec![]).is_err());
        assert!(TimePoints::new(vec![1.0, 1.0]).is_err());
        assert!(TimePoints::new(vec![2.0, 1.0]).is_err());
        assert!(TimePoints::new(vec![f64::INFINITY]).is_err());
        let g = TimePoints::log_spaced(2.0, 500.0, 24).unwrap();
        assert_eq!(g.len(), 24);
        assert_eq!(g.first(), 2.0);
        assert_eq!(g.last(), 500.0);
    }

    #[test]
    fn zero_time_rejected_for_public_sampler() {
        let p = MfbmParams::new(1.0, 1.0, 0.7).unwrap();
        let t = TimePoints::new(vec![0.0, 1.0]).unwrap();
        assert!(sample_mfbm_at_times(&t, &p, &mut RandomStream::new(1)).is_err());
    }

    #[test]
    fn coincident_inner_times_share_a_coordinate() {
        let p = MfbmParams::new(1.0, 1.0, 0.3).unwrap();
        let v = sample_mfbm_at_inner_times(&[0.0, 0.5, 0.5, 2.0, 2.0], &p, &mut RandomStream::new(3)).unwrap();
        assert_eq!(v[0], 0.0);
        assert_eq!(v[1], v[2]);
        assert_eq!(v[3], v[4]);
        assert_ne!(v[1], v[3]);
    }

    #[test]
    fn near_singular_matrix_factorizes_with_jitter() {
        let p = MfbmParams::new(0.0, 1.0, 0.9).unwrap();
        let times = [1.0, 1.0 + 1e-13, 1.0 + 2e-13];
        let cov = covariance_matrix(&times, &p);
        assert!(cholesky_with_jitter(&cov, 3).is_ok());
    }

    #[test]
    fn indefinite_matrix_reports_minor() {
        let m = [1.0, 2.0, 2.0, 1.0];
        match cholesky_with_jitter(&m, 2) {
            Err(Error::Factorization { minor, escalations }) => {
                assert_eq!(minor, 2);
                assert_eq!(escalations, 3);
            }
            other => panic!("expected factorization error, got {other:?}"),
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = MfbmParams::new(1.0, 1.0, 0.7).unwrap();
        let t = TimePoints::new(vec![0.5, 1.0, 3.0]).unwrap();
        let a = sample_mfbm_at_times(&t, &p, &mut RandomStream::new(11)).unwrap();
        let b = sample_mfbm_at_times(&t, &p, &mut RandomStream::new(11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn brownian_variance_at_unit_time() {
        let p = MfbmParams::new(1.0, 0.0, 0.3).unwrap();
        let t = TimePoints::new(vec![1.0]).unwrap();
        let mut rng = RandomStream::new(5);
        let n = 100_000;
        let var = (0..n)
            .map(|_| sample_mfbm_at_times(&t, &p, &mut rng).unwrap()[0].powi(2))
            .sum::<f64>()
            / n as f64;
        assert!((var - 1.0).abs() < 0.02, "variance {var}");
    }

    #[test]
    fn brownian_cross_covariance_is_min() {
        let p = MfbmParams::new(0.0, 1.0, 0.5).unwrap();
        let t = TimePoints::new(vec![1.0, 2.0]).unwrap();
        let mut rng = RandomStream::new(6);
        let n = 100_000;
        let cov = (0..n)
            .map(|_| {
                let x = sample_mfbm_at_times(&t, &p, &mut rng).unwrap();
                x[0] * x[1]
            })
            .sum::<f64>()
            / n as f64;
        assert!((cov - 1.0).abs() < 0.02, "covariance {cov}");
    }

    #[test]
    fn fgn_single_increment_is_standard_normal() {
        let mut rng = RandomStream::new(8);
        let n = 100_000;
        let var = (0..n)
            .map(|_| sample_fgn_grid(1, 1.0, hurst(0.5), &mut rng).unwrap()[0].powi(2))
            .sum::<f64>()
            / n as f64;
        assert!((var - 1.0).abs() < 0.02, "variance {var}");
    }

    fn lag_one_correlation(h: f64, n: usize, draws: usize, seed: u64) -> (f64, f64) {
        let mut rng = RandomStream::new(seed);
        let mut prods = Vec::with_capacity(draws);
        let (mut sx, mut sy) = (0.0, 0.0);
        for _ in 0..draws {
            let x = sample_fgn_grid(n, 1.0, hurst(h), &mut rng).unwrap();
            prods.push(x[0] * x[1]);
            sx += x[0] * x[0];
            sy += x[1] * x[1];
        }
        let m = draws as f64;
        let c = prods.iter().sum::<f64>() / m;
        let rho = c / (sx / m * sy / m).sqrt();
        let var = prods.iter().map(|p| (p - c).powi(2)).sum::<f64>() / (m - 1.0);
        (rho, var.sqrt() / m.sqrt())
    }

    #[test]
    fn fgn_brownian_increments_uncorrelated() {
        let (rho, se) = lag_one_correlation(0.5, 16, 20_000, 9);
        assert!(rho.abs() < 3.0 * se, "rho {rho} se {se}");
    }

    #[test]
    fn fgn_lag_one_correlation_h075() {
        let (rho, _) = lag_one_correlation(0.75, 2, 100_000, 10);
        assert!((rho - 0.414_213_562_373_095).abs() < 0.02, "rho {rho}");
    }

    #[test]
    fn fgn_cumsum_matches_fbm_variance() {
        let h = 0.3;
        let mut rng = RandomStream::new(12);
        let draws = 40_000;
        let n = 8;
        let mut acc = vec![0.0; n];
        for _ in 0..draws {
            let x = sample_fgn_grid(n, 0.5, hurst(h), &mut rng).unwrap();
            let mut cum = 0.0;
            for (k, v) in x.iter().enumerate() {
                cum += v;
                acc[k] += cum * cum;
            }
        }
        for (k, a) in acc.iter().enumerate() {
            let t = 0.5 * (k + 1) as f64;
            let exact = t.powf(2.0 * h);
            let est = a / draws as f64;
            assert!((est / exact - 1.0).abs() < 0.04, "k={k}: {est} vs {exact}");
        }
    }
}
