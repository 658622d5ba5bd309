//! Monte Carlo ensembles of the time-changed process and the statistics
//! built on them: correlation and covariance curves with standard errors,
//! log-log power-law fits, and the long-range-dependence verdict.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::analytics::ModelSpec;
use crate::error::{Error, Result};
use crate::gaussian::{sample_mfbm_at_inner_times, TimePoints};
use crate::rng::{RandomStream, StreamDomain};

/// Query times used when none are given: 24 log-spaced points on `[2, 500]`.
pub fn default_query_times() -> TimePoints {
    TimePoints::log_spaced(2.0, 500.0, 24).expect("static grid is valid")
}

/// Default fit window for `s = 1`.
pub const DEFAULT_WINDOW: (f64, f64) = (50.0, 500.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub model: ModelSpec,
    pub s: f64,
    pub query_times: TimePoints,
    pub paths: usize,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.clock.validate()?;
        if self.paths < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 paths, got {}", self.paths)));
        }
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(Error::InvalidParameter(format!("s must be positive, got {}", self.s)));
        }
        if self.query_times.is_empty() || self.query_times.first() <= self.s {
            return Err(Error::InvalidParameter(format!(
                "query times must be nonempty and exceed s = {}",
                self.s
            )));
        }
        Ok(())
    }

    /// `{s} ∪ query_times`, the clock times sampled on every path.
    fn sampling_times(&self) -> Result<TimePoints> {
        let mut t = Vec::with_capacity(self.query_times.len() + 1);
        t.push(self.s);
        t.extend_from_slice(self.query_times.as_slice());
        TimePoints::new(t)
    }
}

/// `M` independent draws of `(Y_s, Y_{t_1}, ..., Y_{t_k})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    config: EnsembleConfig,
    y_at_s: Vec<f64>,
    /// Row-major `M x k`.
    y_at_t: Vec<f64>,
}

impl PathEnsemble {
    pub fn config(&self) -> &EnsembleConfig {
        &self.config
    }

    pub fn paths(&self) -> usize {
        self.y_at_s.len()
    }

    pub fn y_at_s(&self) -> &[f64] {
        &self.y_at_s
    }

    /// Values of path `i` at the query times.
    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.config.query_times.len();
        &self.y_at_t[i * k..(i + 1) * k]
    }

    /// Values of all paths at query time `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        let k = self.config.query_times.len();
        self.y_at_t.iter().skip(j).step_by(k).copied().collect()
    }

    /// The same ensemble with `Y_s` permuted across paths, which breaks the
    /// pairing and gives a zero-correlation null.
    pub fn shuffled_pairing(&self, seed: u64) -> PathEnsemble {
        let mut rng = RandomStream::derived(seed, StreamDomain::Shuffle, 0);
        let mut y_at_s = self.y_at_s.clone();
        y_at_s.shuffle(&mut rng);
        PathEnsemble { y_at_s, ..self.clone() }
    }
}

fn simulate_path(cfg: &EnsembleConfig, times: &TimePoints, index: usize, out: &mut [f64]) -> Result<()> {
    let mut rng = RandomStream::for_path(cfg.seed, index);
    let clock = cfg.model.clock.sample_path(times, &mut rng)?;
    let y = sample_mfbm_at_inner_times(clock.values(), &cfg.model.mixed, &mut rng)?;
    out.copy_from_slice(&y);
    Ok(())
}

/// Simulate on the global rayon pool.
pub fn simulate_ensemble(cfg: &EnsembleConfig) -> Result<PathEnsemble> {
    cfg.validate()?;
    let times = cfg.sampling_times()?;
    let width = times.len();
    let mut buf = vec![0.0; cfg.paths * width];
    // Every path runs; the lowest failing index is reported so the error
    // does not depend on scheduling.
    let failure = buf
        .par_chunks_mut(width)
        .enumerate()
        .filter_map(|(i, row)| simulate_path(cfg, &times, i, row).err().map(|e| (i, e)))
        .min_by_key(|(i, _)| *i);
    if let Some((index, source)) = failure {
        return Err(Error::Path {
            index,
            source: Box::new(source),
        });
    }
    let k = width - 1;
    let mut y_at_s = Vec::with_capacity(cfg.paths);
    let mut y_at_t = Vec::with_capacity(cfg.paths * k);
    for row in buf.chunks_exact(width) {
        y_at_s.push(row[0]);
        y_at_t.extend_from_slice(&row[1..]);
    }
    Ok(PathEnsemble {
        config: cfg.clone(),
        y_at_s,
        y_at_t,
    })
}

/// Simulate on a dedicated pool of `workers` threads. The result does not
/// depend on `workers`.
pub fn simulate_ensemble_with_workers(cfg: &EnsembleConfig, workers: usize) -> Result<PathEnsemble> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Estimation(format!("cannot start worker pool: {e}")))?;
    pool.install(|| simulate_ensemble(cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum StdErrorMethod {
    /// Linearized (influence-function) standard error.
    Delta,
    /// Path bootstrap.
    Bootstrap { resamples: usize },
}

impl Default for StdErrorMethod {
    fn default() -> Self {
        StdErrorMethod::Bootstrap { resamples: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    pub value: f64,
    pub std_error: f64,
    /// The same statistic with sample means removed; a diagnostic, since
    /// the process is exactly centred.
    pub mean_corrected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSeries {
    pub s: f64,
    pub points: Vec<CurvePoint>,
}

impl CurveSeries {
    /// Validates ordering and standard errors.
    pub fn new(s: f64, points: Vec<CurvePoint>) -> Result<Self> {
        if points.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::Estimation("curve times must be strictly increasing".into()));
        }
        if points.iter().any(|p| !(p.std_error >= 0.0)) {
            return Err(Error::Estimation("standard errors must be nonnegative".into()));
        }
        Ok(Self { s, points })
    }

    /// Curve from exact values with zero standard errors.
    pub fn exact(s: f64, ts: &[f64], values: &[f64]) -> Result<Self> {
        let points = ts
            .iter()
            .zip(values)
            .map(|(&t, &value)| CurvePoint {
                t,
                value,
                std_error: 0.0,
                mean_corrected: value,
            })
            .collect();
        Self::new(s, points)
    }

    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn mean_std_error(&self) -> f64 {
        self.points.iter().map(|p| p.std_error).sum::<f64>() / self.points.len() as f64
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    x: f64,
    y: f64,
    xx: f64,
    yy: f64,
    xy: f64,
}

impl Moments {
    fn add(&mut self, x: f64, y: f64) {
        self.x += x;
        self.y += y;
        self.xx += x * x;
        self.yy += y * y;
        self.xy += x * y;
    }

    fn corr(&self) -> f64 {
        self.xy / (self.xx * self.yy).sqrt()
    }

    fn pearson(&self, n: f64) -> f64 {
        let sxy = self.xy - self.x * self.y / n;
        let sxx = self.xx - self.x * self.x / n;
        let syy = self.yy - self.y * self.y / n;
        sxy / (sxx * syy).sqrt()
    }
}

fn sample_sd(values: impl Iterator<Item = f64> + Clone, n: usize) -> f64 {
    let mean = values.clone().sum::<f64>() / n as f64;
    (values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
}

/// Correlation curve `Corr(Y_t, Y_s)` over the query times.
///
/// The estimate is the mean-zero form `sum Y_s Y_t / sqrt(sum Y_s^2 sum Y_t^2)`.
/// With `include_self` the point `t = s` (correlation exactly 1) is prepended.
pub fn estimate_corr_curve(e: &PathEnsemble, method: StdErrorMethod, include_self: bool) -> Result<CurveSeries> {
    let m = e.paths();
    if m < 2 {
        return Err(Error::Estimation("need at least 2 paths".into()));
    }
    let ts = e.config.query_times.as_slice();
    let k = ts.len();
    let ys = &e.y_at_s;
    let mut full = vec![Moments::default(); k];
    for (i, &x) in ys.iter().enumerate() {
        for (mo, &y) in full.iter_mut().zip(e.row(i)) {
            mo.add(x, y);
        }
    }
    if full[0].xx == 0.0 {
        return Err(Error::Estimation("Y_s has zero sample variance".into()));
    }
    if let Some(j) = full.iter().position(|mo| mo.yy == 0.0) {
        return Err(Error::Estimation(format!("Y_t has zero sample variance at t = {}", ts[j])));
    }
    let std_errors = match method {
        StdErrorMethod::Delta => delta_std_errors(e, &full),
        StdErrorMethod::Bootstrap { resamples } => bootstrap_std_errors(e, resamples)?,
    };
    let n = m as f64;
    let mut points = Vec::with_capacity(k + 1);
    if include_self {
        let mut own = Moments::default();
        for &x in ys {
            own.add(x, x);
        }
        points.push(CurvePoint {
            t: e.config.s,
            value: own.corr(),
            std_error: 0.0,
            mean_corrected: own.pearson(n),
        });
    }
    for ((mo, &t), se) in full.iter().zip(ts).zip(std_errors) {
        points.push(CurvePoint {
            t,
            value: mo.corr(),
            std_error: se,
            mean_corrected: mo.pearson(n),
        });
    }
    CurveSeries::new(e.config.s, points)
}

fn delta_std_errors(e: &PathEnsemble, full: &[Moments]) -> Vec<f64> {
    let m = e.paths();
    let n = m as f64;
    full.iter()
        .enumerate()
        .map(|(j, mo)| {
            let (mxx, myy, mxy) = (mo.xx / n, mo.yy / n, mo.xy / n);
            let r = mxy / (mxx * myy).sqrt();
            let norm = (mxx * myy).sqrt();
            let influence = (0..m).map(|i| {
                let (x, y) = (e.y_at_s[i], e.row(i)[j]);
                x * y / norm - 0.5 * r * (x * x / mxx + y * y / myy)
            });
            sample_sd(influence, m) / n.sqrt()
        })
        .collect()
}

fn bootstrap_std_errors(e: &PathEnsemble, resamples: usize) -> Result<Vec<f64>> {
    if resamples < 2 {
        return Err(Error::Estimation(format!("need at least 2 bootstrap resamples, got {resamples}")));
    }
    let m = e.paths();
    let k = e.config.query_times.len();
    let seed = e.config.seed;
    let replicates: Vec<Vec<f64>> = (0..resamples)
        .into_par_iter()
        .map(|b| {
            let mut rng = RandomStream::derived(seed, StreamDomain::Bootstrap, b as u64);
            let mut sxx = 0.0;
            let mut syy = vec![0.0; k];
            let mut sxy = vec![0.0; k];
            for _ in 0..m {
                let i = rng.random_range(0..m);
                let x = e.y_at_s[i];
                sxx += x * x;
                for ((yy, xy), &y) in syy.iter_mut().zip(sxy.iter_mut()).zip(e.row(i)) {
                    *yy += y * y;
                    *xy += x * y;
                }
            }
            sxy.iter().zip(&syy).map(|(xy, yy)| xy / (sxx * yy).sqrt()).collect()
        })
        .collect();
    Ok((0..k)
        .map(|j| {
            let column = replicates.iter().map(|r| r[j]).filter(|v| v.is_finite());
            let count = column.clone().count();
            if count < 2 {
                f64::INFINITY
            } else {
                sample_sd(column, count)
            }
        })
        .collect())
}

/// Covariance curve `Cov(Y_t, Y_s)` in mean-zero product form; the
/// standard error is the sample deviation of the products over `sqrt(M)`.
pub fn estimate_cov_curve(e: &PathEnsemble) -> Result<CurveSeries> {
    let m = e.paths();
    let n = m as f64;
    let ts = e.config.query_times.as_slice();
    let points = ts
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let products = (0..m).map(|i| e.y_at_s[i] * e.row(i)[j]);
            let value = products.clone().sum::<f64>() / n;
            let mean_s = e.y_at_s.iter().sum::<f64>() / n;
            let mean_t = (0..m).map(|i| e.row(i)[j]).sum::<f64>() / n;
            CurvePoint {
                t,
                value,
                std_error: sample_sd(products, m) / n.sqrt(),
                mean_corrected: (value - mean_s * mean_t) * n / (n - 1.0),
            }
        })
        .collect();
    CurveSeries::new(e.config.s, points)
}

/// `value ~ c t^{-d}` fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub c: f64,
    pub d: f64,
    pub d_std_error: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub points: usize,
}

impl PowerLawFit {
    /// Two-sided normal confidence interval for `d`.
    pub fn d_interval(&self, confidence: f64) -> (f64, f64) {
        let z = normal_quantile(0.5 + 0.5 * confidence);
        (self.d - z * self.d_std_error, self.d + z * self.d_std_error)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.c * t.powf(-self.d)
    }
}

fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Weighted least squares of `ln value` on `ln t` over points inside
/// `window` with positive value.
///
/// Weights are `(value / std_error)^2`, the inverse delta-method variance of
/// `ln value`; if any standard error in the window is zero the fit is
/// unweighted. The slope error is scaled up by the reduced chi-square when
/// the scatter exceeds the stated errors.
pub fn fit_power_law(curve: &CurveSeries, window: (f64, f64)) -> Result<PowerLawFit> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::Fit(format!("empty window [{lo}, {hi}]")));
    }
    let usable: Vec<&CurvePoint> = curve
        .points
        .iter()
        .filter(|p| p.t >= lo && p.t <= hi && p.value > 0.0 && p.value.is_finite())
        .collect();
    if usable.len() < 5 {
        return Err(Error::Fit(format!(
            "need at least 5 positive points in [{lo}, {hi}], found {}",
            usable.len()
        )));
    }
    let weighted = usable.iter().all(|p| p.std_error > 0.0 && p.std_error.is_finite());
    let obs: Vec<(f64, f64, f64)> = usable
        .iter()
        .map(|p| {
            let w = if weighted { (p.value / p.std_error).powi(2) } else { 1.0 };
            (p.t.ln(), p.value.ln(), w)
        })
        .collect();
    let sw: f64 = obs.iter().map(|o| o.2).sum();
    let xm = obs.iter().map(|o| o.2 * o.0).sum::<f64>() / sw;
    let ym = obs.iter().map(|o| o.2 * o.1).sum::<f64>() / sw;
    let sxx: f64 = obs.iter().map(|o| o.2 * (o.0 - xm).powi(2)).sum();
    let sxy: f64 = obs.iter().map(|o| o.2 * (o.0 - xm) * (o.1 - ym)).sum();
    let syy: f64 = obs.iter().map(|o| o.2 * (o.1 - ym).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let rss: f64 = obs.iter().map(|o| o.2 * (o.1 - intercept - slope * o.0).powi(2)).sum();
    let dof = (obs.len() - 2) as f64;
    let chi2 = rss / dof;
    let var_slope = if weighted { chi2.max(1.0) / sxx } else { chi2 / sxx };
    let r_squared = if syy > 0.0 { (1.0 - rss / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(PowerLawFit {
        c: intercept.exp(),
        d: -slope,
        d_std_error: var_slope.sqrt(),
        r_squared,
        window,
        points: obs.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrdVerdict {
    pub lrd: bool,
    pub d: f64,
    pub d_ci_low: f64,
    pub d_ci_high: f64,
    pub confidence: f64,
    /// `1 - H` when a model is attached.
    pub prediction: Option<f64>,
}

/// Long-range dependence holds when the confidence interval for `d` lies
/// inside `(0, 1)`.
pub fn lrd_verdict(fit: &PowerLawFit, confidence: f64, prediction: Option<f64>) -> LrdVerdict {
    let (lo, hi) = fit.d_interval(confidence);
    LrdVerdict {
        lrd: lo > 0.0 && hi < 1.0,
        d: fit.d,
        d_ci_low: lo,
        d_ci_high: hi,
        confidence,
        prediction,
    }
}
