//! Command-line driver behind the `tcfbm` binary.
//!
//! Every CSV starts with a `#`-prefixed JSON line holding the tool version
//! and the fully resolved run configuration; JSON outputs carry the same
//! fields inline. Worker count and output directory are left out so that
//! outputs are byte-identical across machines and thread counts.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analytics::{self, CorrPrediction, FormulaVariant, ModelSpec};
use crate::error::{Error, Result};
use crate::estimation::{
    estimate_corr_curve, fit_power_law, lrd_verdict, simulate_ensemble_with_workers, CurveSeries, EnsembleConfig,
    PowerLawFit, StdErrorMethod,
};
use crate::gaussian::{cholesky_with_jitter, covariance_matrix, fbm_cov, HurstExponent, MfbmParams, TimePoints};
use crate::rng::{RandomStream, StreamDomain};
use crate::subordinators::{
    gamma_moment_exact, stable_density, stable_total_mass, tss_fractional_moment, tss_total_mass, Clock,
    GammaParams, TssParams, TssSampler,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "tcfbm", version, about = "Time-changed mixed fractional Brownian motion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed-form or quadrature formula over a time grid.
    Analytic(AnalyticArgs),
    /// Simulate an ensemble, estimate the correlation curve, fit the tail.
    Simulate(SimulateArgs),
    /// Run the numerical self-checks and print a JSON report.
    Validate(ValidateArgs),
    /// Produce the data behind the two correlation-decay figures.
    FigureData(FigureDataArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClockKind {
    Tss,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    PaperStated,
    Rederived,
}

impl From<Variant> for FormulaVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::PaperStated => FormulaVariant::PaperStated,
            Variant::Rederived => FormulaVariant::Rederived,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ClockKind::Tss)]
    pub clock: ClockKind,
    /// Stability index of the tempered stable clock.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Tempering parameter of the tempered stable clock.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Gamma clock parameter: increments over dt are Gamma(dt/nu, 1).
    #[arg(long, default_value_t = 0.75, allow_negative_numbers = true)]
    pub nu: f64,
    /// Weight of the Brownian component.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Weight of the fractional component.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.7, allow_negative_numbers = true)]
    pub hurst: f64,
}

impl ModelArgs {
    pub fn model(&self) -> Result<ModelSpec> {
        let clock = match self.clock {
            ClockKind::Tss => Clock::Tss(TssParams::new(self.alpha, self.lambda)?),
            ClockKind::Gamma => Clock::Gamma(GammaParams::new(self.nu)?),
        };
        ModelSpec::new(MfbmParams::new(self.a, self.b, self.hurst)?, clock)
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// The fixed earlier time.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 500.0, allow_negative_numbers = true)]
    pub t_max: f64,
    /// Number of log-spaced query times.
    #[arg(long, default_value_t = 24)]
    pub t_points: usize,
}

impl GridArgs {
    pub fn times(&self) -> Result<TimePoints> {
        if !(self.s > 0.0 && self.t_min > self.s) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < s < t-min, got s={}, t-min={}",
                self.s, self.t_min
            )));
        }
        TimePoints::log_spaced(self.t_min, self.t_max, self.t_points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    /// Covariance: gamma-function ratios (gamma) or quadrature moments (TSS).
    CovExact,
    CovAsymptotic,
    MsdAsymptotic,
    CorrAsymptotic,
    /// Correlation from the exact covariance and variances.
    CorrExact,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = Formula::CovAsymptotic)]
    pub formula: Formula,
    /// Shorthand for `--formula cov-exact`.
    #[arg(long, conflicts_with = "formula")]
    pub exact: bool,
    #[arg(long, value_enum, default_value_t = Variant::PaperStated)]
    pub variant: Variant,
    /// Write both variants and their difference instead of a single column.
    #[arg(long)]
    pub compare_variants: bool,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeMethod {
    Bootstrap,
    Delta,
}

fn parse_window(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > 0.0 && lo < hi {
        Ok((lo, hi))
    } else {
        Err(format!("window needs 0 < LO < HI, got {lo},{hi}"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct EstimationArgs {
    /// Monte Carlo sample size.
    #[arg(long, default_value_t = 200_000)]
    pub paths: usize,
    /// Master seed; every random draw derives from it.
    #[arg(long)]
    pub seed: u64,
    /// Fit window `LO,HI`.
    #[arg(long, value_parser = parse_window, default_value = "50,500")]
    pub window: (f64, f64),
    #[arg(long, value_enum, default_value_t = Variant::PaperStated)]
    pub variant: Variant,
    #[arg(long, value_enum, default_value_t = SeMethod::Bootstrap)]
    pub se: SeMethod,
    #[arg(long, default_value_t = 200)]
    pub resamples: usize,
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
}

impl EstimationArgs {
    fn method(&self) -> StdErrorMethod {
        match self.se {
            SeMethod::Bootstrap => StdErrorMethod::Bootstrap {
                resamples: self.resamples,
            },
            SeMethod::Delta => StdErrorMethod::Delta,
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub estimation: EstimationArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Run only the named check families (repeatable).
    #[arg(long)]
    pub only: Vec<String>,
    /// Seed for the Monte Carlo checks.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Draws per Monte Carlo check.
    #[arg(long, default_value_t = 1_000_000)]
    pub draws: usize,
    /// Also write the report to `DIR/validate.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureDataArgs {
    #[command(flatten)]
    pub estimation: EstimationArgs,
    /// Which figure to produce; both by default.
    #[arg(long)]
    pub figure: Option<u8>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct Header<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a C,
}

fn header_line<C: Serialize>(command: &str, config: &C) -> Result<String> {
    let h = Header {
        tool: "tcfbm",
        version: VERSION,
        command,
        config,
    };
    Ok(format!("# {}\n", serde_json::to_string(&h)?))
}

fn with_header<C: Serialize>(command: &str, config: &C, body: Value) -> Result<String> {
    let mut doc = json!({ "tool": "tcfbm", "version": VERSION, "command": command, "config": config });
    if let (Some(d), Value::Object(b)) = (doc.as_object_mut(), body) {
        d.extend(b);
    }
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// Files are assembled in memory and written together; if any write
/// fails, the ones already written are removed.
#[derive(Default)]
struct Outputs(Vec<(PathBuf, String)>);

impl Outputs {
    fn add(&mut self, path: PathBuf, contents: String) {
        self.0.push((path, contents));
    }

    fn commit(self) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        for (path, contents) in self.0 {
            let res = path
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .map_or(Ok(()), fs::create_dir_all)
                .and_then(|_| fs::write(&path, contents));
            if let Err(e) = res {
                for p in &written {
                    let _ = fs::remove_file(p);
                }
                return Err(e.into());
            }
            written.push(path);
        }
        Ok(written)
    }
}

fn fmt_value(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

// ---------------------------------------------------------------------------
// analytic
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct AnalyticConfig {
    model: ModelSpec,
    s: f64,
    t_min: f64,
    t_max: f64,
    t_points: usize,
    formula: Formula,
    variant: Option<Variant>,
}

fn formula_needs_variant(f: Formula) -> bool {
    matches!(f, Formula::CovAsymptotic | Formula::CorrAsymptotic)
}

/// Formula values over `times`. `CorrAsymptotic` under `Rederived` uses the
/// re-derived correlation prediction.
pub fn evaluate_formula(
    formula: Formula,
    model: &ModelSpec,
    s: f64,
    times: &[f64],
    variant: FormulaVariant,
) -> Result<Vec<f64>> {
    let m = &model.mixed;
    match formula {
        Formula::CovExact => times.iter().map(|&t| analytics::cov_reference(t, s, model)).collect(),
        Formula::CovAsymptotic => {
            let terms = analytics::cov_asymptotic_terms(s, model, variant)?;
            times
                .iter()
                .map(|&t| {
                    if t <= s {
                        Err(Error::Domain(format!("asymptotic formulas need t > s, got t={t}")))
                    } else {
                        Ok(terms.eval(t))
                    }
                })
                .collect()
        }
        Formula::MsdAsymptotic => times
            .iter()
            .map(|&t| match &model.clock {
                Clock::Tss(p) => analytics::msd_tss_asymptotic(t, s, m, p),
                Clock::Gamma(p) => analytics::msd_gamma_asymptotic(t, s, m, p),
            })
            .collect(),
        Formula::CorrAsymptotic => {
            let var_s = analytics::variance(s, model)?;
            let pred = CorrPrediction::new(s, model, var_s, variant)?;
            Ok(times.iter().map(|&t| pred.eval(t)).collect())
        }
        Formula::CorrExact => {
            let var_s = analytics::variance(s, model)?;
            times
                .iter()
                .map(|&t| Ok(analytics::cov_reference(t, s, model)? / (analytics::variance(t, model)? * var_s).sqrt()))
                .collect()
        }
    }
}

fn formula_slug(f: Formula) -> &'static str {
    match f {
        Formula::CovExact => "cov_exact",
        Formula::CovAsymptotic => "cov_asymptotic",
        Formula::MsdAsymptotic => "msd_asymptotic",
        Formula::CorrAsymptotic => "corr_asymptotic",
        Formula::CorrExact => "corr_exact",
    }
}

fn variant_slug(v: Variant) -> &'static str {
    match v {
        Variant::PaperStated => "paper_stated",
        Variant::Rederived => "rederived",
    }
}

fn analytic_csv(
    model: &ModelSpec,
    grid: &GridArgs,
    formula: Formula,
    variant: Option<Variant>,
    compare: bool,
) -> Result<String> {
    let times = grid.times()?;
    let config = AnalyticConfig {
        model: *model,
        s: grid.s,
        t_min: grid.t_min,
        t_max: grid.t_max,
        t_points: grid.t_points,
        formula,
        variant: if compare { None } else { variant },
    };
    let ts = times.as_slice();
    let mut out = header_line("analytic", &config)?;
    if compare {
        let published = evaluate_formula(formula, model, grid.s, ts, FormulaVariant::PaperStated)?;
        let red = evaluate_formula(formula, model, grid.s, ts, FormulaVariant::Rederived)?;
        out.push_str("t,paper_stated,rederived,difference\n");
        for ((t, p), r) in ts.iter().zip(&published).zip(&red) {
            let _ = writeln!(out, "{t},{p},{r},{}", r - p);
        }
    } else {
        let v = variant.map_or(FormulaVariant::PaperStated, Into::into);
        let values = evaluate_formula(formula, model, grid.s, ts, v)?;
        out.push_str("t,value\n");
        for (t, y) in ts.iter().zip(&values) {
            let _ = writeln!(out, "{t},{y}");
        }
    }
    Ok(out)
}

fn cmd_analytic(args: &AnalyticArgs) -> Result<Vec<PathBuf>> {
    let model = args.model.model()?;
    let formula = if args.exact { Formula::CovExact } else { args.formula };
    let variant = formula_needs_variant(formula).then_some(args.variant);
    let csv = analytic_csv(&model, &args.grid, formula, variant, args.compare_variants)?;
    let name = match (args.compare_variants, variant) {
        (true, _) => format!("{}_{}_variants.csv", formula_slug(formula), model.clock.name()),
        (false, Some(v)) => format!("{}_{}_{}.csv", formula_slug(formula), model.clock.name(), variant_slug(v)),
        (false, None) => format!("{}_{}.csv", formula_slug(formula), model.clock.name()),
    };
    let mut outputs = Outputs::default();
    outputs.add(args.out.join(name), csv);
    outputs.commit()
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SimulateConfig {
    model: ModelSpec,
    s: f64,
    t_min: f64,
    t_max: f64,
    t_points: usize,
    paths: usize,
    seed: u64,
    window: (f64, f64),
    variant: Variant,
    std_error: StdErrorMethod,
    confidence: f64,
}

/// Everything a simulation run produces, before it is written out.
pub struct SimulationRun {
    pub curve: CurveSeries,
    pub prediction: Option<Vec<f64>>,
    pub fit: PowerLawFit,
    pub verdict: crate::estimation::LrdVerdict,
}

fn run_simulation(model: &ModelSpec, grid: &GridArgs, est: &EstimationArgs) -> Result<(SimulationRun, SimulateConfig)> {
    if !(est.confidence > 0.0 && est.confidence < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence must lie in (0, 1), got {}",
            est.confidence
        )));
    }
    let times = grid.times()?;
    let cfg = EnsembleConfig {
        model: *model,
        s: grid.s,
        query_times: times.clone(),
        paths: est.paths,
        seed: est.seed,
    };
    cfg.validate()?;
    let config = SimulateConfig {
        model: *model,
        s: grid.s,
        t_min: grid.t_min,
        t_max: grid.t_max,
        t_points: grid.t_points,
        paths: est.paths,
        seed: est.seed,
        window: est.window,
        variant: est.variant,
        std_error: est.method(),
        confidence: est.confidence,
    };
    let started = Instant::now();
    let ensemble = simulate_ensemble_with_workers(&cfg, est.workers)?;
    log::info!("simulated {} paths in {:.1?}", est.paths, started.elapsed());
    let curve = estimate_corr_curve(&ensemble, est.method(), false)?;
    let prediction = if model.mixed.b != 0.0 {
        let var_s = analytics::variance(grid.s, model)?;
        let pred = CorrPrediction::new(grid.s, model, var_s, est.variant.into())?;
        Some(times.as_slice().iter().map(|&t| pred.eval(t)).collect())
    } else {
        None
    };
    let fit = fit_power_law(&curve, est.window)?;
    let verdict = lrd_verdict(&fit, est.confidence, Some(1.0 - model.mixed.h()));
    Ok((
        SimulationRun {
            curve,
            prediction,
            fit,
            verdict,
        },
        config,
    ))
}

fn simulation_outputs(run: &SimulationRun, config: &SimulateConfig, dir: &Path, command: &str) -> Result<Outputs> {
    let mut csv = header_line(command, config)?;
    csv.push_str("t,estimate,std_error,prediction,mean_corrected\n");
    for (i, p) in run.curve.points.iter().enumerate() {
        let pred = run.prediction.as_ref().map(|v| v[i]);
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            p.t,
            p.value,
            p.std_error,
            fmt_value(pred),
            p.mean_corrected
        );
    }
    let (lo, hi) = (run.verdict.d_ci_low, run.verdict.d_ci_high);
    let fit = with_header(
        command,
        config,
        json!({
            "c": run.fit.c,
            "d": run.fit.d,
            "d_std_error": run.fit.d_std_error,
            "d_ci_low": lo,
            "d_ci_high": hi,
            "r2": run.fit.r_squared,
            "window": [run.fit.window.0, run.fit.window.1],
            "points": run.fit.points,
            "seed": config.seed,
        }),
    )?;
    let verdict = with_header(command, config, serde_json::to_value(run.verdict)?)?;
    let mut outputs = Outputs::default();
    outputs.add(dir.join("corr_curve.csv"), csv);
    outputs.add(dir.join("fit.json"), fit);
    outputs.add(dir.join("verdict.json"), verdict);
    Ok(outputs)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<Vec<PathBuf>> {
    let model = args.model.model()?;
    let (run, config) = run_simulation(&model, &args.grid, &args.estimation)?;
    simulation_outputs(&run, &config, &args.out, "simulate")?.commit()
}

// ---------------------------------------------------------------------------
// figure-data
// ---------------------------------------------------------------------------

/// Model behind each figure: `s = 1, a = b = 1`, with
/// (1) a tempered stable clock `lambda = 0.1, alpha = 0.5, H = 0.7`, and
/// (2) a gamma clock `nu = 0.75, H = 0.66`.
pub fn figure_model(figure: u8) -> Result<ModelSpec> {
    match figure {
        1 => ModelSpec::new(MfbmParams::new(1.0, 1.0, 0.7)?, Clock::Tss(TssParams::new(0.5, 0.1)?)),
        2 => ModelSpec::new(MfbmParams::new(1.0, 1.0, 0.66)?, Clock::Gamma(GammaParams::new(0.75)?)),
        other => Err(Error::InvalidParameter(format!("figure must be 1 or 2, got {other}"))),
    }
}

fn cmd_figure_data(args: &FigureDataArgs) -> Result<Vec<PathBuf>> {
    let figures: Vec<u8> = match args.figure {
        Some(f) => vec![f],
        None => vec![1, 2],
    };
    let grid = GridArgs {
        s: 1.0,
        t_min: 2.0,
        t_max: 500.0,
        t_points: 24,
    };
    let mut all = Outputs::default();
    for f in figures {
        let model = figure_model(f)?;
        let dir = args.out.join(format!("fig{f}"));
        let (run, config) = run_simulation(&model, &grid, &args.estimation)?;
        all.0.extend(simulation_outputs(&run, &config, &dir, "figure-data")?.0);
        let name = format!("corr_asymptotic_{}.csv", variant_slug(args.estimation.variant));
        let csv = analytic_csv(&model, &grid, Formula::CorrAsymptotic, Some(args.estimation.variant), false)?;
        all.add(dir.join(name), csv);
        all.add(
            dir.join("corr_exact.csv"),
            analytic_csv(&model, &grid, Formula::CorrExact, None, false)?,
        );
    }
    all.commit()
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            expected,
            observed,
            tolerance,
            pass: (observed - expected).abs() <= tolerance,
        }
    }
}

/// Check families run by `validate`, in report order.
pub const CHECK_FAMILIES: [&str; 9] = [
    "fbm-kernel",
    "tss-mean",
    "tss-laplace",
    "gamma-moments",
    "levy-density",
    "density-normalization",
    "tss-first-moment",
    "gamma-exact-variance",
    "expansion-order",
];

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn run_family(name: &str, seed: u64, draws: usize) -> Result<Vec<Check>> {
    let tss = TssParams::new(0.5, 0.1)?;
    let gamma = GammaParams::new(0.75)?;
    let mut checks = Vec::new();
    match name {
        "fbm-kernel" => {
            let times = TimePoints::log_spaced(0.01, 100.0, 16)?;
            for h in [0.3, 0.5, 0.7] {
                let p = MfbmParams::new(1.0, 1.0, h)?;
                let n = times.len();
                let cov = covariance_matrix(times.as_slice(), &p);
                let asym = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| (cov[i * n + j] - cov[j * n + i]).abs())
                    .fold(0.0, f64::max);
                checks.push(Check::new(format!("fbm-kernel[symmetric,H={h}]"), 0.0, asym, 0.0));
                let ok = cholesky_with_jitter(&cov, n).is_ok();
                checks.push(Check::new(
                    format!("fbm-kernel[factorizes,H={h}]"),
                    1.0,
                    f64::from(u8::from(ok)),
                    0.0,
                ));
            }
            let half = HurstExponent::new(0.5)?;
            let dev = times
                .as_slice()
                .iter()
                .flat_map(|&t| times.as_slice().iter().map(move |&s| (t, s)))
                .map(|(t, s)| fbm_cov(t, s, half).map(|c| (c - t.min(s)).abs()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            checks.push(Check::new("fbm-kernel[H=0.5 is min]", 0.0, dev, 0.0));
        }
        "tss-mean" | "tss-laplace" => {
            let sampler = TssSampler::new(tss)?;
            let mut rng = RandomStream::derived(seed, StreamDomain::Validation, 1);
            let xs = (0..draws)
                .map(|_| sampler.sample_increment(1.0, &mut rng))
                .collect::<Result<Vec<f64>>>()?;
            if name == "tss-mean" {
                let (mean, se) = mean_and_se(&xs);
                checks.push(Check::new("tss-mean[S_1]", tss.mean_rate(), mean, 3.0 * se));
            } else {
                for u in [0.5, 1.0, 2.0] {
                    let ys: Vec<f64> = xs.iter().map(|x| (-u * x).exp()).collect();
                    let (mean, se) = mean_and_se(&ys);
                    checks.push(Check::new(
                        format!("tss-laplace[u={u}]"),
                        tss.laplace_transform(u, 1.0),
                        mean,
                        3.0 * se,
                    ));
                }
            }
        }
        "gamma-moments" => {
            let mut rng = RandomStream::derived(seed, StreamDomain::Validation, 2);
            let dist = rand_distr::Gamma::new(gamma.shape(1.0), 1.0)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            let xs: Vec<f64> = (0..draws).map(|_| rng.sample(dist)).collect();
            let (mean, se) = mean_and_se(&xs);
            checks.push(Check::new("gamma-moments[mean]", 1.0 / gamma.nu, mean, 3.0 * se));
            let sq: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
            let (var, var_se) = mean_and_se(&sq);
            checks.push(Check::new("gamma-moments[variance]", 1.0 / gamma.nu, var, 3.0 * var_se));
        }
        "levy-density" => {
            for x in [0.25f64, 1.0, 4.0] {
                let exact = (-0.25 / x).exp() / (2.0 * std::f64::consts::PI.sqrt() * x.powf(1.5));
                checks.push(Check::new(
                    format!("levy-density[x={x}]"),
                    exact,
                    stable_density(x, 1.0, 0.5)?,
                    1e-5,
                ));
            }
        }
        "density-normalization" => {
            checks.push(Check::new("density-normalization[stable]", 1.0, stable_total_mass(1.0, 0.5)?, 1e-4));
            for t in [1.0, 10.0] {
                checks.push(Check::new(
                    format!("density-normalization[tss,t={t}]"),
                    1.0,
                    tss_total_mass(t, &tss)?,
                    1e-4,
                ));
            }
        }
        "tss-first-moment" => {
            for t in [1.0, 10.0, 100.0] {
                let exact = tss.mean_rate() * t;
                checks.push(Check::new(
                    format!("tss-first-moment[t={t}]"),
                    exact,
                    tss_fractional_moment(t, 1.0, &tss)?,
                    1e-4 * exact,
                ));
            }
        }
        "gamma-exact-variance" => {
            let m = MfbmParams::new(1.0, 1.0, 0.66)?;
            for t in [0.5, 1.0, 10.0, 100.0] {
                let exact = t / gamma.nu + gamma_moment_exact(t, 1.32, &gamma)?;
                checks.push(Check::new(
                    format!("gamma-exact-variance[t={t}]"),
                    exact,
                    analytics::cov_gamma_exact(t, t, &m, &gamma)?,
                    1e-12 * exact,
                ));
            }
        }
        "expansion-order" => {
            let h = 0.7;
            for x in [100.0, 1000.0] {
                let r = analytics::gamma_ratio_expansion_check(x, 1.0, h)?;
                let leading = h * (2.0 * h - 1.0) / (x * x);
                checks.push(Check::new(
                    format!("expansion-order[g,x={x}]"),
                    leading,
                    (r.g_exact - r.g_expansion).abs(),
                    0.05 * leading,
                ));
                checks.push(Check::new(
                    format!("expansion-order[f,x={x}]"),
                    r.f_exact,
                    r.f_expansion,
                    4.0 * f64::EPSILON,
                ));
            }
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown check '{other}'; available: {}",
                CHECK_FAMILIES.join(", ")
            )))
        }
    }
    Ok(checks)
}

/// Run the requested check families (all when `only` is empty).
pub fn run_checks(only: &[String], seed: u64, draws: usize) -> Result<Vec<Check>> {
    if draws < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 draws, got {draws}")));
    }
    let families: Vec<&str> = if only.is_empty() {
        CHECK_FAMILIES.to_vec()
    } else {
        only.iter().map(String::as_str).collect()
    };
    let mut checks = Vec::new();
    for f in families {
        checks.extend(run_family(f, seed, draws)?);
    }
    Ok(checks)
}

fn cmd_validate(args: &ValidateArgs) -> Result<bool> {
    let checks = run_checks(&args.only, args.seed, args.draws)?;
    let pass = checks.iter().all(|c| c.pass);
    let config = json!({ "only": args.only, "seed": args.seed, "draws": args.draws });
    let report = with_header("validate", &config, json!({ "checks": checks, "pass": pass }))?;
    print!("{report}");
    if let Some(dir) = &args.out {
        let mut outputs = Outputs::default();
        outputs.add(dir.join("validate.json"), report);
        outputs.commit()?;
    }
    Ok(pass)
}

// ---------------------------------------------------------------------------
// entry points
// ---------------------------------------------------------------------------

/// Parse `args` and run; returns the process exit code.
pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Analytic(a) => cmd_analytic(a).map(report_written),
        Command::Simulate(a) => cmd_simulate(a).map(report_written),
        Command::FigureData(a) => cmd_figure_data(a).map(report_written),
        Command::Validate(a) => cmd_validate(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn report_written(paths: Vec<PathBuf>) -> bool {
    for p in paths {
        log::info!("wrote {}", p.display());
    }
    true
}

pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    run_from(std::env::args_os())
}
