use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tcfbm::analytics::cov_gamma_exact;
use tcfbm::gaussian::MfbmParams;
use tcfbm::subordinators::gamma_ratio;
use tcfbm::GammaParams;

fn tcfbm(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcfbm"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (Value, Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    let columns = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, columns, rows)
}

#[test]
fn exact_gamma_covariance_passthrough() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcfbm(&["analytic", "--clock", "gamma", "--hurst", "0.66", "--exact"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, columns, rows) = read_csv(&dir.path().join("cov_exact_gamma.csv"));
    assert_eq!(columns, ["t", "value"]);
    assert_eq!(header["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(header["config"]["formula"], "cov-exact");
    assert_eq!(rows.len(), 24);
    let m = MfbmParams::new(1.0, 1.0, 0.66).unwrap();
    let p = GammaParams::new(0.75).unwrap();
    for r in rows {
        assert_eq!(r[1], cov_gamma_exact(r[0], 1.0, &m, &p).unwrap());
    }
}

#[test]
fn variant_difference_is_the_constant_gap() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcfbm(
        &["analytic", "--clock", "gamma", "--hurst", "0.66", "--formula", "cov-asymptotic", "--compare-variants"],
        dir.path(),
    );
    assert!(o.status.success());
    let (_, columns, rows) = read_csv(&dir.path().join("cov_asymptotic_gamma_variants.csv"));
    assert_eq!(columns, ["t", "paper_stated", "rederived", "difference"]);
    // rederived - published = G(s)/2 - (H s / nu^{2H}) t^{2H-1} for a = b = 1, s = 1.
    let (h, nu) = (0.66f64, 0.75f64);
    let g_s = gamma_ratio(1.0 / nu, 2.0 * h).unwrap();
    for r in rows {
        let gap = 0.5 * g_s - h / nu.powf(2.0 * h) * r[0].powf(2.0 * h - 1.0);
        assert!((r[3] - gap).abs() < 1e-12 * (1.0 + gap.abs()), "t={}: {} vs {gap}", r[0], r[3]);
    }
}

#[test]
fn simulate_writes_curve_fit_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcfbm(&["simulate", "--clock", "gamma", "--hurst", "0.66", "--paths", "400", "--seed", "5"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, columns, rows) = read_csv(&dir.path().join("corr_curve.csv"));
    assert_eq!(&columns[..4], ["t", "estimate", "std_error", "prediction"]);
    assert_eq!(rows.len(), 24);
    assert!(header["config"].get("workers").is_none());
    assert_eq!(header["config"]["seed"], 5);
    let fit: Value = serde_json::from_slice(&fs::read(dir.path().join("fit.json")).unwrap()).unwrap();
    for key in ["c", "d", "d_ci_low", "d_ci_high", "r2", "window", "seed"] {
        assert!(fit.get(key).is_some(), "fit.json lacks {key}");
    }
    let verdict: Value = serde_json::from_slice(&fs::read(dir.path().join("verdict.json")).unwrap()).unwrap();
    assert!(verdict["lrd"].is_boolean());
    assert!((verdict["prediction"].as_f64().unwrap() - 0.34).abs() < 1e-12);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        assert!(tcfbm(&["simulate", "--paths", "100", "--seed", "7"], &out).status.success());
        fs::read(out.join("corr_curve.csv")).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn seed_is_required() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcfbm(&["simulate", "--paths", "100"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
}

#[test]
fn negative_lambda_fails_before_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let o = tcfbm(&["simulate", "--lambda", "-0.1", "--seed", "1"], &out);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("lambda"));
    assert!(!out.exists());
}

#[test]
fn validate_single_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcfbm(&["validate", "--only", "tss-laplace", "--draws", "100000"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        assert!(c["name"].as_str().unwrap().starts_with("tss-laplace"));
        for key in ["expected", "observed", "tolerance", "pass"] {
            assert!(c.get(key).is_some());
        }
    }
    assert_eq!(report["pass"], true);
    let saved: Value = serde_json::from_slice(&fs::read(dir.path().join("validate.json")).unwrap()).unwrap();
    assert_eq!(saved, report);
}

#[test]
fn validate_rejects_unknown_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcfbm(&["validate", "--only", "nonsense"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn figure_data_layout() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcfbm(&["figure-data", "--paths", "300", "--seed", "3", "--resamples", "20"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for fig in ["fig1", "fig2"] {
        for f in ["corr_curve.csv", "fit.json", "verdict.json", "corr_asymptotic_paper_stated.csv", "corr_exact.csv"] {
            assert!(dir.path().join(fig).join(f).is_file(), "{fig}/{f}");
        }
    }
    let (header, _, _) = read_csv(&dir.path().join("fig2/corr_curve.csv"));
    assert_eq!(header["config"]["model"]["clock"]["nu"], 0.75);
    assert_eq!(header["config"]["model"]["mixed"]["hurst"], 0.66);
}
