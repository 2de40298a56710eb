//! Acceptance criteria. Each criterion prints one `[PRIMARY]` line with PASS
//! or FAIL; the process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use gabor_rp::{canonical_body, RunReport};
use gabor_rp_core::constants::{assemble_constants, estimate_qr, periodization_sq};
use gabor_rp_core::frame::{certify_frame, zak_sum_point, Targets};
use gabor_rp_core::montecarlo::{empirical_expectation_check, run_trials, sample_points};
use gabor_rp_core::zak::{covariance_defect, zak_switch_defect, zak_unitarity_defect};
use gabor_rp_core::{ConstantsConfig, EventMode, MonteCarloConfig, Side, WindowConstants, WindowSpec};

const BIN: &str = env!("CARGO_BIN_EXE_gabor-rp");
const TOL: f64 = 1e-10;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn gabor_rp(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).env_remove("GABOR_RP_CONFIG").output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn spec(text: &str) -> WindowSpec {
    gabor_rp::parse_window(text).unwrap()
}

fn reference_constants() -> WindowConstants {
    WindowConstants::from_values(1.0, 1.0, 1.0 / 3.0, 1.0, 10.0).unwrap()
}

fn unitarity() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for w in ["gaussian:1", "bspline:1", "bspline:2", "hermite:1"] {
        let start = Instant::now();
        let d = zak_unitarity_defect(&spec(w), 256, 256, TOL).map_err(|e| format!("{w}: {e}"))?;
        let elapsed = start.elapsed();
        ok &= d <= 1e-6 && elapsed < Duration::from_secs(10);
        details.push(format!("{w} {d:.1e} in {:.2}s", elapsed.as_secs_f64()));
    }
    ensure(ok, details.join(", "))
}

fn switch_identity() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for w in ["gaussian:1", "bspline:2", "hermite:1"] {
        let d = zak_switch_defect(&spec(w), 128, 128, TOL).map_err(|e| format!("{w}: {e}"))?;
        ok &= d <= 1e-6;
        details.push(format!("{w} {d:.1e}"));
    }
    ensure(ok, details.join(", "))
}

fn covariance() -> Outcome {
    let catalog = [
        "indicator", "gaussian:1", "gaussian:0.5", "hermite:0", "hermite:1", "hermite:2", "hermite:3", "bspline:0",
        "bspline:1", "bspline:2", "bspline:3", "tp:g=0,v=0,f=0.5,-0.4,0.3", "tp:g=0.4,v=0.1,f=0.4,-0.3",
    ];
    let mut worst: f64 = 0.0;
    for (i, w) in catalog.iter().enumerate() {
        let u = sample_points(20, 3, i as u64).unwrap().points;
        for pair in u.chunks(2) {
            let k = (pair[0] * 7.0).floor() as i64 - 3;
            let n = (pair[1] * 7.0).floor() as i64 - 3;
            let d = covariance_defect(&spec(w), k, n, 32, 32).map_err(|e| format!("{w}: {e}"))?;
            worst = worst.max(d);
        }
    }
    ensure(worst <= 1e-10, format!("{} windows x 10 shifts, worst {worst:.1e}", catalog.len()))
}

fn periodization() -> Outcome {
    let w = spec("bspline:1");
    let p = periodization_sq(&w, Side::Frequency, 1024, TOL).map_err(|e| e.to_string())?;
    let profile = p
        .points
        .iter()
        .zip(&p.values)
        .map(|(x, v)| (v - (2.0 + (2.0 * PI * x).cos()) / 3.0).abs())
        .fold(0.0f64, f64::max);
    let (q, r) = estimate_qr(&w, 1024, TOL).map_err(|e| e.to_string())?;
    let (dq, dr) = ((q.raw - 1.0 / 3.0).abs(), (r.raw - 1.0).abs());
    ensure(
        profile <= 1e-9 && dq <= 1e-6 && dr <= 1e-6,
        format!(
            "profile {profile:.1e}, q {} (|dq| {dq:.1e}, certified {}), R {} (|dR| {dr:.1e})",
            q.raw, q.certified, r.raw
        ),
    )
}

fn expectation() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for w in ["bspline:1", "bspline:2"] {
        for t in [0.37, 0.11] {
            let d = empirical_expectation_check(&spec(w), t, 64, 1024, 1e-12).map_err(|e| e.to_string())?;
            ok &= d <= 1e-6;
            details.push(format!("{w} t={t} {d:.1e}"));
        }
    }
    ensure(ok, details.join(", "))
}

fn threshold_arithmetic() -> Outcome {
    let (q, a) = ((1.0f64 / 3.0).to_string(), (1.0f64 / 12.0).to_string());
    let (code, out, err) = gabor_rp(&[
        "complexity", "bspline:1", "--alpha", &a, "--beta", "0.25", "--eps", "0.1", "--override-K", "1", "--override-q", &q,
        "--override-R", "1", "--override-C", "10",
    ]);
    if code != 0 {
        return Err(format!("exit {code}: {err}"));
    }
    let r = RunReport::from_json(&out).map_err(|e| e.to_string())?;
    let c = &r.outputs["complexity"];
    let b = &r.outputs["failure_bounds"];
    let delta = c["delta"].as_f64().unwrap();
    let surrogate = c["mesh_surrogate"].as_f64().unwrap();
    let m = c["m_threshold"].as_u64().unwrap();
    let (p1, p2) = (b["p1"].as_f64().unwrap(), b["p2"].as_f64().unwrap());
    ensure(
        (delta - 1.0 / 120.0).abs() <= 1e-15 && (surrogate - 14641.0).abs() <= 1e-9 && m == 907 && p1 < 0.05 && p2 < 0.05,
        format!("delta {delta}, surrogate {surrogate}, m_threshold {m}, p1 {p1:.5}, p2 {p2:.5}"),
    )
}

fn mc_config(w: &str, m: usize, trials: u64, alpha: f64, beta: f64, n: usize, seed: u64) -> MonteCarloConfig {
    MonteCarloConfig {
        spec: spec(w),
        constants: None,
        alpha,
        beta,
        eps: 0.1,
        m,
        trials,
        master_seed: seed,
        nt: n,
        nxi: n,
        mode: EventMode::RawGrid,
        tol: TOL,
    }
}

fn degenerate_certainty() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for m in [1, 2, 7, 16, 32] {
        let r = run_trials(&mc_config("indicator", m, 1000, 0.5, 1.5, 16, 11)).map_err(|e| e.to_string())?;
        ok &= r.empirical_success == 1.0;
        details.push(format!("m={m} {}", r.empirical_success));
    }
    ensure(ok, details.join(", "))
}

fn failure_detection() -> Outcome {
    let w = spec("gaussian:1");
    let q = assemble_constants(&w, &ConstantsConfig::default()).map_err(|e| e.to_string())?.q();
    let r = run_trials(&mc_config("gaussian:1", 1, 100, 0.01 * q, 10.0, 512, 5)).map_err(|e| e.to_string())?;
    ensure(r.empirical_success == 0.0, format!("success {} over 100 trials, alpha {:.4}", r.empirical_success, 0.01 * q))
}

fn threshold_event() -> Outcome {
    let start = Instant::now();
    let mut config = mc_config("bspline:1", 907, 50, 1.0 / 12.0, 0.25, 128, 1);
    config.mode = EventMode::Certified;
    config.constants = Some(reference_constants());
    let r = run_trials(&config).map_err(|e| e.to_string())?;
    let floor = 0.9 - 3.0 * (0.9f64 * 0.1 / 50.0).sqrt();
    let max_ratio = r.records.iter().map(|t| t.max_over_m).fold(0.0f64, f64::max);
    ensure(
        r.empirical_success >= floor,
        format!(
            "success {} vs floor {floor:.4}; grid_max/m up to {max_ratio:.4} against beta 0.25; {:.1}s",
            r.empirical_success,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn write_random_signal(path: &Path) {
    let values = sample_points(2 * 64, 2024, 0).unwrap().points;
    let mut text = String::from("t,re,im\n");
    for n in 0..64 {
        let t = -4.0 + n as f64 / 8.0;
        text.push_str(&format!("{t},{},{}\n", 2.0 * values[2 * n] - 1.0, 2.0 * values[2 * n + 1] - 1.0));
    }
    std::fs::write(path, text).unwrap();
}

fn reconstruction() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let signal = dir.path().join("signal.csv");
    write_random_signal(&signal);
    let (code, out, err) =
        gabor_rp(&["reconstruct", "bspline:2", "--sample", "8", "--seed", "1", "--signal", signal.to_str().unwrap()]);
    let r = RunReport::from_json(&out).map_err(|e| format!("exit {code}: {err} ({e})"))?;
    let parseval = r.outputs["parseval"]["relative_defect"].as_f64().unwrap();
    let a_cert = r.outputs["a_cert"].as_f64().unwrap();
    let rec = &r.outputs["reconstruction"];
    match rec["relative_error"].as_f64() {
        Some(e) => ensure(
            code == 0 && e <= 1e-8 && parseval <= 1e-6,
            format!("relative error {e:.1e}, Parseval defect {parseval:.1e}, A_cert {a_cert:.4}"),
        ),
        None => Err(format!(
            "exit {code}, {}; A_cert {a_cert:.4}; Parseval defect {parseval:.1e}",
            rec["reason"].as_str().unwrap_or("no result")
        )),
    }
}

fn determinism() -> Outcome {
    let commands: [&[&str]; 3] = [
        &["montecarlo", "bspline:2", "--m", "16", "--trials", "10", "--alpha", "0.01", "--beta", "2", "--seed", "77", "--event-grid", "64"],
        &["certify", "bspline:2", "--sample", "64", "--seed", "42"],
        &["montecarlo", "gaussian:1", "--m", "4", "--trials", "5", "--alpha", "0.01", "--beta", "3", "--seed", "5", "--scan-max", "16"],
    ];
    for args in commands {
        let (c1, a, _) = gabor_rp(args);
        let (c2, b, _) = gabor_rp(args);
        let same = canonical_body(&a).map_err(|e| e.to_string())? == canonical_body(&b).map_err(|e| e.to_string())?;
        if c1 != 0 || c2 != 0 || !same {
            return Err(format!("{} differs (exit {c1}/{c2})", args.join(" ")));
        }
    }
    Ok(format!("{} seeded commands byte-identical", commands.len()))
}

fn soundness() -> Outcome {
    let w = spec("bspline:2");
    let constants = assemble_constants(&w, &ConstantsConfig::default()).map_err(|e| e.to_string())?;
    let pts = sample_points(64, 12, 0).unwrap();
    let cert = certify_frame(&w, &pts, &constants, Targets::default(), TOL).map_err(|e| e.to_string())?;
    let (a, b) = (cert.a_cert.unwrap(), cert.b_cert.unwrap());
    let probes = sample_points(200, 13, 0).unwrap().points;
    let n = cert.grid_n as f64;
    let mut violations = 0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in probes.chunks(2) {
        // Nudge probes that land on the certificate grid.
        let nudge = |x: f64| if (x * n).fract() == 0.0 { x + 0.5 / n } else { x };
        let g = zak_sum_point(&w, &pts, nudge(p[0]), nudge(p[1]), TOL).map_err(|e| e.to_string())?;
        lo = lo.min(g);
        hi = hi.max(g);
        if g < a - 2.0 * TOL || g > b + 2.0 * TOL {
            violations += 1;
        }
    }
    ensure(
        violations == 0,
        format!("A_cert {a:.4} <= G in [{lo:.4}, {hi:.4}] <= B_cert {b:.4}, {violations} violations"),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "Zak unitarity", unitarity),
        (2, "switch identity", switch_identity),
        (3, "covariance", covariance),
        (4, "periodization closed form", periodization),
        (5, "expectation identity", expectation),
        (6, "mesh and threshold arithmetic", threshold_arithmetic),
        (7, "degenerate certainty", degenerate_certainty),
        (8, "failure detection", failure_detection),
        (9, "frame event at the threshold", threshold_event),
        (10, "reconstruction", reconstruction),
        (11, "determinism", determinism),
        (12, "certificate soundness", soundness),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("[PRIMARY] criterion {id:>2} {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("[PRIMARY] criterion {id:>2} {name}: FAIL ({detail})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
