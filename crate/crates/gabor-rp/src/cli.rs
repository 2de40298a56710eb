use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gabor_rp_core::constants::{assemble_constants, periodization_sq};
use gabor_rp_core::frame::{
    certify_frame, frame_operator_apply, gabor_coefficients, grid_verdict, reconstruct, PointSet, Targets,
};
use gabor_rp_core::montecarlo::{doubling_scan, run_trials, sample_points};
use gabor_rp_core::theory::{failure_probability_bounds, mesh_width_for, sample_complexity};
use gabor_rp_core::zak::{covariance_defect, zak_grid, zak_switch_defect, zak_unitarity_defect};
use gabor_rp_core::{
    Assumption, ComplexityQuery, ConstantsConfig, Error as CoreError, Estimate, EventMode, Mode, MonteCarloConfig,
    Side, WindowConstants, WindowSpec,
};
use serde_json::json;

use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::grammar::parse_window;
use crate::io;
use crate::report::RunReport;

#[derive(Debug, Parser)]
#[command(name = "gabor-rp", version, about = "Gabor frames from random-periodic time-frequency shifts")]
pub struct Cli {
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for CSV side files.
    #[arg(long, global = true)]
    pub csv_dir: Option<PathBuf>,
    /// Truncation tolerance (overrides the config file).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate K, K', q, R and C for a window.
    Constants(ConstantsCmd),
    /// Sample-complexity threshold and failure bounds.
    Complexity(ComplexityCmd),
    /// Certify frame bounds for a point set.
    Certify(CertifyCmd),
    /// Seeded Monte Carlo estimate of the frame event.
    Montecarlo(MonteCarloCmd),
    /// Apply and invert the frame operator on a signal.
    Reconstruct(ReconstructCmd),
    /// Zak transform grid of a window.
    Zak(ZakCmd),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Raw,
    Certified,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Raw => Mode::Raw,
            ModeArg::Certified => Mode::Certified,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EventArg {
    Raw,
    Certified,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    /// Grid for K, q and R.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Grid for C.
    #[arg(long)]
    pub c_grid: Option<usize>,
    #[arg(long, value_enum, default_value = "certified")]
    pub mode: ModeArg,
    #[arg(long = "override-K", alias = "override-k")]
    pub override_k: Option<f64>,
    #[arg(long = "override-K-prime", alias = "override-k-prime")]
    pub override_k_prime: Option<f64>,
    #[arg(long = "override-q")]
    pub override_q: Option<f64>,
    #[arg(long = "override-R", alias = "override-r")]
    pub override_r: Option<f64>,
    #[arg(long = "override-C", alias = "override-c")]
    pub override_c: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Comma-separated offsets in [0, 1).
    #[arg(long, conflicts_with = "sample")]
    pub points: Option<String>,
    /// Draw this many uniform offsets.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
}

#[derive(Debug, Args)]
pub struct ConstantsCmd {
    pub window: String,
    #[command(flatten)]
    pub constants: ConstantArgs,
}

#[derive(Debug, Args)]
pub struct ComplexityCmd {
    pub window: String,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub eps: Option<f64>,
    #[command(flatten)]
    pub constants: ConstantArgs,
}

#[derive(Debug, Args)]
pub struct CertifyCmd {
    pub window: String,
    #[command(flatten)]
    pub points: PointArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Grid for verdicts when the Zak transform is not Lipschitz.
    #[arg(long)]
    pub verdict_grid: Option<usize>,
    #[command(flatten)]
    pub constants: ConstantArgs,
}

#[derive(Debug, Args)]
pub struct MonteCarloCmd {
    pub window: String,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "raw")]
    pub event: EventArg,
    /// Event grid size per axis.
    #[arg(long)]
    pub event_grid: Option<usize>,
    /// Double m until the success frequency reaches 1 − eps or m exceeds this.
    #[arg(long)]
    pub scan_max: Option<usize>,
    #[command(flatten)]
    pub constants: ConstantArgs,
}

#[derive(Debug, Args)]
pub struct ReconstructCmd {
    pub window: String,
    #[command(flatten)]
    pub points: PointArgs,
    /// CSV file with header t,re,im.
    #[arg(long)]
    pub signal: PathBuf,
    #[command(flatten)]
    pub constants: ConstantArgs,
}

#[derive(Debug, Args)]
pub struct ZakCmd {
    pub window: String,
    /// Translate the window by x before transforming.
    #[arg(long, default_value_t = 0.0)]
    pub x: f64,
    #[arg(long)]
    pub nt: Option<usize>,
    #[arg(long)]
    pub nxi: Option<usize>,
    /// Also report unitarity, switch and covariance defects.
    #[arg(long)]
    pub defects: bool,
}

/// A finished command: the report and the process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    pub code: i32,
    /// Message for stderr when the command completed with a refusal.
    pub message: Option<String>,
}

impl Outcome {
    fn ok(report: RunReport) -> Self {
        Self { report, code: 0, message: None }
    }
}

struct Ctx<'a> {
    settings: &'a Settings,
    tol: f64,
    csv_dir: Option<&'a Path>,
}

impl Ctx<'_> {
    fn csv_path(&self, name: &str) -> Option<PathBuf> {
        self.csv_dir.map(|d| d.join(name))
    }
}

/// Runs a parsed command line. `command` is echoed in the report.
pub fn execute(cli: &Cli, settings: &Settings, command: Vec<String>) -> Result<Outcome> {
    let tol = cli.tol.unwrap_or(settings.tol);
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Usage(format!("--tol {tol} must lie in (0, 1)")));
    }
    if let Some(d) = &cli.csv_dir {
        std::fs::create_dir_all(d).map_err(|source| CliError::Io { path: d.clone(), source })?;
    }
    let ctx = Ctx { settings, tol, csv_dir: cli.csv_dir.as_deref() };
    let mut report = RunReport::new(command);
    report.input("tol", tol)?;
    match &cli.command {
        Command::Constants(c) => cmd_constants(&ctx, c, report),
        Command::Complexity(c) => cmd_complexity(&ctx, c, report),
        Command::Certify(c) => cmd_certify(&ctx, c, report),
        Command::Montecarlo(c) => cmd_montecarlo(&ctx, c, report),
        Command::Reconstruct(c) => cmd_reconstruct(&ctx, c, report),
        Command::Zak(c) => cmd_zak(&ctx, c, report),
    }
}

fn window(text: &str, report: &mut RunReport) -> Result<WindowSpec> {
    let spec = parse_window(text)?;
    report.input("window", spec.to_string())?;
    report.input("window_spec", &spec)?;
    Ok(spec)
}

fn constants_config(ctx: &Ctx, args: &ConstantArgs) -> ConstantsConfig {
    ConstantsConfig {
        grid: args.grid.unwrap_or(ctx.settings.grid),
        c_grid: args.c_grid.unwrap_or(ctx.settings.c_grid),
        tol: ctx.tol,
        mode: args.mode.into(),
        inflation: ctx.settings.inflation,
        c_override: args.override_c,
    }
}

/// Window constants with any overrides applied. With K, q and C all
/// overridden nothing is estimated.
fn resolve_constants(ctx: &Ctx, spec: &WindowSpec, args: &ConstantArgs, report: &mut RunReport) -> Result<WindowConstants> {
    let config = constants_config(ctx, args);
    report.input("constants_config", &config)?;
    let mode: Mode = args.mode.into();
    let mut constants = match (args.override_k, args.override_q, args.override_c) {
        (Some(k), Some(q), Some(c)) => {
            let r = args.override_r.unwrap_or_else(|| {
                report.warn("R was not supplied with the overrides; it is reported as q and does not enter any bound");
                q
            });
            WindowConstants::from_values(k, args.override_k_prime.unwrap_or(k), q, r, c)?
        }
        _ => {
            let mut c = assemble_constants(spec, &config)?;
            for (value, slot) in [
                (args.override_k, &mut c.k),
                (args.override_k_prime, &mut c.k_prime),
                (args.override_q, &mut c.q),
                (args.override_r, &mut c.r),
            ] {
                if let Some(v) = value {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(CoreError::InvalidArgument(format!("override {v} must be positive")).into());
                    }
                    *slot = Estimate::exact(v);
                }
            }
            if c.q.certified > c.r.certified || c.q.raw > c.r.raw {
                return Err(CoreError::InvalidArgument("overridden q exceeds R".into()).into());
            }
            c
        }
    };
    constants.mode = mode;
    if args.override_k.is_some() || args.override_q.is_some() || args.override_r.is_some() || args.override_k_prime.is_some() {
        constants.spec_id = format!("{spec} (overridden)");
    }
    if !constants.c_overridden {
        report.warn(format!(
            "C is a grid estimate of the Zak derivative inflated by {}; it is not a proven bound",
            constants.inflation_factor
        ));
    }
    if mode == Mode::Raw {
        report.warn("raw constants carry no discretization margin");
    }
    if constants.k_prime_tail > ctx.tol {
        report.warn(format!(
            "K' includes an unresolved tail bound of {:e} from the capped radius search",
            constants.k_prime_tail
        ));
    }
    Ok(constants)
}

fn selected(c: &WindowConstants) -> serde_json::Value {
    json!({
        "mode": c.mode,
        "k": c.k(),
        "k_prime": c.k_prime(),
        "q": c.q(),
        "r": c.r(),
        "c": c.c(),
    })
}

fn cmd_constants(ctx: &Ctx, cmd: &ConstantsCmd, mut report: RunReport) -> Result<Outcome> {
    let spec = window(&cmd.window, &mut report)?;
    let constants = resolve_constants(ctx, &spec, &cmd.constants, &mut report)?;
    report.output("constants", &constants)?;
    report.output("selected", selected(&constants))?;
    report.output("mesh", mesh_width_for(&constants)?)?;
    if let Some(path) = ctx.csv_path("phi.csv") {
        let n = cmd.constants.grid.unwrap_or(ctx.settings.grid);
        io::write_profile(&path, &periodization_sq(&spec, Side::Frequency, n, ctx.tol)?)?;
        report.output("phi_csv", path.display().to_string())?;
    }
    Ok(Outcome::ok(report))
}

fn cmd_complexity(ctx: &Ctx, cmd: &ComplexityCmd, mut report: RunReport) -> Result<Outcome> {
    let spec = window(&cmd.window, &mut report)?;
    let eps = cmd.eps.unwrap_or(ctx.settings.eps);
    report.input("alpha", cmd.alpha)?;
    report.input("beta", cmd.beta)?;
    report.input("eps", eps)?;
    let constants = resolve_constants(ctx, &spec, &cmd.constants, &mut report)?;
    report.output("selected", selected(&constants))?;
    let result = sample_complexity(&ComplexityQuery::new(constants.clone(), cmd.alpha, cmd.beta, eps)?)?;
    report.output("complexity", result)?;
    report.output(
        "failure_bounds",
        failure_probability_bounds(&constants, cmd.alpha, cmd.beta, result.m_threshold)?,
    )?;
    Ok(Outcome::ok(report))
}

fn point_set(args: &PointArgs, report: &mut RunReport) -> Result<PointSet> {
    let pts = match (&args.points, args.sample) {
        (Some(text), None) => {
            let points = text
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("--points: bad value {s:?}"))))
                .collect::<Result<Vec<f64>>>()?;
            PointSet::new(points)?
        }
        (None, Some(m)) => {
            report.input("seed", args.seed)?;
            report.input("trial", args.trial)?;
            sample_points(m, args.seed, args.trial)?
        }
        _ => return Err(CliError::Usage("give exactly one of --points or --sample".into())),
    };
    report.input("m", pts.m())?;
    Ok(pts)
}

fn cmd_certify(ctx: &Ctx, cmd: &CertifyCmd, mut report: RunReport) -> Result<Outcome> {
    let spec = window(&cmd.window, &mut report)?;
    let pts = point_set(&cmd.points, &mut report)?;
    let targets = Targets::new(cmd.alpha, cmd.beta);
    report.input("targets", targets)?;
    let cert = match resolve_constants(ctx, &spec, &cmd.constants, &mut report) {
        Ok(constants) => certify_frame(&spec, &pts, &constants, targets, ctx.tol)?,
        Err(CliError::Core(CoreError::AssumptionViolation { assumption: Assumption::Lipschitz, detail })) => {
            let n = cmd.verdict_grid.unwrap_or(ctx.settings.verdict_grid);
            report.warn(format!(
                "{}: no certified bounds ({detail}); the verdict covers the {n}x{n} grid only",
                Assumption::Lipschitz
            ));
            grid_verdict(&spec, &pts, n, targets, ctx.tol)?
        }
        Err(e) => return Err(e),
    };
    report.output("verdict", cert.verdict.as_str())?;
    report.output("certificate", &cert)?;
    Ok(Outcome::ok(report))
}

fn cmd_montecarlo(ctx: &Ctx, cmd: &MonteCarloCmd, mut report: RunReport) -> Result<Outcome> {
    let spec = window(&cmd.window, &mut report)?;
    let eps = cmd.eps.unwrap_or(ctx.settings.eps);
    let trials = cmd.trials.unwrap_or(ctx.settings.trials);
    let mode = match cmd.event {
        EventArg::Raw => EventMode::RawGrid,
        EventArg::Certified => EventMode::Certified,
    };
    let constants = match mode {
        EventMode::Certified => Some(resolve_constants(ctx, &spec, &cmd.constants, &mut report)?),
        EventMode::RawGrid => match resolve_constants(ctx, &spec, &cmd.constants, &mut report) {
            Ok(c) => Some(c),
            Err(CliError::Core(e)) => {
                report.warn(format!("window constants unavailable ({e}); only raw grid events are recorded"));
                None
            }
            Err(e) => return Err(e),
        },
    };
    let n = match (cmd.event_grid, mode, &constants) {
        (Some(n), _, _) => n,
        (None, EventMode::Certified, Some(c)) => {
            let delta = mesh_width_for(c)?.delta;
            ((1.0 / delta).ceil() as usize).next_power_of_two().max(2)
        }
        _ => ctx.settings.event_grid,
    };
    let config = MonteCarloConfig {
        spec,
        constants: constants.clone(),
        alpha: cmd.alpha,
        beta: cmd.beta,
        eps,
        m: cmd.m,
        trials,
        master_seed: cmd.seed,
        nt: n,
        nxi: n,
        mode,
        tol: ctx.tol,
    };
    report.input("m", cmd.m)?;
    report.input("trials", trials)?;
    report.input("alpha", cmd.alpha)?;
    report.input("beta", cmd.beta)?;
    report.input("eps", eps)?;
    report.input("seed", cmd.seed)?;
    report.input("event", mode)?;
    report.input("event_grid", n)?;
    if let Some(c) = &constants {
        report.output("selected", selected(c))?;
        if let Ok(q) = ComplexityQuery::new(c.clone(), cmd.alpha, cmd.beta, eps) {
            report.output("m_threshold", sample_complexity(&q)?.m_threshold)?;
        }
    }
    let mc = run_trials(&config)?;
    report.output(
        "montecarlo",
        json!({
            "passes": mc.passes,
            "trials": trials,
            "empirical_success": mc.empirical_success,
            "theoretical_floor": mc.theoretical_floor,
            "acceptance_band": mc.acceptance_band,
        }),
    )?;
    report.output("trials", &mc.records)?;
    if let Some(max) = cmd.scan_max {
        let scan: Vec<_> = doubling_scan(&config, cmd.m, max)?
            .into_iter()
            .map(|(m, s)| json!({ "m": m, "empirical_success": s }))
            .collect();
        report.output("scan", scan)?;
    }
    if let Some(path) = ctx.csv_path("trials.csv") {
        io::write_trials(&path, &mc.records)?;
        report.output("trials_csv", path.display().to_string())?;
    }
    Ok(Outcome::ok(report))
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn cmd_reconstruct(ctx: &Ctx, cmd: &ReconstructCmd, mut report: RunReport) -> Result<Outcome> {
    let spec = window(&cmd.window, &mut report)?;
    let pts = point_set(&cmd.points, &mut report)?;
    report.input("signal", cmd.signal.display().to_string())?;
    let f = io::read_signal(&cmd.signal)?;
    report.input("signal_grid", json!({ "nt": f.nt, "half_width": f.half_width }))?;
    let constants = resolve_constants(ctx, &spec, &cmd.constants, &mut report)?;
    let cert = certify_frame(&spec, &pts, &constants, Targets::default(), ctx.tol)?;
    report.output("a_cert", cert.a_cert)?;
    report.output("b_cert", cert.b_cert)?;
    report.output("verdict", cert.verdict.as_str())?;

    let coeffs = gabor_coefficients(&f, &spec, &pts, None, None, ctx.tol)?;
    let coefficient_energy = coeffs.energy() + coeffs.energy_outside;
    let h = frame_operator_apply(&f, &spec, &pts, ctx.tol)?;
    let padded = f.embed(h.half_width)?;
    let quadratic = h.inner(&padded)?.re;
    let norm = f.norm_sq();
    report.output(
        "parseval",
        json!({
            "signal_energy": norm,
            "coefficient_energy": coefficient_energy,
            "zak_product_energy": coeffs.zak_product_energy,
            "frame_operator_energy": quadratic,
            "relative_defect": relative(coefficient_energy, coeffs.zak_product_energy),
            "operator_relative_defect": relative(quadratic, coefficient_energy),
        }),
    )?;

    match reconstruct(&h, &spec, &pts, &cert, ctx.tol) {
        Ok(rec) => {
            let diff: Vec<_> = rec.samples.iter().zip(&padded.samples).map(|(a, b)| a - b).collect();
            let err = diff.iter().map(|z| z.norm_sqr()).sum::<f64>() / f.nt as f64;
            report.output(
                "reconstruction",
                json!({ "refused": false, "relative_error": (err / norm).sqrt() }),
            )?;
            if let Some(path) = ctx.csv_path("reconstructed.csv") {
                io::write_signal(&path, &rec)?;
                report.output("reconstructed_csv", path.display().to_string())?;
            }
            Ok(Outcome::ok(report))
        }
        Err(e @ CoreError::ReconstructionRefused(_)) => {
            report.output("reconstruction", json!({ "refused": true, "reason": e.to_string() }))?;
            let e = CliError::Core(e);
            Ok(Outcome { report, code: e.exit_code(), message: Some(e.to_string()) })
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_zak(ctx: &Ctx, cmd: &ZakCmd, mut report: RunReport) -> Result<Outcome> {
    let spec = window(&cmd.window, &mut report)?;
    let nt = cmd.nt.unwrap_or(ctx.settings.zak_grid);
    let nxi = cmd.nxi.unwrap_or(ctx.settings.zak_grid);
    report.input("x", cmd.x)?;
    report.input("nt", nt)?;
    report.input("nxi", nxi)?;
    let z = zak_grid(&spec, cmd.x, nt, nxi, ctx.tol)?;
    report.output(
        "zak",
        json!({
            "radius": z.radius,
            "truncation_error": z.truncation_error,
            "max_abs": z.max_abs(),
            "energy": z.energy(),
        }),
    )?;
    if cmd.defects {
        let unitarity = zak_unitarity_defect(&spec, nt, nxi, ctx.tol)?;
        let switch = match zak_switch_defect(&spec, nt, nxi, ctx.tol) {
            Ok(d) => Some(d),
            Err(e @ (CoreError::Uncertifiable(_) | CoreError::Accuracy { .. })) => {
                report.warn(format!("switch identity not evaluated: {e}"));
                None
            }
            Err(e) => return Err(e.into()),
        };
        let covariance = covariance_defect(&spec, 1, 1, nt, nxi)?;
        report.output(
            "defects",
            json!({ "unitarity": unitarity, "switch": switch, "covariance_k1_n1": covariance }),
        )?;
    }
    if let Some(path) = ctx.csv_path("zak.csv") {
        io::write_zak(&path, &z)?;
        report.output("zak_csv", path.display().to_string())?;
    }
    Ok(Outcome::ok(report))
}

/// Parses `args` (without the program name), runs the command and writes
/// the report. Returns the process exit code.
pub fn run(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("gabor-rp".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let settings = match Settings::from_env() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match execute(&cli, &settings, args).and_then(|o| emit(&cli, &o).map(|()| o)) {
        Ok(outcome) => {
            if let Some(msg) = &outcome.message {
                eprintln!("error: {msg}");
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    let text = outcome.report.to_json()?;
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}
