//! Estimates of the window constants `K`, `K′`, `q`, `R` and `C`, and the
//! square periodization `Φ_f(u) = Σ_l |f(u+l)|²`.
//!
//! Raw values are grid extrema; certified values add a slope-based
//! continuity correction. Certified `C` is a heuristic inflation of the grid
//! maximum, not a proof.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Assumption, Error, Result};
use crate::math::{is_pow2, trig_sweep};
use crate::windows::{Side, WindowSpec, MAX_RADIUS};

pub const DEFAULT_GRID: usize = 4096;
pub const DEFAULT_C_GRID: usize = 512;
pub const DEFAULT_INFLATION: f64 = 1.1;

/// Radius cap for the `K′` series, whose tail may only decay polynomially.
const K_PRIME_CAP: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Mode {
    Raw,
    #[default]
    Certified,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub raw: f64,
    pub certified: f64,
}

impl Estimate {
    pub fn exact(v: f64) -> Self {
        Self { raw: v, certified: v }
    }

    pub fn get(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Raw => self.raw,
            Mode::Certified => self.certified,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstantsConfig {
    pub grid: usize,
    pub c_grid: usize,
    pub tol: f64,
    pub mode: Mode,
    pub inflation: f64,
    pub c_override: Option<f64>,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            c_grid: DEFAULT_C_GRID,
            tol: 1e-10,
            mode: Mode::Certified,
            inflation: DEFAULT_INFLATION,
            c_override: None,
        }
    }
}

impl ConstantsConfig {
    fn validate(&self) -> Result<()> {
        if self.grid < 2 || self.c_grid < 2 {
            return Err(Error::InvalidArgument("constant grids need at least 2 points".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tolerance {} must be positive", self.tol)));
        }
        if !(self.inflation >= 1.0 && self.inflation.is_finite()) {
            return Err(Error::InvalidArgument(format!("inflation {} must be ≥ 1", self.inflation)));
        }
        if let Some(c) = self.c_override {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidArgument(format!("C override {c} must be positive")));
            }
        }
        Ok(())
    }
}

/// Samples of `Φ_f` at `u = s/N`, `s = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeriodizationProfile {
    pub side: Side,
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    /// Certified bound on the dropped terms at each sample.
    pub tail: f64,
    pub closed_form: Option<String>,
}

impl PeriodizationProfile {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest difference quotient between neighbouring samples.
    pub fn slope(&self) -> f64 {
        max_slope(&self.values, self.values.len() as f64 - 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindowConstants {
    pub spec_id: String,
    pub k: Estimate,
    pub k_prime: Estimate,
    pub q: Estimate,
    pub r: Estimate,
    pub c: Estimate,
    pub mode: Mode,
    pub grid_resolution: usize,
    pub c_grid_resolution: usize,
    pub inflation_factor: f64,
    pub tol: f64,
    pub c_overridden: bool,
    /// Tail still present in `K′` after the capped radius search.
    pub k_prime_tail: f64,
}

impl WindowConstants {
    /// Constants supplied directly (for example from an analytic
    /// computation), used as both raw and certified values.
    pub fn from_values(k: f64, k_prime: f64, q: f64, r: f64, c: f64) -> Result<Self> {
        for (name, v) in [("K", k), ("K'", k_prime), ("q", q), ("R", r), ("C", c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
            }
        }
        if q > r {
            return Err(Error::InvalidArgument(format!("q = {q} exceeds R = {r}")));
        }
        Ok(Self {
            spec_id: "override".to_string(),
            k: Estimate::exact(k),
            k_prime: Estimate::exact(k_prime),
            q: Estimate::exact(q),
            r: Estimate::exact(r),
            c: Estimate::exact(c),
            mode: Mode::Raw,
            grid_resolution: 0,
            c_grid_resolution: 0,
            inflation_factor: 1.0,
            tol: 0.0,
            c_overridden: true,
            k_prime_tail: 0.0,
        })
    }

    pub fn k(&self) -> f64 {
        self.k.get(self.mode)
    }
    pub fn k_prime(&self) -> f64 {
        self.k_prime.get(self.mode)
    }
    pub fn q(&self) -> f64 {
        self.q.get(self.mode)
    }
    pub fn r(&self) -> f64 {
        self.r.get(self.mode)
    }
    pub fn c(&self) -> f64 {
        self.c.get(self.mode)
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }
}

fn max_slope(values: &[f64], n: f64) -> f64 {
    values.windows(2).fold(0.0f64, |m, w| m.max((w[1] - w[0]).abs())) * n
}

fn sample_points(n: usize) -> Vec<f64> {
    (0..=n).map(|s| s as f64 / n as f64).collect()
}

fn check_grid(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("grid size {n} must be at least 2")));
    }
    Ok(())
}

/// Value of the sampled function on one side, as a modulus.
fn side_abs(spec: &WindowSpec, side: Side, x: f64) -> Result<f64> {
    match side {
        Side::Time => spec.eval_time(x).map(f64::abs),
        Side::Frequency => Ok(spec.eval_freq(x).norm()),
    }
}

/// B-spline autocorrelation `∫β(t)β(t+k)dt = β^{2n+1}(n+1+k)` for `k ≥ 0`.
fn bspline_autocorrelation(order: u32) -> Result<Vec<f64>> {
    let wide = WindowSpec::BSpline { order: 2 * order + 1 };
    (0..=order).map(|k| wide.eval_time((order + 1 + k) as f64)).collect()
}

/// `Φ_f` on `N+1` samples of `[0,1]`, where `f` is `g` or `ĝ`.
///
/// For B-spline spectra the profile is the exact trigonometric polynomial
/// given by the spline's autocorrelation.
pub fn periodization_sq(spec: &WindowSpec, side: Side, n: usize, tol: f64) -> Result<PeriodizationProfile> {
    check_grid(n)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let points = sample_points(n);
    let order = match (spec, side) {
        (WindowSpec::Indicator, Side::Frequency) => Some(0),
        (WindowSpec::BSpline { order }, Side::Frequency) => Some(*order),
        _ => None,
    };
    if let Some(order) = order {
        let a = bspline_autocorrelation(order)?;
        let values = points
            .iter()
            .map(|&u| {
                a[0] + 2.0
                    * a.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(k, ak)| ak * (2.0 * PI * k as f64 * u).cos())
                        .sum::<f64>()
            })
            .collect();
        return Ok(PeriodizationProfile {
            side,
            points,
            values,
            tail: 0.0,
            closed_form: Some("bspline_autocorrelation".to_string()),
        });
    }
    let (radius, tail) = spec.radius_for(side, 2, tol, MAX_RADIUS)?;
    if tail > tol {
        return Err(Error::Accuracy { estimated: tail, target: tol });
    }
    let r = radius as i64;
    let values = points
        .iter()
        .map(|&u| {
            (-r..=r).try_fold(0.0, |acc, l| side_abs(spec, side, u + l as f64).map(|v| acc + v * v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PeriodizationProfile { side, points, values, tail, closed_form: None })
}

fn abs_periodization(spec: &WindowSpec, side: Side, n: usize, radius: usize) -> Result<Vec<f64>> {
    let r = radius as i64;
    sample_points(n)
        .iter()
        .map(|&u| (-r..=r).try_fold(0.0, |acc, l| side_abs(spec, side, u + l as f64).map(|v| acc + v)))
        .collect()
}

fn summability_error(spec: &WindowSpec, side: Side, err: Error) -> Error {
    match err {
        Error::Uncertifiable(detail) if spec.envelope(side).is_some() => Error::AssumptionViolation {
            assumption: Assumption::PeriodicSummability,
            detail: format!("{side} side: {detail}"),
        },
        other => other,
    }
}

/// `sup_u Σ_l |f(u+l)|` on the chosen side. The raw value is the grid
/// maximum plus the certified tail; the certified value adds an inflated
/// slope-times-step correction.
pub fn estimate_k(spec: &WindowSpec, side: Side, n: usize, tol: f64) -> Result<Estimate> {
    estimate_k_capped(spec, side, n, tol, MAX_RADIUS, DEFAULT_INFLATION).map(|(e, _)| e)
}

fn estimate_k_capped(
    spec: &WindowSpec,
    side: Side,
    n: usize,
    tol: f64,
    cap: usize,
    inflation: f64,
) -> Result<(Estimate, f64)> {
    check_grid(n)?;
    let (radius, tail) = spec
        .radius_for(side, 1, tol, cap)
        .map_err(|e| summability_error(spec, side, e))?;
    if cap == MAX_RADIUS && tail > tol {
        return Err(Error::Accuracy { estimated: tail, target: tol });
    }
    let p = abs_periodization(spec, side, n, radius)?;
    let raw = p.iter().copied().fold(0.0, f64::max) + tail;
    let certified = raw + inflation * max_slope(&p, n as f64) / n as f64;
    Ok((Estimate { raw, certified }, tail))
}

/// Lower and upper bounds `q ≤ Φ_ĝ ≤ R`. Certified `q` must stay positive.
pub fn estimate_qr(spec: &WindowSpec, n: usize, tol: f64) -> Result<(Estimate, Estimate)> {
    estimate_qr_with(spec, n, tol, DEFAULT_INFLATION, Mode::Certified)
}

fn estimate_qr_with(spec: &WindowSpec, n: usize, tol: f64, inflation: f64, mode: Mode) -> Result<(Estimate, Estimate)> {
    let profile = periodization_sq(spec, Side::Frequency, n, tol)?;
    let correction = inflation * profile.slope() / n as f64;
    let (lo, hi) = (profile.min(), profile.max());
    let q = Estimate { raw: lo, certified: lo - correction };
    let r = Estimate { raw: hi, certified: hi + profile.tail + correction };
    if q.get(mode) <= 0.0 {
        return Err(Error::AssumptionViolation {
            assumption: Assumption::SquareSummability,
            detail: format!("{mode:?} lower periodization bound {} is not positive", q.get(mode)),
        });
    }
    Ok((q, r))
}

fn lipschitz_precheck(spec: &WindowSpec, certified: bool) -> Result<()> {
    if !spec.is_continuous() {
        return Err(Error::AssumptionViolation {
            assumption: Assumption::Lipschitz,
            detail: format!("{spec} is discontinuous in time, so its Zak transform jumps"),
        });
    }
    if certified {
        match spec.envelope(Side::Time) {
            None => {
                return Err(Error::Uncertifiable(format!("{spec} has no declared time envelope")));
            }
            Some(env) if !env.has_extra_decay() => {
                return Err(Error::AssumptionViolation {
                    assumption: Assumption::Lipschitz,
                    detail: format!("time envelope order {} does not exceed 2", env.order),
                });
            }
            _ => {}
        }
    }
    Ok(())
}

/// Grid estimate of the sup-metric Lipschitz constant of `Zg` on `Q`.
///
/// At every point of an `(N+1) × N` grid the directional derivative bound
/// `max(|∂_t Z + ∂_ξ Z|, |∂_t Z − ∂_ξ Z|)` is computed from the series
/// `∂_t Z = Σ g′(t+k) e^{2πikξ}` and `∂_ξ Z = 2πi Σ k g(t+k) e^{2πikξ}`.
pub fn estimate_c(spec: &WindowSpec, n: usize, tol: f64) -> Result<Estimate> {
    estimate_c_with(spec, n, tol, DEFAULT_INFLATION, true)
}

fn estimate_c_with(spec: &WindowSpec, n: usize, tol: f64, inflation: f64, certified: bool) -> Result<Estimate> {
    check_grid(n)?;
    lipschitz_precheck(spec, certified)?;
    let (radius, _) = spec.truncation_radius(Side::Time, tol)?;
    let r = radius as i64 + 2;
    let len = (2 * r + 1) as usize;
    let use_fft = is_pow2(n) && n >= len;
    let mut worst: f64 = 0.0;
    for j in 0..=n {
        let t = j as f64 / n as f64;
        let mut dt = Vec::with_capacity(len);
        let mut dxi = Vec::with_capacity(len);
        for k in -r..=r {
            let x = t + k as f64;
            dt.push(Complex64::new(spec.eval_time_derivative(x)?, 0.0));
            dxi.push(Complex64::new(0.0, 2.0 * PI * k as f64 * spec.eval_time(x)?));
        }
        let a = trig_sweep(&dt, -r, n, use_fft);
        let b = trig_sweep(&dxi, -r, n, use_fft);
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x + y).norm()).max((x - y).norm());
        }
    }
    Ok(Estimate { raw: worst, certified: worst * inflation })
}

/// Runs every estimator and bundles the results, enforcing the three window
/// assumptions in the order Lipschitz, summability, square summability.
pub fn assemble_constants(spec: &WindowSpec, config: &ConstantsConfig) -> Result<WindowConstants> {
    config.validate()?;
    spec.validate()?;
    if let WindowSpec::TotallyPositive(tp) = spec {
        if !tp.in_decay_regime() {
            return Err(Error::AssumptionViolation {
                assumption: Assumption::Lipschitz,
                detail: format!(
                    "totally positive window with gamma = 0 needs more than two factors, got {}",
                    tp.factors().len()
                ),
            });
        }
    }
    let certified = config.mode == Mode::Certified;
    let c = match config.c_override {
        Some(c) => {
            lipschitz_precheck(spec, false)?;
            Estimate::exact(c)
        }
        None => estimate_c_with(spec, config.c_grid, config.tol, config.inflation, certified)?,
    };
    let (k, _) = estimate_k_capped(spec, Side::Time, config.grid, config.tol, MAX_RADIUS, config.inflation)?;
    let (k_prime, k_prime_tail) =
        estimate_k_capped(spec, Side::Frequency, config.grid, config.tol, K_PRIME_CAP, config.inflation)?;
    let (q, r) = estimate_qr_with(spec, config.grid, config.tol, config.inflation, config.mode)?;
    let constants = WindowConstants {
        spec_id: spec.to_string(),
        k,
        k_prime,
        q,
        r,
        c,
        mode: config.mode,
        grid_resolution: config.grid,
        c_grid_resolution: config.c_grid,
        inflation_factor: config.inflation,
        tol: config.tol,
        c_overridden: config.c_override.is_some(),
        k_prime_tail,
    };
    check_invariants(&constants)?;
    Ok(constants)
}

fn check_invariants(c: &WindowConstants) -> Result<()> {
    let slack = 1e-12;
    let ordered = c.q.raw <= c.r.raw + slack && c.r.raw <= c.k_prime.raw * c.k_prime.raw * (1.0 + slack);
    let monotone = c.k.certified >= c.k.raw && c.q.certified <= c.q.raw && c.c.certified >= c.c.raw;
    if ordered && monotone {
        Ok(())
    } else {
        Err(Error::Uncertifiable(format!(
            "inconsistent constants: q={}, R={}, K'={}, K={}/{}",
            c.q.raw, c.r.raw, c.k_prime.raw, c.k.raw, c.k.certified
        )))
    }
}
