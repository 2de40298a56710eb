//! Window catalog: time- and frequency-domain evaluation, decay envelopes and
//! certified tail bounds for truncating periodized sums.
//!
//! Fourier convention: `ĝ(ξ) = ∫ g(t) e^{−2πiξt} dt`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
use crate::error::{Error, Result};
use crate::math::{cis_turns, sinc};

/// Largest polynomial order accepted for Hermite and B-spline windows.
pub const MAX_ORDER: u32 = 24;

/// Radius cap used by the strict truncation search.
pub const MAX_RADIUS: usize = 1 << 22;

/// Number of blocks summed explicitly before switching to a closed-form
/// remainder in [`WindowSpec::tail_bound`].
const EXPLICIT_BLOCKS: usize = 64;

/// Magnitudes at which decay envelopes are spot-checked.
pub const ENVELOPE_CHECK_POINTS: [f64; 5] = [1.0, 2.0, 5.0, 10.0, 50.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    Time,
    Frequency,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Time => "time",
            Side::Frequency => "frequency",
        })
    }
}

/// Bound of the form `|f(x)| ≤ A / (1 + |x|^order)`.
///
/// `order = 1 + ε` with `ε > 0` is moderate decrease; `order > 2` is the
/// extra decay that makes the Zak transform Lipschitz.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayEnvelope {
    pub amplitude: f64,
    pub order: f64,
    pub side: Side,
}

impl DecayEnvelope {
    pub fn new(amplitude: f64, order: f64, side: Side) -> Result<Self> {
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::InvalidSpec(format!("envelope amplitude {amplitude} must be positive")));
        }
        if !(order >= 1.0 && order.is_finite()) {
            return Err(Error::InvalidSpec(format!("envelope order {order} must be at least 1")));
        }
        Ok(Self { amplitude, order, side })
    }

    pub fn eps(&self) -> f64 {
        self.order - 1.0
    }

    pub fn bound(&self, x: f64) -> f64 {
        self.amplitude / (1.0 + x.abs().powf(self.order))
    }

    pub fn is_moderate(&self) -> bool {
        self.order > 1.0
    }

    pub fn has_extra_decay(&self) -> bool {
        self.order > 2.0
    }
}

/// Totally positive window of finite type, given through
/// `ĝ(ξ) = c e^{−γξ²} e^{2πiνξ} Π_j (1 + 2πiν_jξ)^{−1} e^{−2πiν_jξ}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TotallyPositive {
    gamma: f64,
    nu: f64,
    factors: Vec<f64>,
    c: f64,
    // Partial-fraction weights of Π(1+ν_j s)^{-1}.
    residues: Vec<f64>,
    shift: f64,
}

impl TotallyPositive {
    pub fn new(gamma: f64, nu: f64, factors: Vec<f64>, c: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidSpec(format!("tp: gamma {gamma} must be finite and ≥ 0")));
        }
        if !nu.is_finite() {
            return Err(Error::InvalidSpec("tp: nu must be finite".into()));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidSpec(format!("tp: c {c} must be positive")));
        }
        if factors.is_empty() {
            return Err(Error::InvalidSpec("tp: at least one factor is required".into()));
        }
        for (j, &a) in factors.iter().enumerate() {
            if a == 0.0 || !a.is_finite() {
                return Err(Error::InvalidSpec(format!("tp: factor {a} must be finite and nonzero")));
            }
            for &b in &factors[..j] {
                if (a - b).abs() < 1e-3 * a.abs().max(b.abs()) {
                    return Err(Error::InvalidSpec(format!(
                        "tp: factors {b} and {a} coincide; repeated factors are not supported"
                    )));
                }
            }
        }
        let residues = factors
            .iter()
            .enumerate()
            .map(|(j, &vj)| {
                factors
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &vk)| 1.0 / (1.0 - vk / vj))
                    .product()
            })
            .collect();
        let shift = factors.iter().sum::<f64>() - nu;
        Ok(Self { gamma, nu, factors, c, residues, shift })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn factors(&self) -> &[f64] {
        &self.factors
    }
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Whether the Zak transform is Lipschitz with summable tails: always for `γ > 0`,
    /// and for `γ = 0` only with more than two factors.
    pub fn in_decay_regime(&self) -> bool {
        self.gamma > 0.0 || self.factors.len() > 2
    }

    fn nu_star(&self) -> f64 {
        self.factors.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Inverse transform of `Π(1 + 2πiν_jξ)^{-1}`: a signed sum of one-sided
    /// exponentials.
    fn kernel(&self, s: f64) -> f64 {
        self.factors
            .iter()
            .zip(&self.residues)
            .filter(|(&v, _)| (v > 0.0) == (s >= 0.0))
            .map(|(&v, &a)| a / v.abs() * (-s / v).exp())
            .sum()
    }

    fn kernel_derivative(&self, s: f64) -> f64 {
        self.factors
            .iter()
            .zip(&self.residues)
            .filter(|(&v, _)| (v > 0.0) == (s >= 0.0))
            .map(|(&v, &a)| -a / (v * v.abs()) * (-s / v).exp())
            .sum()
    }

    /// `E` with `|g(t)| ≤ E e^{−|t−τ|/ν*}`.
    fn exponential_bound(&self) -> f64 {
        let base: f64 = self
            .factors
            .iter()
            .zip(&self.residues)
            .map(|(v, a)| a.abs() / v.abs())
            .sum::<f64>()
            * self.c;
        if self.gamma > 0.0 {
            let ns = self.nu_star();
            base * 2.0 * (self.gamma / (4.0 * PI * PI * ns * ns)).exp()
        } else {
            base
        }
    }

    fn freq_value(&self, xi: f64) -> Complex64 {
        let mut z = Complex64::new(self.c * (-self.gamma * xi * xi).exp(), 0.0) * cis_turns(-self.shift * xi);
        for &v in &self.factors {
            z /= Complex64::new(1.0, 2.0 * PI * v * xi);
        }
        z
    }

    fn freq_modulus(&self, xi: f64) -> f64 {
        let mut m = self.c * (-self.gamma * xi * xi).exp();
        for &v in &self.factors {
            m /= (1.0 + 4.0 * PI * PI * v * v * xi * xi).sqrt();
        }
        m
    }

    fn time_value(&self, t: f64) -> Result<f64> {
        if self.gamma == 0.0 {
            return Ok(self.c * self.kernel(t - self.shift));
        }
        let (value, bound) = self.quadrature(t - self.shift, false);
        if bound > TP_ACCURACY {
            return Err(Error::Accuracy { estimated: bound, target: TP_ACCURACY });
        }
        Ok(value)
    }

    fn time_derivative(&self, t: f64) -> Result<f64> {
        if self.gamma == 0.0 {
            return Ok(self.c * self.kernel_derivative(t - self.shift));
        }
        let (value, bound) = self.quadrature(t - self.shift, true);
        if bound > TP_DERIVATIVE_ACCURACY {
            return Err(Error::Accuracy { estimated: bound, target: TP_DERIVATIVE_ACCURACY });
        }
        Ok(value)
    }

    /// Trapezoidal inverse transform of the unshifted spectrum at `s`.
    ///
    /// Returns the value and an error bound made of the aliasing term
    /// `Σ_{k≠0} |g(s + k/h)|` (controlled by the exponential time bound) and
    /// the Gaussian truncation of the frequency range.
    fn quadrature(&self, s: f64, derivative: bool) -> (f64, f64) {
        let e = self.exponential_bound();
        let ns = self.nu_star();
        let target = 1e-12;
        let period = s.abs() + ns * ((4.0 * e / target).ln()).max(1.0) + 1.0;
        let h = 1.0 / period;
        let alias = e * ((-(period - s.abs()) / ns).exp() + (-(period + s.abs()) / ns).exp())
            / (1.0 - (-period / ns).exp());
        let gamma = self.gamma;
        let mut cutoff = ((self.c / (gamma * target)).ln().max(1.0) / gamma).sqrt();
        while self.c * (-gamma * cutoff * cutoff).exp() / (gamma * cutoff) > target {
            cutoff *= 1.25;
        }
        let trunc = self.c * (-gamma * cutoff * cutoff).exp() / (gamma * cutoff);
        let n = (cutoff / h).ceil() as usize;
        let mut acc = 0.0;
        for j in 0..=n {
            let xi = j as f64 * h;
            let mut z = Complex64::new(self.c * (-gamma * xi * xi).exp(), 0.0);
            for &v in &self.factors {
                z /= Complex64::new(1.0, 2.0 * PI * v * xi);
            }
            if derivative {
                z *= Complex64::new(0.0, 2.0 * PI * xi);
            }
            let term = (z * cis_turns(xi * s)).re;
            acc += if j == 0 { term } else { 2.0 * term };
        }
        let mut bound = alias + trunc;
        if derivative {
            // The derivative's aliasing is not covered by the time bound; report
            // the truncation scale times the largest frequency instead.
            bound = alias * (2.0 * PI * cutoff) + trunc * (2.0 * PI * cutoff);
        }
        (acc * h, bound)
    }
}

const TP_ACCURACY: f64 = 1e-9;
const TP_DERIVATIVE_ACCURACY: f64 = 1e-6;

/// Window known only through uniformly spaced samples, evaluated as the
/// piecewise-linear interpolant `Σ s_j Λ((t − t_j)/h)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampledWindow {
    pub start: f64,
    pub step: f64,
    pub samples: Vec<f64>,
    pub time_envelope: Option<DecayEnvelope>,
    pub freq_envelope: Option<DecayEnvelope>,
}

impl SampledWindow {
    fn value(&self, t: f64) -> f64 {
        let p = (t - self.start) / self.step;
        let j = p.floor();
        let frac = p - j;
        let j = j as i64;
        let at = |i: i64| -> f64 {
            if i < 0 || i as usize >= self.samples.len() {
                0.0
            } else {
                self.samples[i as usize]
            }
        };
        (1.0 - frac) * at(j) + frac * at(j + 1)
    }

    fn slope(&self, t: f64) -> f64 {
        let j = ((t - self.start) / self.step).floor() as i64;
        let at = |i: i64| -> f64 {
            if i < 0 || i as usize >= self.samples.len() {
                0.0
            } else {
                self.samples[i as usize]
            }
        };
        (at(j + 1) - at(j)) / self.step
    }

    fn spectrum(&self, xi: f64) -> Complex64 {
        let s: Complex64 = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, &v)| cis_turns(-xi * (self.start + j as f64 * self.step)) * v)
            .sum();
        let k = sinc(self.step * xi);
        s * (self.step * k * k)
    }

    fn support(&self) -> (f64, f64) {
        (
            self.start - self.step,
            self.start + self.samples.len() as f64 * self.step,
        )
    }

    fn abs_sum(&self) -> f64 {
        self.samples.iter().map(|v| v.abs()).sum()
    }

    fn sup(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Symbolic description of a window `g`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "snake_case"))]
pub enum WindowSpec {
    /// `χ_[0,1)`.
    Indicator,
    /// `e^{−π(t/a)²}`.
    Gaussian { scale: f64 },
    /// `h_n(t) = e^{πt²} dⁿ/dtⁿ e^{−2πt²}`, without normalization.
    Hermite { order: u32 },
    /// `(n+1)`-fold convolution of `χ_[0,1]`, supported on `[0, n+1]`.
    BSpline { order: u32 },
    TotallyPositive(TotallyPositive),
    Sampled(SampledWindow),
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowSpec::Indicator => f.write_str("indicator"),
            WindowSpec::Gaussian { scale } => write!(f, "gaussian:{scale}"),
            WindowSpec::Hermite { order } => write!(f, "hermite:{order}"),
            WindowSpec::BSpline { order } => write!(f, "bspline:{order}"),
            WindowSpec::TotallyPositive(tp) => {
                write!(f, "tp:g={},v={},f=", tp.gamma, tp.nu)?;
                for (i, v) in tp.factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                if tp.c != 1.0 {
                    write!(f, ",c={}", tp.c)?;
                }
                Ok(())
            }
            WindowSpec::Sampled(s) => write!(f, "sampled:n={},step={}", s.samples.len(), s.step),
        }
    }
}

/// Per-side model of the block suprema `sup_{u∈[0,1]} |f(u + l)|`.
enum TailModel<'a> {
    Compact { lo: f64, hi: f64, sup: f64 },
    /// `amp · P(|x|) · e^{−κx²}` with `P` given by absolute coefficients.
    Gaussian { amp: f64, kappa: f64, poly: Vec<f64> },
    /// `min(cap, amp / |x|^order)`.
    PowerLaw { amp: f64, order: f64, cap: f64 },
    /// `amp · e^{−|x − center|/scale}`.
    Exponential { amp: f64, center: f64, scale: f64 },
    TpFrequency(&'a TotallyPositive),
}

fn block_distance(center: f64, l: i64) -> f64 {
    let (a, b) = (l as f64, l as f64 + 1.0);
    if center < a {
        a - center
    } else if center > b {
        center - b
    } else {
        0.0
    }
}

fn poly_abs(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.abs())
}

fn power_law_remainder(amp: f64, exponent: f64, d0: f64) -> Result<f64> {
    if exponent <= 1.0 {
        return Err(Error::Uncertifiable(format!(
            "periodized sum with decay exponent {exponent} is not absolutely summable"
        )));
    }
    Ok(amp * (d0.powf(-exponent) + d0.powf(1.0 - exponent) / (exponent - 1.0)))
}

impl TailModel<'_> {
    fn center(&self) -> f64 {
        match self {
            TailModel::Exponential { center, .. } => *center,
            _ => 0.0,
        }
    }

    fn block(&self, l: i64) -> f64 {
        let d = block_distance(self.center(), l);
        match self {
            TailModel::Compact { lo, hi, sup } => {
                if (l as f64 + 1.0) > *lo && (l as f64) < *hi {
                    *sup
                } else {
                    0.0
                }
            }
            TailModel::Gaussian { amp, kappa, poly } => amp * poly_abs(poly, d + 1.0) * (-kappa * d * d).exp(),
            TailModel::PowerLaw { amp, order, cap } => {
                if d == 0.0 {
                    *cap
                } else {
                    cap.min(amp / d.powf(*order))
                }
            }
            TailModel::Exponential { amp, scale, .. } => amp * (-d / scale).exp(),
            TailModel::TpFrequency(tp) => tp.freq_modulus(d),
        }
    }

    /// Bound on `Σ_{j≥0} block(d0 + j)^p` along one direction.
    fn remainder(&self, d0: f64, p: f64) -> Result<f64> {
        match self {
            TailModel::Compact { .. } => Ok(0.0),
            TailModel::Gaussian { amp, kappa, poly } => {
                let deg = poly.len().saturating_sub(1) as f64;
                let first = (amp * poly_abs(poly, d0 + 1.0) * (-kappa * d0 * d0).exp()).powf(p);
                let ratio = (((d0 + 2.0) / (d0 + 1.0)).powf(deg) * (-kappa * (2.0 * d0 + 1.0)).exp()).powf(p);
                if ratio >= 1.0 {
                    return Err(Error::Uncertifiable("gaussian tail ratio not contracting".into()));
                }
                Ok(first / (1.0 - ratio))
            }
            TailModel::PowerLaw { amp, order, .. } => power_law_remainder(amp.powf(p), order * p, d0),
            TailModel::Exponential { amp, scale, .. } => {
                Ok(amp.powf(p) * (-p * d0 / scale).exp() / (1.0 - (-p / scale).exp()))
            }
            TailModel::TpFrequency(tp) => {
                let n = tp.factors.len() as f64;
                let amp = tp.c / tp.factors.iter().map(|v| 2.0 * PI * v.abs()).product::<f64>();
                let power = power_law_remainder(amp.powf(p), n * p, d0);
                if tp.gamma > 0.0 {
                    let g = TailModel::Gaussian { amp: tp.c, kappa: tp.gamma, poly: alloc::vec![1.0] }
                        .remainder(d0, p)?;
                    Ok(match power {
                        Ok(v) => v.min(g),
                        Err(_) => g,
                    })
                } else {
                    power
                }
            }
        }
    }

    fn tail(&self, radius: usize, p: f64) -> Result<f64> {
        let r = radius as i64;
        if let TailModel::Compact { lo, hi, sup } = self {
            let first = lo.floor() as i64 - 1;
            let last = hi.ceil() as i64;
            let count = (first..=last)
                .filter(|&l| l.abs() > r && (l as f64 + 1.0) > *lo && (l as f64) < *hi)
                .count();
            return Ok(count as f64 * sup.powf(p));
        }
        let m = r + EXPLICIT_BLOCKS as i64;
        let mut sum = 0.0;
        for l in (r + 1)..=m {
            sum += self.block(l).powf(p) + self.block(-l).powf(p);
        }
        let c = self.center();
        let d_pos = block_distance(c, m + 1);
        let d_neg = block_distance(c, -m - 1);
        if d_pos < 1.0 || d_neg < 1.0 {
            return Err(Error::Uncertifiable("tail model center too far from origin".into()));
        }
        Ok(sum + self.remainder(d_pos, p)? + self.remainder(d_neg, p)?)
    }
}

fn bspline_value(order: u32, t: f64) -> f64 {
    let n = order as usize;
    if t < 0.0 || t >= (n + 1) as f64 {
        return 0.0;
    }
    let mut vals = [0.0f64; 2 * MAX_ORDER as usize + 3];
    for (j, v) in vals.iter_mut().enumerate().take(n + 1) {
        let s = t - j as f64;
        *v = if (0.0..1.0).contains(&s) { 1.0 } else { 0.0 };
    }
    for k in 1..=n {
        for j in 0..=(n - k) {
            let s = t - j as f64;
            vals[j] = (s * vals[j] + (k as f64 + 1.0 - s) * vals[j + 1]) / k as f64;
        }
    }
    vals[0]
}

/// `H_n(y)` and `H_{n−1}(y)` (physicists' Hermite polynomials).
fn hermite_poly_pair(n: u32, y: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * y * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Monomial coefficients in `x` of `(−√(2π))ⁿ H_n(√(2π) x)`.
fn hermite_coefficients(n: u32) -> Vec<f64> {
    let mut prev: Vec<f64> = Vec::new();
    let mut cur: Vec<f64> = alloc::vec![1.0];
    for k in 0..n {
        let mut next = alloc::vec![0.0; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    let s = (2.0 * PI).sqrt();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    cur.iter()
        .enumerate()
        .map(|(i, c)| sign * s.powi(n as i32) * c * s.powi(i as i32))
        .collect()
}

fn hermite_value(n: u32, x: f64) -> f64 {
    let s = (2.0 * PI).sqrt();
    let (h, _) = hermite_poly_pair(n, s * x);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * s.powi(n as i32) * h * (-PI * x * x).exp()
}

fn hermite_derivative(n: u32, x: f64) -> f64 {
    let s = (2.0 * PI).sqrt();
    let y = s * x;
    let (h, hm1) = hermite_poly_pair(n, y);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * s.powi(n as i32 + 1) * (2.0 * n as f64 * hm1 - y * h) * (-PI * x * x).exp()
}

/// Smallest amplitude `A` with `|f(x)| ≤ A/(1+|x|^order)` on a dense scan of
/// `[−span, span]`, padded by 5%.
fn scanned_amplitude(f: impl Fn(f64) -> f64, order: f64, span: f64) -> f64 {
    let steps = 40_000;
    let mut a: f64 = 0.0;
    for i in 0..=steps {
        let x = -span + 2.0 * span * i as f64 / steps as f64;
        a = a.max(f(x) * (1.0 + x.abs().powf(order)));
    }
    a * 1.05 + f64::MIN_POSITIVE
}

impl WindowSpec {
    pub fn indicator() -> Self {
        WindowSpec::Indicator
    }

    pub fn gaussian(scale: f64) -> Result<Self> {
        let spec = WindowSpec::Gaussian { scale };
        spec.validate()?;
        Ok(spec)
    }

    pub fn hermite(order: u32) -> Result<Self> {
        let spec = WindowSpec::Hermite { order };
        spec.validate()?;
        Ok(spec)
    }

    pub fn bspline(order: u32) -> Result<Self> {
        let spec = WindowSpec::BSpline { order };
        spec.validate()?;
        Ok(spec)
    }

    pub fn totally_positive(gamma: f64, nu: f64, factors: Vec<f64>, c: f64) -> Result<Self> {
        Ok(WindowSpec::TotallyPositive(TotallyPositive::new(gamma, nu, factors, c)?))
    }

    pub fn sampled(
        start: f64,
        step: f64,
        samples: Vec<f64>,
        time_envelope: Option<DecayEnvelope>,
        freq_envelope: Option<DecayEnvelope>,
    ) -> Result<Self> {
        let spec = WindowSpec::Sampled(SampledWindow { start, step, samples, time_envelope, freq_envelope });
        spec.validate()?;
        Ok(spec)
    }

    /// Checks parameter domains. Declared envelopes of sampled windows are
    /// spot-checked against the samples.
    pub fn validate(&self) -> Result<()> {
        match self {
            WindowSpec::Indicator => Ok(()),
            WindowSpec::Gaussian { scale } => {
                if *scale > 0.0 && scale.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(format!("gaussian scale {scale} must be positive")))
                }
            }
            WindowSpec::Hermite { order } | WindowSpec::BSpline { order } => {
                if *order <= MAX_ORDER {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(format!("order {order} exceeds {MAX_ORDER}")))
                }
            }
            WindowSpec::TotallyPositive(tp) => {
                TotallyPositive::new(tp.gamma, tp.nu, tp.factors.clone(), tp.c).map(|_| ())
            }
            WindowSpec::Sampled(s) => {
                if !(s.step > 0.0 && s.step.is_finite() && s.start.is_finite()) {
                    return Err(Error::InvalidSpec("sampled: step must be positive".into()));
                }
                if s.samples.is_empty() || s.samples.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidSpec("sampled: samples must be finite and nonempty".into()));
                }
                for env in [s.time_envelope, s.freq_envelope].into_iter().flatten() {
                    if !self.envelope_holds(&env) {
                        return Err(Error::InvalidSpec(format!(
                            "sampled: declared {} envelope is violated at a check point",
                            env.side
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Window evaluated in time. Real for every family in the catalog.
    pub fn eval_time(&self, t: f64) -> Result<f64> {
        Ok(match self {
            WindowSpec::Indicator => {
                if (0.0..1.0).contains(&t) {
                    1.0
                } else {
                    0.0
                }
            }
            WindowSpec::Gaussian { scale } => {
                let u = t / scale;
                (-PI * u * u).exp()
            }
            WindowSpec::Hermite { order } => hermite_value(*order, t),
            WindowSpec::BSpline { order } => bspline_value(*order, t),
            WindowSpec::TotallyPositive(tp) => return tp.time_value(t),
            WindowSpec::Sampled(s) => s.value(t),
        })
    }

    /// Derivative in time: analytic for the closed-form families, exact
    /// segment slope for sampled windows, central differences otherwise.
    /// Piecewise-smooth windows use the right derivative at breakpoints.
    pub fn eval_time_derivative(&self, t: f64) -> Result<f64> {
        Ok(match self {
            WindowSpec::Indicator => 0.0,
            WindowSpec::Gaussian { scale } => {
                let u = t / scale;
                -2.0 * PI * u / scale * (-PI * u * u).exp()
            }
            WindowSpec::Hermite { order } => hermite_derivative(*order, t),
            WindowSpec::BSpline { order } => {
                if *order == 0 {
                    0.0
                } else {
                    bspline_value(order - 1, t) - bspline_value(order - 1, t - 1.0)
                }
            }
            WindowSpec::TotallyPositive(tp) => match tp.time_derivative(t) {
                Ok(v) => v,
                Err(_) => {
                    let h = 1e-5;
                    (tp.time_value(t + h)? - tp.time_value(t - h)?) / (2.0 * h)
                }
            },
            WindowSpec::Sampled(s) => s.slope(t),
        })
    }

    pub fn eval_freq(&self, xi: f64) -> Complex64 {
        match self {
            WindowSpec::Indicator => Self::bspline_freq(0, xi),
            WindowSpec::Gaussian { scale } => {
                let u = scale * xi;
                Complex64::new(scale * (-PI * u * u).exp(), 0.0)
            }
            WindowSpec::Hermite { order } => {
                // ĥ_n = (−i)ⁿ h_n under this Fourier convention.
                let phase = match order % 4 {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, -1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, 1.0),
                };
                phase * hermite_value(*order, xi)
            }
            WindowSpec::BSpline { order } => Self::bspline_freq(*order, xi),
            WindowSpec::TotallyPositive(tp) => tp.freq_value(xi),
            WindowSpec::Sampled(s) => s.spectrum(xi),
        }
    }

    fn bspline_freq(order: u32, xi: f64) -> Complex64 {
        let p = order as i32 + 1;
        cis_turns(-0.5 * p as f64 * xi) * sinc(xi).powi(p)
    }

    /// Time support for compactly supported windows.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            WindowSpec::Indicator => Some((0.0, 1.0)),
            WindowSpec::BSpline { order } => Some((0.0, *order as f64 + 1.0)),
            WindowSpec::Sampled(s) => Some(s.support()),
            _ => None,
        }
    }

    /// Whether the window is continuous in time (needed for a finite
    /// Lipschitz constant of its Zak transform).
    pub fn is_continuous(&self) -> bool {
        !matches!(self, WindowSpec::Indicator | WindowSpec::BSpline { order: 0 })
            && !matches!(self, WindowSpec::TotallyPositive(tp) if tp.gamma == 0.0 && tp.factors.len() == 1)
    }

    /// Decay envelope for the requested side; `None` for sampled windows
    /// without a declared one.
    pub fn envelope(&self, side: Side) -> Option<DecayEnvelope> {
        let env = |amplitude: f64, order: f64| Some(DecayEnvelope { amplitude, order, side });
        match (self, side) {
            (WindowSpec::Indicator, Side::Time) => env(2.0, 3.0),
            (WindowSpec::BSpline { order }, Side::Time) => env(1.0 + (*order as f64 + 1.0).powi(3), 3.0),
            (WindowSpec::Indicator, Side::Frequency) => env(2.0, 1.0),
            (WindowSpec::BSpline { order }, Side::Frequency) => env(2.0, *order as f64 + 1.0),
            (WindowSpec::Gaussian { scale }, Side::Time) => {
                let a = *scale;
                env(scanned_amplitude(|t| (-PI * (t / a) * (t / a)).exp(), 3.0, 20.0 * a + 5.0), 3.0)
            }
            (WindowSpec::Gaussian { scale }, Side::Frequency) => {
                let a = *scale;
                env(scanned_amplitude(|x| a * (-PI * (a * x) * (a * x)).exp(), 3.0, 20.0 / a + 5.0), 3.0)
            }
            (WindowSpec::Hermite { order }, _) => {
                let n = *order;
                env(scanned_amplitude(|t| hermite_value(n, t).abs(), 3.0, 12.0 + n as f64), 3.0)
            }
            (WindowSpec::TotallyPositive(tp), Side::Time) => {
                let e = tp.exponential_bound();
                let ns = tp.nu_star();
                let tau = tp.shift;
                let span = tau.abs() + 60.0 * ns + 10.0;
                env(scanned_amplitude(|t| e * (-(t - tau).abs() / ns).exp(), 3.0, span), 3.0)
            }
            (WindowSpec::TotallyPositive(tp), Side::Frequency) => {
                if tp.gamma > 0.0 {
                    let span = (40.0 / tp.gamma).sqrt() + 5.0;
                    env(scanned_amplitude(|x| tp.freq_modulus(x), 3.0, span), 3.0)
                } else {
                    let n = tp.factors.len() as i32;
                    let m = tp.factors.iter().fold(1.0f64, |m, v| m.min(2.0 * PI * v.abs()));
                    env(2.0 * tp.c / m.powi(n), n as f64)
                }
            }
            (WindowSpec::Sampled(s), Side::Time) => s.time_envelope,
            (WindowSpec::Sampled(s), Side::Frequency) => s.freq_envelope,
        }
    }

    /// Spot-checks `|g| ≤ envelope` at `±{1, 2, 5, 10, 50}` on the
    /// envelope's side.
    pub fn envelope_holds(&self, env: &DecayEnvelope) -> bool {
        ENVELOPE_CHECK_POINTS.iter().all(|&r| {
            [r, -r].iter().all(|&x| {
                let v = match env.side {
                    Side::Time => match self.eval_time(x) {
                        Ok(v) => v.abs(),
                        Err(_) => return false,
                    },
                    Side::Frequency => self.eval_freq(x).norm(),
                };
                v <= env.bound(x) * (1.0 + 1e-12)
            })
        })
    }

    fn tail_model(&self, side: Side) -> Result<TailModel<'_>> {
        if let WindowSpec::Sampled(s) = self {
            if self.envelope(side).is_none() {
                return Err(Error::Uncertifiable(format!(
                    "sampled window has no declared {side} envelope"
                )));
            }
            return Ok(match side {
                Side::Time => {
                    let (lo, hi) = s.support();
                    TailModel::Compact { lo, hi, sup: s.sup() }
                }
                Side::Frequency => {
                    // |ĝ(ξ)| ≤ h Σ|s_j| · min(1, (πhξ)^{-2}).
                    let base = s.step * s.abs_sum();
                    TailModel::PowerLaw { amp: base / (PI * s.step).powi(2), order: 2.0, cap: base }
                }
            });
        }
        Ok(match (self, side) {
            (WindowSpec::Indicator, Side::Time) => TailModel::Compact { lo: 0.0, hi: 1.0, sup: 1.0 },
            (WindowSpec::BSpline { order }, Side::Time) => {
                TailModel::Compact { lo: 0.0, hi: *order as f64 + 1.0, sup: 1.0 }
            }
            (WindowSpec::Indicator, Side::Frequency) => {
                TailModel::PowerLaw { amp: 1.0 / PI, order: 1.0, cap: 1.0 }
            }
            (WindowSpec::BSpline { order }, Side::Frequency) => {
                let p = *order as f64 + 1.0;
                TailModel::PowerLaw { amp: PI.powf(-p), order: p, cap: 1.0 }
            }
            (WindowSpec::Gaussian { scale }, Side::Time) => {
                TailModel::Gaussian { amp: 1.0, kappa: PI / (scale * scale), poly: alloc::vec![1.0] }
            }
            (WindowSpec::Gaussian { scale }, Side::Frequency) => {
                TailModel::Gaussian { amp: *scale, kappa: PI * scale * scale, poly: alloc::vec![1.0] }
            }
            (WindowSpec::Hermite { order }, _) => {
                TailModel::Gaussian { amp: 1.0, kappa: PI, poly: hermite_coefficients(*order) }
            }
            (WindowSpec::TotallyPositive(tp), Side::Time) => TailModel::Exponential {
                amp: tp.exponential_bound(),
                center: tp.shift,
                scale: tp.nu_star(),
            },
            (WindowSpec::TotallyPositive(tp), Side::Frequency) => TailModel::TpFrequency(tp),
            (WindowSpec::Sampled(_), _) => unreachable!(),
        })
    }

    /// Certified bound on `Σ_{|l|>L} sup_{u∈[0,1]} |f(u + l)|` where `f` is
    /// `g` or `ĝ` depending on `side`. Nonincreasing in `radius`.
    pub fn tail_bound(&self, side: Side, radius: usize) -> Result<f64> {
        self.tail_model(side)?.tail(radius, 1.0)
    }

    /// Same as [`tail_bound`](Self::tail_bound) for `|f|²`, the tail that
    /// controls periodizations `Σ_l |f(u + l)|²`.
    pub fn square_tail_bound(&self, side: Side, radius: usize) -> Result<f64> {
        self.tail_model(side)?.tail(radius, 2.0)
    }

    /// Smallest radius `L ≥ 1` (up to `cap`) whose tail of `|f|^power` is at
    /// most `tol`. Returns the radius and the achieved tail; if `cap` is hit
    /// the achieved tail exceeds `tol`.
    pub fn radius_for(&self, side: Side, power: u32, tol: f64, cap: usize) -> Result<(usize, f64)> {
        let model = self.tail_model(side)?;
        let p = power as f64;
        let tail = |l: usize| model.tail(l, p);
        let mut hi = 1usize;
        let mut t_hi = tail(hi)?;
        if t_hi <= tol {
            return Ok((hi, t_hi));
        }
        while t_hi > tol {
            if hi >= cap {
                return Ok((cap, tail(cap)?));
            }
            hi = (hi * 2).min(cap);
            t_hi = tail(hi)?;
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let t = tail(mid)?;
            if t <= tol {
                hi = mid;
                t_hi = t;
            } else {
                lo = mid;
            }
        }
        Ok((hi, t_hi))
    }

    /// Truncation radius for the Zak series on `side`, failing when `tol`
    /// cannot be met below [`MAX_RADIUS`].
    pub fn truncation_radius(&self, side: Side, tol: f64) -> Result<(usize, f64)> {
        let (l, tail) = self.radius_for(side, 1, tol, MAX_RADIUS)?;
        if tail > tol {
            return Err(Error::Accuracy { estimated: tail, target: tol });
        }
        Ok((l, tail))
    }
}
