//! Truncated-series Zak transform `Zf(t,ξ) = Σ_k f(t+k) e^{2πikξ}` on the
//! unit square, with the identity checks used to validate it.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{cis_turns, dft_in_place, is_pow2, roots, trig_sweep};
use crate::windows::{Side, WindowSpec};

/// Default truncation tolerance for Zak series.
pub const DEFAULT_TOL: f64 = 1e-10;

/// How a grid row is swept across the frequency axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// FFT when the grid is a power of two at least `2L+1`, direct otherwise.
    Auto,
    Direct,
    Fft,
}

/// Samples of `Z(T_x g)` at `(j/nt, s/nxi)`, stored row-major by `j`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZakGrid {
    pub nt: usize,
    pub nxi: usize,
    pub values: Vec<Complex64>,
    pub radius: usize,
    pub truncation_error: f64,
    pub spec_id: String,
    pub shift: f64,
}

impl ZakGrid {
    pub fn get(&self, j: usize, s: usize) -> Complex64 {
        self.values[j * self.nxi + s]
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        &self.values[j * self.nxi..(j + 1) * self.nxi]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Rectangle-rule `∫_Q |Z|²`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / (self.nt * self.nxi) as f64
    }
}

/// Samples of a signal at `t = −H + n/nt`, `n = 0..2H·nt`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignalGrid {
    pub nt: usize,
    pub half_width: usize,
    pub samples: Vec<Complex64>,
}

impl SignalGrid {
    pub fn new(nt: usize, half_width: usize, samples: Vec<Complex64>) -> Result<Self> {
        if nt == 0 || half_width == 0 {
            return Err(Error::Shape("signal grid needs nt ≥ 1 and half width ≥ 1".into()));
        }
        if samples.len() != 2 * half_width * nt {
            return Err(Error::Shape(format!(
                "signal grid expects {} samples, got {}",
                2 * half_width * nt,
                samples.len()
            )));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("signal samples must be finite".into()));
        }
        Ok(Self { nt, half_width, samples })
    }

    pub fn from_fn(nt: usize, half_width: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let n = 2 * half_width * nt;
        let samples = (0..n).map(|i| f(-(half_width as f64) + i as f64 / nt as f64)).collect();
        Self::new(nt, half_width, samples)
    }

    pub fn zeros(nt: usize, half_width: usize) -> Result<Self> {
        Self::new(nt, half_width, vec![Complex64::new(0.0, 0.0); 2 * half_width * nt])
    }

    pub fn time(&self, n: usize) -> f64 {
        -(self.half_width as f64) + n as f64 / self.nt as f64
    }

    /// Rectangle-rule `‖f‖²`.
    pub fn norm_sq(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.nt as f64
    }

    /// Rectangle-rule `⟨f, h⟩`.
    pub fn inner(&self, other: &SignalGrid) -> Result<Complex64> {
        if self.nt != other.nt || self.half_width != other.half_width {
            return Err(Error::Shape("inner product of incompatible signal grids".into()));
        }
        let s: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b.conj()).sum();
        Ok(s / self.nt as f64)
    }

    /// Zero-padded copy on a wider symmetric interval.
    pub fn embed(&self, half_width: usize) -> Result<SignalGrid> {
        if half_width < self.half_width {
            return Err(Error::Shape("cannot embed into a narrower grid".into()));
        }
        let mut out = SignalGrid::zeros(self.nt, half_width)?;
        let offset = (half_width - self.half_width) * self.nt;
        out.samples[offset..offset + self.samples.len()].copy_from_slice(&self.samples);
        Ok(out)
    }

    /// Largest sample deviation on the common interval, counting samples
    /// outside the narrower grid against zero.
    pub fn max_abs_diff(&self, other: &SignalGrid) -> Result<f64> {
        if self.nt != other.nt {
            return Err(Error::Shape("signal grids differ in resolution".into()));
        }
        let h = self.half_width.max(other.half_width);
        let a = self.embed(h)?;
        let b = other.embed(h)?;
        Ok(a.samples.iter().zip(&b.samples).fold(0.0, |m, (x, y)| m.max((x - y).norm())))
    }
}

fn check_grid(nt: usize, nxi: usize) -> Result<()> {
    if nt < 2 || nxi < 2 {
        return Err(Error::Shape(format!("Zak grid {nt}×{nxi} must be at least 2×2")));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")))
    }
}

/// Splits `s` into `u ∈ [0,1)` and the integer `j0` with `s = u + j0`.
fn split(s: f64) -> (f64, i64) {
    let j0 = s.floor();
    let mut u = s - j0;
    if u >= 1.0 {
        u = 0.0;
        return (u, j0 as i64 + 1);
    }
    (u, j0 as i64)
}

/// Samples `g(u + l)` for `l = −L..=L`.
fn window_block(spec: &WindowSpec, u: f64, radius: usize) -> Result<Vec<Complex64>> {
    let r = radius as i64;
    (-r..=r).map(|l| spec.eval_time(u + l as f64).map(|v| Complex64::new(v, 0.0))).collect()
}

/// `Z(T_x g)(t, ξ) = Σ_k g(t − x + k) e^{2πikξ}` with a certified tail of at
/// most `tol`.
pub fn zak_point(spec: &WindowSpec, x: f64, t: f64, xi: f64, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    let (radius, _) = spec.truncation_radius(Side::Time, tol)?;
    zak_point_with_radius(spec, x, t, xi, radius)
}

pub(crate) fn zak_point_with_radius(spec: &WindowSpec, x: f64, t: f64, xi: f64, radius: usize) -> Result<Complex64> {
    let (u, j0) = split(t - x);
    let r = radius as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for l in -r..=r {
        let v = spec.eval_time(u + l as f64)?;
        if v != 0.0 {
            acc += cis_turns((l - j0) as f64 * xi) * v;
        }
    }
    Ok(acc)
}

/// `Zĝ(ξ, t) = Σ_k ĝ(ξ + k) e^{2πikt}`.
pub fn zak_point_freq(spec: &WindowSpec, xi: f64, t: f64, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    let (radius, _) = spec.truncation_radius(Side::Frequency, tol)?;
    let (u, j0) = split(xi);
    let r = radius as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for l in -r..=r {
        acc += spec.eval_freq(u + l as f64) * cis_turns((l - j0) as f64 * t);
    }
    Ok(acc)
}

pub fn zak_grid(spec: &WindowSpec, x: f64, nt: usize, nxi: usize, tol: f64) -> Result<ZakGrid> {
    zak_grid_with(spec, x, nt, nxi, tol, Sweep::Auto)
}

pub fn zak_grid_with(spec: &WindowSpec, x: f64, nt: usize, nxi: usize, tol: f64, sweep: Sweep) -> Result<ZakGrid> {
    check_grid(nt, nxi)?;
    check_tol(tol)?;
    let (radius, err) = spec.truncation_radius(Side::Time, tol)?;
    let use_fft = match sweep {
        Sweep::Auto => is_pow2(nxi) && nxi > 2 * radius,
        Sweep::Direct => false,
        Sweep::Fft => {
            if !is_pow2(nxi) {
                return Err(Error::Shape(format!("FFT sweep needs a power-of-two grid, got {nxi}")));
            }
            true
        }
    };
    let mut values = Vec::with_capacity(nt * nxi);
    for j in 0..nt {
        let (u, j0) = split(j as f64 / nt as f64 - x);
        let a = window_block(spec, u, radius)?;
        values.extend(trig_sweep(&a, -(radius as i64) - j0, nxi, use_fft));
    }
    Ok(ZakGrid { nt, nxi, values, radius, truncation_error: err, spec_id: spec.to_string(), shift: x })
}

/// Relative gap between the rectangle-rule energies `∫_Q |Zg|²` and
/// `∫ |g|²` on the shared time lattice `j/nt`.
pub fn zak_unitarity_defect(spec: &WindowSpec, nt: usize, nxi: usize, tol: f64) -> Result<f64> {
    let grid = zak_grid(spec, 0.0, nt, nxi, tol)?;
    let zak_energy = grid.energy();
    let r = grid.radius as i64 + 1;
    let mut g_energy = 0.0;
    for n in (-r * nt as i64)..(r * nt as i64) {
        g_energy += spec.eval_time(n as f64 / nt as f64)?.powi(2);
    }
    g_energy /= nt as f64;
    if g_energy == 0.0 {
        return Err(Error::InvalidSpec("window has zero energy on the grid".into()));
    }
    Ok((zak_energy - g_energy).abs() / g_energy)
}

/// Largest deviation of `Zg(t,ξ) − e^{−2πitξ} Zĝ(−ξ, t)` over the grid.
///
/// This is the time/frequency switch identity for `Zf(t,ξ) = Σ f(t+k)e^{2πikξ}`
/// with `ĝ(ξ) = ∫ g(t) e^{−2πiξt} dt`, obtained from Poisson summation.
pub fn zak_switch_defect(spec: &WindowSpec, nt: usize, nxi: usize, tol: f64) -> Result<f64> {
    check_grid(nt, nxi)?;
    check_tol(tol)?;
    let lhs = zak_grid(spec, 0.0, nt, nxi, tol)?;
    let (radius, _) = spec.truncation_radius(Side::Frequency, tol)?;
    let r = radius as i64;
    let use_fft = is_pow2(nt);
    let period = (nt * nxi) as u64;
    let mut worst: f64 = 0.0;
    for s in 0..nxi {
        let xi = s as f64 / nxi as f64;
        // ĝ(n − ξ) for n = −L..=L+1 covers the blocks |l| ≤ L around 1 − ξ.
        let a: Vec<Complex64> = (-r..=r + 1).map(|n| spec.eval_freq(n as f64 - xi)).collect();
        let col = trig_sweep(&a, -r, nt, use_fft);
        for (j, z) in col.iter().enumerate() {
            let phase = cis_turns(-(((j as u64 * s as u64) % period) as f64) / period as f64);
            worst = worst.max((lhs.get(j, s) - phase * z).norm());
        }
    }
    Ok(worst)
}

/// Largest grid deviation between the Zak transform of `M_k T_n g`, summed
/// directly from the shifted and modulated window, and
/// `e^{2πikt} e^{2πinξ} Zg`.
pub fn covariance_defect(spec: &WindowSpec, k: i64, n: i64, nt: usize, nxi: usize) -> Result<f64> {
    check_grid(nt, nxi)?;
    let (radius, _) = spec.truncation_radius(Side::Time, 1e-15)?;
    let r = radius as i64;
    let mut worst: f64 = 0.0;
    for j in 0..nt {
        let t = j as f64 / nt as f64;
        let g: Vec<f64> = (-r..=r).map(|l| spec.eval_time(t + l as f64)).collect::<Result<_>>()?;
        let h: Vec<Complex64> = (n - r..=n + r)
            .map(|l| {
                let tl = t + l as f64;
                spec.eval_time(tl - n as f64).map(|v| cis_turns(k as f64 * tl) * v)
            })
            .collect::<Result<_>>()?;
        for s in 0..nxi {
            let xi = s as f64 / nxi as f64;
            let mut lhs = Complex64::new(0.0, 0.0);
            for (i, v) in h.iter().enumerate() {
                lhs += v * cis_turns((n - r + i as i64) as f64 * xi);
            }
            let mut zg = Complex64::new(0.0, 0.0);
            for (i, &v) in g.iter().enumerate() {
                zg += cis_turns((i as i64 - r) as f64 * xi) * v;
            }
            let rhs = cis_turns(k as f64 * t) * cis_turns(n as f64 * xi) * zg;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// Zak transform of a sampled signal on `nt × nxi`; exact for signals
/// supported in `[−H, H)` as long as `nxi ≥ 2H`.
pub fn zak_of_signal(f: &SignalGrid, nxi: usize) -> Result<ZakGrid> {
    let h = f.half_width;
    check_grid(f.nt, nxi)?;
    if nxi < 2 * h {
        return Err(Error::Shape(format!(
            "frequency grid {nxi} too coarse for signal half width {h} (need ≥ {})",
            2 * h
        )));
    }
    let use_fft = is_pow2(nxi);
    let mut values = Vec::with_capacity(f.nt * nxi);
    for j in 0..f.nt {
        let a: Vec<Complex64> = (0..2 * h).map(|i| f.samples[i * f.nt + j]).collect();
        values.extend(trig_sweep(&a, -(h as i64), nxi, use_fft));
    }
    Ok(ZakGrid {
        nt: f.nt,
        nxi,
        values,
        radius: h,
        truncation_error: 0.0,
        spec_id: "signal".to_string(),
        shift: 0.0,
    })
}

/// Recovers `f(t_j + k)` for `|k| ≤ H` as discrete Fourier coefficients of
/// each Zak row.
pub fn inverse_zak(z: &ZakGrid, half_width: usize) -> Result<SignalGrid> {
    if half_width == 0 {
        return Err(Error::Shape("half width must be at least 1".into()));
    }
    if z.nxi < 2 * half_width {
        return Err(Error::Shape(format!(
            "frequency grid {} too coarse for half width {half_width}",
            z.nxi
        )));
    }
    let nxi = z.nxi;
    let mut out = SignalGrid::zeros(z.nt, half_width)?;
    let w = if is_pow2(nxi) { Vec::new() } else { roots(nxi, -1.0) };
    let mut buf = vec![Complex64::new(0.0, 0.0); nxi];
    for j in 0..z.nt {
        buf.copy_from_slice(z.row(j));
        if is_pow2(nxi) {
            dft_in_place(&mut buf, -1.0);
        } else {
            let row = z.row(j);
            for (m, b) in buf.iter_mut().enumerate() {
                *b = row.iter().enumerate().map(|(s, v)| v * w[(s * m) % nxi]).sum();
            }
        }
        for i in 0..2 * half_width {
            let k = i as i64 - half_width as i64;
            out.samples[i * z.nt + j] = buf[k.rem_euclid(nxi as i64) as usize] / nxi as f64;
        }
    }
    Ok(out)
}
