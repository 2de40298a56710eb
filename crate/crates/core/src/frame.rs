//! The random-periodic Zak sum `G(t,ξ) = Σ_i |Z(T_{x_i} g)(t,ξ)|²`, frame
//! certificates from the mesh sandwich, Gabor coefficients and Zak-domain
//! reconstruction.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::constants::WindowConstants;
use crate::error::{Error, Result};
use crate::math::{cis_turns, dft2_in_place, is_pow2, next_pow2, trig_sweep};
use crate::theory::mesh_width_for;
use crate::windows::{Side, WindowSpec};
use crate::zak::{inverse_zak, zak_grid, zak_of_signal, SignalGrid, ZakGrid};

/// Smallest mesh width accepted by [`certify_frame`].
pub const MIN_DELTA: f64 = 1.0 / 65536.0;

/// Grid used for verdicts on windows that cannot be certified.
pub const DEFAULT_VERDICT_GRID: usize = 256;

/// Largest literal mesh evaluated point by point.
const MAX_LITERAL_MESH: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Provenance {
    Explicit,
    Sampled { seed: u64, trial: u64 },
}

/// The offsets `x_1, …, x_m ∈ [0,1)` of `Λ = ℤ + {x_i}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointSet {
    pub points: Vec<f64>,
    pub provenance: Provenance,
}

impl PointSet {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        Self::with_provenance(points, Provenance::Explicit)
    }

    pub fn with_provenance(points: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("point set must not be empty".into()));
        }
        if let Some(x) = points.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return Err(Error::InvalidArgument(format!("point {x} is outside [0, 1)")));
        }
        Ok(Self { points, provenance })
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }
}

/// Samples of `G` at `(j/nt, s/nxi)`, row-major by `j`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SumGrid {
    pub nt: usize,
    pub nxi: usize,
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

impl SumGrid {
    pub fn get(&self, j: usize, s: usize) -> f64 {
        self.values[j * self.nxi + s]
    }
}

/// Autocorrelation coefficients `c_d = Σ_i Σ_l g(u_i+l) g(u_i+l−d)` for
/// `d = 0..=2L`, so that `G(t,ξ) = c_0 + 2 Σ_{d≥1} c_d cos(2πdξ)`.
fn row_coefficients(spec: &WindowSpec, pts: &PointSet, t: f64, radius: usize) -> Result<Vec<f64>> {
    let width = 2 * radius + 1;
    let mut c = vec![0.0; width];
    let mut block = vec![0.0; width];
    for &x in &pts.points {
        let s = t - x;
        let u = s - s.floor();
        for (i, b) in block.iter_mut().enumerate() {
            *b = spec.eval_time(u + i as f64 - radius as f64)?;
        }
        for (d, cd) in c.iter_mut().enumerate() {
            *cd += block[d..].iter().zip(&block).map(|(a, b)| a * b).sum::<f64>();
        }
    }
    Ok(c)
}

fn eval_row(c: &[f64], xi: f64) -> f64 {
    let v = c[0] + 2.0 * c.iter().enumerate().skip(1).map(|(d, cd)| cd * (2.0 * core::f64::consts::PI * d as f64 * xi).cos()).sum::<f64>();
    v.max(0.0)
}

fn sweep_row(c: &[f64], nxi: usize) -> Vec<f64> {
    let l = c.len() as i64 - 1;
    let full: Vec<Complex64> = (-l..=l).map(|d| Complex64::new(c[d.unsigned_abs() as usize], 0.0)).collect();
    trig_sweep(&full, -l, nxi, is_pow2(nxi)).into_iter().map(|z| z.re.max(0.0)).collect()
}

/// `G` on the `nt × nxi` grid, summed in ascending point order.
pub fn zak_sum_grid(spec: &WindowSpec, pts: &PointSet, nt: usize, nxi: usize, tol: f64) -> Result<SumGrid> {
    if nt < 2 || nxi < 2 {
        return Err(Error::Shape(format!("sum grid {nt}×{nxi} must be at least 2×2")));
    }
    let (radius, _) = spec.truncation_radius(Side::Time, tol)?;
    let mut values = Vec::with_capacity(nt * nxi);
    for j in 0..nt {
        let c = row_coefficients(spec, pts, j as f64 / nt as f64, radius)?;
        values.extend(sweep_row(&c, nxi));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(SumGrid { nt, nxi, values, min, max })
}

/// `G(t, ξ)` at an arbitrary point.
pub fn zak_sum_point(spec: &WindowSpec, pts: &PointSet, t: f64, xi: f64, tol: f64) -> Result<f64> {
    let (radius, _) = spec.truncation_radius(Side::Time, tol)?;
    Ok(eval_row(&row_coefficients(spec, pts, t, radius)?, xi))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Targets {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

impl Targets {
    pub fn new(alpha: Option<f64>, beta: Option<f64>) -> Self {
        Self { alpha, beta }
    }

    /// Whether `lo ≥ mα` and `hi ≤ mβ` for the targets that are set.
    pub fn met(&self, m: usize, lo: f64, hi: f64) -> bool {
        let m = m as f64;
        self.alpha.is_none_or(|a| lo >= m * a) && self.beta.is_none_or(|b| hi <= m * b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    CertifiedFrame,
    FrameOnGridOnly,
    Fail,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::CertifiedFrame => "certified_frame",
            Verdict::FrameOnGridOnly => "frame_on_grid_only",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameCertificate {
    pub points: PointSet,
    pub m: usize,
    pub grid_n: usize,
    pub grid_min: f64,
    pub grid_max: f64,
    /// `grid_min − mq/2`; absent for grid-only verdicts.
    pub a_cert: Option<f64>,
    /// `grid_max + mq/2`; absent for grid-only verdicts.
    pub b_cert: Option<f64>,
    pub delta: Option<f64>,
    /// Extrema over the literal mesh `δℤ² ∩ [0,1]²` when it is small enough
    /// to evaluate.
    pub mesh_min: Option<f64>,
    pub mesh_max: Option<f64>,
    pub mesh_points: Option<u64>,
    pub targets: Targets,
    pub verdict: Verdict,
    pub constants: Option<WindowConstants>,
    pub tol: f64,
}

fn verdict(m: usize, grid: (f64, f64), cert: Option<(f64, f64)>, targets: &Targets) -> Verdict {
    if let Some((a, b)) = cert {
        if a > 0.0 && targets.met(m, a, b) {
            return Verdict::CertifiedFrame;
        }
    }
    if grid.0 > 0.0 && targets.met(m, grid.0, grid.1) {
        Verdict::FrameOnGridOnly
    } else {
        Verdict::Fail
    }
}

/// Certifies frame bounds through the mesh sandwich: `G` is evaluated on
/// the smallest power-of-two grid with step at most `δ = q/(4KC)`, and the
/// extrema are widened by `mq/2`.
pub fn certify_frame(
    spec: &WindowSpec,
    pts: &PointSet,
    constants: &WindowConstants,
    targets: Targets,
    tol: f64,
) -> Result<FrameCertificate> {
    let mesh = mesh_width_for(constants)?;
    if mesh.delta < MIN_DELTA {
        return Err(Error::ResolutionInfeasible { delta: mesh.delta });
    }
    let n = next_pow2((1.0 / mesh.delta).ceil() as usize).max(2);
    let grid = zak_sum_grid(spec, pts, n, n, tol)?;
    let m = pts.m();
    let margin = m as f64 * constants.q() / 2.0;
    let a = grid.min - margin;
    let b = grid.max + margin;

    let (mesh_min, mesh_max) = if mesh.mesh_points <= MAX_LITERAL_MESH {
        let (radius, _) = spec.truncation_radius(Side::Time, tol)?;
        let steps = (mesh.mesh_points as f64).sqrt().round() as usize;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..steps {
            let c = row_coefficients(spec, pts, i as f64 * mesh.delta, radius)?;
            for s in 0..steps {
                let v = eval_row(&c, s as f64 * mesh.delta);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (Some(lo), Some(hi))
    } else {
        (None, None)
    };

    Ok(FrameCertificate {
        points: pts.clone(),
        m,
        grid_n: n,
        grid_min: grid.min,
        grid_max: grid.max,
        a_cert: Some(a),
        b_cert: Some(b),
        delta: Some(mesh.delta),
        mesh_min,
        mesh_max,
        mesh_points: Some(mesh.mesh_points),
        targets,
        verdict: verdict(m, (grid.min, grid.max), Some((a, b)), &targets),
        constants: Some(constants.clone()),
        tol,
    })
}

/// Grid-only verdict for windows whose Zak transform is not Lipschitz.
pub fn grid_verdict(spec: &WindowSpec, pts: &PointSet, n: usize, targets: Targets, tol: f64) -> Result<FrameCertificate> {
    let grid = zak_sum_grid(spec, pts, n, n, tol)?;
    let m = pts.m();
    Ok(FrameCertificate {
        points: pts.clone(),
        m,
        grid_n: n,
        grid_min: grid.min,
        grid_max: grid.max,
        a_cert: None,
        b_cert: None,
        delta: None,
        mesh_min: None,
        mesh_max: None,
        mesh_points: None,
        targets,
        verdict: verdict(m, (grid.min, grid.max), None, &targets),
        constants: None,
        tol,
    })
}

/// Coefficients `⟨f, M_k T_{n + x_i} g⟩` for `|k| ≤ kmax`, `|n| ≤ nmax`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GaborCoefficients {
    pub m: usize,
    pub kmax: usize,
    pub nmax: usize,
    /// Indexed `[i][k + kmax][n + nmax]`, flattened.
    pub values: Vec<Complex64>,
    /// Coefficient energy in discrete frequencies outside the retained range.
    pub energy_outside: f64,
    /// Rectangle-rule `∫_Q |Zf|² G` on the same grid.
    pub zak_product_energy: f64,
    pub nt: usize,
    pub nxi: usize,
}

impl GaborCoefficients {
    pub fn get(&self, i: usize, k: i64, n: i64) -> Complex64 {
        let kw = 2 * self.kmax + 1;
        let nw = 2 * self.nmax + 1;
        let ki = (k + self.kmax as i64) as usize;
        let ni = (n + self.nmax as i64) as usize;
        self.values[(i * kw + ki) * nw + ni]
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }
}

fn frequency_grid(half_width: usize, radius: usize) -> usize {
    next_pow2(2 * half_width + 2 * radius + 1)
}

/// Translate Zak grids sharing the signal's time resolution.
fn translate_grids(spec: &WindowSpec, pts: &PointSet, nt: usize, nxi: usize, tol: f64) -> Result<Vec<ZakGrid>> {
    pts.points.iter().map(|&x| zak_grid(spec, x, nt, nxi, tol)).collect()
}

/// Gabor coefficients as 2-D discrete Fourier coefficients of
/// `Zf · conj(Z(T_{x_i} g))` over `Q`.
///
/// `None` for `kmax`/`nmax` retains every non-Nyquist discrete index.
pub fn gabor_coefficients(
    f: &SignalGrid,
    spec: &WindowSpec,
    pts: &PointSet,
    kmax: Option<usize>,
    nmax: Option<usize>,
    tol: f64,
) -> Result<GaborCoefficients> {
    let (radius, _) = spec.truncation_radius(Side::Time, tol)?;
    let nt = f.nt;
    if nt < 2 {
        return Err(Error::Shape("signal grid needs at least 2 samples per unit".into()));
    }
    let nxi = frequency_grid(f.half_width, radius);
    let kmax = kmax.unwrap_or((nt - 1) / 2);
    let nmax = nmax.unwrap_or((nxi - 1) / 2);
    if 2 * kmax + 1 > nt || 2 * nmax + 1 > nxi {
        return Err(Error::Shape(format!(
            "coefficient range |k| ≤ {kmax}, |n| ≤ {nmax} exceeds the {nt}×{nxi} grid"
        )));
    }
    let zf = zak_of_signal(f, nxi)?;
    let scale = 1.0 / (nt * nxi) as f64;
    let kw = 2 * kmax + 1;
    let nw = 2 * nmax + 1;
    let mut values = Vec::with_capacity(pts.m() * kw * nw);
    let mut total = 0.0;
    let mut product_energy = 0.0;
    for zi in translate_grids(spec, pts, nt, nxi, tol)? {
        let mut buf: Vec<Complex64> = zf.values.iter().zip(&zi.values).map(|(a, b)| a * b.conj()).collect();
        product_energy += buf.iter().map(|z| z.norm_sqr()).sum::<f64>() * scale;
        dft2_in_place(&mut buf, nt, nxi, -1.0);
        for z in buf.iter_mut() {
            *z *= scale;
        }
        total += buf.iter().map(|z| z.norm_sqr()).sum::<f64>();
        for k in -(kmax as i64)..=kmax as i64 {
            let row = k.rem_euclid(nt as i64) as usize;
            for n in -(nmax as i64)..=nmax as i64 {
                values.push(buf[row * nxi + n.rem_euclid(nxi as i64) as usize]);
            }
        }
    }
    // Discrete Parseval: the full coefficient energy equals the quadrature of
    // Σ_i |Zf|²|Z_i|² = |Zf|² G.
    let captured: f64 = values.iter().map(|z| z.norm_sqr()).sum();
    Ok(GaborCoefficients {
        m: pts.m(),
        kmax,
        nmax,
        values,
        energy_outside: (total - captured).max(0.0),
        zak_product_energy: product_energy,
        nt,
        nxi,
    })
}

/// Output half width of the frame operator on a signal of half width `h`.
fn operator_half_width(h: usize, radius: usize) -> usize {
    h + 2 * radius + 2
}

/// `S f` realized as `Z^{-1}(G · Zf)`.
pub fn frame_operator_apply(f: &SignalGrid, spec: &WindowSpec, pts: &PointSet, tol: f64) -> Result<SignalGrid> {
    let (radius, _) = spec.truncation_radius(Side::Time, tol)?;
    let h = operator_half_width(f.half_width, radius);
    let padded = f.embed(h)?;
    let nxi = next_pow2(2 * h);
    let mut z = zak_of_signal(&padded, nxi)?;
    let g = zak_sum_grid(spec, pts, f.nt, nxi, tol)?;
    for (v, w) in z.values.iter_mut().zip(&g.values) {
        *v *= w;
    }
    inverse_zak(&z, h)
}

/// Inverts the frame operator by dividing the Zak transform by `G`.
///
/// Refuses unless the certificate proves `A > 0` and `G` stays above `q/4`
/// on the evaluation grid.
pub fn reconstruct(
    h: &SignalGrid,
    spec: &WindowSpec,
    pts: &PointSet,
    certificate: &FrameCertificate,
    tol: f64,
) -> Result<SignalGrid> {
    let a = certificate
        .a_cert
        .ok_or_else(|| Error::ReconstructionRefused("certificate carries no certified lower bound".into()))?;
    if a <= 0.0 {
        return Err(Error::ReconstructionRefused(format!("certified lower bound {a} is not positive")));
    }
    if certificate.points.points != pts.points {
        return Err(Error::ReconstructionRefused("certificate was issued for a different point set".into()));
    }
    let floor = certificate.constants.as_ref().map_or(0.0, |c| c.q() / 4.0);
    let nxi = next_pow2(2 * h.half_width);
    let mut z = zak_of_signal(h, nxi)?;
    let g = zak_sum_grid(spec, pts, h.nt, nxi, tol)?;
    if g.min < floor {
        return Err(Error::ReconstructionRefused(format!(
            "Zak sum drops to {} below the guard {floor}",
            g.min
        )));
    }
    for (v, w) in z.values.iter_mut().zip(&g.values) {
        *v /= w;
    }
    inverse_zak(&z, h.half_width)
}

/// Zak transforms `Z(T_{x_i} g) / G` of the canonical dual windows.
pub fn dual_zak(spec: &WindowSpec, pts: &PointSet, nt: usize, nxi: usize, tol: f64) -> Result<Vec<ZakGrid>> {
    let g = zak_sum_grid(spec, pts, nt, nxi, tol)?;
    if g.min <= 0.0 {
        return Err(Error::ReconstructionRefused("Zak sum vanishes on the grid".into()));
    }
    let mut grids = translate_grids(spec, pts, nt, nxi, tol)?;
    for z in grids.iter_mut() {
        for (v, w) in z.values.iter_mut().zip(&g.values) {
            *v /= w;
        }
    }
    Ok(grids)
}

/// `⟨f, M_k T_{n+x} g⟩` by rectangle quadrature on the signal grid.
pub fn direct_coefficient(f: &SignalGrid, spec: &WindowSpec, x: f64, k: i64, n: i64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, v) in f.samples.iter().enumerate() {
        let t = f.time(i);
        let g = spec.eval_time(t - n as f64 - x)?;
        if g != 0.0 {
            acc += v * cis_turns(-(k as f64) * t) * g;
        }
    }
    Ok(acc / f.nt as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_sum_is_m() {
        let pts = PointSet::new(vec![0.1, 0.5, 0.77]).unwrap();
        let g = zak_sum_grid(&WindowSpec::indicator(), &pts, 16, 16, 1e-12).unwrap();
        for v in &g.values {
            assert!((v - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sum_grid_matches_zak_moduli() {
        let spec = WindowSpec::gaussian(0.8).unwrap();
        let pts = PointSet::new(vec![0.2, 0.65]).unwrap();
        let g = zak_sum_grid(&spec, &pts, 8, 16, 1e-12).unwrap();
        let a = zak_grid(&spec, 0.2, 8, 16, 1e-12).unwrap();
        let b = zak_grid(&spec, 0.65, 8, 16, 1e-12).unwrap();
        for j in 0..8 {
            for s in 0..16 {
                let expect = a.get(j, s).norm_sqr() + b.get(j, s).norm_sqr();
                assert!((g.get(j, s) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn point_set_validation() {
        assert!(PointSet::new(vec![]).is_err());
        assert!(PointSet::new(vec![1.0]).is_err());
        assert!(PointSet::new(vec![-0.1]).is_err());
    }

    #[test]
    fn indicator_coefficients_are_a_delta() {
        let f = SignalGrid::from_fn(8, 1, |t| Complex64::new(if (0.0..1.0).contains(&t) { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let pts = PointSet::new(vec![0.0]).unwrap();
        let c = gabor_coefficients(&f, &WindowSpec::indicator(), &pts, Some(2), Some(1), 1e-12).unwrap();
        for k in -2..=2 {
            for n in -1..=1 {
                let expect = if k == 0 && n == 0 { 1.0 } else { 0.0 };
                assert!((c.get(0, k, n) - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }
}
