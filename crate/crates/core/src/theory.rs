//! Closed-form quantities: Hoeffding's bound, the mesh width `δ = q/(4KC)`,
//! per-branch failure probabilities and the sample-complexity threshold.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;

use crate::constants::WindowConstants;
use crate::error::{Error, Result};

/// `exp(−2n²t² / Σ(b_i − a_i)²)`, clamped at 1.
pub fn hoeffding_bound(n: u64, ranges: &[(f64, f64)], t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("hoeffding: n must be at least 1".into()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("hoeffding: deviation {t} must be positive")));
    }
    let mut spread = 0.0;
    for &(a, b) in ranges {
        if !a.is_finite() || !b.is_finite() || a > b {
            return Err(Error::InvalidArgument(format!("hoeffding: invalid range ({a}, {b})")));
        }
        spread += (b - a) * (b - a);
    }
    if spread == 0.0 {
        return Err(Error::InvalidArgument("hoeffding: all ranges are degenerate".into()));
    }
    let n = n as f64;
    Ok((-2.0 * n * n * t * t / spread).exp().min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeshWidth {
    pub delta: f64,
    /// Exact count `(⌊1/δ⌋ + 1)²` of `δℤ² ∩ [0,1]²`.
    pub mesh_points: u64,
    /// Cardinality surrogate `(4CK/q + 1)²` used in probability bounds.
    pub surrogate: f64,
}

/// Number of lattice steps `⌊1/δ⌋`, snapping values within rounding of an
/// integer.
fn lattice_steps(delta: f64) -> u64 {
    let inv = 1.0 / delta;
    let nearest = inv.round();
    if (inv - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as u64
    } else {
        inv.floor() as u64
    }
}

pub fn mesh_width(k: f64, q: f64, c: f64) -> Result<MeshWidth> {
    for (name, v) in [("K", k), ("q", q), ("C", c)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!("mesh width: {name} = {v} must be positive")));
        }
    }
    let delta = q / (4.0 * k * c);
    let steps = lattice_steps(delta) + 1;
    let ratio = 4.0 * c * k / q;
    Ok(MeshWidth { delta, mesh_points: steps * steps, surrogate: (ratio + 1.0) * (ratio + 1.0) })
}

pub fn mesh_width_for(constants: &WindowConstants) -> Result<MeshWidth> {
    mesh_width(constants.k(), constants.q(), constants.c())
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexityQuery {
    pub constants: WindowConstants,
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
}

impl ComplexityQuery {
    pub fn new(constants: WindowConstants, alpha: f64, beta: f64, eps: f64) -> Result<Self> {
        check_hypotheses(&constants, alpha, beta)?;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!("eps = {eps} must lie in (0, 1)")));
        }
        Ok(Self { constants, alpha, beta, eps })
    }
}

fn check_hypotheses(constants: &WindowConstants, alpha: f64, beta: f64) -> Result<()> {
    let half = constants.q() / 2.0;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must be positive")));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("beta = {beta} must be finite")));
    }
    if alpha >= half {
        return Err(Error::HypothesisViolation(format!("alpha = {alpha} must be below q/2 = {half}")));
    }
    if beta <= half {
        return Err(Error::HypothesisViolation(format!("beta = {beta} must exceed q/2 = {half}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexityResult {
    pub m_threshold: u64,
    pub branch_lower: f64,
    pub branch_upper: f64,
    pub delta: f64,
    pub mesh_points: u64,
    pub mesh_surrogate: f64,
}

/// Smallest integer `m` strictly above both branches
/// `K⁴/(2(γ − q/2)²) · ln(2(4CK/q + 1)²/ε)` for `γ ∈ {α, β}`.
pub fn sample_complexity(query: &ComplexityQuery) -> Result<ComplexityResult> {
    let c = &query.constants;
    check_hypotheses(c, query.alpha, query.beta)?;
    let mesh = mesh_width_for(c)?;
    let half = c.q() / 2.0;
    let k4 = c.k().powi(4);
    let log = (2.0 * mesh.surrogate / query.eps).ln();
    let branch = |g: f64| k4 / (2.0 * (g - half) * (g - half)) * log;
    let branch_lower = branch(query.alpha);
    let branch_upper = branch(query.beta);
    let top = branch_lower.max(branch_upper);
    if !(top.is_finite() && top < 1e18) {
        return Err(Error::InvalidArgument(format!("threshold {top} is out of range")));
    }
    Ok(ComplexityResult {
        m_threshold: top.floor() as u64 + 1,
        branch_lower,
        branch_upper,
        delta: mesh.delta,
        mesh_points: mesh.mesh_points,
        mesh_surrogate: mesh.surrogate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FailureBounds {
    /// Bound on the upper event failing, driven by `β`.
    pub p1: f64,
    /// Bound on the lower event failing, driven by `α`.
    pub p2: f64,
    pub p1_unclamped: f64,
    pub p2_unclamped: f64,
    pub total: f64,
}

/// `(4CK/q + 1)² exp(−2m(γ − q/2)²/K⁴)` for `γ = β` and `γ = α`.
pub fn failure_probability_bounds(constants: &WindowConstants, alpha: f64, beta: f64, m: u64) -> Result<FailureBounds> {
    check_hypotheses(constants, alpha, beta)?;
    let mesh = mesh_width_for(constants)?;
    let half = constants.q() / 2.0;
    let k4 = constants.k().powi(4);
    let bound = |g: f64| mesh.surrogate * (-2.0 * m as f64 * (g - half) * (g - half) / k4).exp();
    let p1_unclamped = bound(beta);
    let p2_unclamped = bound(alpha);
    let p1 = p1_unclamped.min(1.0);
    let p2 = p2_unclamped.min(1.0);
    Ok(FailureBounds { p1, p2, p1_unclamped, p2_unclamped, total: (p1 + p2).min(1.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> WindowConstants {
        WindowConstants::from_values(1.0, 1.0, 1.0 / 3.0, 1.0, 10.0).unwrap()
    }

    #[test]
    fn hoeffding_examples() {
        let b = hoeffding_bound(1, &[(0.0, 1.0)], 0.5).unwrap();
        assert!((b - (-0.5f64).exp()).abs() < 1e-15);
        let b = hoeffding_bound(4, &[(0.0, 1.0); 4], 0.5).unwrap();
        assert!((b - (-2.0f64).exp()).abs() < 1e-15);
        assert!(hoeffding_bound(2, &[(1.0, 1.0)], 0.5).is_err());
    }

    #[test]
    fn mesh_examples() {
        let m = mesh_width(1.0, 1.0 / 3.0, 10.0).unwrap();
        assert!((m.delta - 1.0 / 120.0).abs() < 1e-15);
        assert_eq!(m.mesh_points, 14641);
        assert!((m.surrogate - 14641.0).abs() < 1e-9);
        let m = mesh_width(1.0, 1.0, 0.25).unwrap();
        assert_eq!(m.delta, 1.0);
        assert_eq!(m.mesh_points, 4);
    }

    #[test]
    fn threshold_example() {
        let q = ComplexityQuery::new(reference(), 1.0 / 12.0, 0.25, 0.1).unwrap();
        let r = sample_complexity(&q).unwrap();
        assert_eq!(r.m_threshold, 907);
        assert!((r.branch_lower - r.branch_upper).abs() < 1e-9);
    }

    #[test]
    fn hypothesis_violations() {
        assert!(matches!(
            ComplexityQuery::new(reference(), 0.2, 0.25, 0.1),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(matches!(
            failure_probability_bounds(&reference(), 0.1, 0.1, 5),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn zero_samples_give_clamped_bounds() {
        let b = failure_probability_bounds(&reference(), 1.0 / 12.0, 0.25, 0).unwrap();
        assert_eq!((b.p1, b.p2), (1.0, 1.0));
        assert!((b.p1_unclamped - 14641.0).abs() < 1e-9);
    }
}
