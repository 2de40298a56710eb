//! Seeded sampling of random-periodic point sets and Monte Carlo estimates
//! of the frame event `mα ≤ G ≤ mβ`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::{periodization_sq, WindowConstants};
use crate::error::{Error, Result};
use crate::frame::{zak_sum_grid, PointSet, Provenance};
use crate::windows::{Side, WindowSpec};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed derived from the master seed and the trial index.
pub fn derived_seed(master_seed: u64, trial: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(trial.wrapping_add(0x632B_E59B_D9B4_E019)))
}

/// Maps the top 53 bits of a word to `[0, 1)`.
fn unit(word: u64) -> f64 {
    (word >> 11) as f64 / (1u64 << 53) as f64
}

/// `m` uniform offsets in `[0, 1)`. The `i`-th point is the `i`-th word of a
/// ChaCha8 stream keyed by the derived trial seed.
pub fn sample_points(m: usize, master_seed: u64, trial: u64) -> Result<PointSet> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derived_seed(master_seed, trial));
    let points = (0..m).map(|_| unit(rng.next_u64())).collect();
    PointSet::with_provenance(points, Provenance::Sampled { seed: master_seed, trial })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EventMode {
    /// `mα ≤ G ≤ mβ` on the grid.
    RawGrid,
    /// Grid extrema widened by `mq/2` on a grid at least as fine as `δ`.
    Certified,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonteCarloConfig {
    pub spec: WindowSpec,
    pub constants: Option<WindowConstants>,
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    pub m: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub nt: usize,
    pub nxi: usize,
    pub mode: EventMode,
    pub tol: f64,
}

impl MonteCarloConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidArgument(format!("eps = {} must lie in (0, 1)", self.eps)));
        }
        if !(self.alpha >= 0.0 && self.alpha <= self.beta && self.beta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need 0 ≤ alpha ≤ beta, got alpha = {}, beta = {}",
                self.alpha, self.beta
            )));
        }
        if self.nt < 2 || self.nxi < 2 {
            return Err(Error::Shape("event grid must be at least 2×2".into()));
        }
        if self.mode == EventMode::Certified {
            let c = self.constants.as_ref().ok_or_else(|| {
                Error::InvalidArgument("certified events need window constants".into())
            })?;
            let half = c.q() / 2.0;
            if !(self.alpha < half && self.beta > half) {
                return Err(Error::HypothesisViolation(format!(
                    "need alpha < q/2 < beta with q/2 = {half}"
                )));
            }
            let delta = crate::theory::mesh_width_for(c)?.delta;
            if 1.0 / (self.nt as f64) > delta || 1.0 / (self.nxi as f64) > delta {
                return Err(Error::ResolutionInfeasible { delta });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub min_over_m: f64,
    pub max_over_m: f64,
    pub raw_pass: bool,
    pub certified_pass: Option<bool>,
    /// Outcome in the configured event mode.
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonteCarloReport {
    pub config: MonteCarloConfig,
    pub records: Vec<TrialRecord>,
    pub passes: u64,
    pub empirical_success: f64,
    pub theoretical_floor: f64,
    /// `1 − ε − 3√(ε(1−ε)/trials)`.
    pub acceptance_band: f64,
}

/// Runs the trials in index order.
pub fn run_trials(config: &MonteCarloConfig) -> Result<MonteCarloReport> {
    config.validate()?;
    let m = config.m as f64;
    let mut records = Vec::with_capacity(config.trials as usize);
    for trial in 0..config.trials {
        let pts = sample_points(config.m, config.master_seed, trial)?;
        let grid = zak_sum_grid(&config.spec, &pts, config.nt, config.nxi, config.tol)?;
        let raw_pass = grid.min >= m * config.alpha && grid.max <= m * config.beta;
        let certified_pass = config.constants.as_ref().map(|c| {
            let margin = m * c.q() / 2.0;
            grid.min - margin >= m * config.alpha && grid.max + margin <= m * config.beta
        });
        let pass = match config.mode {
            EventMode::RawGrid => raw_pass,
            EventMode::Certified => certified_pass.unwrap_or(false),
        };
        records.push(TrialRecord {
            trial,
            seed: derived_seed(config.master_seed, trial),
            min_over_m: grid.min / m,
            max_over_m: grid.max / m,
            raw_pass,
            certified_pass,
            pass,
        });
    }
    let passes = records.iter().filter(|r| r.pass).count() as u64;
    let n = config.trials as f64;
    let eps = config.eps;
    Ok(MonteCarloReport {
        config: config.clone(),
        records,
        passes,
        empirical_success: passes as f64 / n,
        theoretical_floor: 1.0 - eps,
        acceptance_band: 1.0 - eps - 3.0 * (eps * (1.0 - eps) / n).sqrt(),
    })
}

/// Success frequency at `m = m_start, 2m_start, …` up to `m_max`, stopping at
/// the first `m` whose success reaches `1 − ε`.
pub fn doubling_scan(config: &MonteCarloConfig, m_start: usize, m_max: usize) -> Result<Vec<(usize, f64)>> {
    if m_start == 0 || m_max < m_start {
        return Err(Error::InvalidArgument(format!("invalid scan range {m_start}..{m_max}")));
    }
    let mut out = Vec::new();
    let mut m = m_start;
    while m <= m_max {
        let mut c = config.clone();
        c.m = m;
        let report = run_trials(&c)?;
        out.push((m, report.empirical_success));
        if report.empirical_success >= report.theoretical_floor {
            break;
        }
        m *= 2;
    }
    Ok(out)
}

/// Largest deviation over `ξ = s/nxi` between the average of
/// `|Z(T_x g)(t, ξ)|²` over `x = i/M` and `Φ_ĝ(ξ)`.
pub fn empirical_expectation_check(spec: &WindowSpec, t: f64, nxi: usize, samples: usize, tol: f64) -> Result<f64> {
    if samples == 0 || nxi < 2 {
        return Err(Error::InvalidArgument("need M ≥ 1 and nxi ≥ 2".into()));
    }
    let pts = PointSet::new((0..samples).map(|i| i as f64 / samples as f64).collect())?;
    let profile = periodization_sq(spec, Side::Frequency, nxi, tol)?;
    let mut worst: f64 = 0.0;
    for (s, phi) in profile.values.iter().enumerate().take(nxi) {
        let g = crate::frame::zak_sum_point(spec, &pts, t, s as f64 / nxi as f64, tol)?;
        worst = worst.max((g / samples as f64 - phi).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_points(3, 17, 7).unwrap();
        let b = sample_points(3, 17, 7).unwrap();
        assert_eq!(a.points, b.points);
        assert_ne!(a.points, sample_points(3, 17, 8).unwrap().points);
    }

    #[test]
    fn unit_map_range() {
        assert_eq!(unit(0), 0.0);
        assert!(unit(u64::MAX) < 1.0);
    }

    #[test]
    fn zero_trials_rejected() {
        let config = MonteCarloConfig {
            spec: WindowSpec::indicator(),
            constants: None,
            alpha: 0.5,
            beta: 1.5,
            eps: 0.1,
            m: 2,
            trials: 0,
            master_seed: 1,
            nt: 8,
            nxi: 8,
            mode: EventMode::RawGrid,
            tol: 1e-10,
        };
        assert!(matches!(run_trials(&config), Err(Error::InvalidArgument(_))));
    }
}
