//! Numerical core for Gabor systems generated by random-periodic
//! time-frequency shifts `Λ × ℤ` with `Λ = ℤ + {x₁, …, x_m}`.
//!
//! The crate evaluates Zak transforms of a catalog of window functions,
//! estimates the window constants that control the frame property
//! (periodic summability `K`, `K′`, the periodization bounds `q`, `R` and the
//! Lipschitz constant `C` of the Zak transform), computes the sample
//! complexity threshold and failure probabilities, certifies frame bounds for
//! concrete point sets through a mesh argument, and runs seeded Monte Carlo
//! experiments on the frame event.
//!
//! Everything here is `no_std` with `alloc`; IO, the report format and the
//! command-line front end live in the companion `gabor-rp` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod constants;
pub mod frame;
pub mod montecarlo;
pub mod theory;
pub mod windows;
pub mod zak;

pub use error::{Assumption, Error, Result};
pub use num_complex::Complex64;

pub use constants::{ConstantsConfig, Estimate, Mode, PeriodizationProfile, WindowConstants};
pub use frame::{FrameCertificate, GaborCoefficients, PointSet, SumGrid, Targets, Verdict};
pub use montecarlo::{EventMode, MonteCarloConfig, MonteCarloReport, TrialRecord};
pub use theory::{ComplexityQuery, ComplexityResult, FailureBounds, MeshWidth};
pub use windows::{DecayEnvelope, SampledWindow, Side, TotallyPositive, WindowSpec};
pub use zak::{SignalGrid, ZakGrid};
