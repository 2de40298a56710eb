use alloc::string::String;
use core::fmt;

/// The three hypotheses a window must satisfy before the frame pipeline
/// accepts it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Assumption {
    /// `K` and `K′` finite.
    PeriodicSummability,
    /// `0 < q ≤ Φ_ĝ ≤ R`.
    SquareSummability,
    /// Zak transform Lipschitz on `Q` with constant `C`.
    Lipschitz,
}

impl Assumption {
    pub fn number(self) -> u8 {
        match self {
            Assumption::PeriodicSummability => 1,
            Assumption::SquareSummability => 2,
            Assumption::Lipschitz => 3,
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "assumption-{}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Window parameters outside their domain.
    InvalidSpec(String),
    /// Bad argument to an operation (empty ranges, zero trials, ...).
    InvalidArgument(String),
    /// Incompatible grid shapes or resolutions.
    Shape(String),
    /// A certified quantity was requested but no decay envelope (or no
    /// summable one) is available.
    Uncertifiable(String),
    /// A numerical evaluation could not reach its accuracy target.
    Accuracy { estimated: f64, target: f64 },
    AssumptionViolation { assumption: Assumption, detail: String },
    /// `α < q/2 < β` or `0 < ε < 1` violated.
    HypothesisViolation(String),
    /// The mesh width is too small to evaluate on a grid.
    ResolutionInfeasible { delta: f64 },
    /// Reconstruction refused because the Zak sum is too close to zero.
    ReconstructionRefused(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(msg) => write!(f, "invalid window spec: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Shape(msg) => write!(f, "shape error: {msg}"),
            Error::Uncertifiable(msg) => write!(f, "uncertifiable: {msg}"),
            Error::Accuracy { estimated, target } => write!(
                f,
                "accuracy target {target:e} not reached (estimated error {estimated:e})"
            ),
            Error::AssumptionViolation { assumption, detail } => {
                write!(f, "{assumption} violation: {detail}")
            }
            Error::HypothesisViolation(msg) => write!(f, "hypothesis violation: {msg}"),
            Error::ResolutionInfeasible { delta } => {
                write!(f, "mesh width {delta:e} is below the smallest supported grid step 2^-16")
            }
            Error::ReconstructionRefused(msg) => write!(f, "reconstruction refused: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
