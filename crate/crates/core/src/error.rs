use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("birth probability must lie strictly between 0 and 1, got {0}")]
    InvalidProbability(f64),

    #[error("the (0,0) rule stops before any birth; expectations and ratios are undefined")]
    EmptyRule,

    #[error("total_children must be at least 1")]
    ZeroChildren,

    #[error("enumeration depth {requested} exceeds the cap of {cap}")]
    EnumerationCap { requested: u32, cap: u32 },

    #[error("birth probability {0} is outside the numerically supported range [1e-6, 1 - 1e-6]")]
    ExtremeProbability(f64),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("series did not reach tolerance {tol:e} within {cap} terms (tail bound {tail_bound:e})")]
    TermCap { tol: f64, cap: usize, tail_bound: f64 },

    #[error("rule ({n},{k}) exceeds the symbolic cap of {cap} per count")]
    SymbolicCap { n: u32, k: u32, cap: u32 },

    #[error("rational function has a pole at p = {0}")]
    Pole(String),

    #[error("exact evaluation point {0} is outside the open interval (0,1)")]
    ExactDomain(String),

    #[error("a simulated family exceeded the safety cap of {0} births")]
    SimulationCap(u64),

    #[error("samples must be at least 1")]
    ZeroSamples,

    #[error("F difference of rules {a} and {b} has no sign change on [0.01, 0.99]")]
    NoSignChange { a: String, b: String },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

impl Error {
    /// True for failures of the numerics (term caps, missing brackets, runaway
    /// simulations) as opposed to invalid inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::TermCap { .. }
                | Error::ExtremeProbability(_)
                | Error::SimulationCap(_)
                | Error::NoSignChange { .. }
        )
    }
}
