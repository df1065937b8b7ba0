use thiserror::Error;

/// Errors surfaced by the library operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("generator bases differ")]
    BasisMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("samples do not cover [-{t_half}, {t_half}]")]
    InsufficientCoverage { t_half: f64 },
    #[error("2*pi/tau is not expressible over the generator basis")]
    IncommensurableTau,
    #[error("characteristic matrix numerically singular at z = {re} + {im}i")]
    SingularAtPoint { re: f64, im: f64 },
    #[error("root on or too close to the region boundary after {attempts} jitter attempts")]
    BoundaryRoot { attempts: usize },
    #[error("Newton iteration failed to converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("eigenvalue on or too close to the integration contour")]
    EigenvalueOnContour,
    #[error("resonance: characteristic matrix singular at forcing frequency {lambda}")]
    Resonance { lambda: f64 },
    #[error("frequency {lambda} of the candidate solution exceeds the search window {xi_max}")]
    WindowTooSmall { lambda: f64, xi_max: f64 },
    #[error("system contains an advance term (eta = {eta} > 0); initial value integration is not well-posed")]
    AdvanceTermPresent { eta: f64 },
    #[error("step dt = {dt} too large; need dt <= {max_dt} for the smallest delay")]
    StepTooLarge { dt: f64, max_dt: f64 },
    #[error("Carleman transform undefined on the imaginary axis")]
    OnAxis,
    #[error("evaluation point within 1e-12 of the pole at i*{lambda}")]
    AtPole { lambda: f64 },
    #[error("signal span {span} shorter than required {required}")]
    SpanTooShort { span: f64, required: f64 },
    #[error("circle point for frequency {lambda} is within tolerance of an arc endpoint")]
    AmbiguousBoundary { lambda: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
