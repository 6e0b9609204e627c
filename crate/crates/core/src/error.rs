use thiserror::Error;

/// Errors produced by the geometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical tolerance band was hit and no answer is guessed.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A matrix failed validation as an orientation- and time-preserving
    /// Lorentz transformation (or as an SL(2,R) element).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// The operation is only defined for a particular isometry class.
    #[error("unsupported isometry class: expected {expected}, found {found}")]
    UnsupportedClass {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid generator index {0}")]
    InvalidGenerator(i32),

    #[error("({0}, {1}) is not a coprime pair of non-negative integers")]
    NonCoprime(i64, i64),

    /// Hypotheses of the crooked disjointness criterion are not met.
    #[error("configuration unsupported: {0}")]
    ConfigurationUnsupported(String),

    /// The coboundary map has rank below 3.
    #[error("linear group is elementary: coboundary rank {0} < 3")]
    ElementaryGroup(usize),

    /// A finite-difference step left the hyperbolic regime.
    #[error("finite-difference step {0} too large: perturbed word is not hyperbolic")]
    StepTooLarge(f64),

    /// Drumm's scaling search gave up.
    #[error("construction failed: no scale up to {t_max} separates halfspaces {first} and {second}")]
    ConstructionFailed {
        t_max: f64,
        first: i32,
        second: i32,
    },

    #[error("plot error: {0}")]
    Plot(String),

    #[error("invalid strip data: {0}")]
    Strip(String),

    /// Transverse orientations of two arcs are not nested.
    #[error("orientation precondition violated: {0}")]
    Orientation(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
