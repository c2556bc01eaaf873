use thiserror::Error;

/// Errors surfaced by construction, quadrature, and solver routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain parameters: {0}")]
    InvalidChain(String),

    #[error("site {site} outside window [{first}, {last}]")]
    SiteOutsideWindow { site: usize, first: usize, last: usize },

    #[error("window radius {radius} invalid for chain of length {length}")]
    InvalidRadius { radius: usize, length: usize },

    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix has eigenvalue {eigenvalue:.3e} below the PSD tolerance")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("quadrature did not converge: estimated error {estimate:.3e} exceeds {tolerance:.3e}")]
    QuadratureError { estimate: f64, tolerance: f64 },

    #[error("kernel does not decay: tail magnitude {tail:.3e} of peak {peak:.3e}")]
    NonDecayingKernel { tail: f64, peak: f64 },

    #[error("dynamics are not relaxing: min Re(rapidity) = {min_re_beta:.3e}")]
    NonRelaxing { min_re_beta: f64 },

    #[error("rapidity spectrum does not close under negation: unpaired eigenvalue {value}")]
    UnpairedRapidity { value: C64Display },

    #[error("degenerate normalization: {0}")]
    DegenerateNormalization(String),

    #[error("dense oracle limited to L <= {max}, got L = {got}")]
    OracleTooLarge { max: usize, got: usize },

    #[error("null space of the generator is not one-dimensional (gap ratio {gap:.3e})")]
    DegenerateNullSpace { gap: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

/// Wrapper so complex values format readably inside error messages.
#[derive(Debug, Clone, Copy)]
pub struct C64Display(pub crate::C64);

impl std::fmt::Display for C64Display {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.6e}{:+.6e}i", self.0.re, self.0.im)
    }
}
