use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NonHermitian { asymmetry: f64 },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix has a negative eigenvalue {min_eigenvalue:.3e} beyond tolerance")]
    NegativeSpectrum { min_eigenvalue: f64 },

    #[error("invalid bracket [{lo}, {hi}] with tolerance {tol}")]
    InvalidBracket { lo: f64, hi: f64, tol: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("Kraus operators are not complete (deviation {deviation:.3e})")]
    CompletenessViolation { deviation: f64 },

    #[error("dimension {requested} exceeds the budget of {budget}")]
    DimensionBudgetExceeded { requested: usize, budget: usize },

    #[error("noise parameters violate complete positivity: {0}")]
    CptpViolation(String),

    #[error("short-time expansion left its valid range: {0}")]
    RangeViolation(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("derivative is not traceless (trace {trace:.3e})")]
    NonTraceless { trace: f64 },

    #[error("zero operator has no normalized Liouville vector")]
    ZeroOperator,

    #[error("top eigenspace admits no physical density matrix reaching the bound")]
    NoPhysicalState,

    #[error("derivative has weight {weight:.3e} on the kernel of the state")]
    UnsupportedDerivative { weight: f64 },

    #[error("Fock truncation n_max = {n_max} leaves tail mass {tail:.3e}")]
    TruncationInsufficient { n_max: usize, tail: f64 },

    #[error("index ({k}, {m}) out of range for N = {n}")]
    IndexOutOfRange { n: usize, k: usize, m: usize },

    #[error("cost has no interior minimum on (0, {upper})")]
    NoInteriorMinimum { upper: f64 },

    #[error("no root found: {0}")]
    NoRoot(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Errors caused by exhausting numeric resources rather than bad input.
    pub fn is_resource_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionBudgetExceeded { .. } | Error::TruncationInsufficient { .. }
        )
    }
}
