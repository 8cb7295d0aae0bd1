use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("single site potential vanishes identically")]
    ZeroPotential,
    #[error("single site potential has a zero entry at {0}")]
    ZeroEntry(String),
    #[error("duplicate site {0} in single site potential")]
    DuplicateSite(String),
    #[error("invalid tail model: {0}")]
    InvalidTail(String),
    #[error("invalid density: {0}")]
    InvalidDensity(String),
    #[error("density is not normalized (integral {integral})")]
    UnnormalizedDensity { integral: f64 },
    #[error("incomplete coupling field: no coupling at {0}")]
    IncompleteCouplingField(String),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("operation requires a compactly supported potential")]
    NonCompact,
    #[error("operation requires an exponentially decaying one-dimensional potential")]
    NotDecaying,
    #[error("vanishing potential")]
    VanishingPotential,
    #[error("degenerate mean; use monomial construction")]
    DegenerateMean,
    #[error("order undetermined at tolerance (checked derivatives up to {max_order})")]
    OrderUndetermined { max_order: u32 },
    #[error("truncation window exceeds cap of {cap} sites")]
    WindowCapExceeded { cap: usize },
    #[error("positivity certificate failed: minimum {minimum} < delta {delta}")]
    PositivityFailed { minimum: String, delta: String },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("eigensolver did not converge")]
    NoConvergence,
    #[error("degenerate eigenvalue; derivative not simple (gap {gap:e})")]
    DegenerateEigenvalue { gap: f64 },
    #[error("index {index} out of range for {len} eigenvalues")]
    EigenIndex { index: usize, len: usize },
    #[error("spectral shift bound violated: {lhs} > {bound}")]
    SpectralShiftViolated { lhs: f64, bound: f64 },
    #[error("interval resolution too fine for sample budget")]
    IntervalTooFine,
    #[error("Wegner bound violated at L={side}: estimate {estimate} ± {std_error} > bound {bound}")]
    WegnerBoundViolated {
        side: u32,
        estimate: f64,
        std_error: f64,
        bound: f64,
    },
    #[error("not in large-disorder regime: ||f||_BV = {bv_norm:e} > e^(-2L) = {threshold:e}")]
    NotLargeDisorder { bv_norm: f64, threshold: f64 },
    #[error("large-disorder bound violated: upper confidence {upper} > {threshold}")]
    LargeDisorderViolated { upper: f64, threshold: f64 },
    #[error("too few samples: {got} < {min}")]
    TooFewSamples { got: usize, min: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
