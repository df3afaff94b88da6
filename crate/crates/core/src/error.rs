use thiserror::Error;

/// Every failure mode surfaced by the laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("identity transform not a weighting (difference order must be at least 1)")]
    IdentityWeighting,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("ILL_CONDITIONED: power iteration did not converge in {iterations} iterations (last estimate {last})")]
    IllConditioned { iterations: usize, last: f64 },

    #[error("SPECTRUM_HIT: mu = {re}{im:+}i lies within {distance:e} of the spectrum")]
    SpectrumHit { re: f64, im: f64, distance: f64 },

    #[error("CONTOUR_TOO_CLOSE: eigenvalue {re}{im:+}i is {margin:e} from the contour")]
    ContourTooClose { re: f64, im: f64, margin: f64 },

    #[error("NONCONVERGED: doubling quadrature nodes changed the projection by {change:e}")]
    NonConverged { change: f64 },

    #[error("CLUSTERED_SPECTRUM: no admissible contour around {re}{im:+}i (gap {gap:e})")]
    ClusteredSpectrum { re: f64, im: f64, gap: f64 },

    #[error("TRUNCATION_INADEQUATE: t_max = {t_max} requires max_index >= {required} (dim {required_dim}), got {got}")]
    TruncationInadequate {
        t_max: f64,
        required: usize,
        required_dim: usize,
        got: usize,
    },

    #[error("insufficient samples: need {needed}, have {have}")]
    InsufficientSamples { needed: usize, have: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
