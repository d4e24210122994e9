use thiserror::Error;

use crate::ring::RingError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("coloring does not match the surface: {0}")]
    ColoringMismatch(String),
    #[error("coloring is not admissible: {0}")]
    NotAdmissible(String),
    #[error("operation requires a triangulation without folded triangles")]
    FoldedTriangulation,
    #[error("coloring is identically zero")]
    ZeroColoring,
    #[error("cannot scale down by {n}: {reason}")]
    BadDivisor { n: u64, reason: String },
    #[error("placement of {left} over {right} has {crossings} crossings, bound is {bound}")]
    CrossingBound { crossings: usize, bound: usize, left: String, right: String },
    #[error("element is zero")]
    ZeroElement,
    #[error("leading coefficient of {0} is not a single power of A")]
    NotMonomial(String),
    #[error("nonzero certificate failed: {0}")]
    CertificateFailed(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag for error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Ring(_) => "ring",
            Error::InvalidSurface(_) => "invalid_surface",
            Error::UnknownPreset(_) => "unknown_preset",
            Error::ColoringMismatch(_) => "coloring_mismatch",
            Error::NotAdmissible(_) => "not_admissible",
            Error::FoldedTriangulation => "folded_triangulation",
            Error::ZeroColoring => "zero_coloring",
            Error::BadDivisor { .. } => "bad_divisor",
            Error::CrossingBound { .. } => "crossing_bound",
            Error::ZeroElement => "zero_element",
            Error::NotMonomial(_) => "not_monomial",
            Error::CertificateFailed(_) => "certificate_failed",
            Error::Parse(_) => "parse",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
