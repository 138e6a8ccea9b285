use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("columns are linearly dependent")]
    DependentColumns,
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown shape object {0}")]
    UnknownObject(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("map is not a monomorphism")]
    NotAMonomorphism,
    #[error("quiver has an oriented cycle; global dimension is not certified finite")]
    NonAcyclicQuiver,
    #[error("base algebra has relations or oriented cycles; a hereditary path algebra is required")]
    NonHereditaryBase,
    #[error("base algebra has an oriented cycle; injectivity tests need an acyclic base")]
    NonAcyclicBase,
    #[error("diagrams have different shapes or base algebras")]
    MismatchedShapes,
    #[error("object is not semiinjective")]
    NotSemiinjective,
    #[error("decomposition over the rationals is unsupported")]
    RationalsUnsupported,
    #[error("certification failure: {0}")]
    CertificationFailure(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("no semiinjective resolution found within bound {0}")]
    ResolutionNotFound(usize),
    #[error("linear system has no solution: {0}")]
    NoSolution(String),
    #[error("map is not invertible")]
    NotInvertible,
    #[error("weak equivalence has no retraction")]
    NoRetraction,
    #[error("boundary/cycle/homology sequence does not split")]
    SequenceDoesNotSplit,
    #[error("certificate failed: {0}")]
    CertificateFailure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable name used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::DependentColumns => "dependent-columns",
            Error::UnknownVertex(_) => "unknown-vertex",
            Error::UnknownObject(_) => "unknown-object",
            Error::InvalidParameters(_) => "invalid-parameters",
            Error::InvalidPresentation(_) => "invalid-presentation",
            Error::NotAMonomorphism => "not-a-monomorphism",
            Error::NonAcyclicQuiver => "non-acyclic-quiver",
            Error::NonHereditaryBase => "non-hereditary-base",
            Error::NonAcyclicBase => "non-acyclic-base",
            Error::MismatchedShapes => "mismatched-shapes",
            Error::NotSemiinjective => "not-semiinjective",
            Error::RationalsUnsupported => "rationals-unsupported",
            Error::CertificationFailure(_) => "certification-failure",
            Error::Inconclusive(_) => "inconclusive",
            Error::ResolutionNotFound(_) => "resolution-not-found-within-bound",
            Error::NoSolution(_) => "no-solution",
            Error::NotInvertible => "not-invertible",
            Error::NoRetraction => "no-retraction",
            Error::SequenceDoesNotSplit => "sequence-does-not-split",
            Error::CertificateFailure(_) => "certificate-failure",
            Error::Precondition(_) => "precondition-violation",
            Error::Parse(_) => "parse-error",
        }
    }

    /// True for errors that indicate an internal inconsistency rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::CertificationFailure(_)
                | Error::CertificateFailure(_)
                | Error::NoSolution(_)
                | Error::NotInvertible
                | Error::NoRetraction
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
