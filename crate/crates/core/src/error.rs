use thiserror::Error;

use crate::Point3;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("singular input at {point:?}{}", stage.map(|s| format!(" (stage {s})")).unwrap_or_default())]
    SingularInput { point: Point3, stage: Option<usize> },

    #[error("bend stage must be outermost; stage {0} follows a bend")]
    OrderViolation(usize),

    #[error("matrix is not skew-symmetric")]
    NotSkew,

    #[error("rotation angle {0} is too close to pi for the principal logarithm")]
    AngleNearPi(f64),

    #[error("normal direction undefined: curvature {0} at s = 0")]
    UndefinedNormal(f64),

    #[error("state undefined at probe point (parameter {0})")]
    StateUndefined(usize),

    #[error("rank deficient system")]
    RankDeficient,

    #[error("weight matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("no convergence: residual {residual:e} after {iters} iterations")]
    NoConvergence { residual: f64, iters: usize },

    #[error("target at distance {distance} is unreachable by a curve of length {length}")]
    Unreachable { distance: f64, length: f64 },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("deformation gradient is not isochoric: det = {0}")]
    NotIsochoric(f64),

    #[error("least-squares system has effective rank {rank} < {required}")]
    IllConditioned { rank: usize, required: usize },

    #[error("top plane is not rigid: edge lengths {0} and {1}")]
    NonRigidTopPlane(f64, f64),

    #[error("source strength is negative at x3 = {0}")]
    NegativeCavity(f64),

    #[error("reference and deformed node sets have zero total displacement")]
    ZeroDisplacement,

    #[error("node ids do not match: {0}")]
    IdMismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate node id {id} at line {line}")]
    DuplicateId { id: u64, line: usize },

    #[error("non-finite coordinate at line {0}")]
    NonFinite(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable tag for machine-readable reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularInput { .. } => "SingularInput",
            Error::OrderViolation(_) => "OrderViolation",
            Error::NotSkew => "NotSkew",
            Error::AngleNearPi(_) => "AngleNearPi",
            Error::UndefinedNormal(_) => "UndefinedNormal",
            Error::StateUndefined(_) => "StateUndefined",
            Error::RankDeficient => "RankDeficient",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::Unreachable { .. } => "Unreachable",
            Error::NotSymmetric => "NotSymmetric",
            Error::NotIsochoric(_) => "NotIsochoric",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::NonRigidTopPlane(..) => "NonRigidTopPlane",
            Error::NegativeCavity(_) => "NegativeCavity",
            Error::ZeroDisplacement => "ZeroDisplacement",
            Error::IdMismatch(_) => "IdMismatch",
            Error::Parse { .. } => "ParseError",
            Error::DuplicateId { .. } => "DuplicateId",
            Error::NonFinite(_) => "NonFinite",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Invalid(_) => "Invalid",
            Error::Io(_) => "Io",
        }
    }

    pub(crate) fn with_stage(self, stage: usize) -> Self {
        match self {
            Error::SingularInput { point, stage: None } => Error::SingularInput {
                point,
                stage: Some(stage),
            },
            other => other,
        }
    }
}
