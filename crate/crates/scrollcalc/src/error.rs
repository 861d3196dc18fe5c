use crate::curve::CurveError;

/// Errors raised by surface-level operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("normalized form needs deg(e_class) <= 0, got {0}")]
    NotNormalized(i64),
    #[error("Segre bound violated: e = {e} on a {kind} surface over a genus {genus} curve")]
    SegreBoundViolation { e: i64, genus: i64, kind: &'static str },
    #[error("invalid position {position} at {point}: {reason}")]
    InvalidPosition { position: String, point: String, reason: String },
    #[error("position {position} at {point} cannot be decided: {reason}")]
    UndecidablePosition { position: String, point: String, reason: String },
    #[error("{0:?} is not a point of the curve")]
    UnknownPoint(String),
    #[error("multiplicity {mu} out of range for a {m}-secant class")]
    MultiplicityOutOfRange { mu: i64, m: i64 },
    #[error("surface has no recorded elementary transformation to undo")]
    NoStepToUndo,
    #[error("point {given:?} is not the distinguished point {expected:?} of the last step")]
    NotDistinguishedPoint { given: String, expected: String },
    #[error("inverse step disagrees with the recorded predecessor on {field}")]
    InconsistentChain { field: &'static str },
    #[error("center at {0} lies in the non-isomorphism locus of the system")]
    SingularCenter(String),
    #[error("system is not base-point-free")]
    NotBasePointFree,
    #[error("-e_class = {0} is not a sum of named points; declare an alias")]
    AliasRequired(String),
    #[error("cycle degree {degree} is smaller than span dimension + 1 = {}", span + 1)]
    MalformedCycle { degree: i64, span: i64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
