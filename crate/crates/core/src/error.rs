use thiserror::Error;

/// Errors raised by the geometry, isotopy, optimization and diagram layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid knot: {0}")]
    InvalidKnot(String),

    #[error("invalid isotopy path: {0}")]
    InvalidPath(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("endpoint mismatch: last keyframe of the first path differs from first keyframe of the second by {0:e}")]
    EndpointMismatch(f64),

    #[error("endpoint {which} is not admissible at level {lambda}: thickness {thickness}, length {length}")]
    EndpointInadmissible {
        which: &'static str,
        lambda: f64,
        thickness: f64,
        length: f64,
    },

    #[error("no admissible path found: {0}")]
    NoAdmissiblePath(String),

    #[error("non-generic projection: {0}")]
    NonGeneric(String),

    #[error("unresolved diagram events: {0}")]
    UnresolvedEvents(String),

    #[error("unknown diagram node {0}")]
    UnknownNode(String),
}

impl Error {
    /// Validation failures (bad input) as opposed to numeric failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidKnot(_)
                | Error::InvalidPath(_)
                | Error::InvalidParameter(_)
                | Error::EndpointMismatch(_)
                | Error::EndpointInadmissible { .. }
                | Error::UnknownNode(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
