use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the toolkit.
///
/// Variants fall into two families: malformed input ([`Error::is_parse`]) and
/// well-formed input that violates an operation's precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate {kind} id `{id}`")]
    DuplicateId {
        line: usize,
        kind: &'static str,
        id: String,
    },
    #[error("line {line}: edge `{edge}` references undeclared vertex `{vertex}`")]
    UndeclaredVertex {
        line: usize,
        edge: String,
        vertex: String,
    },
    #[error("unknown {kind} `{id}`")]
    UnknownId { kind: &'static str, id: String },
    #[error("duplicate {kind} id `{id}`")]
    Duplicate { kind: &'static str, id: String },
    #[error(
        "line {line}: edge `{edge}` has value {edge_value} below its endpoint value {vertex_value}"
    )]
    NonMonotone {
        line: usize,
        edge: String,
        edge_value: String,
        vertex_value: String,
    },
    #[error("morphism map is not total: {kind} `{id}` has no image")]
    NotTotal { kind: &'static str, id: String },
    #[error("map does not define a quiver morphism")]
    NotAMorphism,
    #[error("quiver contains a directed cycle")]
    CyclicQuiver,
    #[error("quiver is not connected")]
    Disconnected,
    #[error("edge sequence is not a path: {0}")]
    NotAPath(String),
    #[error("path is not simple")]
    NotSimple,
    #[error("path is not maximal")]
    NotMaximal,
    #[error("loops cannot be contracted (edge `{0}`)")]
    LoopContraction(String),
    #[error("invalid reduction order: {0}")]
    InvalidOrder(String),
    #[error("invalid quasi-bigon occurrence: {0}")]
    InvalidOccurrence(String),
    #[error("({0}, {1}) is not a morphism of the thin category")]
    InvalidBasisElement(String, String),
    #[error("relation is not a {0}")]
    NotAnOrder(&'static str),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("unsupported degree {0}")]
    BadDegree(usize),
    #[error("unsupported field characteristic {0}")]
    UnsupportedField(u32),
    #[error("invalid value: {0}")]
    InvalidValue(String),
}

impl Error {
    /// True for errors caused by malformed input text.
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::DuplicateId { .. }
                | Error::UndeclaredVertex { .. }
                | Error::NonMonotone { .. }
                | Error::InvalidValue(_)
        )
    }
}
