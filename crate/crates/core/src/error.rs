use thiserror::Error;

/// Errors raised by construction, validation and parsing.
///
/// Budget exhaustion inside the searches is not an error: it surfaces as an
/// `Unknown` verdict carrying whatever bounds were established.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("facet {index} is empty")]
    EmptyFacet { index: usize },

    #[error("complex has no facets")]
    EmptyComplex,

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vertex `{0}` has no image")]
    MissingVertex(String),

    #[error("vertex `{0}` is assigned twice")]
    DuplicateAssignment(String),

    #[error("not simplicial: image of face {{{}}} is not a face of the codomain", .0.join(","))]
    NotSimplicial(Vec<String>),

    #[error("maps do not share domain and codomain")]
    DomainMismatch,

    #[error("simplex {{{}}} does not belong to the parent complex", .0.join(","))]
    NotASubcomplex(Vec<String>),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("vertex budget exceeded: {needed} vertices requested, at most {limit} supported")]
    VertexBudgetExceeded { needed: u128, limit: usize },

    #[error("enumeration budget of {0} items exceeded")]
    EnumerationBudgetExceeded(usize),

    #[error("neighbor budget of {0} maps exceeded")]
    NeighborBudgetExceeded(usize),

    #[error("at least {needed} maps are required, got {got}")]
    TooFewMaps { needed: usize, got: usize },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
