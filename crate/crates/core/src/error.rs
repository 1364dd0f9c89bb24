use thiserror::Error;

/// Errors shared across the workbench.
///
/// Usage errors (bad dimensions, unknown names) are distinct variants from
/// mathematical "no" answers: an inconsistent linear system is `Ok(None)` at
/// the call site, never an error; an empty monomial solution branch is a
/// reported result, never an error.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("duplicate generator name `{name}`")]
    DuplicateGenerator { name: String },

    #[error("generator `{name}` has degree {degree}; generators must have degree >= 2")]
    DegreeTooSmall { name: String, degree: u32 },

    #[error("unknown generator `{name}`")]
    UnknownGenerator { name: String },

    #[error(
        "differential of `{name}` is not homogeneous: expected degree {expected}, found a term of degree {found}"
    )]
    NonHomogeneousDifferential {
        name: String,
        expected: u32,
        found: u32,
    },

    #[error("model is not minimal: d({name}) contains the length-one word `{word}`")]
    NotMinimal { name: String, word: String },

    #[error("d^2 != 0: d(d({name})) = {remainder}")]
    DifferentialSquareNonzero { name: String, remainder: String },

    #[error(
        "truncation at degree {truncation} is not closed: d({name}) involves a generator of degree {degree}"
    )]
    TruncationEscape {
        name: String,
        truncation: u32,
        degree: u32,
    },

    #[error("model has no generators; {operation} needs a nonempty model")]
    EmptyModel { operation: &'static str },

    #[error("endomorphism image of `{name}` must be homogeneous of degree {expected}")]
    InhomogeneousImage { name: String, expected: u32 },

    #[error("{context} requires a homogeneous polynomial")]
    NonHomogeneousInput { context: &'static str },

    #[error("{context} requires an invertible matrix")]
    NotInvertible { context: &'static str },

    #[error("endomorphism does not commute with the differential at generator `{name}`")]
    NotAChainMap { name: String },

    #[error("structural check failed: {reason}; the model is not certified elliptic")]
    NotElliptic { reason: String },

    #[error("element is not a cocycle in degree {degree} (or lies outside the computed span)")]
    NotACocycle { degree: u32 },

    #[error(
        "class does not lie in the skeleton: d({name}) involves degree {degree} > skeleton {skeleton}"
    )]
    SkeletonEscape {
        name: String,
        skeleton: u32,
        degree: u32,
    },

    #[error("graph has {vertices} vertices; automorphism enumeration is limited to 9")]
    GraphTooLarge { vertices: usize },

    #[error("graph edge references unknown vertex `{name}`")]
    UnknownVertex { name: String },

    #[error("graph edge `{a} -- {b}` is invalid: {reason}")]
    InvalidEdge {
        a: String,
        b: String,
        reason: &'static str,
    },

    #[error("{candidates} permutation branches exceed the enumeration limit of {limit}")]
    BranchLimit { candidates: u128, limit: u128 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal engine check failed: {0}; this indicates a bug, please report it")]
    Engine(String),
}
