use thiserror::Error;

/// Errors from group construction and lattice enumeration.
#[derive(Debug, Error)]
pub enum GroupError {
    #[error("generator {index} is not a bijection on 0..{degree}")]
    NonBijectiveGenerator { index: usize, degree: usize },
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("group closure exceeded the element cap {cap}")]
    ElementCapExceeded { cap: usize },
    #[error("group order {order} exceeds the lattice cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("subgroups belong to different parent groups")]
    ParentMismatch,
    #[error("{0} is not a subgroup of {1}")]
    NotASubgroup(String, String),
}

/// Errors from G-set operations.
#[derive(Debug, Error)]
pub enum GSetError {
    #[error("G-sets live at different levels ({0} vs {1})")]
    LevelMismatch(String, String),
    #[error("realization would exceed the point cap {cap} ({points} points)")]
    PointCapExceeded { points: usize, cap: usize },
    #[error("map is not equivariant at point {point} under element {element}")]
    NotEquivariant { point: usize, element: usize },
    #[error("assignment length {found} does not match source size {expected}")]
    BadAssignment { expected: usize, found: usize },
}

/// Errors from indexing-system operations.
#[derive(Debug, Error)]
pub enum IndexingError {
    #[error("admissible map mentions unknown subgroup class {0}")]
    UnknownClass(String),
    #[error("admissible map is missing subgroup class {0}")]
    MissingClass(String),
    #[error("declared stabilizer {0} is not a subgroup of {1}")]
    NotContained(String, String),
    #[error("indexing systems belong to different groups")]
    GroupMismatch,
    #[error("{count} subgroup classes exceed the enumeration cap {cap}")]
    ClassCapExceeded { count: usize, cap: usize },
    #[error("set is not admissible: {0}")]
    NotAdmissible(String),
}

/// Errors from representation and universe operations.
#[derive(Debug, Error)]
pub enum RepError {
    #[error("representations live over different groups")]
    GroupMismatch,
    #[error("matrix {index} is not square of dimension {dim}")]
    BadShape { index: usize, dim: usize },
    #[error("matrix count {found} does not match generator count {expected}")]
    GeneratorCountMismatch { expected: usize, found: usize },
    #[error("generator matrices do not extend to a group homomorphism")]
    NotAHomomorphism,
    #[error("generator matrix {index} is singular")]
    Singular { index: usize },
    #[error("cannot parse rational entry {0:?}")]
    BadRational(String),
    #[error("admissibility of the empty set is a caller convention, not a representation question")]
    EmptySet,
}

/// Parse and type errors for norm expressions.
#[derive(Debug, Error)]
pub enum ExprError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown subgroup {0}")]
    UnknownSubgroup(String),
    #[error("level mismatch: {context} (expected {expected}, found {found})")]
    LevelMismatch {
        context: String,
        expected: String,
        found: String,
    },
    #[error("norm target {target} does not contain the level {level}")]
    BadNormTarget { target: String, level: String },
    #[error("restriction target {target} is not contained in the level {level}")]
    BadResTarget { target: String, level: String },
    #[error("inadmissible norm: {orbit} is not admissible at {level}")]
    InadmissibleNorm { orbit: String, level: String },
    #[error("rule {rule} is not applicable at the root")]
    RuleNotApplicable { rule: String },
    #[error("expression is ill-typed: {0}")]
    IllTyped(String),
}

/// Errors from span composition.
#[derive(Debug, Error)]
pub enum SpanError {
    #[error("span boundaries do not match and no identification was found")]
    BoundaryMismatch,
    #[error("legs live at different levels")]
    LevelMismatch,
    #[error("apex would exceed the point cap {cap}")]
    ApexCapExceeded { cap: usize },
    #[error(transparent)]
    GSet(#[from] GSetError),
}
