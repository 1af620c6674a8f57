use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative scalar")]
    NegativeScalar,
    #[error("functional lies outside the dual of the tail cone")]
    OutsideDualTail,
    #[error("operation needs a nonempty polyhedron")]
    EmptyInput,
    #[error("tail cone is not pointed")]
    NotPointed,
    #[error("cells do not form a polyhedral complex")]
    NotComplex,
    #[error("cones do not form a fan")]
    NotAFan,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseError {
    #[error("degree is undefined on this base")]
    DegreeUndefined,
    #[error("unknown prime divisor `{0}`")]
    UnknownPrime(String),
    #[error("duplicate prime divisor `{0}`")]
    DuplicatePrime(String),
    #[error("invalid incidence set: {0}")]
    BadIncidence(String),
    #[error("operation is not supported on this base")]
    Unsupported,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisorError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error("coefficient at `{prime}` has tail different from the divisor tail")]
    TailMismatch { prime: String },
    #[error("tail cone is not pointed")]
    TailNotPointed,
    #[error("weight at `{0}` is negative")]
    NegativeWeight(String),
    #[error("u lies outside the dual of the tail cone")]
    OutsideDualTail,
    #[error("point is not a declared incidence set")]
    UndeclaredPoint,
    #[error("fiber polyhedron is empty")]
    EmptyFiber,
    #[error("zero set is not effective")]
    NotEffective,
    #[error("zero set is not linearly equivalent to D(w)")]
    NotEquivalent,
    #[error("k = {k} is below the required bound {bound}")]
    KTooSmall { k: String, bound: String },
    #[error("divisors live on different bases or lattices")]
    BaseMismatch,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error("generator {0} is not a pp-divisor")]
    NotPp(usize),
    #[error("pp-property undecidable on this base for generator {0}")]
    PpUnsupported(usize),
    #[error("intersection of members {i} and {j} is not a face of member {parent}")]
    NotAFace { i: usize, j: usize, parent: usize },
    #[error("intersection of members {i} and {j} is not a pp-divisor")]
    IntersectionNotPp { i: usize, j: usize },
    #[error("intersection is not associative on generators {0}, {1}, {2}")]
    NotAssociative(usize, usize, usize),
    #[error("empty generator list")]
    NoGenerators,
    #[error("weight function is not supported on an incidence set")]
    Unrealizable,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DowngradeError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error("degree map is not surjective")]
    NotSurjective,
    #[error("section does not split the degree map")]
    BadSection,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("cone is not pointed")]
    NotPointed,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Downgrade(#[from] DowngradeError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cone {0} is not smooth")]
    NotSmooth(usize),
    #[error("inconsistent bundle data on ray {0}")]
    InconsistentRay(String),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(String),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
}
