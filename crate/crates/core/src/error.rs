use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be >= 1")]
    BadDegree,
    #[error("field order {0} exceeds the cap 2^20")]
    OrderCap(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element has wrong coefficient length for this field")]
    FieldMismatch,
    #[error("coefficient {0} out of range for characteristic {1}")]
    BadCoefficient(u64, u64),
    #[error("polynomial must be monic of degree >= 1")]
    NotMonic,
    #[error("polynomial is reducible")]
    Reducible,
    #[error("modulus must be coprime to y and y+1: {0}")]
    NotCoprime(String),
    #[error("ring length must be >= 1")]
    BadLength,
    #[error("ring size {0} exceeds the cap {1}")]
    RingCap(u64, u64),
    #[error("cannot invert a non-unit")]
    NonUnit,
    #[error("unknown edge ({0}, {1})")]
    UnknownEdge(u32, u32),
    #[error("duplicate edge ({0}, {1}) in removal list")]
    DuplicateEdge(u32, u32),
    #[error("unknown face {0}")]
    UnknownFace(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("torus side length must be >= 3, got {0}")]
    TorusTooSmall(usize),
    #[error("thickening multiplicity must be >= 1")]
    BadThickness,
    #[error("graph has an isolated vertex ({0})")]
    IsolatedVertex(usize),
    #[error("graph is disconnected: zero eigenvalue multiplicity {0}")]
    Disconnected(usize),
    #[error("vertex links disconnected at vertices {0:?}")]
    DisconnectedLinks(Vec<usize>),
    #[error("Jacobi sweep did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("vertex count {0} exceeds exhaustive Cheeger cap {1}")]
    CheegerCap(usize, usize),
    #[error("sweep size {0} exceeds budget {1}")]
    BudgetExceeded(u64, u64),
    #[error("order {0} exceeds the numeric sweep cap {1}")]
    SweepCap(u64, u64),
    #[error("perforated spectral gap deviates from the closed form: |{numeric} - {formula}| > {tol}")]
    FormulaMismatch { numeric: f64, formula: f64, tol: f64 },
    #[error("characteristic root {root} missing from the spectrum (closest distance {dist})")]
    RootMissing { root: f64, dist: f64 },
    #[error("subgroup order {found} exceeds the commuting-pair bound {bound}")]
    BoundViolation { found: u64, bound: u64 },
    #[error("kernel element at index {0} has nontrivial power; Frobenius exponent check failed")]
    FrobeniusCounterexample(u64),
    #[error("density must lie strictly between 0 and 1, got {0}")]
    BadDensity(f64),
    #[error("trial count must be >= 1")]
    NoTrials,
    #[error("complex must have at least {0} faces")]
    TooFewFaces(usize),
    #[error("flat trace must be a nonempty subset of the face set")]
    BadTrace,
    #[error("draw counts must satisfy m1 <= m2 (got {0} > {1})")]
    DrawsNotOrdered(u64, u64),
    #[error("{0}")]
    DominationCap(String),
    #[error("property is not monotone under set inclusion (witness mask {0:#b})")]
    NotMonotone(u32),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
