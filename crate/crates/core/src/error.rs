use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0} is not in the carrier")]
    UnknownPoint(String),

    #[error("unknown builtin `{0}` (expected one of quintic_ray, quintic_gap, two_point_a, two_point_b)")]
    UnknownBuiltin(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("table has no value for triple ({0}, {1}, {2})")]
    IncompleteTable(String, String, String),

    #[error("line {line}: negative distance {value}")]
    NegativeValue { line: usize, value: f64 },

    #[error("exhaustive enumeration requires a finite carrier")]
    InfeasibleExhaustive,

    #[error("coefficient must be finite and at least 1, got {0}")]
    InvalidCoefficient(f64),

    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    #[error("point {point} is not in the ball D({center}; {radius})")]
    NotInBall { point: String, center: String, radius: f64 },

    #[error("finite carrier has {0} points, at most 64 are supported")]
    CarrierTooLarge(usize),

    #[error("subfamily is empty")]
    EmptySubfamily,

    #[error("index {0} is not part of the cover family")]
    NotInFamily(i64),

    #[error("invalid exponents: {0}")]
    InvalidExponents(String),

    #[error("comparison function: {0}")]
    InvalidComparison(String),

    #[error("expected a {expected} comparison function, got {actual}")]
    KindMismatch { expected: &'static str, actual: &'static str },

    #[error("self-map sends {from} outside the carrier")]
    MapLeavesCarrier { from: String },

    #[error("space is not shaped as two isolated points plus a ray: {0}")]
    WrongSpaceShape(String),

    #[error("trace has {len} orbit points, need at least {needed}")]
    TraceTooShort { len: usize, needed: usize },

    #[error("{0} is not a fixed point")]
    NotAFixedPoint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
