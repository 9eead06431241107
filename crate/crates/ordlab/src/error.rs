use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdError {
    #[error("CNF exponents must be strictly descending")]
    NotDescending,
    #[error("CNF coefficients must be positive")]
    ZeroCoefficient,
    #[error("ordinal lies above the supported bound w^w^3")]
    AboveCap,
    #[error("ordinal coefficient overflow")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("empty sum")]
    EmptySum,
    #[error("finite order of size 0")]
    ZeroFin,
    #[error("shuffle set must be infinite or a finite set of positive sizes: {0}")]
    BadShuffleSet(String),
    #[error("interval shuffle needs lo < hi")]
    EmptyInterval,
    #[error("period of a set descriptor must be nonempty")]
    EmptyPeriod,
    #[error("rational {0} lies beyond the supported enumeration depth")]
    RationalTooDeep(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Ordinal(#[from] OrdError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircError {
    #[error("subset {0:?} is not convex")]
    NotConvex(Vec<usize>),
    #[error("element {0} out of range for circular order of size {1}")]
    OutOfRange(usize, usize),
    #[error("circular order violates {axiom} at {triple:?}")]
    Axiom { axiom: &'static str, triple: [usize; 3] },
    #[error("cannot compare a finite table with a circular term")]
    MixedKinds,
    #[error("invalid witness: {0}")]
    BadWitness(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("an arc needs at least one piece")]
    Empty,
    #[error("infinite sums need an infinite index set, got {0}")]
    FiniteSet(String),
    #[error("order singularity needs a nonempty order in the fragment: {0}")]
    BadOrder(String),
}

/// Top-level error for the command surface.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Circ(#[from] CircError),
    #[error(transparent)]
    Ordinal(#[from] OrdError),
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error("{0}")]
    Usage(String),
    #[error("report rejected: {0}")]
    Verify(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
