use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cover relation contains a cycle: {}", .0.join(" < "))]
    Cycle(Vec<String>),

    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("poset has no elements")]
    Empty,

    #[error("`{lower}` is not below `{upper}`")]
    NotComparable { lower: String, upper: String },

    #[error("size limit exceeded: {what} ({requested} > {limit})")]
    SizeLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("not a lattice: {0}")]
    NotALattice(String),

    #[error("lattice is not distributive: `{}`", .0.join("`, `"))]
    NotDistributive(Vec<String>),

    #[error("no seed value for join-irreducible element(s): {}", .0.join(", "))]
    MissingSeed(Vec<String>),

    #[error("no value for element(s): {}", .0.join(", "))]
    MissingValue(Vec<String>),

    #[error("valuation of the bottom element `{element}` must be 0, got {value}")]
    NonzeroBottom { element: String, value: f64 },

    #[error("`{0}` is not a join-irreducible element")]
    NotIrreducible(String),

    #[error("context `{context}` has valuation {value} and does not lie below `{element}`")]
    UndefinedContext {
        element: String,
        context: String,
        value: f64,
    },

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
