use thiserror::Error;

use crate::algebra::Elem;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate operation symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` has arity {expected} but was given {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("table for `{symbol}` has length {found}, expected {expected}")]
    TableLength {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("table for `{symbol}` contains {value}, outside a universe of size {size}")]
    TableValue {
        symbol: String,
        value: usize,
        size: usize,
    },
    #[error("element {elem} is out of range for a universe of size {size}")]
    ElementOutOfRange { elem: Elem, size: usize },
    #[error("unknown element name `{0}`")]
    UnknownElement(String),
    #[error("variable `{0}` is not assigned")]
    UnassignedVariable(String),
    #[error("algebra size {size} exceeds the enumeration guard of {limit}")]
    SizeGuard { size: usize, limit: usize },
    #[error("signatures do not match: {0}")]
    SignatureMismatch(String),
    #[error("subset is not closed under `{symbol}`")]
    NotClosed { symbol: String },
    #[error("partition is not a congruence: {0}")]
    NotCongruence(String),
    #[error("partition size {found} does not match algebra size {expected}")]
    PartitionSize { expected: usize, found: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("formula is not functional at {tuple:?}: witnesses {first} and {second}")]
    NotFunctional {
        tuple: Vec<Elem>,
        first: Elem,
        second: Elem,
    },
    #[error("formula defines no value at {0:?}")]
    NotTotal(Vec<Elem>),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("unknown catalog id `{0}`")]
    UnknownCatalogId(String),
    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),
    #[error("malformed algebra file: {0}")]
    Format(String),
}
