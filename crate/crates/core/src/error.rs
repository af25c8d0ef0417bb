//! Error type shared across the crate.

use std::fmt;

/// Everything that can go wrong when constructing or combining the exact
/// objects in this crate.  Arithmetic that violates a precondition (division
/// by zero, mismatched base fields, ...) reports an error rather than
/// producing a wrong value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The claimed characteristic is not a prime number.
    NotPrime(u64),
    /// Primes must fit in 31 bits so products of two elements fit in 64 bits.
    PrimeTooLarge(u64),
    /// An extension-field modulus must be monic and irreducible.
    ReducibleModulus,
    /// Two operands live over different fields.
    MismatchedFields,
    /// Division by zero, or inversion/norm of zero.
    DivisionByZero,
    /// The zero polynomial where a nonzero one is required.
    ZeroPolynomial,
    /// The zero rational function; only units of k(t) are supported.
    ZeroFunction,
    /// A closed-point generator must be monic irreducible.
    NotIrreducible,
    /// Root order m must divide q - 1.
    InvalidRootOrder { m: u64, q: u64 },
    /// Residue requested at a point where the valuation is nonzero.
    NonzeroValuation { valuation: i64 },
    /// Subspaces are not commensurable (infinite symmetric difference).
    NotCommensurable,
    /// Commutators are only defined for commuting operators.
    NotCommuting,
    /// The determinant-line engine does not cover this operator.
    UnsupportedOperator(String),
    /// A family of subspaces fails one of the admissibility conditions.
    InadmissibleFamily(String),
    /// A block operator matrix is singular or not square.
    SingularMatrix,
    /// Expression syntax error with a byte position into the source.
    Parse { pos: usize, msg: String },
    /// Malformed structured input (JSON family file, matrix literal, ...).
    BadInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::PrimeTooLarge(p) => write!(f, "prime {p} exceeds the 2^31 limit"),
            Error::ReducibleModulus => write!(f, "modulus is not monic irreducible"),
            Error::MismatchedFields => write!(f, "operands live over different fields"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ZeroPolynomial => write!(f, "zero polynomial not allowed here"),
            Error::ZeroFunction => write!(f, "zero rational function not allowed here"),
            Error::NotIrreducible => write!(f, "polynomial is not monic irreducible"),
            Error::InvalidRootOrder { m, q } => {
                write!(f, "root order {m} does not divide q - 1 = {}", q - 1)
            }
            Error::NonzeroValuation { valuation } => {
                write!(f, "residue undefined: valuation at the point is {valuation}, not 0")
            }
            Error::NotCommensurable => write!(f, "subspaces are not commensurable"),
            Error::NotCommuting => write!(f, "operators do not commute"),
            Error::UnsupportedOperator(what) => {
                write!(f, "operator not supported by the determinant-line engine: {what}")
            }
            Error::InadmissibleFamily(why) => write!(f, "family is not admissible: {why}"),
            Error::SingularMatrix => write!(f, "matrix is singular or not square"),
            Error::Parse { pos, msg } => write!(f, "syntax error at position {pos}: {msg}"),
            Error::BadInput(why) => write!(f, "bad input: {why}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
