use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not invertible as a formal series: constant term is zero")]
    NotInvertible,

    /// Exact division left a remainder in a coefficient domain without fractions.
    #[error("inexact division of {dividend} by {divisor} over the integers")]
    InexactDivision { dividend: String, divisor: String },

    #[error("non-canonical residue: {r} mod {m} (need 0 <= r < m)")]
    NonCanonicalResidue { r: u64, m: u64 },

    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("argument must be a positive integer, got {0}")]
    NonPositiveArgument(u64),

    #[error("invalid product spec: {0}")]
    InvalidSpec(String),

    #[error("table weight missing for set member {n}")]
    MissingTableWeight { n: u64 },

    #[error("expansion oracle requires integer exponents (member {n} has exponent {exponent})")]
    NonIntegerExponent { n: u64, exponent: String },

    #[error("product formula not established for this m (m = {0})")]
    InadmissibleTriangularCount(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("unknown product spec `{0}`")]
    UnknownSpec(String),

    #[error("spec parse error at `{path}`: {message}")]
    SpecParse { path: String, message: String },
}
