use thiserror::Error;

/// Errors raised by the exact engine.
///
/// Variants split into three families: bad input (`Domain`, `Index`, `Parse`,
/// `InvalidSystem`), refusals where a formula does not apply
/// (`ClosedFormUnavailable`, `NonTerminating`, `Pole`), and internal
/// consistency failures (`ResidualSqrtPi`, `IdentityViolation`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index error: {what} = {index} outside {lo}..={hi}")]
    Index {
        what: &'static str,
        index: i64,
        lo: i64,
        hi: i64,
    },

    #[error(transparent)]
    Parse(#[from] ParseRationalError),

    #[error("invalid constraint system: {0}")]
    InvalidSystem(String),

    #[error(
        "no closed form for B_{l} when l < j = {j}: the reordered sum keeps a nonzero lower limit; \
         use the summation or oracle route"
    )]
    ClosedFormUnavailable { j: u32, l: u32 },

    #[error(
        "hypergeometric series does not terminate: no upper parameter is a nonpositive integer"
    )]
    NonTerminating,

    #[error("pole: {0}")]
    Pole(String),

    #[error("sqrt(pi) exponent {0} did not cancel; value is not rational")]
    ResidualSqrtPi(i32),

    #[error("identity violated: {0}")]
    IdentityViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure to read a rational from its `num/den` string form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational {input:?} at position {position}: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    /// Zero-based character offset of the offending character.
    pub position: usize,
    pub reason: String,
}
