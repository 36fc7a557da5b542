use thiserror::Error;

/// Every failure the library can report.
///
/// Verification outcomes (a formula rejecting a witness it should accept) are
/// data, not errors, except where an evaluator is asked to operate outside its
/// contract.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable `{0}` has no binding")]
    UnboundVariable(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("exponent at byte {pos} is not a nonnegative integer literal")]
    NonIntegerExponent { pos: usize },

    #[error("the polynomial is constant; a representation needs total degree at least 1")]
    DegreeZero,

    #[error("a representation needs at least one unknown")]
    NoUnknowns,

    #[error("multi-index sums to {sum}, which exceeds the degree {lambda}")]
    IndexOverflow { sum: u64, lambda: u32 },

    #[error("interval divisor g = {0} is not positive")]
    NonPositiveG(String),

    #[error("bound F = {value} exceeds the enumeration cap {cap}")]
    CapExceeded { value: String, cap: String },

    #[error("interval triple #{index} violates 0 < g, t - s <= g at this point: {detail}")]
    TripleContractViolation { index: usize, detail: String },

    #[error("a = {a}, h = {h:?} satisfies R = 0 but the compiled formula rejects its encoded witness")]
    SoundnessViolation { a: u64, h: Vec<u64> },

    #[error("malformed artifact: {0}")]
    Artifact(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
