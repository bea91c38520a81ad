use thiserror::Error;

/// Errors raised while building or using a scheme.
///
/// User and slot indices in messages are 1-based.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BiaError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("infeasible (K={users}, r={order}, {mode}): {inequality}")]
    Infeasible {
        users: usize,
        order: usize,
        mode: &'static str,
        inequality: String,
    },

    #[error("construction integrity: {0}")]
    ConstructionIntegrity(String),

    #[error("index out of range: {what} = {index} (valid 1..={max})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("lemma violation ({check}): {detail}")]
    LemmaViolation { check: &'static str, detail: String },

    #[error("decodability failure at receiver {receiver}: {detail}")]
    Decodability { receiver: usize, detail: String },

    #[error("census mismatch at receiver {receiver}, group {group}: expected {expected}, found {found}")]
    Census {
        receiver: usize,
        group: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("converse audit violated at receiver {receiver}: lhs {lhs} > n {slots}")]
    ConverseAudit { receiver: usize, lhs: i64, slots: usize },

    #[error("math integrity: {0}")]
    MathIntegrity(String),

    #[error("insufficient SNR span: {0}")]
    InsufficientSnrSpan(String),

    #[error("bundle: {0}")]
    Bundle(String),
}

pub type Result<T, E = BiaError> = std::result::Result<T, E>;
