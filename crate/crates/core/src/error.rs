use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
///
/// Variants are grouped by the layer that raises them; the CLI maps each
/// variant onto one of the documented process exit codes via
/// [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    // ------------------------------------------------------------------
    // field construction and element handling
    // ------------------------------------------------------------------
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field order {p}^{h} exceeds the supported cap 2^20")]
    FieldTooLarge { p: u64, h: u32 },

    #[error("modulus must be monic of degree {expected}, got {got:?}")]
    BadModulus { expected: u32, got: Vec<u64> },

    #[error("modulus {0} is reducible over F_{1}")]
    ReducibleModulus(String, u64),

    #[error("x has multiplicative order {order} modulo {modulus}, not {expected}; pick a primitive modulus")]
    NonPrimitiveModulus {
        modulus: String,
        order: u64,
        expected: u64,
    },

    #[error("no irreducible primitive modulus found for ({p}, {h})")]
    NoModulus { p: u64, h: u32 },

    #[error("cannot parse {input:?} as an element of {field}: {reason}")]
    ElementSyntax {
        input: String,
        field: String,
        reason: String,
    },

    #[error("value {0} is not an element of {1}")]
    ForeignElement(u64, String),

    #[error("operands belong to different fields: {0} vs {1}")]
    MixedFields(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} does not divide the extension degree {1}")]
    NotASubfieldDegree(u32, u32),

    // ------------------------------------------------------------------
    // matrix shapes and predicates
    // ------------------------------------------------------------------
    #[error("matrix shape {rows}x{cols} is invalid for {context}")]
    BadShape {
        rows: usize,
        cols: usize,
        context: &'static str,
    },

    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch {
        context: &'static str,
        left: String,
        right: String,
    },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not monomial (row {0} has {1} nonzero entries)")]
    NotMonomial(usize, usize),

    #[error("matrix is not diagonal (nonzero entry at ({0}, {1}))")]
    NotDiagonal(usize, usize),

    #[error("matrix is not Toeplitz (entry ({0}, {1}) breaks a diagonal)")]
    NotToeplitz(usize, usize),

    #[error("matrix is not non-singular by columns: the {ell}x{ell} minor on columns {cols:?} vanishes")]
    NotNsc { ell: usize, cols: Vec<usize> },

    #[error("entry ({row}, {col}) lies outside the subfield of order {subfield_order}")]
    OutsideSubfield {
        row: usize,
        col: usize,
        subfield_order: u64,
    },

    #[error("leading principal minor {index} vanishes")]
    LeadingMinorZero { index: usize },

    #[error("diagonal entry {index} is zero")]
    ZeroDiagonalEntry { index: usize },

    // ------------------------------------------------------------------
    // codes and enumeration
    // ------------------------------------------------------------------
    #[error("operation undefined for the zero code")]
    ZeroCode,

    #[error("enumeration needs {needed} codewords but the budget ({knob}) is {budget}")]
    BudgetExceeded {
        needed: u128,
        budget: u64,
        knob: &'static str,
    },

    #[error("retry limit {limit} exhausted while {what}")]
    RetriesExhausted { what: &'static str, limit: u64 },

    #[error("search budget {budget} exhausted while {what}")]
    SearchExhausted { what: String, budget: u64 },

    #[error("weight distribution is inconsistent: {0}")]
    BadWeightDistribution(String),

    // ------------------------------------------------------------------
    // construction preconditions and verification outcomes
    // ------------------------------------------------------------------
    #[error("{context}: {detail}")]
    ConditionFailed { context: &'static str, detail: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    // ------------------------------------------------------------------
    // I/O and plumbing
    // ------------------------------------------------------------------
    #[error("bad input: {0}")]
    BadInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code the CLI reports for this error.
    ///
    /// 2 = a verification or predicate check failed, 3 = the input was
    /// malformed or violated a precondition, 4 = a work budget was exhausted.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            VerificationFailed(_) | NotNsc { .. } | ConditionFailed { .. } => 2,
            BudgetExceeded { .. } | RetriesExhausted { .. } | SearchExhausted { .. } => 4,
            Internal(_) => 1,
            _ => 3,
        }
    }
}
