//! Error type shared by the whole crate.

use thiserror::Error;

/// Everything that can go wrong in the kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Inversion of zero, or a scalar with no image in the target field.
    #[error("division by zero")]
    DivisionByZero,

    /// A rational has no residue mod p because p divides its denominator.
    #[error("denominator of {0} is not invertible mod {1}")]
    NoResidue(String, u64),

    /// Two elements built over different generator contexts were combined.
    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    /// An operation was applied to an argument of the wrong sort.
    #[error("sort mismatch: {0}")]
    SortMismatch(String),

    /// A construction requiring equally many generators of each sort was
    /// attempted on an unbalanced context.
    #[error("rank mismatch: {0}")]
    RankMismatch(String),

    /// An operation received the wrong number of arguments.
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    /// An associative element that was expected to lie in the image of the
    /// free Lie algebra does not.
    #[error("not a Lie element: leading word {0} is not Lyndon")]
    NotLieElement(String),

    /// A membership question cannot be decided at the current truncation
    /// degree.
    #[error("indeterminate at truncation degree {0}: {1}")]
    Indeterminate(usize, String),

    /// An enumeration would exceed the configured budget.
    #[error("enumeration budget exceeded: {needed} assignments, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    /// Structural validation failed (structure constants, file contents,
    /// degree bounds, and similar).
    #[error("validation failed: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
