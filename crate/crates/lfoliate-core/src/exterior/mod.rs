//! Exterior forms with polynomial coefficients, vector fields, and the
//! calculus between them: wedge, d, interior product, Lie derivative, bracket.

mod field;
mod form;

pub use field::{LinField, VField};
pub use form::KForm;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtError {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("form degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("cannot contract a 0-form")]
    ContractZeroForm,
    #[error("vector field is not homogeneous linear")]
    NotLinear,
}
