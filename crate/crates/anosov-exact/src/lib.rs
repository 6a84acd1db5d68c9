//! Exact arithmetic for Markov coordinates: rational polynomials, the real number
//! field generated by a Perron root, Perron eigendata and certified logarithms.

pub mod decimal;
pub mod field;
pub mod log;
pub mod matrix;
pub mod perron;
pub mod poly;

pub use field::{AlgebraicField, AlgebraicReal, ExactRepr};
pub use perron::{build_field, perron_data, PerronData};
pub use poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("eigenspace has dimension {0}, expected 1")]
    DegenerateKernel(usize),
    #[error("polynomial has no real root")]
    NoRealRoot,
    #[error("Perron vector component {0} is not positive")]
    NotPositive(usize),
    #[error("cannot parse integer {0:?}")]
    Parse(String),
}
