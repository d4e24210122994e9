//! Exact coefficient arithmetic: `Z[1/2]`, Laurent polynomials in the quantum
//! variable `A`, and their image at a primitive `2N`-th root of unity.

mod coefficient;
mod cyclotomic;
mod dyadic;
mod laurent;

pub use coefficient::{loop_scalar, Coefficient, RingMode};
pub use cyclotomic::{cyclotomic_polynomial, CyclotomicRing};
pub use dyadic::Dyadic;
pub use laurent::IntLaurent;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("coefficient ring mismatch: {0} vs {1}")]
    ModeMismatch(RingMode, RingMode),
    #[error("cyclotomic order must be odd and at least 3, got {0}")]
    BadOrder(u32),
    #[error("expected {expected} cyclotomic coordinates, got {got}")]
    CoordLength { expected: usize, got: usize },
    #[error("cannot parse {0:?} as a dyadic rational")]
    Parse(String),
    #[error("{0:?} has a denominator that is not a power of two")]
    NonDyadic(String),
    #[error("integer coefficient overflow in state sum")]
    Overflow,
}
