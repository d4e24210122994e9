//! Exact computations in the Kauffman bracket skein algebra of a punctured
//! surface presented by an ideal triangulation.
//!
//! Simple diagrams are encoded by their normal coordinates (admissible edge
//! colorings). Products are computed by placing two diagrams in normal
//! position, expanding the Kauffman state sum triangle by triangle, and
//! pulling each state back to normal position. On top of that sit the weight
//! filtration and symbol, Chebyshev threading at roots of unity, and the
//! trace onto the threaded central subalgebra.

pub mod algebra;
pub mod cheb;
pub mod curves;
pub mod error;
pub mod json;
pub mod planar;
pub mod ring;
pub mod surface;
pub mod trace;
pub mod verify;

pub use algebra::{SkeinAlgebra, SkeinElement, Symbol};
pub use cheb::{ChebPoly, ThreadedElement};
pub use curves::{Coloring, Decomposition};
pub use error::{Error, Result};
pub use ring::{Coefficient, Dyadic, RingMode};
pub use surface::IdealTriangulation;
pub use trace::TraceResult;
