//! Exact dense linear algebra.

pub mod field;
pub mod mat;
pub mod poly;
pub mod subspace;

pub use field::{Field, FieldKind, PrimeField, Rationals, DEFAULT_PRIME};
pub use mat::Mat;
pub use subspace::{quotient_map, Quotient, SpanSolver};
