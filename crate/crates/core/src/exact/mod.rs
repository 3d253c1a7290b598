//! Exact scalar and linear-algebra substrate.

pub mod matrix;
pub mod pencil;
pub mod poly;
pub mod roots;
pub mod scalar;

pub use matrix::{ExactMatrix, Rref};
pub use pencil::{pencil_min_finite_eigenvalue, PencilValue};
pub use poly::{Poly, RealPoly};
pub use roots::{isolate_real_roots, RealAlgebraicRoot, RootKind};
pub use scalar::{format_rational, int, parse_rational, rat, Gq, Rational};
