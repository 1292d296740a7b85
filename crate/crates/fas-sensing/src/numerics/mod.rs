//! Scalar special functions, small dense complex linear algebra, and the
//! deterministic RNG contract shared by every other module.

mod linalg;
mod qfunc;
mod rng;

pub use linalg::{hermitian_quadratic_form, ComplexMatrix, ComplexVector};
pub use qfunc::{q_function, q_inverse};
pub use rng::{substream, SeededRng};
