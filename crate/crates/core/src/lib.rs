//! Numerical-radius machinery for G₁ operators: dense complex kernels, the
//! numerical radius engine, a Herglotz-class functional calculus, G₁ operator
//! generation and certification, and checkers for the numerical radius
//! inequalities built on them.

pub mod error;
pub mod funcalc;
pub mod g1gen;
pub mod ineq;
pub mod linalg;
pub mod random;
pub mod suite;
pub mod wradius;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64;
