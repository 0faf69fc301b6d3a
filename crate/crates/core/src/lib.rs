//! Representation numbers of quadratic forms and polynomials, Gross lattices
//! of supersingular quaternion orders, theta series, Hilbert class
//! polynomials and the reduction of singular moduli modulo primes.
//!
//! Module map:
//! - [`arith`]: divisor functions, Möbius, Kronecker symbol, discriminants.
//! - [`binary_forms`]: reduced binary forms, class numbers, Dirichlet bound.
//! - [`quad_poly`]: integer-valued binary quadratic polynomials and their bound.
//! - [`ternary_forms`]: ternary forms, exact counting, the slices method.
//! - [`quaternion`]: quaternion orders, reduced discriminants, Gross lattices.
//! - [`qseries`]: truncated q-expansions, theta series, `U_n`.
//! - [`cm_reduction`]: class polynomials and their reduction modulo `p`.
//! - [`acceptance`]: the end-to-end verification suite.

pub mod acceptance;
pub mod arith;
pub mod binary_forms;
pub mod cm_reduction;
pub mod corpus;
pub mod error;
pub mod quad_poly;
pub mod qseries;
pub mod quaternion;
pub mod ternary_forms;

pub use arith::Discriminant;
pub use binary_forms::BinaryQF;
pub use error::{Error, Result};
pub use quad_poly::IntegerValuedQP;
pub use qseries::IntSeries;
pub use ternary_forms::TernaryQF;
