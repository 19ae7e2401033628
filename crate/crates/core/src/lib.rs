//! Exact computations around orbifold quantum cohomology of P¹-orbifolds.
//!
//! * [`algebra`] rationals, sparse polynomials, series, Gröbner quotients, linear algebra
//! * [`hurwitz`] Hurwitz numbers by characters, with a brute-force oracle and a disk cache
//! * [`orbigw`] cap potentials, assembly of genus-0 potentials, WDVV checks and solves
//! * [`tripoly`] Frobenius structure on tri-polynomials `-xyz + P(x) + Q(y) + R(z)`
//! * [`mirror`] comparison of the two sides for `P¹_{2,2,r}` and `P¹_{2,3,3}`
//! * [`seifert`] SFT Hamiltonians of Seifert fibrations by Fourier zero modes

pub mod algebra;
pub mod cli;
pub mod error;
pub mod hurwitz;
pub mod mirror;
pub mod orbigw;
pub mod seifert;
pub mod tripoly;

pub use error::{Error, Result};
