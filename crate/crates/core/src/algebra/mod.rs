//! Exact arithmetic substrate.

pub mod eigen;
pub mod groebner;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod series;

pub use eigen::{eigenvalues_numeric, min_gap};
pub use groebner::{groebner_quotient, MonomialOrder, QuotientAlgebra};
pub use linalg::{solve_linear_exact, LinearSolution, QMatrix};
pub use parse::parse_poly;
pub use poly::{SparsePoly, VarSet};
pub use rational::{parse_q, q, qi, Q};
pub use series::{puiseux_at_infinity, FractionalSeries, PowerSeries};
