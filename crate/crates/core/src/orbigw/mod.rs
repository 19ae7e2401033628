//! Orbifold GW potentials of orbicurves: gradings, caps, assembly and WDVV.

pub mod cap;
pub mod fixtures;
pub mod orbicurve;
pub mod potential;
pub mod quantum;
pub mod solve;
pub mod wdvv;

pub use cap::{cap_potential, CapMode, CapPotential};
pub use fixtures::{tabulated_potential, FIXTURE_ORDERS};
pub use orbicurve::{
    classify_polynomial, enumerate_profiles, enumerate_profiles_on, grading_and_euler, max_profile_degree, Classification, Family, Grading, Orbicurve,
};
pub use potential::{assemble_potential, Cutoff, GWPotential};
pub use quantum::{quantum_structure, QuantumStructure};
pub use solve::{solve_hurwitz_by_wdvv, HurwitzSolution};
pub use wdvv::{wdvv_residuals, Direction, Frame};
