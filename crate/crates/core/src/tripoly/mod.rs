//! Frobenius structure on tri-polynomials `−xyz + P(x) + Q(y) + R(e^{d}z)`.

pub mod flat;
pub mod frobenius;
pub mod space;

pub use flat::{flat_chart_polys, flat_coordinates, sample_points, solve_flat_ansatz, FlatChart, FlatChartPolys, E6_AS_PRINTED, E6_CORRECTED};
pub use frobenius::{jacobian_algebra, residue_pairing, CriticalPoint, FrobeniusPointData};
pub use space::{superpotential, tangent_vectors, TriPolyPoint, TriPolySpace};
pub mod potentiality;
pub mod spectrum;

pub use potentiality::{default_step, potentiality_check, PotentialityReport};
pub use spectrum::{flat_euler_coefficients, u_operator_spectrum, FlatPointData, USpectrum};
