//! Rational SFT Hamiltonians of Seifert fibrations from the base GW potential.
pub mod bundle;
pub mod fourier;
pub mod hamiltonian;

pub use bundle::{basis_classes, section_constraint, seifert_invariants, shipped_bundles, BasisClass, SeifertBundle, SeifertInvariants};
pub use fourier::{zero_mode_of_product, FourierSeriesPoly};
pub use hamiltonian::{
    potential_slice, quadrature_average, quadrature_check, random_assignment, sft_hamiltonian, substituted_value, truncation_monotonicity, LoopVariable,
    QuadratureReport, SftHamiltonian, TruncationReport, DEFAULT_MODES, QUADRATURE_POINTS,
};
