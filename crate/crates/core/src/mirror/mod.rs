//! Mirror symmetry between orbifold spheres `P¹_{p,q,r}` and tri-polynomials.
pub mod check;
pub mod presentation;

pub use check::{
    expected_u0, mirror_check_full, mirror_check_with, mirror_orders, orbifold_potential, perturbation_report, MirrorReport, MirrorSample, PerturbationReport,
    SpectrumSample, StageReport,
};
pub use presentation::{
    compare_algebras, compare_presentation_with_mirror, mirror_point, presentation_relations, quantum_presentation, AlgebraComparison, MirrorPoint,
    QuantumPresentation,
};
