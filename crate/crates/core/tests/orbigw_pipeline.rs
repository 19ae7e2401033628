use orbifrob::hurwitz::HurwitzEngine;
use orbifrob::orbigw::{
    assemble_potential, cap_potential, solve_hurwitz_by_wdvv, tabulated_potential, CapMode, CapPotential, Cutoff, Orbicurve, FIXTURE_ORDERS,
};

fn caps(orders: &[u32]) -> Vec<CapPotential> {
    orders.iter().map(|&a| cap_potential(a, CapMode::Fixture).unwrap()).collect()
}

#[test]
fn assembly_reproduces_tabulated_potentials() {
    let engine = HurwitzEngine::default();
    for o in FIXTURE_ORDERS {
        let c = Orbicurve::sphere(&o).unwrap();
        let f = assemble_potential(&c, 0, Cutoff::Exact, &caps(&o), &engine).unwrap();
        assert_eq!(f, tabulated_potential(&o).unwrap(), "{o:?}");
        assert!(f.wdvv_residuals().is_empty(), "{o:?}");
    }
}

#[test]
fn caps_four_and_five_from_wdvv() {
    for a in 4..=5 {
        assert_eq!(cap_potential(a, CapMode::Solve).unwrap(), cap_potential(a, CapMode::Fixture).unwrap(), "alpha {a}");
    }
}

#[test]
fn hurwitz_coefficients_from_wdvv() {
    let engine = HurwitzEngine::default();
    for o in FIXTURE_ORDERS {
        let c = Orbicurve::sphere(&o).unwrap();
        let s = solve_hurwitz_by_wdvv(&c, &caps(&o), &engine).unwrap();
        assert_eq!(s.potential, tabulated_potential(&o).unwrap(), "{o:?}");
    }
}
