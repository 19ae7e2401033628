use num_complex::Complex64;
use num_traits::Zero;
use orbifrob::algebra::rational::to_f64;
use orbifrob::algebra::{q, qi, Q};
use orbifrob::orbigw::orbicurve::Family;
use orbifrob::tripoly::{
    flat_chart_polys, jacobian_algebra, sample_points, u_operator_spectrum, FlatPointData, FrobeniusPointData, TriPolyPoint, TriPolySpace,
};

const FAMILIES: [(u32, u32, u32); 6] = [(2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 3, 3), (3, 3, 1), (2, 4, 1)];

#[test]
fn milnor_number_is_p_plus_q_plus_r_minus_one() {
    for (p, qq, r) in FAMILIES {
        let s = TriPolySpace::new(p, qq, r).unwrap();
        for pt in sample_points(&s, 3, 7) {
            assert_eq!(jacobian_algebra(&s, &pt).unwrap().dim(), s.dimension(), "{}", s.label());
        }
    }
}

#[test]
fn trace_of_u_is_sum_of_critical_values() {
    for (p, qq, r) in FAMILIES {
        let s = TriPolySpace::new(p, qq, r).unwrap();
        for pt in sample_points(&s, 2, 3) {
            let fp = FlatPointData::new(&s, &pt).unwrap();
            let crit = fp.data.critical_points(1e-12).unwrap();
            assert_eq!(crit.len(), s.dimension());
            let sum: Complex64 = crit.iter().map(|c| c.value).sum();
            let tr = to_f64(&fp.u.trace());
            assert!((sum.re - tr).abs() < 1e-8 * tr.abs().max(1.0) && sum.im.abs() < 1e-8, "{}: {sum} vs {tr}", s.label());
        }
    }
}

#[test]
fn euler_degrees_follow_the_weights() {
    let s = TriPolySpace::new(2, 3, 4).unwrap();
    let e = s.euler_coefficients();
    // a1: 1 − 1/2, b1,b2: 1 − j/3, c0..c3: 1 − k/4, then κ
    let want = vec![q(1, 2), q(2, 3), q(1, 3), qi(1), q(3, 4), q(1, 2), q(1, 4), q(1, 12)];
    assert_eq!(e, want);
    assert_eq!(s.kappa(), q(1, 12));
    assert_eq!(TriPolySpace::new(2, 2, 2).unwrap().family(), Family::D);
    assert!(TriPolySpace::new(2, 3, 6).is_err());
}

#[test]
fn flat_pairing_is_constant_and_antidiagonal_in_the_twisted_block() {
    for (p, qq, r) in FAMILIES {
        let s = TriPolySpace::new(p, qq, r).unwrap();
        let pts = sample_points(&s, 4, 19);
        let eta0 = FlatPointData::new(&s, &pts[0]).unwrap().eta;
        for pt in &pts[1..] {
            assert_eq!(FlatPointData::new(&s, pt).unwrap().eta, eta0, "{}", s.label());
        }
        // (gamma0, d) pairs to 1
        assert_eq!(eta0.get(0, s.dimension() - 1), &qi(1), "{}", s.label());
        assert!(eta0.get(0, 0).is_zero());
    }
}

#[test]
fn chart_inverse_round_trips() {
    for (p, qq, r) in FAMILIES {
        let s = TriPolySpace::new(p, qq, r).unwrap();
        let chart = flat_chart_polys(&s).unwrap();
        for pt in sample_points(&s, 3, 23) {
            let flat = chart.at(&pt).unwrap().values;
            let back = chart.inverse(&flat[..flat.len() - 1], &pt.e).unwrap();
            assert_eq!(back, pt, "{}", s.label());
        }
    }
}

#[test]
fn numeric_residues_match_exact_pairing() {
    let s = TriPolySpace::new(2, 2, 3).unwrap();
    for pt in sample_points(&s, 3, 29) {
        let d = FrobeniusPointData::new(&s, &pt).unwrap();
        let exact = d.parameter_pairing();
        let num = d.residue_pairing_numeric(1e-12).unwrap();
        for (i, row) in num.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((v - to_f64(exact.get(i, j))).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn generic_points_are_semisimple() {
    let s = TriPolySpace::new(2, 2, 4).unwrap();
    let pt = TriPolyPoint::new(&s, vec![qi(1)], vec![qi(2)], vec![Q::zero(); 4], qi(1)).unwrap();
    let spec = u_operator_spectrum(&s, &pt).unwrap();
    assert_eq!(spec.eigenvalues.len(), 7);
    assert!(spec.gap > 1e-6);
}
