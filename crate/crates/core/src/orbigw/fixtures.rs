//! Tabulated genus-0 potentials of four polynomial P¹-orbifolds.
//!
//! Sources are written in the tabulated variable names (`t1, t2, …`, `Q` for
//! e^{s}z) and mapped onto flat coordinates by a layout table.

use super::orbicurve::{grading_and_euler, tname, Orbicurve};
use super::potential::GWPotential;
use crate::algebra::{parse_poly, SparsePoly, VarSet, Q};
use crate::error::{Error, Result};

// quartic sign corrected to −1/96; see FIXTURE_222_AS_PRINTED
const F222: &str = "1/4*Q^4 + 1/2*Q^2*(t1^2 + t2^2 + t3^2) + Q*t1*t2*t3 + 1/4*t0*(t1^2 + t2^2 + t3^2) \
                    - 1/96*(t1^4 + t2^4 + t3^4) + 1/2*t0^2*s";

/// The quartic term with the sign as originally tabulated. It violates WDVV.
pub const FIXTURE_222_AS_PRINTED: &str = "1/4*Q^4 + 1/2*Q^2*(t1^2 + t2^2 + t3^2) + Q*t1*t2*t3 \
                    + 1/4*t0*(t1^2 + t2^2 + t3^2) + 1/96*(t1^4 + t2^4 + t3^4) + 1/2*t0^2*s";

const F223: &str = "1/6*Q^6 + 1/4*Q^4*t4^2 + Q^3*t1*t2 + 1/2*Q^2*(t4^2/6 + t3)^2 + 1/2*Q^2*(t1^2 + t2^2)*t4 \
                    + Q*t1*t2*(t4^2/6 + t3) - t4^6/19440 + 1/648*t3*t4^4 + t3^3/18 - 1/36*t3^2*t4^2 \
                    + 1/4*t0*(t1^2 + t2^2) - 1/96*(t1^4 + t2^4) + 1/3*t0*t3*t4 + 1/2*t0^2*s";

const F224: &str = "1/8*Q^8 + 1/6*Q^6*t5^2 + Q^4*(t5^2/8 + t4/2)^2 + 1/2*Q^4*(t1^2 + t2^2) + Q^3*t1*t2*t5 \
                    + 1/2*Q^2*(t5^3/96 + t4*t5/4 + t3)^2 + Q^2*(t1^2 + t2^2)*(t5^2/8 + t4/2) \
                    + Q*t1*t2*(t5^3/96 + t4*t5/4 + t3) - t5^8/4128768 + t4*t5^6/73728 - t3*t5^5/30720 \
                    - t4^4/192 - t4^2*t5^4/3072 + 1/384*t3*t4*t5^3 + 1/8*t0*t4^2 + 1/384*t4^3*t5^2 \
                    - 1/64*t3^2*t5^2 + 1/4*t0*(t1^2 + t2^2) + 1/96*(-t1^4 - t2^4) + 1/8*t3^2*t4 \
                    - 1/32*t3*t4^2*t5 + 1/4*t0*t3*t5 + 1/2*t0^2*s";

const F233: &str = "-t5^4/96 + 1/3*Q^3*t5^3 + 1/2*Q^6*t5^2 + 1/4*t0*t5^2 + 1/2*Q^2*t2*t4*t5^2 + Q^5*t2*t4*t5 \
                    + Q*(t2^2/6 + t1)*(t4^2/6 + t3)*t5 + Q^3*(t2*(t2^2/6 + t1) + t4*(t4^2/6 + t3))*t5 \
                    + Q^12/12 + 1/4*Q^4*t2^2*t4^2 + 1/18*(t1^3 + t3^3) + 1/2*Q^8*t2*t4 \
                    + 1/3*t0*(t1*t2 + t3*t4) + Q^4*(t2^2/6 + t1)*(t4^2/6 + t3) \
                    + 1/36*(-t1^2*t2^2 - t3^2*t4^2) + 1/6*Q^6*(t2^3 + t4^3) + 1/648*(t1*t2^4 + t3*t4^4) \
                    + (-t2^6 - t4^6)/19440 \
                    + 1/2*Q^2*(t4*(t2^2/6 + t1)^2 + t2*(t4^2/6 + t3)^2) + 1/2*t0^2*s";

/// Tabulated name → (k, point) for each twisted variable.
fn layout(orders: &[u32]) -> Option<Vec<(&'static str, u32, usize)>> {
    Some(match orders {
        [2, 2, 2] => vec![("t1", 1, 0), ("t2", 1, 1), ("t3", 1, 2)],
        [2, 2, 3] => vec![("t1", 1, 0), ("t2", 1, 1), ("t3", 1, 2), ("t4", 2, 2)],
        [2, 2, 4] => vec![("t1", 1, 0), ("t2", 1, 1), ("t3", 1, 2), ("t4", 2, 2), ("t5", 3, 2)],
        [2, 3, 3] => vec![("t5", 1, 0), ("t1", 1, 1), ("t2", 2, 1), ("t3", 1, 2), ("t4", 2, 2)],
        _ => return None,
    })
}

pub const FIXTURE_ORDERS: [[u32; 3]; 4] = [[2, 2, 2], [2, 2, 3], [2, 2, 4], [2, 3, 3]];

pub fn fixture_source(orders: &[u32]) -> Option<&'static str> {
    match orders {
        [2, 2, 2] => Some(F222),
        [2, 2, 3] => Some(F223),
        [2, 2, 4] => Some(F224),
        [2, 3, 3] => Some(F233),
        _ => None,
    }
}

/// Reads a tabulated expression for the sphere with these orders.
pub fn potential_from_source(orders: &[u32], src: &str) -> Result<GWPotential> {
    let lay = layout(orders).ok_or_else(|| Error::Invalid(format!("no tabulated layout for orders {orders:?}")))?;
    let curve = Orbicurve::sphere(orders)?;
    let g = grading_and_euler(&curve);
    let names: Vec<(String, Q)> =
        ["t0"].into_iter().chain(lay.iter().map(|(n, _, _)| *n)).chain(["s", "Q"]).map(|n| (n.to_string(), Q::from_integer(0.into()))).collect();
    let src_vars = VarSet::new(names);
    let f = parse_poly(src, &src_vars)?;
    let images: Vec<SparsePoly> = ["t0".to_string()]
        .into_iter()
        .chain(lay.iter().map(|(_, k, p)| tname(*k, *p)))
        .chain(["s".to_string(), "Q".to_string()])
        .map(|n| SparsePoly::var_named(&g.full, &n))
        .collect::<Result<_>>()?;
    GWPotential::from_full(curve, 0, &f.compose(&images, &g.full))
}

pub fn tabulated_potential(orders: &[u32]) -> Result<GWPotential> {
    let src = fixture_source(orders).ok_or_else(|| Error::Invalid(format!("no tabulated potential for orders {orders:?}")))?;
    potential_from_source(orders, src)
}
