//! C interface to orbifrob.
//!
//! Every function returns an [`OrbifrobStatus`]. On failure the message is kept per thread
//! and read with [`orbifrob_last_error`]. Strings handed out are owned by the caller and
//! released with [`orbifrob_string_free`]; handles have their own `_free` functions.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use orbifrob::algebra::rational::fmt_q;
use orbifrob::hurwitz::{BranchData, HurwitzCache, HurwitzEngine, HurwitzQuery};
use orbifrob::mirror::mirror_check_full;
use orbifrob::orbigw::orbicurve::Family;
use orbifrob::orbigw::{assemble_potential, cap_potential, classify_polynomial, CapMode, Cutoff, GWPotential, Orbicurve};
use orbifrob::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbifrobStatus {
    Ok = 0,
    Invalid = 1,
    UnknownVariable = 2,
    Resource = 3,
    Degenerate = 4,
    Solve = 5,
    Io = 6,
    NullPointer = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbifrobFamily {
    A = 0,
    D = 1,
    E = 2,
    NonPolynomial = 3,
}

/// Hurwitz engine with its optional cache.
pub struct OrbifrobEngine(HurwitzEngine);

/// Genus-g potential of an orbicurve.
pub struct OrbifrobPotential(GWPotential);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OrbifrobStatus {
    match e {
        Error::Invalid(_) => OrbifrobStatus::Invalid,
        Error::UnknownVariable(_) => OrbifrobStatus::UnknownVariable,
        Error::Resource(_) => OrbifrobStatus::Resource,
        Error::Degenerate(_) | Error::PositiveDimensional(_) => OrbifrobStatus::Degenerate,
        Error::Io(_) => OrbifrobStatus::Io,
        _ => OrbifrobStatus::Solve,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, turning errors and panics into a status plus the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OrbifrobStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrbifrobStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            OrbifrobStatus::NullPointer
        }
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            set_error(format!("panic: {}", msg.unwrap_or_else(|| "unknown".into())));
            OrbifrobStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Lib(Error::Invalid(format!("{what} is not UTF-8"))))
}

unsafe fn orders_arg(orders: *const u32, len: usize) -> Result<Vec<u32>, Fail> {
    if len == 0 {
        return Ok(vec![]);
    }
    if orders.is_null() {
        return Err(Fail::Null("orders"));
    }
    Ok(std::slice::from_raw_parts(orders, len).to_vec())
}

unsafe fn write_out<T>(out: *mut T, v: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(v);
    Ok(())
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no NULs").into_raw()
}

/// The message of the last failure on this thread, or NULL. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn orbifrob_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn orbifrob_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Engine with a cache file at `cache_path` (NULL for none) and a degree cap (0 for the default).
///
/// # Safety
/// `cache_path` is NULL or a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn orbifrob_engine_new(cache_path: *const c_char, max_degree: u32, out: *mut *mut OrbifrobEngine) -> OrbifrobStatus {
    guard(|| {
        let cache = if cache_path.is_null() { None } else { Some(HurwitzCache::open(str_arg(cache_path, "cache_path")?.into())) };
        let mut e = HurwitzEngine::new(cache);
        if max_degree > 0 {
            e = e.with_max_degree(max_degree);
        }
        write_out(out, Box::into_raw(Box::new(OrbifrobEngine(e))), "out")
    })
}

/// # Safety
/// `engine` comes from [`orbifrob_engine_new`] or is NULL.
#[no_mangle]
pub unsafe extern "C" fn orbifrob_engine_free(engine: *mut OrbifrobEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

unsafe fn engine_ref<'a>(e: *const OrbifrobEngine) -> Result<&'a HurwitzEngine, Fail> {
    e.as_ref().map(|e| &e.0).ok_or(Fail::Null("engine"))
}

/// Hurwitz number as a "num/den" string; `profiles` looks like "(2,1);(3)".
///
/// # Safety
/// Pointers must be valid; `*out` receives a string for [`orbifrob_string_free`].
#[no_mangle]
pub unsafe extern "C" fn orbifrob_hurwitz_number(
    engine: *const OrbifrobEngine,
    base_genus: u32,
    genus: i64,
    degree: u32,
    profiles: *const c_char,
    connected: bool,
    out: *mut *mut c_char,
) -> OrbifrobStatus {
    guard(|| {
        let data = BranchData::parse(degree, str_arg(profiles, "profiles")?)?;
        let v = engine_ref(engine)?.hurwitz_number(&HurwitzQuery::new(base_genus, genus, data, connected))?;
        write_out(out, into_c(fmt_q(&v)), "out")
    })
}

/// # Safety
/// `orders` holds `len` values; the out pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn orbifrob_classify(orders: *const u32, len: usize, polynomial: *mut bool, family: *mut OrbifrobFamily) -> OrbifrobStatus {
    guard(|| {
        let c = classify_polynomial(&orders_arg(orders, len)?);
        let f = match c.family {
            Family::A => OrbifrobFamily::A,
            Family::D => OrbifrobFamily::D,
            Family::E => OrbifrobFamily::E,
            Family::NonPolynomial => OrbifrobFamily::NonPolynomial,
        };
        write_out(polynomial, c.polynomial, "polynomial")?;
        write_out(family, f, "family")
    })
}

/// Genus-`genus` potential of the sphere with the given cone orders, from the tabulated caps.
/// `max_q_degree = 0` keeps every degree, which needs a polynomial sphere.
///
/// # Safety
/// `orders` holds `len` values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn orbifrob_potential_assemble(
    engine: *const OrbifrobEngine,
    orders: *const u32,
    len: usize,
    genus: u32,
    max_q_degree: u32,
    out: *mut *mut OrbifrobPotential,
) -> OrbifrobStatus {
    guard(|| {
        let orders = orders_arg(orders, len)?;
        let curve = Orbicurve::sphere(&orders)?;
        let caps = orders.iter().map(|&a| cap_potential(a, CapMode::Fixture)).collect::<Result<Vec<_>, _>>()?;
        let cutoff = match max_q_degree {
            0 if orders.is_empty() => Cutoff::Degree(1),
            0 => Cutoff::Exact,
            d => Cutoff::Degree(d),
        };
        let f = assemble_potential(&curve, genus, cutoff, &caps, engine_ref(engine)?)?;
        write_out(out, Box::into_raw(Box::new(OrbifrobPotential(f))), "out")
    })
}

/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn orbifrob_potential_from_json(json: *const c_char, out: *mut *mut OrbifrobPotential) -> OrbifrobStatus {
    guard(|| {
        let v: serde_json::Value = serde_json::from_str(str_arg(json, "json")?).map_err(|e| Error::Invalid(e.to_string()))?;
        let f = GWPotential::from_json(&v)?;
        write_out(out, Box::into_raw(Box::new(OrbifrobPotential(f))), "out")
    })
}

/// # Safety
/// `f` is a live potential; `*out` receives a string for [`orbifrob_string_free`].
#[no_mangle]
pub unsafe extern "C" fn orbifrob_potential_to_json(f: *const OrbifrobPotential, out: *mut *mut c_char) -> OrbifrobStatus {
    guard(|| {
        let f = f.as_ref().ok_or(Fail::Null("potential"))?;
        write_out(out, into_c(f.0.to_json().to_string()), "out")
    })
}

/// Number of WDVV equations the potential violates.
///
/// # Safety
/// `f` is a live potential; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn orbifrob_potential_wdvv_violations(f: *const OrbifrobPotential, out: *mut usize) -> OrbifrobStatus {
    guard(|| {
        let f = f.as_ref().ok_or(Fail::Null("potential"))?;
        write_out(out, f.0.wdvv_residuals().len(), "out")
    })
}

/// # Safety
/// `f` comes from this library or is NULL.
#[no_mangle]
pub unsafe extern "C" fn orbifrob_potential_free(f: *mut OrbifrobPotential) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Mirror comparison for the tri-polynomial family `(p,q,r)`; the JSON report goes to `*report`
/// (pass NULL to skip it).
///
/// # Safety
/// `passed` is writable; `report` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn orbifrob_mirror_check(
    engine: *const OrbifrobEngine,
    p: u32,
    q: u32,
    r: u32,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> OrbifrobStatus {
    guard(|| {
        let rep = mirror_check_full(p, q, r, engine_ref(engine)?)?;
        write_out(passed, rep.passed(), "passed")?;
        if !report.is_null() {
            report.write(into_c(serde_json::to_string(&rep).expect("reports serialize")));
        }
        Ok(())
    })
}
