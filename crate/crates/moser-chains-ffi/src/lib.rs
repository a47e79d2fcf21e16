//! C interface to `moser_chains`.
//!
//! Every entry point returns an [`McStatus`]. On failure the message is kept
//! per thread and read with [`mc_last_error_message`]. Strings handed out by
//! the library are released with [`mc_string_free`]; hypersurface handles
//! with [`mc_hypersurface_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use moser_chains::chain_locus::{orbit_info, FiberPoint};
use moser_chains::chain_tracer::chain_2jet;
use moser_chains::cli::normalize_json;
use moser_chains::normalize::NormalizeOptions;
use moser_chains::series::json::{graph_from_str, series_to_json};
use moser_chains::series::scalar::{format_rational, parse_rational};
use moser_chains::series::{GaussianRational, RealGraphSeries};
use moser_chains::Error;

/// Result codes; the nonzero values mirror the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McStatus {
    Ok = 0,
    Parse = 2,
    Precondition = 3,
    Internal = 4,
    NullArgument = 5,
    Panic = 6,
}

/// Opaque real-analytic hypersurface `v = F(z, z̄, u)` with exact coefficients.
pub struct McHypersurface {
    graph: RealGraphSeries<GaussianRational>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> McStatus {
    match e.exit_code() {
        2 => McStatus::Parse,
        3 => McStatus::Precondition,
        _ => McStatus::Internal,
    }
}

fn guard<F: FnOnce() -> Result<(), (McStatus, String)>>(f: F) -> McStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => McStatus::Ok,
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("panic inside moser_chains".into());
            McStatus::Panic
        }
    }
}

fn lib<T>(r: moser_chains::Result<T>) -> Result<T, (McStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (McStatus, String)> {
    if p.is_null() {
        return Err((McStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (McStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn rational(p: *const c_char, what: &str) -> Result<num_rational::BigRational, (McStatus, String)> {
    lib(parse_rational(text(p, what)?))
}

fn out_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

fn need<T>(p: *const T, what: &str) -> Result<(), (McStatus, String)> {
    if p.is_null() {
        Err((McStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Parses a hypersurface from its JSON form and stores a new handle in `out`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_hypersurface_from_json(json: *const c_char, out: *mut *mut McHypersurface) -> McStatus {
    guard(|| {
        need(out, "out")?;
        let graph = lib(graph_from_str(text(json, "json")?))?;
        *out = Box::into_raw(Box::new(McHypersurface { graph }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mc_hypersurface_free(h: *mut McHypersurface) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Serializes a hypersurface to JSON. Free the string with [`mc_string_free`].
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_hypersurface_to_json(h: *const McHypersurface, out: *mut *mut c_char) -> McStatus {
    guard(|| {
        need(h, "handle")?;
        need(out, "out")?;
        *out = out_string(series_to_json((*h).graph.as_series()).to_string());
        Ok(())
    })
}

/// Normalizes along the chain with slope 0 at truncation order `order`.
/// Writes the normal form to `out_result` and, if `out_report` is not null,
/// the full JSON report.
///
/// # Safety
/// `h` must be a live handle; `out_result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_normalize(
    h: *const McHypersurface,
    order: u32,
    out_result: *mut *mut McHypersurface,
    out_report: *mut *mut c_char,
) -> McStatus {
    guard(|| {
        need(h, "handle")?;
        need(out_result, "out_result")?;
        let opts = NormalizeOptions::new(order);
        let report = lib(normalize_json(&(*h).graph, &opts, false))?;
        let result = lib(graph_from_str(&report["hypersurface"].to_string()))?;
        *out_result = Box::into_raw(Box::new(McHypersurface { graph: result }));
        if !out_report.is_null() {
            *out_report = out_string(report.to_string());
        }
        Ok(())
    })
}

/// Rank of the isotropy orbit through the 2-jet `(x1, y1, x2, y2)` over the
/// origin of the sphere, and whether the jet lies on the chain locus.
/// Arguments are rationals written `p/q`.
///
/// # Safety
/// All strings must be nul-terminated; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_orbit_rank(
    x1: *const c_char,
    y1: *const c_char,
    x2: *const c_char,
    y2: *const c_char,
    out_rank: *mut u32,
    out_on_sigma0: *mut bool,
) -> McStatus {
    guard(|| {
        need(out_rank, "out_rank")?;
        need(out_on_sigma0, "out_on_sigma0")?;
        let p = FiberPoint::new(rational(x1, "x1")?, rational(y1, "y1")?, rational(x2, "x2")?, rational(y2, "y2")?);
        let info = lib(orbit_info(&p))?;
        *out_rank = info.rank as u32;
        *out_on_sigma0 = info.on_sigma0;
        Ok(())
    })
}

/// Second-order chain completion `x2 + i y2` of the 1-jet `x1 + i y1` at
/// the point `(x + iy, u)` of the hypersurface. Outputs are `p/q` strings.
///
/// # Safety
/// `h` must be a live handle, all strings nul-terminated, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn mc_chain_2jet(
    h: *const McHypersurface,
    x: *const c_char,
    y: *const c_char,
    u: *const c_char,
    x1: *const c_char,
    y1: *const c_char,
    out_x2: *mut *mut c_char,
    out_y2: *mut *mut c_char,
) -> McStatus {
    guard(|| {
        need(h, "handle")?;
        need(out_x2, "out_x2")?;
        need(out_y2, "out_y2")?;
        let zp = GaussianRational::new(rational(x, "x")?, rational(y, "y")?);
        let c1 = GaussianRational::new(rational(x1, "x1")?, rational(y1, "y1")?);
        let up = rational(u, "u")?;
        let c2 = lib(chain_2jet(&(*h).graph, &zp, &up, &c1, None))?;
        *out_x2 = out_string(format_rational(&c2.re));
        *out_y2 = out_string(format_rational(&c2.im));
        Ok(())
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the next
/// call into the library from the same thread; do not free.
#[no_mangle]
pub extern "C" fn mc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
