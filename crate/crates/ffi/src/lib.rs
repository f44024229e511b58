//! C ABI for the psbm toolkit.
//!
//! Spaces are opaque handles created by `psb_space_*` constructors and
//! released with [`psb_space_free`]. Every fallible call returns a
//! [`PsbStatus`]; on failure [`psb_last_error`] describes the cause. Reports
//! come back as JSON strings owned by the caller and released with
//! [`psb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use psbm::comparison::ComparisonKind;
use psbm::contraction::{certify, InterpolativeSpec, SelfMap, TripleSource};
use psbm::fixpoint::{picard_iterate, verify_fixed_point, DEFAULT_TOLERANCE};
use psbm::report::{self, FixpointSummary};
use psbm::repro::{run_repro, ReproOptions};
use psbm::spaces::{builtin_space, check_axioms, load_tabulated_space, AxiomSet, PartialSbSpace, TupleSource};
use psbm::topology::{generate_topology, is_connected, open_ball, separation_report, verify_topology_axioms};
use psbm::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownPoint = 3,
    UnknownBuiltin = 4,
    ParseError = 5,
    InvalidArgument = 6,
    Infeasible = 7,
    InvalidExponents = 8,
    MapLeavesCarrier = 9,
    Other = 10,
}

/// Opaque space handle.
pub struct PsbSpace(PartialSbSpace);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let msg = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(e: Error) -> PsbStatus {
    let status = match &e {
        Error::UnknownPoint(_) => PsbStatus::UnknownPoint,
        Error::UnknownBuiltin(_) => PsbStatus::UnknownBuiltin,
        Error::Parse { .. } | Error::IncompleteTable(..) | Error::NegativeValue { .. } => PsbStatus::ParseError,
        Error::InfeasibleExhaustive | Error::CarrierTooLarge(_) => PsbStatus::Infeasible,
        Error::InvalidExponents(_) => PsbStatus::InvalidExponents,
        Error::MapLeavesCarrier { .. } => PsbStatus::MapLeavesCarrier,
        Error::InvalidArgument(_)
        | Error::InvalidRadius(_)
        | Error::InvalidCoefficient(_)
        | Error::InvalidComparison(_)
        | Error::WrongSpaceShape(_) => PsbStatus::InvalidArgument,
        _ => PsbStatus::Other,
    };
    set_error(e.to_string());
    status
}

/// Message of the last failure on this thread. Valid until the next failing
/// call on the same thread; never null.
#[no_mangle]
pub extern "C" fn psb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn psb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PsbStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(PsbStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        PsbStatus::InvalidUtf8
    })
}

unsafe fn space_ref<'a>(space: *const PsbSpace) -> Result<&'a PartialSbSpace, PsbStatus> {
    if space.is_null() {
        set_error("null space handle");
        return Err(PsbStatus::NullPointer);
    }
    Ok(&(*space).0)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), PsbStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(PsbStatus::NullPointer);
    }
    *out = value;
    Ok(())
}

unsafe fn write_json(out: *mut *mut c_char, value: &serde_json::Value) -> Result<(), PsbStatus> {
    let text = serde_json::to_string(value).map_err(|e| {
        set_error(e.to_string());
        PsbStatus::Other
    })?;
    let c = CString::new(text).map_err(|_| {
        set_error("report contains a NUL byte");
        PsbStatus::Other
    })?;
    write_out(out, c.into_raw())
}

fn status(r: Result<(), PsbStatus>) -> PsbStatus {
    r.err().unwrap_or(PsbStatus::Ok)
}

unsafe fn new_space(out: *mut *mut PsbSpace, space: Result<PartialSbSpace, Error>) -> Result<(), PsbStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(PsbStatus::NullPointer);
    }
    *out = ptr::null_mut();
    let space = space.map_err(fail)?;
    *out = Box::into_raw(Box::new(PsbSpace(space)));
    Ok(())
}

/// Creates one of the builtin spaces (`quintic_ray`, `quintic_gap`,
/// `two_point_a`, `two_point_b`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn psb_space_builtin(name: *const c_char, out: *mut *mut PsbSpace) -> PsbStatus {
    status((|| {
        let name = read_str(name)?;
        new_space(out, builtin_space(name))
    })())
}

/// Parses a tabulated space from the text of a space file.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn psb_space_from_text(text: *const c_char, out: *mut *mut PsbSpace) -> PsbStatus {
    status((|| {
        let text = read_str(text)?;
        new_space(out, load_tabulated_space(text))
    })())
}

/// Releases a space handle. Null is ignored.
///
/// # Safety
/// `space` must come from a `psb_space_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn psb_space_free(space: *mut PsbSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn psb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes `℘(p, q, r)` for points given by label or number.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn psb_space_evaluate(
    space: *const PsbSpace,
    p: *const c_char,
    q: *const c_char,
    r: *const c_char,
    out: *mut f64,
) -> PsbStatus {
    status((|| {
        let s = space_ref(space)?;
        let mut pts = Vec::with_capacity(3);
        for text in [p, q, r] {
            pts.push(s.parse_point(read_str(text)?).map_err(fail)?);
        }
        let v = s.evaluate(pts[0], pts[1], pts[2]).map_err(fail)?;
        write_out(out, v)
    })())
}

/// Checks an axiom set (`s-metric`, `partial-s-metric`, `sb-metric`,
/// `partial-sb`). Finite spaces are checked exhaustively when `samples` is
/// 0; otherwise `samples` random quadruples are drawn with `seed`.
///
/// # Safety
/// Pointers must be valid; `report_json` receives a string to free with
/// [`psb_string_free`] and may be null to skip the report.
#[no_mangle]
pub unsafe extern "C" fn psb_verify_axioms(
    space: *const PsbSpace,
    axiom_set: *const c_char,
    samples: usize,
    seed: u64,
    passed: *mut bool,
    report_json: *mut *mut c_char,
) -> PsbStatus {
    status((|| {
        let s = space_ref(space)?;
        let name = read_str(axiom_set)?;
        let set = AxiomSet::parse(name)
            .ok_or_else(|| fail(Error::InvalidArgument(format!("unknown axiom set `{name}`"))))?;
        let source = if samples == 0 {
            TupleSource::Exhaustive
        } else {
            TupleSource::Sampled { count: samples, seed }
        };
        let r = check_axioms(s, set, source).map_err(fail)?;
        write_out(passed, r.passed)?;
        if !report_json.is_null() {
            write_json(report_json, &report::axioms(s, &r).json)?;
        }
        Ok(())
    })())
}

/// JSON description of `D(center; radius)`. Region carriers are searched
/// over `samples` grid and random points.
///
/// # Safety
/// Pointers must be valid; the result must be freed with [`psb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn psb_open_ball(
    space: *const PsbSpace,
    center: *const c_char,
    radius: f64,
    samples: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> PsbStatus {
    status((|| {
        let s = space_ref(space)?;
        let c = s.parse_point(read_str(center)?).map_err(fail)?;
        let finite = s.carrier().is_finite();
        let mut candidates = s.grid(samples);
        candidates.extend(s.sample(samples, seed));
        let ball = open_ball(s, c, radius, &candidates).map_err(fail)?;
        write_json(out_json, &report::ball(s, &ball, !finite).json)
    })())
}

/// JSON with the generated topology, separation verdicts and connectedness
/// of a finite space.
///
/// # Safety
/// Pointers must be valid; the result must be freed with [`psb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn psb_topology(space: *const PsbSpace, out_json: *mut *mut c_char) -> PsbStatus {
    status((|| {
        let s = space_ref(space)?;
        let t = generate_topology(s).map_err(fail)?;
        let value = serde_json::json!({
            "topology": report::topology(&t, verify_topology_axioms(&t)).json,
            "separation": report::separation(&t, &separation_report(&t)).json,
            "connectedness": report::connected(&t, &is_connected(&t)).json,
        });
        write_json(out_json, &value)
    })())
}

/// Certifies the worked contraction spec (p=q=r=s=1/5, `paper_S`) under the
/// Boyd-Wong inequality, or the Matkowski one when `matkowski` is set, over
/// `samples` random triples.
///
/// # Safety
/// Pointers must be valid; `report_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn psb_certify_paper(
    space: *const PsbSpace,
    matkowski: bool,
    samples: usize,
    seed: u64,
    passed: *mut bool,
    report_json: *mut *mut c_char,
) -> PsbStatus {
    status((|| {
        let s = space_ref(space)?;
        let kind = if matkowski { ComparisonKind::Matkowski } else { ComparisonKind::BoydWong };
        let spec = InterpolativeSpec::paper(kind);
        let r = certify(s, &spec, &TripleSource::Sampled { count: samples, seed }).map_err(fail)?;
        write_out(passed, r.passed)?;
        if !report_json.is_null() {
            write_json(report_json, &report::certificate(s, &spec, &r).json)?;
        }
        Ok(())
    })())
}

/// Picard iteration of `paper_S` from `start`; JSON trace with the
/// fixed-point check of the limit.
///
/// # Safety
/// Pointers must be valid; the result must be freed with [`psb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn psb_picard(
    space: *const PsbSpace,
    start: *const c_char,
    max_iter: usize,
    converged: *mut bool,
    out_json: *mut *mut c_char,
) -> PsbStatus {
    status((|| {
        let s = space_ref(space)?;
        let a0 = s.parse_point(read_str(start)?).map_err(fail)?;
        let map = SelfMap::PaperS;
        let trace = picard_iterate(s, &map, a0, DEFAULT_TOLERANCE, max_iter).map_err(fail)?;
        let limit_check = match trace.limit {
            Some(l) => Some(verify_fixed_point(s, &map, l, DEFAULT_TOLERANCE).map_err(fail)?),
            None => None,
        };
        write_out(converged, trace.converged)?;
        let summary = FixpointSummary { trace: &trace, limit_check, convergence: None, envelope: None, uniqueness: None };
        write_json(out_json, &report::fixpoint(s, &summary).json)
    })())
}

/// Runs the full reproduction suite.
///
/// # Safety
/// Pointers must be valid; `report_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn psb_repro(seed: u64, passed: *mut bool, report_json: *mut *mut c_char) -> PsbStatus {
    status((|| {
        let r = run_repro(&ReproOptions { seed, ..ReproOptions::default() });
        write_out(passed, r.passed())?;
        if !report_json.is_null() {
            write_json(report_json, &r.to_json())?;
        }
        Ok(())
    })())
}
