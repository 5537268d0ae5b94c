//! C ABI over `cpd-surf`.
//!
//! Surfaces and reports cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free` function. Every entry point
//! returns a [`CpdStatus`]; on failure the message is available from
//! [`cpd_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cpd_surf::gallery::{gallery, GalleryName};
use cpd_surf::geometry::{FixedDirection, LocalGeometry, ParamSurface};
use cpd_surf::io::SurfaceSpecFile;
use cpd_surf::verify::{verify_surface, GridSpec, Tolerances, VerificationReport};
use cpd_surf::Error;

/// Result code of every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Expression syntax error or unknown identifier.
    Parse = 3,
    /// Malformed JSON, unknown gallery name or otherwise invalid argument.
    InvalidInput = 4,
    /// Function evaluated outside its domain, or point outside the chart.
    Domain = 5,
    /// Quadrature, ODE or linear-algebra failure.
    Numerical = 6,
    /// The immersion is singular at the requested point.
    Degenerate = 7,
    Io = 8,
    /// A Rust panic was caught at the boundary.
    Panic = 9,
}

/// Opaque parametrized surface.
pub struct CpdSurface(ParamSurface);

/// Opaque verification report.
pub struct CpdReport(VerificationReport);

/// Curvature data at one chart point.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CpdCurvatures {
    pub gaussian: f64,
    pub mean: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    /// Angle between the normal and the fixed direction e3.
    pub theta: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CpdStatus {
    match e {
        Error::Parse(_) | Error::UnknownIdentifier { .. } | Error::UnexpectedVariable(_) => {
            CpdStatus::Parse
        }
        Error::Domain { .. } | Error::OutsideDomain { .. } | Error::AngleOutOfRange { .. } => {
            CpdStatus::Domain
        }
        Error::QuadratureNonConvergence { .. }
        | Error::OdeAbort { .. }
        | Error::NotPositiveDefinite
        | Error::NotSelfAdjoint { .. }
        | Error::Inconsistent(_) => CpdStatus::Numerical,
        Error::DegenerateImmersion { .. } => CpdStatus::Degenerate,
        Error::Io(_) => CpdStatus::Io,
        Error::InvalidInterval { .. } | Error::Invalid(_) | Error::Json(_) => {
            CpdStatus::InvalidInput
        }
    }
}

struct Failure(CpdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CpdStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `f`, converting errors and panics into a status and the thread's last
/// error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CpdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CpdStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            CpdStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(CpdStatus::InvalidUtf8, format!("`{what}`: {e}")))
}

unsafe fn surface<'a>(s: *const CpdSurface) -> Result<&'a ParamSurface, Failure> {
    s.as_ref().map(|s| &s.0).ok_or_else(|| null("surface"))
}

unsafe fn store<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message of the last failed call on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cpd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a surface from a JSON surface spec.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cpd_surface_from_json(
    json: *const c_char,
    out: *mut *mut CpdSurface,
) -> CpdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let src = read_str(json, "json")?;
        let s = SurfaceSpecFile::from_json(src)?.build()?;
        store(out, CpdSurface(s));
        Ok(())
    })
}

/// Builds a gallery surface on its default domain.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cpd_surface_gallery(
    name: *const c_char,
    out: *mut *mut CpdSurface,
) -> CpdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name: GalleryName = read_str(name, "name")?.parse()?;
        store(out, CpdSurface(gallery(name, None)?));
        Ok(())
    })
}

/// Releases a surface. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cpd_surface_free(s: *mut CpdSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Writes the surface point at chart coordinates `(x, y)` to `out[0..3]`.
///
/// # Safety
/// `s` must be a live surface; `out` must point to three writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cpd_surface_eval(
    s: *const CpdSurface,
    x: f64,
    y: f64,
    out: *mut f64,
) -> CpdStatus {
    guard(|| {
        let s = surface(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = s.point(x, y)?;
        ptr::copy_nonoverlapping(p.as_ptr(), out, 3);
        Ok(())
    })
}

/// Curvatures and normal angle at chart coordinates `(x, y)`.
///
/// # Safety
/// `s` must be a live surface; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cpd_surface_curvatures(
    s: *const CpdSurface,
    x: f64,
    y: f64,
    out: *mut CpdCurvatures,
) -> CpdStatus {
    guard(|| {
        let s = surface(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let l = LocalGeometry::at(s, x, y)?;
        let c = l.curvatures()?;
        *out = CpdCurvatures {
            gaussian: c.gaussian,
            mean: c.mean,
            kappa1: c.kappa1,
            kappa2: c.kappa2,
            theta: l.angle(&FixedDirection::default()).theta,
        };
        Ok(())
    })
}

/// Runs every applicable identity check on an `nx × ny` grid with default
/// tolerances.
///
/// The status reports whether verification ran; use [`cpd_report_passed`] for
/// the outcome.
///
/// # Safety
/// `s` must be a live surface; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cpd_surface_verify(
    s: *const CpdSurface,
    nx: usize,
    ny: usize,
    out: *mut *mut CpdReport,
) -> CpdStatus {
    guard(|| {
        let s = surface(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let grid = GridSpec::new(nx, ny, 0.0)?;
        let r = verify_surface(s, &FixedDirection::default(), &grid, &Tolerances::default());
        store(out, CpdReport(r));
        Ok(())
    })
}

/// 1 if every check passed, 0 if any failed, -1 for a null report.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn cpd_report_passed(r: *const CpdReport) -> c_int {
    match r.as_ref() {
        Some(r) => c_int::from(r.0.passed),
        None => -1,
    }
}

/// Serializes a report to JSON. Release the string with [`cpd_string_free`].
///
/// # Safety
/// `r` must be a live report; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cpd_report_to_json(
    r: *const CpdReport,
    out: *mut *mut c_char,
) -> CpdStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let json = serde_json::to_string_pretty(&r.0).map_err(Error::from)?;
        *out = CString::new(json)
            .map_err(|e| Failure(CpdStatus::InvalidInput, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `r` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cpd_report_free(r: *mut CpdReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cpd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
