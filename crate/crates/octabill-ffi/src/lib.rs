//! C ABI for octabill.
//!
//! Values cross the boundary as opaque handles. Every fallible call returns an
//! [`ObStatus`] and writes results through out-pointers; `ob_last_error`
//! holds a message for the most recent failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use octabill::octagon::{OctagonDynamics, Periodicity};
use octabill::subst::{SubstitutionTable, SYMBOLS};
use octabill::{verify, Error, Point2, QuadVal};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    DivisionByZero = 3,
    UndefinedOnLine = 4,
    InsideTable = 5,
    OnCellBoundary = 6,
    OutsideDomain = 7,
    CapExceeded = 8,
    Invalid = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// An element a + b√2 of Q(√2).
pub struct ObQuad(QuadVal);

/// The compressed octagon system with its atlas and renormalization.
pub struct ObDynamics(OctagonDynamics);

thread_local! {
    static LAST: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST.with(|l| *l.borrow_mut() = c);
}

fn status_of(e: &Error) -> ObStatus {
    match e {
        Error::DivisionByZero => ObStatus::DivisionByZero,
        Error::Parse(_) => ObStatus::Parse,
        Error::UndefinedOnLine => ObStatus::UndefinedOnLine,
        Error::InsideTable => ObStatus::InsideTable,
        Error::OnCellBoundary => ObStatus::OnCellBoundary,
        Error::OutsideDomain => ObStatus::OutsideDomain,
        Error::OrbitCapExceeded(_) | Error::DepthExceeded(_) => ObStatus::CapExceeded,
        _ => ObStatus::Invalid,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (ObStatus, String)>) -> ObStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ObStatus::Ok,
        Ok(Err((s, m))) => {
            set_last(&m);
            s
        }
        Err(_) => {
            set_last("panic inside octabill");
            ObStatus::Panic
        }
    }
}

fn lift<T>(r: octabill::Result<T>) -> Result<T, (ObStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (ObStatus, String) {
    (ObStatus::NullPointer, "null pointer argument".into())
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, (ObStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), (ObStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

/// Message for the last failure on this thread. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn ob_last_error() -> *const c_char {
    LAST.with(|l| l.borrow().as_ptr())
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ob_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses text such as `1/3+2*r2` or `-r2`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ob_quad_parse(text: *const c_char, out: *mut *mut ObQuad) -> ObStatus {
    guard(|| {
        if text.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| (ObStatus::Parse, "text is not UTF-8".to_string()))?;
        let q = lift(s.parse::<QuadVal>())?;
        put(out, ObQuad(q))
    })
}

/// a + b√2 from integers.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ob_quad_from_ints(a: i64, b: i64, out: *mut *mut ObQuad) -> ObStatus {
    guard(|| put(out, ObQuad(QuadVal::ints(a, b))))
}

/// # Safety
/// `q` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ob_quad_free(q: *mut ObQuad) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
    Div = 3,
}

/// `out = a op b`.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ob_quad_arith(op: ObOp, a: *const ObQuad, b: *const ObQuad, out: *mut *mut ObQuad) -> ObStatus {
    guard(|| {
        let (a, b) = (&deref(a)?.0, &deref(b)?.0);
        let v = match op {
            ObOp::Add => a + b,
            ObOp::Sub => a - b,
            ObOp::Mul => a * b,
            ObOp::Div => lift(a.checked_div(b))?,
        };
        put(out, ObQuad(v))
    })
}

/// Exact comparison: writes -1, 0 or 1.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ob_quad_cmp(a: *const ObQuad, b: *const ObQuad, out: *mut i32) -> ObStatus {
    guard(|| {
        let o = out.as_mut().ok_or_else(null)?;
        *o = deref(a)?.0.cmp(&deref(b)?.0) as i32;
        Ok(())
    })
}

/// # Safety
/// `q` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ob_quad_to_f64(q: *const ObQuad, out: *mut f64) -> ObStatus {
    guard(|| {
        let o = out.as_mut().ok_or_else(null)?;
        *o = deref(q)?.0.to_f64();
        Ok(())
    })
}

/// Text form, freed with [`ob_string_free`]. Null on a null handle.
///
/// # Safety
/// `q` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ob_quad_to_string(q: *const ObQuad) -> *mut c_char {
    match q.as_ref() {
        Some(q) => CString::new(q.0.to_string()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ob_dynamics_new(out: *mut *mut ObDynamics) -> ObStatus {
    guard(|| {
        let d = lift(OctagonDynamics::new())?;
        put(out, ObDynamics(d))
    })
}

/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ob_dynamics_free(d: *mut ObDynamics) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

unsafe fn point(x: *const ObQuad, y: *const ObQuad) -> Result<Point2, (ObStatus, String)> {
    Ok(Point2::new(deref(x)?.0.clone(), deref(y)?.0.clone()))
}

/// Centre of the big octagon renormalized `level` times, the seed of the period-3^level orbit.
///
/// # Safety
/// `d` must be a live handle; `out_x` and `out_y` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ob_dynamics_tile_center(d: *const ObDynamics, level: u32, out_x: *mut *mut ObQuad, out_y: *mut *mut ObQuad) -> ObStatus {
    guard(|| {
        let d = &deref(d)?.0;
        let p = (0..level).fold(d.atlas.cells[0].centroid(), |p, _| d.theta_inv.apply(&p));
        put(out_x, ObQuad(p.x))?;
        put(out_y, ObQuad(p.y))
    })
}

/// One step of the compressed map from (x, y): the image, its region and parity bit.
///
/// # Safety
/// Handles must be live; all out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ob_dynamics_step(
    d: *const ObDynamics,
    x: *const ObQuad,
    y: *const ObQuad,
    out_x: *mut *mut ObQuad,
    out_y: *mut *mut ObQuad,
    out_region: *mut u32,
    out_parity: *mut u8,
) -> ObStatus {
    guard(|| {
        let st = lift(deref(d)?.0.psi_step(&point(x, y)?))?;
        let (r, p) = (out_region.as_mut().ok_or_else(null)?, out_parity.as_mut().ok_or_else(null)?);
        *r = st.symbol as u32;
        *p = st.parity;
        put(out_x, ObQuad(st.point.x))?;
        put(out_y, ObQuad(st.point.y))
    })
}

/// Writes `len` symbols of the orbit code into `buf`.
///
/// # Safety
/// Handles must be live; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ob_dynamics_orbit_code(d: *const ObDynamics, x: *const ObQuad, y: *const ObQuad, len: usize, buf: *mut u32) -> ObStatus {
    guard(|| {
        if buf.is_null() && len > 0 {
            return Err(null());
        }
        let code = lift(deref(d)?.0.orbit_code(&point(x, y)?, len))?;
        for (i, c) in code.into_iter().enumerate() {
            *buf.add(i) = c as u32;
        }
        Ok(())
    })
}

/// Period of (x, y) from the renormalization descent, or 0 when `cap` levels do not decide it.
///
/// # Safety
/// Handles must be live; `out_period` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ob_dynamics_period(d: *const ObDynamics, x: *const ObQuad, y: *const ObQuad, cap: u32, out_period: *mut u64) -> ObStatus {
    guard(|| {
        let o = out_period.as_mut().ok_or_else(null)?;
        *o = match lift(deref(d)?.0.classify_periodic(&point(x, y)?, cap as usize))? {
            Periodicity::Periodic { period, .. } => period,
            Periodicity::Unresolved => 0,
        };
        Ok(())
    })
}

/// Expands `word` through `steps` substitution rounds into `buf`.
///
/// `out_len` always receives the full length; when it exceeds `cap` nothing
/// is written and `OB_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `word` must hold `word_len` values and `buf` must hold `cap`.
#[no_mangle]
pub unsafe extern "C" fn ob_substitution_expand(word: *const u32, word_len: usize, steps: u32, buf: *mut u32, cap: usize, out_len: *mut usize) -> ObStatus {
    guard(|| {
        let n = out_len.as_mut().ok_or_else(null)?;
        if word.is_null() && word_len > 0 {
            return Err(null());
        }
        let w: Vec<usize> = (0..word_len).map(|i| *word.add(i) as usize).collect();
        if let Some(bad) = w.iter().find(|&&s| s >= SYMBOLS) {
            return Err((ObStatus::Invalid, format!("symbol {bad} out of range")));
        }
        let need = word_len.checked_mul(3usize.checked_pow(steps).ok_or((ObStatus::Invalid, "too many steps".into()))?);
        let need = need.ok_or((ObStatus::Invalid, "expansion too long".to_string()))?;
        *n = need;
        if need > cap {
            return Err((ObStatus::BufferTooSmall, format!("need {need} slots, have {cap}")));
        }
        if buf.is_null() && need > 0 {
            return Err(null());
        }
        for (i, s) in SubstitutionTable::standard().expand(&w, steps as usize).into_iter().enumerate() {
            *buf.add(i) = s as u32;
        }
        Ok(())
    })
}

/// Runs verification check `id` (1..=17). `out_detail` may be null; otherwise it
/// receives a string to free with [`ob_string_free`].
///
/// # Safety
/// `out_pass` must be writable; `out_detail` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ob_verify(id: u32, out_pass: *mut bool, out_detail: *mut *mut c_char) -> ObStatus {
    guard(|| {
        let pass = out_pass.as_mut().ok_or_else(null)?;
        if !(1..=17).contains(&id) {
            return Err((ObStatus::Invalid, format!("no check {id}")));
        }
        let c = verify::run(id as u8);
        *pass = c.pass;
        if !out_detail.is_null() {
            *out_detail = CString::new(c.detail.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw);
        }
        Ok(())
    })
}
