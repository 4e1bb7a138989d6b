//! C ABI over `monord`.
//!
//! Levels and reports cross the boundary as opaque heap handles created by
//! `monord_*_new`/`monord_classify` and released with the matching `_free`.
//! Every fallible call returns a [`MonordStatus`]; on failure a description
//! is available from [`monord_last_error`] on the same thread.
//!
//! Indices are 0-based; level entries are row-major `int64_t`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use monord::classify::{classify_with, is_bass_with, BassReason, ClassificationReport};
use monord::duality::{dual_level, gorenstein_by_duality, is_gorenstein};
use monord::format::parse_level;
use monord::level::{canonical_form_with, normalize_positive, OrderViolation};
use monord::oracle::{bass_oracle_with_budget, overorders_with_budget};
use monord::{truncate, Error, LevelMatrix};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonordStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    NotAnOrder = 4,
    NotNormalized = 5,
    NotALattice = 6,
    NegativeEntry = 7,
    SearchTooLarge = 8,
    BudgetExceeded = 9,
    Panic = 10,
}

/// Opaque level matrix.
pub struct MonordLevel(LevelMatrix);

/// Opaque classification report.
pub struct MonordReport(ClassificationReport);

/// First failure of the order condition. `kind` is 0 when the level is an
/// order, 1 for a nonzero diagonal entry `(i, i)` and 2 for a triangle
/// `m[i][k] > m[i][j] + m[j][k]`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MonordViolation {
    pub kind: u32,
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

/// Flattened verdicts of a report. Fields other than `is_order` are
/// meaningful only when `is_order` is set; `period` is 0 and `a` is 0 when
/// the order is not Eichler (and `a` is 0 for period one).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MonordVerdicts {
    pub is_order: bool,
    pub is_gorenstein: bool,
    pub is_hereditary: bool,
    pub is_bass: bool,
    pub is_upper_triangular: bool,
    pub period: usize,
    pub a: i64,
    /// 0 hereditary, 1 Eichler of period two, 2 not Bass.
    pub bass_reason: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn status_of(err: &Error) -> MonordStatus {
    match err {
        Error::Empty
        | Error::Ragged { .. }
        | Error::Dimension { .. }
        | Error::InvalidPermutation(_)
        | Error::UnknownFamily(_) => MonordStatus::InvalidArgument,
        Error::NotAnOrder(_) => MonordStatus::NotAnOrder,
        Error::NotNormalized => MonordStatus::NotNormalized,
        Error::NotUpperTriangular { .. } => MonordStatus::InvalidArgument,
        Error::NegativeEntry { .. } => MonordStatus::NegativeEntry,
        Error::NotALattice { .. } => MonordStatus::NotALattice,
        Error::SearchTooLarge { .. } => MonordStatus::SearchTooLarge,
        Error::BudgetExceeded { .. } => MonordStatus::BudgetExceeded,
        Error::Parse { .. } => MonordStatus::Parse,
    }
}

/// Runs `body`, mapping library errors and panics to status codes.
fn guard(body: impl FnOnce() -> Result<(), MonordStatus>) -> MonordStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MonordStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            MonordStatus::Panic
        }
    }
}

fn lib<T>(r: monord::Result<T>) -> Result<T, MonordStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn level_ref<'a>(level: *const MonordLevel) -> Result<&'a LevelMatrix, MonordStatus> {
    if level.is_null() {
        set_error("null level handle");
        return Err(MonordStatus::NullPointer);
    }
    Ok(&(*level).0)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), MonordStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(MonordStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

fn boxed(level: LevelMatrix) -> *mut MonordLevel {
    Box::into_raw(Box::new(MonordLevel(level)))
}

/// Message for the last failed call on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn monord_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn monord_status_str(status: MonordStatus) -> *const c_char {
    let s: &'static CStr = match status {
        MonordStatus::Ok => c"ok",
        MonordStatus::NullPointer => c"null pointer",
        MonordStatus::InvalidArgument => c"invalid argument",
        MonordStatus::Parse => c"parse error",
        MonordStatus::NotAnOrder => c"level is not an order",
        MonordStatus::NotNormalized => c"level is not normalized",
        MonordStatus::NotALattice => c"type is not a lattice",
        MonordStatus::NegativeEntry => c"level has a negative entry",
        MonordStatus::SearchTooLarge => c"permutation search too large",
        MonordStatus::BudgetExceeded => c"enumeration budget exceeded",
        MonordStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Builds a level from `n * n` row-major entries.
///
/// # Safety
/// `entries` must point to `len` readable `int64_t`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_level_new(
    n: usize,
    entries: *const i64,
    len: usize,
    out: *mut *mut MonordLevel,
) -> MonordStatus {
    guard(|| {
        if entries.is_null() {
            set_error("null entries");
            return Err(MonordStatus::NullPointer);
        }
        if n.checked_mul(n) != Some(len) {
            set_error(format!("expected {n}*{n} entries, got {len}"));
            return Err(MonordStatus::InvalidArgument);
        }
        let values = std::slice::from_raw_parts(entries, len).to_vec();
        let level = lib(LevelMatrix::new(n, values))?;
        write_out(out, boxed(level))
    })
}

/// Parses a level file (text or JSON form).
///
/// # Safety
/// `text` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_level_parse(
    text: *const c_char,
    out: *mut *mut MonordLevel,
) -> MonordStatus {
    guard(|| {
        if text.is_null() {
            set_error("null text");
            return Err(MonordStatus::NullPointer);
        }
        let s = CStr::from_ptr(text).to_str().map_err(|e| {
            set_error(e.to_string());
            MonordStatus::Parse
        })?;
        let level = lib(parse_level(s))?;
        write_out(out, boxed(level))
    })
}

/// # Safety
/// `level` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn monord_level_free(level: *mut MonordLevel) {
    if !level.is_null() {
        drop(Box::from_raw(level));
    }
}

/// Matrix size, or 0 for a null handle.
///
/// # Safety
/// `level` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn monord_level_n(level: *const MonordLevel) -> usize {
    if level.is_null() {
        0
    } else {
        (*level).0.n()
    }
}

/// Copies the `n * n` row-major entries into `buf`.
///
/// # Safety
/// `level` must be a live handle and `buf` must hold `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn monord_level_entries(
    level: *const MonordLevel,
    buf: *mut i64,
    len: usize,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        if buf.is_null() {
            set_error("null buffer");
            return Err(MonordStatus::NullPointer);
        }
        if len < m.entries().len() {
            set_error(format!("buffer holds {len}, need {}", m.entries().len()));
            return Err(MonordStatus::InvalidArgument);
        }
        ptr::copy_nonoverlapping(m.entries().as_ptr(), buf, m.entries().len());
        Ok(())
    })
}

/// Order condition; `violation` may be null.
///
/// # Safety
/// `level` must be a live handle; `is_order` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_is_order(
    level: *const MonordLevel,
    is_order: *mut bool,
    violation: *mut MonordViolation,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        let v = m.order_violation();
        write_out(is_order, v.is_none())?;
        if !violation.is_null() {
            let flat = match v {
                None => MonordViolation::default(),
                Some(OrderViolation::Diagonal { i }) => MonordViolation {
                    kind: 1,
                    i,
                    j: i,
                    k: i,
                },
                Some(OrderViolation::Triangle { i, j, k }) => MonordViolation { kind: 2, i, j, k },
            };
            violation.write(flat);
        }
        Ok(())
    })
}

/// # Safety
/// `level` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_is_gorenstein(
    level: *const MonordLevel,
    out: *mut bool,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        write_out(out, lib(is_gorenstein(m))?)
    })
}

/// Gorenstein verdict via projectivity of the dual's columns.
///
/// # Safety
/// `level` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_is_gorenstein_by_duality(
    level: *const MonordLevel,
    out: *mut bool,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        write_out(out, lib(gorenstein_by_duality(m))?)
    })
}

/// # Safety
/// `level` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_is_bass(
    level: *const MonordLevel,
    search_cap: usize,
    out: *mut bool,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        write_out(out, lib(is_bass_with(m, search_cap))?.is_bass)
    })
}

/// Bass by overorder enumeration. `witness` may be null; when non-null it
/// receives a non-Gorenstein overorder handle, or null if the order is Bass.
///
/// # Safety
/// `level` must be a live handle; `is_bass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_bass_oracle(
    level: *const MonordLevel,
    budget: u64,
    is_bass: *mut bool,
    witness: *mut *mut MonordLevel,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        let verdict = lib(bass_oracle_with_budget(m, budget))?;
        write_out(is_bass, verdict.is_bass)?;
        if !witness.is_null() {
            witness.write(verdict.witness.map_or(ptr::null_mut(), boxed));
        }
        Ok(())
    })
}

/// # Safety
/// `level` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_overorder_count(
    level: *const MonordLevel,
    budget: u64,
    count: *mut usize,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        write_out(count, lib(overorders_with_budget(m, budget))?.members.len())
    })
}

/// Zero-first-row conjugate.
///
/// # Safety
/// `level` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_normalize_positive(
    level: *const MonordLevel,
    out: *mut *mut MonordLevel,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        write_out(out, boxed(lib(normalize_positive(m))?.level))
    })
}

/// # Safety
/// `level` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_canonical_form(
    level: *const MonordLevel,
    search_cap: usize,
    out: *mut *mut MonordLevel,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        write_out(out, boxed(lib(canonical_form_with(m, search_cap))?.level))
    })
}

/// Raw dual (`-m^t`) and its column-normalized form. Either output may be null.
///
/// # Safety
/// `level` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn monord_dual_level(
    level: *const MonordLevel,
    raw: *mut *mut MonordLevel,
    normalized: *mut *mut MonordLevel,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        let d = lib(dual_level(m))?;
        if !raw.is_null() {
            raw.write(boxed(d.raw));
        }
        if !normalized.is_null() {
            normalized.write(boxed(d.normalized));
        }
        Ok(())
    })
}

/// # Safety
/// `level` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_truncate(
    level: *const MonordLevel,
    out: *mut *mut MonordLevel,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        write_out(out, boxed(lib(truncate(m))?))
    })
}

/// Full classification. Non-orders still produce a report.
///
/// # Safety
/// `level` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_classify(
    level: *const MonordLevel,
    search_cap: usize,
    out: *mut *mut MonordReport,
) -> MonordStatus {
    guard(|| {
        let m = level_ref(level)?;
        let report = lib(classify_with(m, search_cap))?;
        write_out(out, Box::into_raw(Box::new(MonordReport(report))))
    })
}

/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn monord_report_free(report: *mut MonordReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live report handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn monord_report_verdicts(
    report: *const MonordReport,
    out: *mut MonordVerdicts,
) -> MonordStatus {
    guard(|| {
        if report.is_null() {
            set_error("null report handle");
            return Err(MonordStatus::NullPointer);
        }
        let r = &(*report).0;
        let verdicts = MonordVerdicts {
            is_order: r.is_order,
            is_gorenstein: r.is_gorenstein == Some(true),
            is_hereditary: r.is_hereditary == Some(true),
            is_bass: r.is_bass == Some(true),
            is_upper_triangular: r.is_upper_triangular,
            period: r.eichler.as_ref().map_or(0, |s| s.period()),
            a: r.eichler.as_ref().and_then(|s| s.a()).unwrap_or(0),
            bass_reason: match r.bass_reason {
                Some(BassReason::Hereditary) => 0,
                Some(BassReason::EichlerPeriodTwo) => 1,
                _ => 2,
            },
        };
        write_out(out, verdicts)
    })
}

/// The report as JSON; release with [`monord_string_free`]. Null on error.
///
/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn monord_report_json(report: *const MonordReport) -> *mut c_char {
    if report.is_null() {
        set_error("null report handle");
        return ptr::null_mut();
    }
    match serde_json::to_string(&(*report).0) {
        Ok(s) => CString::new(s).map_or(ptr::null_mut(), CString::into_raw),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn monord_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
