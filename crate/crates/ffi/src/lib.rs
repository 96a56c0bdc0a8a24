//! C interface to the eisenstark pipeline.
//!
//! Every function returns an [`EsStatus`]; values come back through out
//! pointers. Rows and tables are opaque handles released with their `_free`
//! function. After a non-OK status, `es_last_error` describes the failure on
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use eisenstark::cli::{self, Cell, Format, Marker, RowRequest, RowResult, RowStatus};
use eisenstark::{heckeops, merel, stark, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsStatus {
    Ok = 0,
    NullPointer = 1,
    /// The request failed an admissibility gate or an argument was malformed.
    Validation = 2,
    /// The pipeline detected an internal inconsistency.
    Internal = 3,
    /// The value is infinite (the Merel class vanishes).
    Infinity = 4,
    /// The value is undefined for this row.
    Undefined = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsFormat {
    Csv = 0,
    Json = 1,
    Markdown = 2,
}

/// Opaque row handle.
pub struct EsRow {
    inner: RowResult,
}

/// Opaque table handle.
pub struct EsTable {
    rows: Vec<EsRow>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> EsStatus {
    set_error(e.to_string());
    if e.is_internal() {
        EsStatus::Internal
    } else {
        EsStatus::Validation
    }
}

fn guard(f: impl FnOnce() -> EsStatus) -> EsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside eisenstark");
            EsStatus::Panic
        }
    }
}

fn write_cell(cell: Cell, out: *mut u64) -> EsStatus {
    if out.is_null() {
        return EsStatus::NullPointer;
    }
    match cell {
        Cell::Value(v) => {
            unsafe { *out = v };
            EsStatus::Ok
        }
        Cell::Marker(Marker::Infinity) => EsStatus::Infinity,
        Cell::Marker(Marker::Undefined) => EsStatus::Undefined,
    }
}

fn write_u64(r: eisenstark::Result<u64>, out: *mut u64) -> EsStatus {
    if out.is_null() {
        return EsStatus::NullPointer;
    }
    match r {
        Ok(v) => {
            unsafe { *out = v };
            EsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Message for the last non-OK status on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn es_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn es_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Sets the on-disk cache directory; NULL disables it.
///
/// # Safety
/// `dir` is NULL or a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn es_set_cache_dir(dir: *const c_char) -> EsStatus {
    guard(|| {
        if dir.is_null() {
            eisenstark::modsym::cache::set_cache_dir(None);
            return EsStatus::Ok;
        }
        match unsafe { CStr::from_ptr(dir) }.to_str() {
            Ok(s) => {
                eisenstark::modsym::cache::set_cache_dir(Some(PathBuf::from(s)));
                EsStatus::Ok
            }
            Err(_) => EsStatus::InvalidUtf8,
        }
    })
}

/// Exponent of the Merel unit in F_p.
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_merel_log(q: u64, p: u64, out: *mut u64) -> EsStatus {
    guard(|| write_u64(merel::merel_class(q, p).map(|c| c.exponent), out))
}

/// Exponent of the reduced Stark unit in F_p.
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_stark_log(disc: i64, q: u64, p: u64, out: *mut u64) -> EsStatus {
    guard(|| {
        let r = stark::cubic_poly(disc).and_then(|f| stark::stark_class(&f, q, p)).map(|c| c.exponent);
        write_u64(r, out)
    })
}

/// eta in F_p. The caller is responsible for the admissibility of the row.
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_eta(disc: i64, p: u64, q: u64, out: *mut u64) -> EsStatus {
    guard(|| write_u64(heckeops::eta_invariant(disc, p, q), out))
}

/// Computes a validated row. On success `*out` owns a new handle.
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_row_compute(disc: i64, p: u64, q: u64, out: *mut *mut EsRow) -> EsStatus {
    guard(|| {
        if out.is_null() {
            return EsStatus::NullPointer;
        }
        match cli::compute_row(&RowRequest { disc, p, q }) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(EsRow { inner })) };
                EsStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `row` is NULL or a handle from `es_row_compute` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn es_row_free(row: *mut EsRow) {
    if !row.is_null() {
        drop(unsafe { Box::from_raw(row) });
    }
}

fn with_row(row: *const EsRow, out: *mut u64, f: impl FnOnce(&RowResult) -> Cell) -> EsStatus {
    if row.is_null() {
        return EsStatus::NullPointer;
    }
    let r = unsafe { &(*row).inner };
    if r.status == RowStatus::Failed || r.status == RowStatus::Invalid {
        set_error(r.error.clone().unwrap_or_default());
        return if r.status == RowStatus::Failed { EsStatus::Internal } else { EsStatus::Validation };
    }
    write_cell(f(r), out)
}

/// Exponent of the Merel unit.
///
/// # Safety
/// `row` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_row_merel_log(row: *const EsRow, out: *mut u64) -> EsStatus {
    guard(|| with_row(row, out, |r| r.merel_log))
}

/// Exponent of the reduced Stark unit.
///
/// # Safety
/// `row` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_row_stark_log(row: *const EsRow, out: *mut u64) -> EsStatus {
    guard(|| with_row(row, out, |r| r.stark_log))
}

/// stark_log / merel_log; `Infinity` when the Merel class vanishes.
///
/// # Safety
/// `row` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_row_log_ratio(row: *const EsRow, out: *mut u64) -> EsStatus {
    guard(|| with_row(row, out, |r| r.log_ratio))
}

/// eta; `Undefined` when the Mazur gate fails.
///
/// # Safety
/// `row` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_row_eta(row: *const EsRow, out: *mut u64) -> EsStatus {
    guard(|| with_row(row, out, |r| r.eta))
}

/// log_ratio / eta.
///
/// # Safety
/// `row` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_row_ratio(row: *const EsRow, out: *mut u64) -> EsStatus {
    guard(|| with_row(row, out, |r| r.ratio))
}

/// eta / log_ratio.
///
/// # Safety
/// `row` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_row_ratio_inv(row: *const EsRow, out: *mut u64) -> EsStatus {
    guard(|| with_row(row, out, |r| r.ratio_inv))
}

/// `p` and `q` of a row.
///
/// # Safety
/// `row` is a live handle; `p` and `q` are valid pointers.
#[no_mangle]
pub unsafe extern "C" fn es_row_primes(row: *const EsRow, p: *mut u64, q: *mut u64) -> EsStatus {
    if row.is_null() || p.is_null() || q.is_null() {
        return EsStatus::NullPointer;
    }
    let r = unsafe { &(*row).inner };
    unsafe {
        *p = r.p;
        *q = r.q;
    }
    EsStatus::Ok
}

/// Computes every admissible row up to the bounds. Failed rows stay in the
/// table and report `Internal` from their getters.
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_table_compute(
    disc: i64,
    pmax: u64,
    qmax: u64,
    jobs: usize,
    out: *mut *mut EsTable,
) -> EsStatus {
    guard(|| {
        if out.is_null() {
            return EsStatus::NullPointer;
        }
        match cli::batch(disc, pmax, qmax, jobs) {
            Ok(rows) => {
                let rows = rows.into_iter().map(|inner| EsRow { inner }).collect();
                unsafe { *out = Box::into_raw(Box::new(EsTable { rows })) };
                EsStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `table` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn es_table_len(table: *const EsTable) -> usize {
    if table.is_null() {
        return 0;
    }
    unsafe { (*table).rows.len() }
}

/// Borrowed row `i`, valid while the table lives; NULL if out of range.
///
/// # Safety
/// `table` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn es_table_row(table: *const EsTable, i: usize) -> *const EsRow {
    if table.is_null() {
        return ptr::null();
    }
    let rows = unsafe { &(*table).rows };
    rows.get(i).map_or(ptr::null(), |r| r as *const EsRow)
}

/// Renders the table. `*out` receives a string released with `es_string_free`.
///
/// # Safety
/// `table` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_table_render(table: *const EsTable, format: EsFormat, out: *mut *mut c_char) -> EsStatus {
    guard(|| {
        if table.is_null() || out.is_null() {
            return EsStatus::NullPointer;
        }
        let rows: Vec<RowResult> = unsafe { &(*table).rows }.iter().map(|r| r.inner.clone()).collect();
        let format = match format {
            EsFormat::Csv => Format::Csv,
            EsFormat::Json => Format::Json,
            EsFormat::Markdown => Format::Md,
        };
        let text = CString::new(cli::render(&rows, format)).expect("rendered text has no NUL");
        unsafe { *out = text.into_raw() };
        EsStatus::Ok
    })
}

/// # Safety
/// `table` is NULL or a handle from `es_table_compute` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn es_table_free(table: *mut EsTable) {
    if !table.is_null() {
        drop(unsafe { Box::from_raw(table) });
    }
}

/// # Safety
/// `s` is NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn es_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        let p = es_last_error();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    #[test]
    fn row_round_trip() {
        let mut row = ptr::null_mut();
        assert_eq!(unsafe { es_row_compute(-23, 5, 11, &mut row) }, EsStatus::Ok);
        let mut v = 0u64;
        assert_eq!(unsafe { es_row_eta(row, &mut v) }, EsStatus::Ok);
        assert_eq!(v, 4);
        assert_eq!(unsafe { es_row_log_ratio(row, &mut v) }, EsStatus::Ok);
        assert_eq!(v, 3);
        assert_eq!(unsafe { es_row_ratio(row, &mut v) }, EsStatus::Ok);
        assert_eq!(v, 2);
        let (mut p, mut q) = (0, 0);
        assert_eq!(unsafe { es_row_primes(row, &mut p, &mut q) }, EsStatus::Ok);
        assert_eq!((p, q), (5, 11));
        unsafe { es_row_free(row) };
    }

    #[test]
    fn infinite_row_reports_markers() {
        let mut row = ptr::null_mut();
        assert_eq!(unsafe { es_row_compute(-23, 17, 103, &mut row) }, EsStatus::Ok);
        let mut v = 0u64;
        assert_eq!(unsafe { es_row_log_ratio(row, &mut v) }, EsStatus::Infinity);
        assert_eq!(unsafe { es_row_eta(row, &mut v) }, EsStatus::Undefined);
        assert_eq!(unsafe { es_row_merel_log(row, &mut v) }, EsStatus::Ok);
        assert_eq!(v, 0);
        unsafe { es_row_free(row) };
    }

    #[test]
    fn errors_and_null_pointers() {
        let mut row = ptr::null_mut();
        assert_eq!(unsafe { es_row_compute(-23, 5, 12, &mut row) }, EsStatus::Validation);
        assert!(row.is_null());
        assert!(last_error().contains("q_prime"));
        assert_eq!(unsafe { es_row_compute(-23, 5, 11, ptr::null_mut()) }, EsStatus::NullPointer);
        let mut v = 0;
        assert_eq!(unsafe { es_row_eta(ptr::null(), &mut v) }, EsStatus::NullPointer);
        assert_eq!(unsafe { es_stark_log(-19, 11, 5, &mut v) }, EsStatus::Validation);
        assert!(last_error().contains("-19"));
        unsafe { es_row_free(ptr::null_mut()) };
        unsafe { es_table_free(ptr::null_mut()) };
        unsafe { es_string_free(ptr::null_mut()) };
    }

    #[test]
    fn scalar_entry_points() {
        let mut v = 0;
        assert_eq!(unsafe { es_merel_log(11, 5, &mut v) }, EsStatus::Ok);
        assert_eq!(v, 3);
        assert_eq!(unsafe { es_stark_log(-23, 11, 5, &mut v) }, EsStatus::Ok);
        assert_eq!(v, 4);
        assert_eq!(unsafe { es_eta(-31, 11, 23, &mut v) }, EsStatus::Ok);
        assert_eq!(v, 7);
        let version = unsafe { CStr::from_ptr(es_version()) }.to_str().unwrap();
        assert_eq!(version, env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn small_table() {
        let mut table = ptr::null_mut();
        assert_eq!(unsafe { es_table_compute(-23, 7, 50, 1, &mut table) }, EsStatus::Ok);
        assert_eq!(unsafe { es_table_len(table) }, 2);
        assert!(unsafe { es_table_row(table, 2) }.is_null());
        let row = unsafe { es_table_row(table, 1) };
        let mut v = 0;
        assert_eq!(unsafe { es_row_eta(row, &mut v) }, EsStatus::Ok);
        assert_eq!(v, 1);
        let mut text = ptr::null_mut();
        assert_eq!(unsafe { es_table_render(table, EsFormat::Csv, &mut text) }, EsStatus::Ok);
        let csv = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_owned();
        assert!(csv.starts_with("disc,p,q,"));
        assert_eq!(csv.lines().count(), 3);
        unsafe { es_string_free(text) };
        unsafe { es_table_free(table) };
    }
}
