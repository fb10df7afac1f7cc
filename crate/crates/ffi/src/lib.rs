//! C ABI for the pd3 toolkit.
//!
//! Conventions:
//! - Opaque handles (`Pd3Report`) are created and freed by this library.
//! - Strings returned by `pd3_*` functions are NUL-terminated, UTF-8 and
//!   owned by the caller; release them with [`pd3_string_free`].
//! - Fallible constructors return NULL and, when `error_out` is not
//!   NULL, store an error message the caller must free.

use pd3::dsl::{parse_gog, render_gog, resolve};
use pd3::engine::decide;
use pd3::gog::{enumerate_admissible, OrientationData};
use pd3::report::{build_report, CertificateReport};
use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

/// Verdict codes, matching the CLI exit codes.
#[repr(C)]
pub enum Pd3Verdict {
    Realizable = 0,
    Obstructed = 2,
    StructurallyInadmissible = 3,
    Unknown = 4,
    /// returned for a NULL or invalid handle
    InvalidHandle = -1,
}

/// Opaque decision result handle.
pub struct Pd3Report {
    report: CertificateReport,
}

fn to_cstring(s: String) -> *mut c_char {
    // interior NULs cannot appear in our JSON/text output, but never panic
    // across the FFI boundary
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn set_error(error_out: *mut *mut c_char, msg: String) {
    if !error_out.is_null() {
        *error_out = to_cstring(msg);
    }
}

/// Library version as a static string (do not free).
#[no_mangle]
pub extern "C" fn pd3_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parse a document and run the decision pipeline.
///
/// Returns an opaque report handle, or NULL on error (parse failure,
/// invalid embedding, inconsistent character). The handle must be freed
/// with [`pd3_report_free`].
///
/// # Safety
/// `text` must be a valid NUL-terminated string. `error_out`, when not
/// NULL, must point to writable storage for one `char *`.
#[no_mangle]
pub unsafe extern "C" fn pd3_check(text: *const c_char, error_out: *mut *mut c_char) -> *mut Pd3Report {
    if text.is_null() {
        set_error(error_out, "input text is NULL".into());
        return ptr::null_mut();
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error(error_out, "input text is not UTF-8".into());
        return ptr::null_mut();
    };
    let doc = match parse_gog(text) {
        Ok(d) => d,
        Err(e) => {
            set_error(error_out, e.to_string());
            return ptr::null_mut();
        }
    };
    let canonical = render_gog(&doc);
    let (graph, w) = match resolve(&doc) {
        Ok(x) => x,
        Err(e) => {
            set_error(error_out, e.to_string());
            return ptr::null_mut();
        }
    };
    match decide(&graph, &w) {
        Ok(verdict) => {
            let report = build_report(&canonical, &verdict);
            Box::into_raw(Box::new(Pd3Report { report }))
        }
        Err(e) => {
            set_error(error_out, e.to_string());
            ptr::null_mut()
        }
    }
}

/// Verdict code of a report.
///
/// # Safety
/// `report` must be NULL or a handle returned by [`pd3_check`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn pd3_report_verdict(report: *const Pd3Report) -> c_int {
    let Some(r) = report.as_ref() else { return Pd3Verdict::InvalidHandle as c_int };
    r.report.exit_code as c_int
}

/// Full JSON certificate of a report (caller frees via
/// [`pd3_string_free`]).
///
/// # Safety
/// `report` must be NULL or a live handle from [`pd3_check`].
#[no_mangle]
pub unsafe extern "C" fn pd3_report_json(report: *const Pd3Report) -> *mut c_char {
    let Some(r) = report.as_ref() else { return ptr::null_mut() };
    match serde_json::to_string_pretty(&r.report) {
        Ok(json) => to_cstring(json),
        Err(_) => ptr::null_mut(),
    }
}

/// Canonicalized input echo of a report (caller frees).
///
/// # Safety
/// `report` must be NULL or a live handle from [`pd3_check`].
#[no_mangle]
pub unsafe extern "C" fn pd3_report_input(report: *const Pd3Report) -> *mut c_char {
    let Some(r) = report.as_ref() else { return ptr::null_mut() };
    to_cstring(r.report.input.clone())
}

/// Release a report handle. NULL is accepted.
///
/// # Safety
/// `report` must be NULL or a handle from [`pd3_check`], freed at most
/// once.
#[no_mangle]
pub unsafe extern "C" fn pd3_report_free(report: *mut Pd3Report) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Enumerate admissible linear trees; returns newline-separated JSON
/// documents (caller frees), or NULL with an error message when the
/// bounds are out of range.
///
/// # Safety
/// `error_out`, when not NULL, must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn pd3_enumerate(
    max_vertices: u32,
    max_order: u32,
    error_out: *mut *mut c_char,
) -> *mut c_char {
    match enumerate_admissible(max_vertices as usize, max_order as usize) {
        Ok(graphs) => {
            let mut out = String::new();
            for g in &graphs {
                let w = OrientationData::trivial(g);
                if let Some(doc) = pd3::dsl::graph_to_document(g, &w) {
                    let tags: Vec<String> = g
                        .vertices
                        .iter()
                        .map(|v| v.group.catalog_tag.clone().map(|t| t.to_string()).unwrap_or_default())
                        .collect();
                    let record = serde_json::json!({
                        "vertices": tags,
                        "document": render_gog(&doc),
                    });
                    out.push_str(&record.to_string());
                    out.push('\n');
                }
            }
            to_cstring(out)
        }
        Err(e) => {
            set_error(error_out, e.to_string());
            ptr::null_mut()
        }
    }
}

/// Release a string returned by this library. NULL is accepted.
///
/// # Safety
/// `s` must be NULL or a string returned by a `pd3_*` function, freed at
/// most once.
#[no_mangle]
pub unsafe extern "C" fn pd3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
