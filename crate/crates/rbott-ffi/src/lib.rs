//! C ABI for the classification engine.
//!
//! Matrices travel as opaque handles; every call returns a status code and
//! writes results through out-pointers. Strings returned through
//! `char **` out-pointers are UTF-8, NUL-terminated, and owned by the
//! caller, who must release them with [`rbott_string_free`]. All functions
//! are panic-safe: a caught panic reports an internal-error status instead
//! of unwinding across the boundary.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rbott::classify::{self, ClassifyError};
use rbott::config::Config;
use rbott::decomp;
use rbott::iso;
use rbott::BottMatrix;

/// Outcome of a call. Mirrors the CLI exit-code contract.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RbottStatus {
    /// Success.
    Ok = 0,
    /// Well-formed negative answer (the matrices are not equivalent).
    NotEquivalent = 1,
    /// A resource limit stopped the computation.
    ResourceLimit = 2,
    /// The request is outside the configured bounds.
    ConfigBound = 3,
    /// The input text does not parse.
    ParseError = 4,
    /// A pointer argument was null or otherwise unusable.
    InvalidArgument = 5,
    /// An internal invariant failed.
    Internal = 6,
}

/// Opaque handle to a strictly upper-triangular (0,1) matrix.
pub struct RbottMatrix {
    inner: BottMatrix,
}

fn config() -> Config {
    Config::default()
}

fn classify_status(err: &ClassifyError) -> RbottStatus {
    match err {
        ClassifyError::MemoryBudget { .. } => RbottStatus::ResourceLimit,
        ClassifyError::CeilingExceeded { .. } => RbottStatus::ConfigBound,
        _ => RbottStatus::InvalidArgument,
    }
}

fn guarded<F: FnOnce() -> RbottStatus>(body: F) -> RbottStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => RbottStatus::Internal,
    }
}

/// Writes an owned C string through `out`; the caller frees it.
unsafe fn emit_string(out: *mut *mut c_char, text: String) -> RbottStatus {
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            RbottStatus::Ok
        }
        Err(_) => RbottStatus::Internal,
    }
}

/// Parses a matrix from BMAT text (`n` line plus n rows of 0/1 characters)
/// or the compact `b{n}:hex` form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbott_matrix_parse(
    text: *const c_char,
    out: *mut *mut RbottMatrix,
) -> RbottStatus {
    if text.is_null() || out.is_null() {
        return RbottStatus::InvalidArgument;
    }
    guarded(|| {
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return RbottStatus::ParseError;
        };
        match BottMatrix::from_text(text) {
            Ok(matrix) => {
                *out = Box::into_raw(Box::new(RbottMatrix { inner: matrix }));
                RbottStatus::Ok
            }
            Err(_) => {
                *out = ptr::null_mut();
                RbottStatus::ParseError
            }
        }
    })
}

/// Releases a handle returned by this library. Null is ignored.
///
/// # Safety
/// `matrix` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn rbott_matrix_free(matrix: *mut RbottMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `text` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn rbott_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Matrix size; 0 for a null handle.
///
/// # Safety
/// `matrix` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rbott_matrix_dim(matrix: *const RbottMatrix) -> u32 {
    if matrix.is_null() {
        return 0;
    }
    (*matrix).inner.n() as u32
}

/// Renders the BMAT text form.
///
/// # Safety
/// `matrix` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbott_matrix_render(
    matrix: *const RbottMatrix,
    out: *mut *mut c_char,
) -> RbottStatus {
    if matrix.is_null() || out.is_null() {
        return RbottStatus::InvalidArgument;
    }
    guarded(|| emit_string(out, (*matrix).inner.to_text()))
}

/// Renders the compact `b{n}:hex` form.
///
/// # Safety
/// `matrix` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbott_matrix_compact(
    matrix: *const RbottMatrix,
    out: *mut *mut c_char,
) -> RbottStatus {
    if matrix.is_null() || out.is_null() {
        return RbottStatus::InvalidArgument;
    }
    guarded(|| emit_string(out, (*matrix).inner.compact()))
}

/// Computes the canonical representative of the matrix's equivalence class.
///
/// # Safety
/// `matrix` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbott_canonical_form(
    matrix: *const RbottMatrix,
    out: *mut *mut RbottMatrix,
) -> RbottStatus {
    if matrix.is_null() || out.is_null() {
        return RbottStatus::InvalidArgument;
    }
    guarded(|| match classify::orbit(&(*matrix).inner, &config()) {
        Ok(orbit) => {
            *out = Box::into_raw(Box::new(RbottMatrix {
                inner: orbit.canonical(),
            }));
            RbottStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            classify_status(&e)
        }
    })
}

/// Decides equivalence; writes 1 or 0 through `out_equivalent`.
///
/// # Safety
/// `a` and `b` must be live handles; `out_equivalent` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbott_equivalent(
    a: *const RbottMatrix,
    b: *const RbottMatrix,
    out_equivalent: *mut i32,
) -> RbottStatus {
    if a.is_null() || b.is_null() || out_equivalent.is_null() {
        return RbottStatus::InvalidArgument;
    }
    guarded(
        || match classify::are_equivalent(&(*a).inner, &(*b).inner, &config()) {
            Ok(witness) => {
                *out_equivalent = i32::from(witness.is_some());
                RbottStatus::Ok
            }
            Err(e) => classify_status(&e),
        },
    )
}

/// Decides equivalence and, when equivalent, writes the move sequence as a
/// `"; "`-joined string ("(identity)" for equal inputs). Returns the
/// not-equivalent status (no string) otherwise.
///
/// # Safety
/// `a` and `b` must be live handles; `out_witness` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbott_equivalence_witness(
    a: *const RbottMatrix,
    b: *const RbottMatrix,
    out_witness: *mut *mut c_char,
) -> RbottStatus {
    if a.is_null() || b.is_null() || out_witness.is_null() {
        return RbottStatus::InvalidArgument;
    }
    guarded(
        || match classify::are_equivalent(&(*a).inner, &(*b).inner, &config()) {
            Ok(Some(witness)) => {
                let text = if witness.is_empty() {
                    "(identity)".to_string()
                } else {
                    witness
                        .iter()
                        .map(|op| op.to_string())
                        .collect::<Vec<_>>()
                        .join("; ")
                };
                emit_string(out_witness, text)
            }
            Ok(None) => {
                *out_witness = ptr::null_mut();
                RbottStatus::NotEquivalent
            }
            Err(e) => classify_status(&e),
        },
    )
}

/// Number of equivalence classes of the whole size-n family.
///
/// # Safety
/// `out_count` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbott_class_count(n: u32, out_count: *mut u64) -> RbottStatus {
    if out_count.is_null() {
        return RbottStatus::InvalidArgument;
    }
    guarded(|| match classify::classify_all(n as usize, &config()) {
        Ok(table) => {
            *out_count = table.class_count() as u64;
            RbottStatus::Ok
        }
        Err(e) => classify_status(&e),
    })
}

/// Factors the matrix: writes the circle-factor count and the factors as a
/// comma-joined list of compact forms (empty string when there are none).
///
/// # Safety
/// `matrix` must be a live handle; both out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn rbott_decompose(
    matrix: *const RbottMatrix,
    out_exterior_rank: *mut u32,
    out_factors: *mut *mut c_char,
) -> RbottStatus {
    if matrix.is_null() || out_exterior_rank.is_null() || out_factors.is_null() {
        return RbottStatus::InvalidArgument;
    }
    guarded(|| match decomp::decompose(&(*matrix).inner, &config()) {
        Ok(result) => {
            *out_exterior_rank = result.exterior_rank as u32;
            let text = result
                .factors
                .iter()
                .map(BottMatrix::compact)
                .collect::<Vec<_>>()
                .join(",");
            emit_string(out_factors, text)
        }
        Err(e) => classify_status(&e),
    })
}

/// Writes the invariant fingerprint of the matrix's cohomology ring as a
/// human-readable string.
///
/// # Safety
/// `matrix` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbott_fingerprint(
    matrix: *const RbottMatrix,
    out: *mut *mut c_char,
) -> RbottStatus {
    if matrix.is_null() || out.is_null() {
        return RbottStatus::InvalidArgument;
    }
    guarded(|| emit_string(out, iso::fingerprint(&(*matrix).inner).to_string()))
}

/// Static name of a status code; never freed by the caller.
#[no_mangle]
pub extern "C" fn rbott_status_name(status: RbottStatus) -> *const c_char {
    let name: &'static CStr = match status {
        RbottStatus::Ok => c"ok",
        RbottStatus::NotEquivalent => c"not-equivalent",
        RbottStatus::ResourceLimit => c"resource-limit",
        RbottStatus::ConfigBound => c"config-bound",
        RbottStatus::ParseError => c"parse-error",
        RbottStatus::InvalidArgument => c"invalid-argument",
        RbottStatus::Internal => c"internal-error",
    };
    name.as_ptr()
}
