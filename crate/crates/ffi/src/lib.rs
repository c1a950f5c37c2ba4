//! C ABI for the sigma-mpc library.
//!
//! Conventions:
//! - Fields are opaque handles created with `sigma_mpc_field_new` /
//!   `sigma_mpc_field_from_json` and released with `sigma_mpc_field_free`.
//! - Matrices, codes, isometries, and reports cross the boundary as
//!   JSON strings in the same shapes the `sigma-mpc` CLI reads and
//!   writes.  Returned strings are heap-allocated; release them with
//!   `sigma_mpc_string_free`.
//! - Every fallible function returns an integer status: 0 success,
//!   1 internal error, 2 verification/predicate failed, 3 bad input,
//!   4 work budget exhausted — the same codes the CLI uses as exit
//!   codes.  On any nonzero status `sigma_mpc_last_error` returns a
//!   thread-local message; predicate failures (status 2) still fill
//!   the output JSON with the structured report when one exists.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sigma_mpc::codes::LinearCode;
use sigma_mpc::gf::FieldSpec;
use sigma_mpc::isometry::Isometry;
use sigma_mpc::linalg::FqMatrix;
use sigma_mpc::{cli, nsc, quasi, Error, DEFAULT_NSC_RETRY_LIMIT, SCHEMA_VERSION};

/// Status codes returned by every fallible function; identical to the
/// CLI's process exit codes.
#[repr(i32)]
pub enum SigmaMpcStatus {
    Ok = 0,
    InternalError = 1,
    VerificationFailed = 2,
    BadInput = 3,
    BudgetExceeded = 4,
}

/// Opaque handle to a finite field F_{p^h}.
pub struct SigmaMpcField {
    inner: FieldSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let cstr = CString::new(msg.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstr));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(err: &Error) -> i32 {
    set_last_error(&err.to_string());
    err.exit_code()
}

fn bad_input(msg: &str) -> i32 {
    set_last_error(msg);
    SigmaMpcStatus::BadInput as i32
}

/// Run `body` with panics converted to `InternalError` so they never
/// unwind across the C boundary.
fn guarded(body: impl FnOnce() -> i32) -> i32 {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => {
            set_last_error("internal panic");
            SigmaMpcStatus::InternalError as i32
        }
    }
}

unsafe fn field_ref<'a>(field: *const SigmaMpcField) -> Result<&'a FieldSpec, i32> {
    if field.is_null() {
        return Err(bad_input("null field handle"));
    }
    Ok(unsafe { &(*field).inner })
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, i32> {
    if s.is_null() {
        return Err(bad_input(&format!("null {what} pointer")));
    }
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| bad_input(&format!("{what} is not valid UTF-8")))
}

fn parse_json(text: &str, what: &str) -> Result<serde_json::Value, i32> {
    serde_json::from_str(text).map_err(|e| bad_input(&format!("{what}: invalid JSON: {e}")))
}

/// Accept either a bare matrix value or an object wrapping it under a
/// "matrix" key, mirroring the CLI's file reader.
fn matrix_from_value(field: &FieldSpec, v: &serde_json::Value) -> Result<FqMatrix, i32> {
    let inner = match v.get("matrix") {
        Some(m) => m,
        None => v,
    };
    FqMatrix::from_json(field, inner).map_err(|e| fail(&e))
}

fn write_out_json(out_json: *mut *mut c_char, value: serde_json::Value) -> Result<(), i32> {
    if out_json.is_null() {
        return Err(bad_input("null output pointer"));
    }
    let mut wrapped = value;
    if let Some(obj) = wrapped.as_object_mut() {
        obj.insert("schema".into(), serde_json::json!(SCHEMA_VERSION));
    }
    let text = wrapped.to_string();
    let cstr = CString::new(text).map_err(|_| bad_input("output contained NUL"))?;
    unsafe { *out_json = cstr.into_raw() };
    Ok(())
}

fn ok() -> i32 {
    SigmaMpcStatus::Ok as i32
}

// ----------------------------------------------------------------------
// library metadata and string lifecycle
// ----------------------------------------------------------------------

/// Version of the library, as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sigma_mpc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Schema version stamped into every JSON payload.
#[no_mangle]
pub extern "C" fn sigma_mpc_schema_version() -> u32 {
    SCHEMA_VERSION
}

/// Human-readable name for a status code (static string).
#[no_mangle]
pub extern "C" fn sigma_mpc_status_name(code: i32) -> *const c_char {
    let name: &'static str = match code {
        0 => "ok\0",
        1 => "internal error\0",
        2 => "verification failed\0",
        3 => "bad input\0",
        4 => "budget exceeded\0",
        _ => "unknown status\0",
    };
    name.as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread, or null if the
/// last call succeeded.  The pointer stays valid until the next
/// sigma_mpc call on the same thread.
#[no_mangle]
pub extern "C" fn sigma_mpc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Release a string returned through an out-parameter.  Passing null is
/// a no-op.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

// ----------------------------------------------------------------------
// field handles
// ----------------------------------------------------------------------

/// Create the field F_{p^h} with the library's pinned modulus.
/// On success writes a handle to `out` and returns 0.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_field_new(
    p: u64,
    h: u32,
    out: *mut *mut SigmaMpcField,
) -> i32 {
    guarded(|| {
        if out.is_null() {
            return bad_input("null output pointer");
        }
        match FieldSpec::new(p, h, None) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(SigmaMpcField { inner })) };
                ok()
            }
            Err(e) => fail(&e),
        }
    })
}

/// Create a field from a JSON descriptor: either `{"q": 81}` or
/// `{"p": 3, "h": 4}`, optionally with an explicit `"modulus"`.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_field_from_json(
    json: *const c_char,
    out: *mut *mut SigmaMpcField,
) -> i32 {
    guarded(|| {
        if out.is_null() {
            return bad_input("null output pointer");
        }
        let text = match unsafe { str_arg(json, "field descriptor") } {
            Ok(t) => t,
            Err(c) => return c,
        };
        let value = match parse_json(text, "field descriptor") {
            Ok(v) => v,
            Err(c) => return c,
        };
        match cli::field_from_json(&value) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(SigmaMpcField { inner })) };
                ok()
            }
            Err(e) => fail(&e),
        }
    })
}

/// Release a field handle.  Passing null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_field_free(field: *mut SigmaMpcField) {
    if !field.is_null() {
        drop(unsafe { Box::from_raw(field) });
    }
}

/// Field order p^h, or 0 if the handle is null.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_field_order(field: *const SigmaMpcField) -> u64 {
    match unsafe { field_ref(field) } {
        Ok(f) => f.order(),
        Err(_) => 0,
    }
}

/// Field characteristic p, or 0 if the handle is null.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_field_characteristic(field: *const SigmaMpcField) -> u64 {
    match unsafe { field_ref(field) } {
        Ok(f) => f.p(),
        Err(_) => 0,
    }
}

/// Extension degree h, or 0 if the handle is null.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_field_degree(field: *const SigmaMpcField) -> u32 {
    match unsafe { field_ref(field) } {
        Ok(f) => f.h(),
        Err(_) => 0,
    }
}

/// JSON descriptor of the field (characteristic, degree, modulus).
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_field_describe(
    field: *const SigmaMpcField,
    out_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let f = match unsafe { field_ref(field) } {
            Ok(f) => f,
            Err(c) => return c,
        };
        let descriptor = match serde_json::to_value(f.descriptor()) {
            Ok(d) => d,
            Err(e) => return fail(&Error::Internal(e.to_string())),
        };
        match write_out_json(out_json, serde_json::json!({ "field": descriptor })) {
            Ok(()) => ok(),
            Err(c) => c,
        }
    })
}

/// Galois pairing parameters for exponent `e`: writes `r` (the twist
/// exponent of the pairing) and `g` (the degree of the subfield the
/// sampling pool draws from) for the field's inner product
/// `<u, v> = u . pi_e(v)`.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_pairing_params(
    field: *const SigmaMpcField,
    e: u32,
    out_r: *mut u32,
    out_g: *mut u32,
) -> i32 {
    guarded(|| {
        let f = match unsafe { field_ref(field) } {
            Ok(f) => f,
            Err(c) => return c,
        };
        if out_r.is_null() || out_g.is_null() {
            return bad_input("null output pointer");
        }
        let params = f.galois_params(e);
        unsafe {
            *out_r = params.r;
            *out_g = params.g;
        }
        ok()
    })
}

// ----------------------------------------------------------------------
// predicates and certificates
// ----------------------------------------------------------------------

/// Check the non-singular-by-columns property of a square matrix
/// (JSON, entries as strings like "w^5" / "0" / "1").  Returns 0 when
/// NSC; returns 2 and fills the report with a failing witness
/// `{"ell": t, "cols": [...]}` otherwise.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_nsc_check(
    field: *const SigmaMpcField,
    matrix_json: *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let f = match unsafe { field_ref(field) } {
            Ok(f) => f,
            Err(c) => return c,
        };
        let text = match unsafe { str_arg(matrix_json, "matrix") } {
            Ok(t) => t,
            Err(c) => return c,
        };
        let value = match parse_json(text, "matrix") {
            Ok(v) => v,
            Err(c) => return c,
        };
        let matrix = match matrix_from_value(f, &value) {
            Ok(m) => m,
            Err(c) => return c,
        };
        match nsc::require_nsc(&matrix) {
            Ok(()) => {
                let payload = serde_json::json!({ "is_nsc": true, "witness": null });
                match write_out_json(out_json, payload) {
                    Ok(()) => ok(),
                    Err(c) => c,
                }
            }
            Err(Error::NotNsc { ell, cols }) => {
                let payload = serde_json::json!({
                    "is_nsc": false,
                    "witness": { "ell": ell, "cols": cols },
                });
                let err = Error::NotNsc { ell, cols };
                match write_out_json(out_json, payload) {
                    Ok(()) => fail(&err),
                    Err(c) => c,
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Lift an NSC matrix to one whose twisted Gram matrix is diagonal,
/// using the unit-lower-triangular transform for the inner product
/// with exponent `e` and companion matrix `m_tilde_json` (pass null
/// for the identity).  Fills the certificate JSON (lifted matrix,
/// triangular factor, companion diagonal).
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_quasi_lift(
    field: *const SigmaMpcField,
    matrix_json: *const c_char,
    m_tilde_json: *const c_char,
    e: u32,
    out_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let f = match unsafe { field_ref(field) } {
            Ok(f) => f,
            Err(c) => return c,
        };
        let text = match unsafe { str_arg(matrix_json, "matrix") } {
            Ok(t) => t,
            Err(c) => return c,
        };
        let value = match parse_json(text, "matrix") {
            Ok(v) => v,
            Err(c) => return c,
        };
        let matrix = match matrix_from_value(f, &value) {
            Ok(m) => m,
            Err(c) => return c,
        };
        let m_tilde = if m_tilde_json.is_null() {
            FqMatrix::identity(f, matrix.rows())
        } else {
            let text = match unsafe { str_arg(m_tilde_json, "companion matrix") } {
                Ok(t) => t,
                Err(c) => return c,
            };
            let value = match parse_json(text, "companion matrix") {
                Ok(v) => v,
                Err(c) => return c,
            };
            match matrix_from_value(f, &value) {
                Ok(m) => m,
                Err(c) => return c,
            }
        };
        match quasi::lift_to_quasi(&matrix, &m_tilde, e) {
            Ok(lift) => match write_out_json(out_json, lift.to_json()) {
                Ok(()) => ok(),
                Err(c) => c,
            },
            Err(e) => fail(&e),
        }
    })
}

/// Seeded rejection-sampling campaign for matrices whose twisted Gram
/// matrix is diagonal: `trials` attempts at size `s` with exponent
/// `e`, keeping up to `keep` full certificates.  Deterministic in
/// `seed`.  Fills the campaign report JSON (trials, successes, rate,
/// kept certificates).
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_quasi_sample(
    field: *const SigmaMpcField,
    s: usize,
    e: u32,
    trials: u64,
    seed: u64,
    keep: usize,
    out_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let f = match unsafe { field_ref(field) } {
            Ok(f) => f,
            Err(c) => return c,
        };
        let m_tilde = FqMatrix::identity(f, s);
        match quasi::sampling_campaign(
            f,
            s,
            &m_tilde,
            e,
            trials,
            seed,
            keep,
            DEFAULT_NSC_RETRY_LIMIT,
        ) {
            Ok(report) => match write_out_json(out_json, report.to_json()) {
                Ok(()) => ok(),
                Err(c) => c,
            },
            Err(e) => fail(&e),
        }
    })
}

/// Check whether a square matrix is NSC with monomial Gram matrix
/// A A^T (the defining-matrix condition for isometry-dual-preserving
/// products).  Returns 0 and the decomposition when it is; returns 2
/// with the Gram matrix in the report when it is not.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_tau_od_check(
    field: *const SigmaMpcField,
    matrix_json: *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let f = match unsafe { field_ref(field) } {
            Ok(f) => f,
            Err(c) => return c,
        };
        let text = match unsafe { str_arg(matrix_json, "matrix") } {
            Ok(t) => t,
            Err(c) => return c,
        };
        let value = match parse_json(text, "matrix") {
            Ok(v) => v,
            Err(c) => return c,
        };
        let matrix = match matrix_from_value(f, &value) {
            Ok(m) => m,
            Err(c) => return c,
        };
        match quasi::gram_monomial_report(&matrix) {
            Ok(report) => {
                let monomial = report.is_monomial;
                match write_out_json(out_json, report.to_json()) {
                    Ok(()) => {
                        if monomial {
                            ok()
                        } else {
                            set_last_error("Gram matrix A A^T is not monomial");
                            SigmaMpcStatus::VerificationFailed as i32
                        }
                    }
                    Err(c) => c,
                }
            }
            Err(e) => fail(&e),
        }
    })
}

// ----------------------------------------------------------------------
// codes
// ----------------------------------------------------------------------

/// Exact minimum distance of the row space of a generator matrix
/// (JSON), enumerating at most `budget` codewords via the cheaper of
/// the direct and dual-transform routes.  Fills
/// `{"length", "dimension", "distance", "method", "words_enumerated"}`.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_code_distance(
    field: *const SigmaMpcField,
    generator_json: *const c_char,
    budget: u64,
    out_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let f = match unsafe { field_ref(field) } {
            Ok(f) => f,
            Err(c) => return c,
        };
        let text = match unsafe { str_arg(generator_json, "generator") } {
            Ok(t) => t,
            Err(c) => return c,
        };
        let value = match parse_json(text, "generator") {
            Ok(v) => v,
            Err(c) => return c,
        };
        let generator = match matrix_from_value(f, &value) {
            Ok(m) => m,
            Err(c) => return c,
        };
        let code = match LinearCode::from_generator(&generator) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        match code.min_distance(budget) {
            Ok(report) => {
                let payload = serde_json::json!({
                    "length": code.length(),
                    "dimension": code.dimension(),
                    "distance": report.distance,
                    "method": format!("{:?}", report.method),
                    "words_enumerated": report.words_enumerated,
                });
                match write_out_json(out_json, payload) {
                    Ok(()) => ok(),
                    Err(c) => c,
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Check self-orthogonality of the row space of `generator_json`
/// under the isometry `isometry_json` (either
/// `{"kind": "euclidean" | "hermitian" | "symplectic"}` or an explicit
/// `{"m_tau": [...], "e": ...}`).  Returns 0 when self-orthogonal and
/// 2 when not; the report carries `{"self_orthogonal": bool}`.
#[no_mangle]
pub unsafe extern "C" fn sigma_mpc_verify_self_orthogonal(
    field: *const SigmaMpcField,
    generator_json: *const c_char,
    isometry_json: *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let f = match unsafe { field_ref(field) } {
            Ok(f) => f,
            Err(c) => return c,
        };
        let gen_text = match unsafe { str_arg(generator_json, "generator") } {
            Ok(t) => t,
            Err(c) => return c,
        };
        let gen_value = match parse_json(gen_text, "generator") {
            Ok(v) => v,
            Err(c) => return c,
        };
        let generator = match matrix_from_value(f, &gen_value) {
            Ok(m) => m,
            Err(c) => return c,
        };
        let code = match LinearCode::from_generator(&generator) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        let iso_text = match unsafe { str_arg(isometry_json, "isometry") } {
            Ok(t) => t,
            Err(c) => return c,
        };
        let iso_value = match parse_json(iso_text, "isometry") {
            Ok(v) => v,
            Err(c) => return c,
        };
        let iso = match Isometry::from_json(f, code.length(), &iso_value) {
            Ok(i) => i,
            Err(e) => return fail(&e),
        };
        match code.is_self_orthogonal(&iso) {
            Ok(so) => {
                let payload = serde_json::json!({ "self_orthogonal": so });
                match write_out_json(out_json, payload) {
                    Ok(()) => {
                        if so {
                            ok()
                        } else {
                            set_last_error("code is not self-orthogonal under the isometry");
                            SigmaMpcStatus::VerificationFailed as i32
                        }
                    }
                    Err(c) => c,
                }
            }
            Err(e) => fail(&e),
        }
    })
}
