//! C ABI over stackline model inference.
//!
//! Conventions: every fallible call returns a [`StacklineStatus`];
//! out-parameters are written only on `OK`. Models are opaque handles
//! created by [`stackline_model_load`] and released by
//! [`stackline_model_free`]. The last error message is kept per thread
//! and fetched with [`stackline_last_error_message`] (free it with
//! [`stackline_string_free`]).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use stackline::error::Error;
use stackline::model_io::{load_model, AnyModel};

/// Result codes for every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StacklineStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments were structurally invalid (bad UTF-8, wrong shape).
    InvalidArgument = 2,
    /// The model file could not be read.
    Io = 3,
    /// The model file could not be parsed.
    Parse = 4,
    /// The computation itself failed; see the last error message.
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error").expect("static"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_for(err: &Error) -> StacklineStatus {
    match err {
        Error::Config(_) | Error::Io(_) => StacklineStatus::Io,
        Error::Json(_) | Error::Schema(_) | Error::Parse { .. } => StacklineStatus::Parse,
        Error::Shape(_) => StacklineStatus::InvalidArgument,
        _ => StacklineStatus::Internal,
    }
}

/// Opaque handle around a loaded model.
pub struct StacklineModel {
    inner: AnyModel,
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn stackline_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Returns the calling thread's last error message as a newly allocated
/// string, or null when no error has occurred. Free it with
/// [`stackline_string_free`].
#[no_mangle]
pub extern "C" fn stackline_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by
/// [`stackline_last_error_message`] (or null), not yet freed.
#[no_mangle]
pub unsafe extern "C" fn stackline_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a model file (single learner or stacked ensemble) and writes the
/// new handle to `out_model`.
///
/// # Safety
/// `path` must point to a NUL-terminated string and `out_model` to
/// writable storage for one pointer; both must stay valid for the call.
#[no_mangle]
pub unsafe extern "C" fn stackline_model_load(
    path: *const c_char,
    out_model: *mut *mut StacklineModel,
) -> StacklineStatus {
    if path.is_null() || out_model.is_null() {
        set_last_error("null pointer argument".into());
        return StacklineStatus::NullPointer;
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        set_last_error("path is not valid UTF-8".into());
        return StacklineStatus::InvalidArgument;
    };
    let result = catch_unwind(|| load_model(Path::new(path)));
    match result {
        Ok(Ok(model)) => {
            *out_model = Box::into_raw(Box::new(StacklineModel { inner: model }));
            StacklineStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(e.to_string());
            status_for(&e)
        }
        Err(_) => {
            set_last_error("panic while loading model".into());
            StacklineStatus::Internal
        }
    }
}

/// Releases a model handle. Null is a no-op.
///
/// # Safety
/// `model` must be a handle from [`stackline_model_load`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn stackline_model_free(model: *mut StacklineModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Writes the model's expected feature count to `out_n_features`.
///
/// # Safety
/// `model` must be a live handle; `out_n_features` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stackline_model_num_features(
    model: *const StacklineModel,
    out_n_features: *mut usize,
) -> StacklineStatus {
    if model.is_null() || out_n_features.is_null() {
        set_last_error("null pointer argument".into());
        return StacklineStatus::NullPointer;
    }
    *out_n_features = (*model).inner.n_features();
    StacklineStatus::Ok
}

unsafe fn gather_rows(
    features: *const f64,
    n_rows: usize,
    n_features: usize,
) -> Vec<Vec<f64>> {
    let flat = std::slice::from_raw_parts(features, n_rows * n_features);
    flat.chunks(n_features).map(<[f64]>::to_vec).collect()
}

/// Positive-class probabilities for `n_rows` x `n_features` row-major
/// features; writes `n_rows` doubles to `out_probabilities`.
///
/// # Safety
/// `model` must be a live handle; `features` must hold
/// `n_rows * n_features` readable doubles and `out_probabilities`
/// `n_rows` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn stackline_model_predict_proba(
    model: *const StacklineModel,
    features: *const f64,
    n_rows: usize,
    n_features: usize,
    out_probabilities: *mut f64,
) -> StacklineStatus {
    if model.is_null() || (features.is_null() && n_rows > 0) || out_probabilities.is_null() {
        set_last_error("null pointer argument".into());
        return StacklineStatus::NullPointer;
    }
    let rows = gather_rows(features, n_rows, n_features);
    let result = catch_unwind(AssertUnwindSafe(|| (*model).inner.predict_proba(&rows)));
    match result {
        Ok(Ok(probs)) => {
            std::ptr::copy_nonoverlapping(probs.as_ptr(), out_probabilities, probs.len());
            StacklineStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(e.to_string());
            status_for(&e)
        }
        Err(_) => {
            set_last_error("panic during prediction".into());
            StacklineStatus::Internal
        }
    }
}

/// Hard labels (0/1 at the 0.5 threshold); writes `n_rows` bytes.
///
/// # Safety
/// Same contract as [`stackline_model_predict_proba`], with `out_labels`
/// holding `n_rows` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn stackline_model_predict(
    model: *const StacklineModel,
    features: *const f64,
    n_rows: usize,
    n_features: usize,
    out_labels: *mut u8,
) -> StacklineStatus {
    if model.is_null() || (features.is_null() && n_rows > 0) || out_labels.is_null() {
        set_last_error("null pointer argument".into());
        return StacklineStatus::NullPointer;
    }
    let rows = gather_rows(features, n_rows, n_features);
    let result = catch_unwind(AssertUnwindSafe(|| (*model).inner.predict(&rows)));
    match result {
        Ok(Ok(labels)) => {
            std::ptr::copy_nonoverlapping(labels.as_ptr(), out_labels, labels.len());
            StacklineStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(e.to_string());
            status_for(&e)
        }
        Err(_) => {
            set_last_error("panic during prediction".into());
            StacklineStatus::Internal
        }
    }
}
