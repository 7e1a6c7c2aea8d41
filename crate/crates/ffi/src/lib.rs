//! C interface to `projsep`.
//!
//! Datasets are opaque handles created by `projsep_dataset_new` or
//! `projsep_dataset_load` and released with `projsep_dataset_free`. Every
//! fallible function returns a `ProjsepStatus`; on failure a message is kept
//! per thread and can be read with `projsep_last_error`. Properties are
//! numbered from 1, as on the command line.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;
use std::slice;

use projsep::overlap::{f_value, OverlapSpec};
use projsep::separability::{linear_separability, max_margin_hyperplane};
use projsep::synthesis::{
    construct_eliminating_projection, perturb_general_position, PerturbOptions, SynthesisProblem,
};
use projsep::{Error, LabeledPointSet, Tolerances};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjsepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotSeparable = 4,
    NotAllLabels = 5,
    Degenerate = 6,
    Parse = 7,
    Io = 8,
    Numerical = 9,
    Internal = 10,
}

/// Opaque labeled point set.
pub struct ProjsepDataset {
    inner: LabeledPointSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ProjsepStatus {
    match e {
        Error::DimensionMismatch { .. } => ProjsepStatus::DimensionMismatch,
        Error::NotSeparableInput { .. } | Error::ActuallySeparable | Error::NotIntersecting => {
            ProjsepStatus::NotSeparable
        }
        Error::NotAllLabels { .. } => ProjsepStatus::NotAllLabels,
        Error::DegeneratePosition(_) | Error::AllDegenerate | Error::DegenerateSimplex | Error::PerturbationFailed { .. } => {
            ProjsepStatus::Degenerate
        }
        Error::Parse { .. } => ProjsepStatus::Parse,
        Error::Io(_) => ProjsepStatus::Io,
        Error::Lp(_) | Error::SamplingFailed { .. } => ProjsepStatus::Numerical,
        Error::InvalidCertificate(_) | Error::InvalidWitness(_) => ProjsepStatus::Internal,
        _ => ProjsepStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> ProjsepStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null_arg(name: &str) -> ProjsepStatus {
    set_error(format!("{name} is null"));
    ProjsepStatus::NullPointer
}

/// Runs `f`, turning panics into `Internal`.
fn guard<F: FnOnce() -> ProjsepStatus + std::panic::UnwindSafe>(f: F) -> ProjsepStatus {
    std::panic::catch_unwind(f).unwrap_or_else(|_| {
        set_error("internal panic".into());
        ProjsepStatus::Internal
    })
}

fn property(ds: &LabeledPointSet, one_based: usize) -> Result<usize, ProjsepStatus> {
    if one_based == 0 || one_based > ds.k() {
        set_error(format!("property must be between 1 and {}, got {one_based}", ds.k()));
        return Err(ProjsepStatus::InvalidArgument);
    }
    Ok(one_based - 1)
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn projsep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn projsep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a dataset from `n` points of dimension `d` (row-major) and `k`
/// label rows of length `n` (property-major, entries ±1).
///
/// # Safety
/// `points` must hold `n * d` values, `labels` `k * n` values, and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn projsep_dataset_new(
    points: *const f64,
    n: usize,
    d: usize,
    labels: *const i8,
    k: usize,
    out: *mut *mut ProjsepDataset,
) -> ProjsepStatus {
    if points.is_null() {
        return null_arg("points");
    }
    if labels.is_null() {
        return null_arg("labels");
    }
    if out.is_null() {
        return null_arg("out");
    }
    guard(|| {
        let coords = slice::from_raw_parts(points, n * d);
        let labs = slice::from_raw_parts(labels, k * n);
        let pts = coords.chunks(d.max(1)).take(n).map(<[f64]>::to_vec).collect();
        let lab_rows = labs.chunks(n.max(1)).take(k).map(<[i8]>::to_vec).collect();
        match LabeledPointSet::new(pts, lab_rows) {
            Ok(set) => {
                *out = Box::into_raw(Box::new(ProjsepDataset { inner: set }));
                ProjsepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Loads a dataset file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn projsep_dataset_load(path: *const c_char, out: *mut *mut ProjsepDataset) -> ProjsepStatus {
    if path.is_null() {
        return null_arg("path");
    }
    if out.is_null() {
        return null_arg("out");
    }
    guard(|| {
        let Ok(p) = CStr::from_ptr(path).to_str() else {
            set_error("path is not UTF-8".into());
            return ProjsepStatus::InvalidArgument;
        };
        match projsep::io::load_dataset(Path::new(p)) {
            Ok(ds) => {
                *out = Box::into_raw(Box::new(ProjsepDataset { inner: ds.data }));
                ProjsepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a dataset; null is ignored.
///
/// # Safety
/// `ds` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn projsep_dataset_free(ds: *mut ProjsepDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Number of points, or 0 for null.
///
/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn projsep_dataset_len(ds: *const ProjsepDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.inner.n())
}

/// Dimension, or 0 for null.
///
/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn projsep_dataset_dim(ds: *const ProjsepDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.inner.dim())
}

/// Number of properties, or 0 for null.
///
/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn projsep_dataset_properties(ds: *const ProjsepDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.inner.k())
}

/// Separability of one property. `strict` selects strict separation. On
/// success `separable` is set, and `margin` receives the Euclidean margin
/// (0 unless strictly separable).
///
/// # Safety
/// `ds` must be a live handle; `separable` and `margin` writable.
#[no_mangle]
pub unsafe extern "C" fn projsep_separable(
    ds: *const ProjsepDataset,
    property_one_based: usize,
    strict: bool,
    separable: *mut bool,
    margin: *mut f64,
) -> ProjsepStatus {
    let Some(ds) = ds.as_ref() else {
        return null_arg("ds");
    };
    if separable.is_null() || margin.is_null() {
        return null_arg("output");
    }
    guard(|| {
        let i = match property(&ds.inner, property_one_based) {
            Ok(i) => i,
            Err(s) => return s,
        };
        let (p, q) = ds.inner.split(i);
        let tol = Tolerances::default();
        match linear_separability(&p, &q, strict, &tol) {
            Ok(r) => {
                *separable = r.is_separable();
                *margin = r.margin();
                ProjsepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Unit projection vector destroying strict linear separability of
/// `hidden_one_based` while keeping the other properties separable through
/// their maximum-margin hyperplanes. With `perturb`, the vector is further
/// perturbed so that even weak separability is lost. Writes `d` values to
/// `w_out`.
///
/// # Safety
/// `ds` must be a live handle and `w_out` must hold `dim` values.
#[no_mangle]
pub unsafe extern "C" fn projsep_eliminating_projection(
    ds: *const ProjsepDataset,
    hidden_one_based: usize,
    perturb: bool,
    w_out: *mut f64,
) -> ProjsepStatus {
    let Some(ds) = ds.as_ref() else {
        return null_arg("ds");
    };
    if w_out.is_null() {
        return null_arg("w_out");
    }
    guard(|| {
        let hidden = match property(&ds.inner, hidden_one_based) {
            Ok(i) => i,
            Err(s) => return s,
        };
        let tol = Tolerances::default();
        let prob = SynthesisProblem {
            data: ds.inner.clone(),
            hidden,
            keep_planes: None,
        };
        let mut w = match construct_eliminating_projection(&prob, &tol) {
            Ok(e) => e.w,
            Err(e) => return fail(e),
        };
        if perturb {
            let (p, q) = ds.inner.split(hidden);
            match perturb_general_position(&p, &q, &w, &PerturbOptions::default(), &tol) {
                Ok(r) => w = r.w,
                Err(e) => return fail(e),
            }
        }
        slice::from_raw_parts_mut(w_out, w.len()).copy_from_slice(&w);
        ProjsepStatus::Ok
    })
}

/// SVM overlap `f(P, w)` of one property after projecting along `w` (length
/// `dim`, need not be unit).
///
/// # Safety
/// `ds` must be a live handle, `w` must hold `dim` values and `value` be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn projsep_svm_overlap(
    ds: *const ProjsepDataset,
    property_one_based: usize,
    w: *const f64,
    lambda: f64,
    value: *mut f64,
) -> ProjsepStatus {
    let Some(ds) = ds.as_ref() else {
        return null_arg("ds");
    };
    if w.is_null() {
        return null_arg("w");
    }
    if value.is_null() {
        return null_arg("value");
    }
    guard(|| {
        let i = match property(&ds.inner, property_one_based) {
            Ok(i) => i,
            Err(s) => return s,
        };
        let raw = slice::from_raw_parts(w, ds.inner.dim());
        let Some(unit) = projsep::linalg::normalized(raw, 1e-12) else {
            set_error("w is zero".into());
            return ProjsepStatus::InvalidArgument;
        };
        let mut spec = OverlapSpec::svm(lambda);
        spec.property = i;
        match f_value(&ds.inner, &unit, &spec) {
            Ok(v) => {
                *value = v;
                ProjsepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Maximum Euclidean margin of one property, or a negative value when the
/// property is not strictly separable.
///
/// # Safety
/// `ds` must be a live handle and `margin` writable.
#[no_mangle]
pub unsafe extern "C" fn projsep_max_margin(
    ds: *const ProjsepDataset,
    property_one_based: usize,
    margin: *mut f64,
) -> ProjsepStatus {
    let Some(ds) = ds.as_ref() else {
        return null_arg("ds");
    };
    if margin.is_null() {
        return null_arg("margin");
    }
    guard(|| {
        let i = match property(&ds.inner, property_one_based) {
            Ok(i) => i,
            Err(s) => return s,
        };
        let (p, q) = ds.inner.split(i);
        match max_margin_hyperplane(&p, &q, &Tolerances::default()) {
            Ok(r) => {
                *margin = r.map_or(-1.0, |(_, m)| m);
                ProjsepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
