//! C ABI for the mmifs library.
//!
//! Every fallible call returns an [`MmifsStatus`]; on failure a message is
//! kept per thread and can be read with [`mmifs_last_error`]. Handles are
//! opaque and owned by the caller until passed to the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;

use mmifs::metrics::{self, Front};
use mmifs::{dataset, Algorithm, Dataset, Error, LabelColumn, Objectives, OptimizerConfig, RunRecord};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmifsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    InvalidData = 4,
    InvalidParameter = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// A loaded dataset.
pub struct MmifsDataset(Dataset);

/// The outcome of one optimizer run.
pub struct MmifsRunResult(RunRecord);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MmifsWilcoxon {
    pub n: usize,
    pub w_plus: f64,
    pub w_minus: f64,
    pub statistic: f64,
    pub p_value: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    // interior NULs would truncate the message anyway
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> MmifsStatus {
    match e {
        Error::Io { .. } => MmifsStatus::Io,
        Error::Csv { .. }
        | Error::NoDataRows { .. }
        | Error::BadCell { .. }
        | Error::LabelColumn(_)
        | Error::InvalidDataset(_)
        | Error::ClassTooSmall { .. }
        | Error::Json(_) => MmifsStatus::InvalidData,
        Error::OutsideReferenceBox { .. } | Error::LengthMismatch { .. } => MmifsStatus::OutOfRange,
        _ => MmifsStatus::InvalidParameter,
    }
}

struct Fail(MmifsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MmifsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MmifsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MmifsStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(MmifsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(MmifsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn front_arg(err: *const f64, n_selected: *const usize, len: usize, n_features: usize) -> Result<Front, Fail> {
    let e = slice_arg(err, len, "error_pct")?;
    let k = slice_arg(n_selected, len, "n_selected")?;
    let pts = e.iter().zip(k).map(|(&e, &k)| Objectives::new(e, k)).collect();
    Ok(Front::new(pts, n_features)?)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mmifs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mmifs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads a CSV. `label_column` is a header name or a 0-based column index.
///
/// # Safety
/// `path` and `label_column` must be NUL-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mmifs_dataset_load_csv(
    path: *const c_char,
    label_column: *const c_char,
    out: *mut *mut MmifsDataset,
) -> MmifsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = str_arg(path, "path")?;
        let label = LabelColumn::from_str(str_arg(label_column, "label_column")?).unwrap();
        let d = dataset::load_csv(path, &label)?;
        *out = Box::into_raw(Box::new(MmifsDataset(d)));
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a handle from [`mmifs_dataset_load_csv`].
#[no_mangle]
pub unsafe extern "C" fn mmifs_dataset_n_features(d: *const MmifsDataset) -> usize {
    d.as_ref().map_or(0, |d| d.0.n_features())
}

/// # Safety
/// `d` must be null or a handle from [`mmifs_dataset_load_csv`].
#[no_mangle]
pub unsafe extern "C" fn mmifs_dataset_n_instances(d: *const MmifsDataset) -> usize {
    d.as_ref().map_or(0, |d| d.0.n_instances())
}

/// # Safety
/// `d` must be null or a handle from [`mmifs_dataset_load_csv`].
#[no_mangle]
pub unsafe extern "C" fn mmifs_dataset_n_classes(d: *const MmifsDataset) -> usize {
    d.as_ref().map_or(0, |d| d.0.n_classes())
}

/// # Safety
/// `d` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mmifs_dataset_free(d: *mut MmifsDataset) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Scales features to [0,1], splits stratified by class, and runs one
/// search. `algorithm` is `mmifs`, `blind_paes` or `random`.
/// `optimizer_json` is null or a JSON object of optimizer settings; missing
/// keys take their defaults.
///
/// # Safety
/// `d` must be a live dataset handle, the strings NUL-terminated (or null
/// where allowed), and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mmifs_run(
    d: *const MmifsDataset,
    algorithm: *const c_char,
    optimizer_json: *const c_char,
    train_fraction: f64,
    split_seed: u64,
    out: *mut *mut MmifsRunResult,
) -> MmifsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let d = d.as_ref().ok_or_else(|| null("dataset"))?;
        let algorithm = Algorithm::from_str(str_arg(algorithm, "algorithm")?)?;
        let config: OptimizerConfig = if optimizer_json.is_null() {
            OptimizerConfig::default()
        } else {
            serde_json::from_str(str_arg(optimizer_json, "optimizer_json")?)
                .map_err(|e| Fail(MmifsStatus::InvalidParameter, format!("optimizer config: {e}")))?
        };
        let data = dataset::min_max_normalize(&d.0);
        let split = dataset::stratified_split(&data, train_fraction, split_seed)?;
        let record = mmifs::optimizer::run(algorithm, &config, &split)?;
        *out = Box::into_raw(Box::new(MmifsRunResult(record)));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn mmifs_result_front_len(r: *const MmifsRunResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.front.len())
}

/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn mmifs_result_eval_count(r: *const MmifsRunResult) -> u64 {
    r.as_ref().map_or(0, |r| r.0.eval_count)
}

/// Objectives of front point `i`; the front is sorted by feature count.
///
/// # Safety
/// `r` must be a live result handle; the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn mmifs_result_front_point(
    r: *const MmifsRunResult,
    i: usize,
    error_pct: *mut f64,
    n_selected: *mut usize,
) -> MmifsStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("result"))?;
        if error_pct.is_null() || n_selected.is_null() {
            return Err(null("out"));
        }
        let e = r.0.front.get(i).ok_or_else(|| {
            Fail(MmifsStatus::OutOfRange, format!("index {i} beyond front of {}", r.0.front.len()))
        })?;
        *error_pct = e.objectives.error_pct;
        *n_selected = e.objectives.n_selected;
        Ok(())
    })
}

/// Writes the selection mask of front point `i` as 0/1 bytes. `mask_len`
/// must equal the dataset's feature count.
///
/// # Safety
/// `r` must be a live result handle; `mask` must hold `mask_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn mmifs_result_front_mask(
    r: *const MmifsRunResult,
    i: usize,
    mask: *mut u8,
    mask_len: usize,
) -> MmifsStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("result"))?;
        let e = r.0.front.get(i).ok_or_else(|| {
            Fail(MmifsStatus::OutOfRange, format!("index {i} beyond front of {}", r.0.front.len()))
        })?;
        if mask_len != r.0.n_features {
            return Err(Error::LengthMismatch {
                expected: r.0.n_features,
                got: mask_len,
            }
            .into());
        }
        if mask.is_null() {
            return Err(null("mask"));
        }
        let out = std::slice::from_raw_parts_mut(mask, mask_len);
        for (o, b) in out.iter_mut().zip(e.subset.to_bools()) {
            *o = b as u8;
        }
        Ok(())
    })
}

/// Full run record as JSON. Release with [`mmifs_string_free`].
///
/// # Safety
/// `r` must be a live result handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mmifs_result_to_json(r: *const MmifsRunResult, out: *mut *mut c_char) -> MmifsStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("result"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = r.0.to_json()?;
        *out = CString::new(s).expect("json has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a result handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mmifs_result_free(r: *mut MmifsRunResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mmifs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Normalized hypervolume of a front given as parallel arrays, reference
/// point (100 %, `n_features`).
///
/// # Safety
/// Arrays must hold `len` elements; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mmifs_hypervolume(
    error_pct: *const f64,
    n_selected: *const usize,
    len: usize,
    n_features: usize,
    out: *mut f64,
) -> MmifsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = metrics::hypervolume(&front_arg(error_pct, n_selected, len, n_features)?)?;
        Ok(())
    })
}

/// Fraction of front B weakly dominated by some point of front A.
///
/// # Safety
/// Arrays must hold the stated number of elements; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mmifs_c_metric(
    a_error_pct: *const f64,
    a_n_selected: *const usize,
    a_len: usize,
    b_error_pct: *const f64,
    b_n_selected: *const usize,
    b_len: usize,
    n_features: usize,
    out: *mut f64,
) -> MmifsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let a = front_arg(a_error_pct, a_n_selected, a_len, n_features)?;
        let b = front_arg(b_error_pct, b_n_selected, b_len, n_features)?;
        *out = metrics::c_metric(&a, &b)?;
        Ok(())
    })
}

/// Exact two-sided Wilcoxon signed-rank test on paired differences.
///
/// # Safety
/// `diffs` must hold `len` elements; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mmifs_wilcoxon(diffs: *const f64, len: usize, out: *mut MmifsWilcoxon) -> MmifsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let w = metrics::wilcoxon_exact(slice_arg(diffs, len, "diffs")?)?;
        *out = MmifsWilcoxon {
            n: w.n,
            w_plus: w.w_plus,
            w_minus: w.w_minus,
            statistic: w.statistic,
            p_value: w.p_value,
        };
        Ok(())
    })
}
