//! C bindings for the `qkmeans` library.
//!
//! Datasets, backend profiles, and clustering runs cross the boundary as
//! opaque handles; each has a matching `_free` function. Fallible calls
//! return either a null pointer or a [`QkStatus`] code, and the message
//! for the most recent failure on the current thread can be read with
//! [`qk_last_error`]. Vector data is exchanged through caller-owned
//! buffers, so no function hands out memory other than the handles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use qkmeans::backend::BackendProfile;
use qkmeans::cluster::{self, ClusterConfig, ClusteringRun};
use qkmeans::data::{self, Dataset};
use qkmeans::dist::{self, BlockSpec, EstimatorConfig};
use qkmeans::embed::{Embedding, VectorPair};

/// Result code for calls that do not return a handle.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QkStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of range or otherwise malformed.
    InvalidArgument = 2,
    /// A caller-provided buffer is too small; nothing was written.
    BufferTooSmall = 3,
    /// The underlying library reported an error; see `qk_last_error`.
    Error = 4,
    /// The call panicked internally; see `qk_last_error`.
    Panic = 5,
}

/// Which state preparation the swap test uses.
///
/// One of `QK_EMBEDDING_AMPLITUDE` or `QK_EMBEDDING_ANGLE`.
#[repr(transparent)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QkEmbedding(pub u32);

/// Pair state on amplitudes; distances are squared Euclidean.
pub const QK_EMBEDDING_AMPLITUDE: QkEmbedding = QkEmbedding(0);
/// One qubit per coordinate pair; distances follow the angle metric.
pub const QK_EMBEDDING_ANGLE: QkEmbedding = QkEmbedding(1);

/// How a single distance is estimated.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QkEstimatorOptions {
    /// State preparation, `QK_EMBEDDING_AMPLITUDE` or `QK_EMBEDDING_ANGLE`.
    pub embedding: QkEmbedding,
    /// When false, read exact probabilities instead of sampling shots.
    pub sampled: bool,
    /// Shots per circuit when `sampled` is set.
    pub shots: u64,
    /// Independent repetitions averaged into the estimate (at least 1).
    pub repetitions: u32,
    /// Coordinates per subspace block (even, at least 2), or 0 to run
    /// each pair as one full-width circuit.
    pub block_size: u32,
    /// Apply readout error mitigation to measured frequencies.
    pub mitigate: bool,
    /// Base seed for shot sampling.
    pub seed: u64,
}

/// Full clustering configuration.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QkKmeansOptions {
    /// Number of clusters to start from.
    pub k: u32,
    /// Minimum pairwise distance between initial centroids.
    pub epsilon: f64,
    /// Iteration cap.
    pub max_iterations: u32,
    /// Convergence threshold on the largest centroid displacement.
    pub convergence_tol: f64,
    /// Seed for initialization and shot sampling.
    pub seed: u64,
    /// When true, run classical Lloyd iterations and ignore `estimator`
    /// and the profile argument.
    pub classical: bool,
    /// Distance estimator used when `classical` is false.
    pub estimator: QkEstimatorOptions,
    /// Worker queues for batch execution, or 0 for a single submission.
    pub workers: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl std::fmt::Display) {
    let text = CString::new(msg.to_string())
        .unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

/// Message for the most recent failure on the calling thread, or null if
/// no call has failed yet. The pointer stays valid until the next failing
/// call on the same thread.
#[no_mangle]
pub extern "C" fn qk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null(), |msg| msg.as_ptr())
    })
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn qk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Run `f`, turning a panic into a recorded error and `default`.
fn guarded<T>(default: T, f: impl FnOnce() -> T) -> T {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(v) => v,
        Err(_) => {
            set_error("internal panic");
            default
        }
    }
}

unsafe fn path_arg<'a>(ptr: *const c_char) -> Option<&'a Path> {
    if ptr.is_null() {
        set_error("path is null");
        return None;
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Some(Path::new(s)),
        Err(_) => {
            set_error("path is not valid UTF-8");
            None
        }
    }
}

fn into_handle<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn estimator_config(opts: &QkEstimatorOptions) -> Result<EstimatorConfig, QkStatus> {
    let embedding = match opts.embedding {
        QK_EMBEDDING_AMPLITUDE => Embedding::Amplitude,
        QK_EMBEDDING_ANGLE => Embedding::Angle,
        QkEmbedding(other) => {
            set_error(format!("unknown embedding code {other}"));
            return Err(QkStatus::InvalidArgument);
        }
    };
    let mut cfg = if opts.sampled {
        EstimatorConfig::sampled(embedding, opts.shots)
    } else {
        EstimatorConfig::analytic(embedding)
    };
    cfg.repetitions = opts.repetitions as usize;
    cfg.mitigate = opts.mitigate;
    if opts.block_size > 0 {
        cfg.block = BlockSpec::Size(opts.block_size as usize);
    }
    Ok(cfg)
}

// ---------------------------------------------------------------- dataset

/// A labeled or unlabeled collection of real-valued points.
pub struct QkDataset(Dataset);

/// Load a dataset from a CSV file with an `f0,f1,...` header and an
/// optional trailing `label` column. Returns null on failure.
///
/// # Safety
/// `path` must point to a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qk_dataset_load_csv(path: *const c_char) -> *mut QkDataset {
    let Some(path) = path_arg(path) else {
        return ptr::null_mut();
    };
    guarded(ptr::null_mut(), || match data::load_csv(path) {
        Ok(ds) => into_handle(QkDataset(ds)),
        Err(e) => {
            set_error(e);
            ptr::null_mut()
        }
    })
}

/// Generate `k` Gaussian clusters of `per_cluster` points each in
/// `[0, 10]^dim`, with centers at least `min_sep` apart. Returns null on
/// failure.
#[no_mangle]
pub extern "C" fn qk_dataset_generate(
    k: usize,
    per_cluster: usize,
    dim: usize,
    variance: f64,
    min_sep: f64,
    seed: u64,
) -> *mut QkDataset {
    guarded(ptr::null_mut(), || {
        match data::gen_clusters(k, per_cluster, dim, variance, min_sep, seed) {
            Ok(ds) => into_handle(QkDataset(ds)),
            Err(e) => {
                set_error(e);
                ptr::null_mut()
            }
        }
    })
}

/// Number of points, or 0 when `dataset` is null.
///
/// # Safety
/// `dataset` must be null or a live handle from a `qk_dataset_*` call.
#[no_mangle]
pub unsafe extern "C" fn qk_dataset_len(dataset: *const QkDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.0.points.len())
}

/// Coordinates per point, or 0 when `dataset` is null or empty.
///
/// # Safety
/// `dataset` must be null or a live handle from a `qk_dataset_*` call.
#[no_mangle]
pub unsafe extern "C" fn qk_dataset_dim(dataset: *const QkDataset) -> usize {
    dataset
        .as_ref()
        .map_or(0, |d| d.0.points.first().map_or(0, Vec::len))
}

/// Whether the dataset carries true labels.
///
/// # Safety
/// `dataset` must be null or a live handle from a `qk_dataset_*` call.
#[no_mangle]
pub unsafe extern "C" fn qk_dataset_has_labels(dataset: *const QkDataset) -> bool {
    dataset.as_ref().is_some_and(|d| d.0.true_labels.is_some())
}

/// Copy the coordinates of point `index` into `out`.
///
/// # Safety
/// `dataset` must be a live handle and `out` must point to at least `len`
/// writable doubles; `len` must be at least the dataset dimension.
#[no_mangle]
pub unsafe extern "C" fn qk_dataset_point(
    dataset: *const QkDataset,
    index: usize,
    out: *mut f64,
    len: usize,
) -> QkStatus {
    let Some(ds) = dataset.as_ref() else {
        return QkStatus::NullPointer;
    };
    if out.is_null() {
        return QkStatus::NullPointer;
    }
    let Some(point) = ds.0.points.get(index) else {
        set_error(format!("point index {index} out of range"));
        return QkStatus::InvalidArgument;
    };
    if len < point.len() {
        return QkStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(point.as_ptr(), out, point.len());
    QkStatus::Ok
}

/// Read the true label of point `index` into `out`.
///
/// # Safety
/// `dataset` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_dataset_label(
    dataset: *const QkDataset,
    index: usize,
    out: *mut usize,
) -> QkStatus {
    let Some(ds) = dataset.as_ref() else {
        return QkStatus::NullPointer;
    };
    if out.is_null() {
        return QkStatus::NullPointer;
    }
    let Some(labels) = &ds.0.true_labels else {
        set_error("dataset has no labels");
        return QkStatus::InvalidArgument;
    };
    let Some(&label) = labels.get(index) else {
        set_error(format!("label index {index} out of range"));
        return QkStatus::InvalidArgument;
    };
    *out = label;
    QkStatus::Ok
}

/// Release a dataset handle. Passing null is a no-op.
///
/// # Safety
/// `dataset` must be null or a live handle; it must not be used again.
#[no_mangle]
pub unsafe extern "C" fn qk_dataset_free(dataset: *mut QkDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

// ---------------------------------------------------------------- profile

/// An execution target: qubit count, batch limits, and noise rates.
pub struct QkProfile(BackendProfile);

/// Look up a built-in profile by name. Returns null when the name is
/// unknown.
///
/// # Safety
/// `name` must point to a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qk_profile_builtin(name: *const c_char) -> *mut QkProfile {
    if name.is_null() {
        set_error("name is null");
        return ptr::null_mut();
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        set_error("name is not valid UTF-8");
        return ptr::null_mut();
    };
    match qkmeans::backend::builtin_profile(name) {
        Some(p) => into_handle(QkProfile(p)),
        None => {
            set_error(format!("no builtin profile named {name:?}"));
            ptr::null_mut()
        }
    }
}

/// Load a profile from a TOML file. Returns null on failure.
///
/// # Safety
/// `path` must point to a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qk_profile_load(path: *const c_char) -> *mut QkProfile {
    let Some(path) = path_arg(path) else {
        return ptr::null_mut();
    };
    guarded(ptr::null_mut(), || {
        match qkmeans::backend::load_profile(path) {
            Ok(p) => into_handle(QkProfile(p)),
            Err(e) => {
                set_error(e);
                ptr::null_mut()
            }
        }
    })
}

/// Simulated qubit count, or 0 when `profile` is null.
///
/// # Safety
/// `profile` must be null or a live handle from a `qk_profile_*` call.
#[no_mangle]
pub unsafe extern "C" fn qk_profile_qubits(profile: *const QkProfile) -> usize {
    profile.as_ref().map_or(0, |p| p.0.qubits)
}

/// Release a profile handle. Passing null is a no-op.
///
/// # Safety
/// `profile` must be null or a live handle; it must not be used again.
#[no_mangle]
pub unsafe extern "C" fn qk_profile_free(profile: *mut QkProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

// --------------------------------------------------------------- distance

/// Estimate the distance between two `len`-dimensional vectors via the
/// swap test. Writes the distance and its square through the out
/// pointers (either may be null to skip it).
///
/// # Safety
/// `a` and `b` must point to `len` readable doubles, `options` and
/// `profile` must be live, and non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_distance(
    a: *const f64,
    b: *const f64,
    len: usize,
    options: *const QkEstimatorOptions,
    profile: *const QkProfile,
    out_distance: *mut f64,
    out_sq_distance: *mut f64,
) -> QkStatus {
    if a.is_null() || b.is_null() {
        return QkStatus::NullPointer;
    }
    let Some(opts) = options.as_ref() else {
        return QkStatus::NullPointer;
    };
    let Some(profile) = profile.as_ref() else {
        return QkStatus::NullPointer;
    };
    if len == 0 {
        set_error("len is zero");
        return QkStatus::InvalidArgument;
    }
    let a = std::slice::from_raw_parts(a, len).to_vec();
    let b = std::slice::from_raw_parts(b, len).to_vec();
    guarded(QkStatus::Panic, || {
        let cfg = match estimator_config(opts) {
            Ok(cfg) => cfg,
            Err(status) => return status,
        };
        let pair = match VectorPair::new(a, b) {
            Ok(pair) => pair,
            Err(e) => {
                set_error(e);
                return QkStatus::Error;
            }
        };
        match dist::estimate(&pair, &cfg, &profile.0, opts.seed) {
            Ok(est) => {
                if !out_distance.is_null() {
                    *out_distance = est.distance;
                }
                if !out_sq_distance.is_null() {
                    *out_sq_distance = est.sq_distance;
                }
                QkStatus::Ok
            }
            Err(e) => {
                set_error(e);
                QkStatus::Error
            }
        }
    })
}

// ----------------------------------------------------------------- kmeans

/// The result of a clustering run.
pub struct QkRun(ClusteringRun);

/// Cluster a dataset. `profile` may be null when `options->classical` is
/// set; otherwise it selects the execution target. Returns null on
/// failure.
///
/// # Safety
/// `dataset` and `options` must be live, and `profile` must be live or
/// null as described above.
#[no_mangle]
pub unsafe extern "C" fn qk_kmeans(
    dataset: *const QkDataset,
    options: *const QkKmeansOptions,
    profile: *const QkProfile,
) -> *mut QkRun {
    let Some(ds) = dataset.as_ref() else {
        set_error("dataset is null");
        return ptr::null_mut();
    };
    let Some(opts) = options.as_ref() else {
        set_error("options is null");
        return ptr::null_mut();
    };
    guarded(ptr::null_mut(), || {
        let mut cfg = ClusterConfig::new(opts.k as usize);
        cfg.epsilon = opts.epsilon;
        cfg.max_iterations = opts.max_iterations as usize;
        cfg.convergence_tol = opts.convergence_tol;
        cfg.seed = opts.seed;
        if opts.workers > 0 {
            cfg.workers = Some(opts.workers as usize);
        }

        let run = if opts.classical {
            cluster::kmeans_classical(&ds.0.points, &cfg)
        } else {
            cfg.estimator = match estimator_config(&opts.estimator) {
                Ok(est) => est,
                Err(_) => return ptr::null_mut(),
            };
            let Some(profile) = profile.as_ref() else {
                set_error("profile is null but options->classical is false");
                return ptr::null_mut();
            };
            cluster::kmeans_quantum(&ds.0.points, &cfg, &profile.0)
        };
        match run {
            Ok(run) => into_handle(QkRun(run)),
            Err(e) => {
                set_error(e);
                ptr::null_mut()
            }
        }
    })
}

/// Number of iterations performed, or 0 when `run` is null.
///
/// # Safety
/// `run` must be null or a live handle from `qk_kmeans`.
#[no_mangle]
pub unsafe extern "C" fn qk_run_iterations(run: *const QkRun) -> usize {
    run.as_ref().map_or(0, |r| r.0.iterations)
}

/// Whether the run converged within its iteration cap.
///
/// # Safety
/// `run` must be null or a live handle from `qk_kmeans`.
#[no_mangle]
pub unsafe extern "C" fn qk_run_converged(run: *const QkRun) -> bool {
    run.as_ref().is_some_and(|r| r.0.converged)
}

/// Number of surviving clusters, or 0 when `run` is null.
///
/// # Safety
/// `run` must be null or a live handle from `qk_kmeans`.
#[no_mangle]
pub unsafe extern "C" fn qk_run_k(run: *const QkRun) -> usize {
    run.as_ref().map_or(0, |r| r.0.centroids.len())
}

/// Copy the per-point cluster labels into `out`.
///
/// # Safety
/// `run` must be a live handle and `out` must point to at least `len`
/// writable size_t values; `len` must be at least the point count.
#[no_mangle]
pub unsafe extern "C" fn qk_run_labels(
    run: *const QkRun,
    out: *mut usize,
    len: usize,
) -> QkStatus {
    let Some(run) = run.as_ref() else {
        return QkStatus::NullPointer;
    };
    if out.is_null() {
        return QkStatus::NullPointer;
    }
    if len < run.0.labels.len() {
        return QkStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(run.0.labels.as_ptr(), out, run.0.labels.len());
    QkStatus::Ok
}

/// Copy the coordinates of centroid `index` into `out`.
///
/// # Safety
/// `run` must be a live handle and `out` must point to at least `len`
/// writable doubles; `len` must be at least the centroid dimension.
#[no_mangle]
pub unsafe extern "C" fn qk_run_centroid(
    run: *const QkRun,
    index: usize,
    out: *mut f64,
    len: usize,
) -> QkStatus {
    let Some(run) = run.as_ref() else {
        return QkStatus::NullPointer;
    };
    if out.is_null() {
        return QkStatus::NullPointer;
    }
    let Some(centroid) = run.0.centroids.get(index) else {
        set_error(format!("centroid index {index} out of range"));
        return QkStatus::InvalidArgument;
    };
    if len < centroid.len() {
        return QkStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(centroid.as_ptr(), out, centroid.len());
    QkStatus::Ok
}

/// Release a run handle. Passing null is a no-op.
///
/// # Safety
/// `run` must be null or a live handle; it must not be used again.
#[no_mangle]
pub unsafe extern "C" fn qk_run_free(run: *mut QkRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}
