#ifndef QKMEANS_H
#define QKMEANS_H

/* Generated from the qkmeans-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code for calls that do not return a handle.
 */
typedef enum QkStatus {
  /**
   * The call succeeded.
   */
  QK_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  QK_STATUS_NULL_POINTER = 1,
  /**
   * An argument was out of range or otherwise malformed.
   */
  QK_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A caller-provided buffer is too small; nothing was written.
   */
  QK_STATUS_BUFFER_TOO_SMALL = 3,
  /**
   * The underlying library reported an error; see `qk_last_error`.
   */
  QK_STATUS_ERROR = 4,
  /**
   * The call panicked internally; see `qk_last_error`.
   */
  QK_STATUS_PANIC = 5,
} QkStatus;

/**
 * A labeled or unlabeled collection of real-valued points.
 */
typedef struct QkDataset QkDataset;

/**
 * An execution target: qubit count, batch limits, and noise rates.
 */
typedef struct QkProfile QkProfile;

/**
 * The result of a clustering run.
 */
typedef struct QkRun QkRun;

/**
 * Which state preparation the swap test uses.
 *
 * One of `QK_EMBEDDING_AMPLITUDE` or `QK_EMBEDDING_ANGLE`.
 */
typedef uint32_t QkEmbedding;

/**
 * How a single distance is estimated.
 */
typedef struct QkEstimatorOptions {
  /**
   * State preparation, `QK_EMBEDDING_AMPLITUDE` or `QK_EMBEDDING_ANGLE`.
   */
  QkEmbedding embedding;
  /**
   * When false, read exact probabilities instead of sampling shots.
   */
  bool sampled;
  /**
   * Shots per circuit when `sampled` is set.
   */
  uint64_t shots;
  /**
   * Independent repetitions averaged into the estimate (at least 1).
   */
  uint32_t repetitions;
  /**
   * Coordinates per subspace block (even, at least 2), or 0 to run
   * each pair as one full-width circuit.
   */
  uint32_t block_size;
  /**
   * Apply readout error mitigation to measured frequencies.
   */
  bool mitigate;
  /**
   * Base seed for shot sampling.
   */
  uint64_t seed;
} QkEstimatorOptions;

/**
 * Full clustering configuration.
 */
typedef struct QkKmeansOptions {
  /**
   * Number of clusters to start from.
   */
  uint32_t k;
  /**
   * Minimum pairwise distance between initial centroids.
   */
  double epsilon;
  /**
   * Iteration cap.
   */
  uint32_t max_iterations;
  /**
   * Convergence threshold on the largest centroid displacement.
   */
  double convergence_tol;
  /**
   * Seed for initialization and shot sampling.
   */
  uint64_t seed;
  /**
   * When true, run classical Lloyd iterations and ignore `estimator`
   * and the profile argument.
   */
  bool classical;
  /**
   * Distance estimator used when `classical` is false.
   */
  struct QkEstimatorOptions estimator;
  /**
   * Worker queues for batch execution, or 0 for a single submission.
   */
  uint32_t workers;
} QkKmeansOptions;

/**
 * Pair state on amplitudes; distances are squared Euclidean.
 */
#define QK_EMBEDDING_AMPLITUDE 0

/**
 * One qubit per coordinate pair; distances follow the angle metric.
 */
#define QK_EMBEDDING_ANGLE 1

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on the calling thread, or null if
 * no call has failed yet. The pointer stays valid until the next failing
 * call on the same thread.
 */
const char *qk_last_error(void);

/**
 * Library version as a static string; do not free.
 */
const char *qk_version(void);

/**
 * Load a dataset from a CSV file with an `f0,f1,...` header and an
 * optional trailing `label` column. Returns null on failure.
 *
 * # Safety
 * `path` must point to a NUL-terminated string.
 */
struct QkDataset *qk_dataset_load_csv(const char *path);

/**
 * Generate `k` Gaussian clusters of `per_cluster` points each in
 * `[0, 10]^dim`, with centers at least `min_sep` apart. Returns null on
 * failure.
 */
struct QkDataset *qk_dataset_generate(size_t k,
                                      size_t per_cluster,
                                      size_t dim,
                                      double variance,
                                      double min_sep,
                                      uint64_t seed);

/**
 * Number of points, or 0 when `dataset` is null.
 *
 * # Safety
 * `dataset` must be null or a live handle from a `qk_dataset_*` call.
 */
size_t qk_dataset_len(const struct QkDataset *dataset);

/**
 * Coordinates per point, or 0 when `dataset` is null or empty.
 *
 * # Safety
 * `dataset` must be null or a live handle from a `qk_dataset_*` call.
 */
size_t qk_dataset_dim(const struct QkDataset *dataset);

/**
 * Whether the dataset carries true labels.
 *
 * # Safety
 * `dataset` must be null or a live handle from a `qk_dataset_*` call.
 */
bool qk_dataset_has_labels(const struct QkDataset *dataset);

/**
 * Copy the coordinates of point `index` into `out`.
 *
 * # Safety
 * `dataset` must be a live handle and `out` must point to at least `len`
 * writable doubles; `len` must be at least the dataset dimension.
 */
enum QkStatus qk_dataset_point(const struct QkDataset *dataset,
                               size_t index,
                               double *out,
                               size_t len);

/**
 * Read the true label of point `index` into `out`.
 *
 * # Safety
 * `dataset` must be a live handle and `out` must be writable.
 */
enum QkStatus qk_dataset_label(const struct QkDataset *dataset, size_t index, size_t *out);

/**
 * Release a dataset handle. Passing null is a no-op.
 *
 * # Safety
 * `dataset` must be null or a live handle; it must not be used again.
 */
void qk_dataset_free(struct QkDataset *dataset);

/**
 * Look up a built-in profile by name. Returns null when the name is
 * unknown.
 *
 * # Safety
 * `name` must point to a NUL-terminated string.
 */
struct QkProfile *qk_profile_builtin(const char *name);

/**
 * Load a profile from a TOML file. Returns null on failure.
 *
 * # Safety
 * `path` must point to a NUL-terminated string.
 */
struct QkProfile *qk_profile_load(const char *path);

/**
 * Simulated qubit count, or 0 when `profile` is null.
 *
 * # Safety
 * `profile` must be null or a live handle from a `qk_profile_*` call.
 */
size_t qk_profile_qubits(const struct QkProfile *profile);

/**
 * Release a profile handle. Passing null is a no-op.
 *
 * # Safety
 * `profile` must be null or a live handle; it must not be used again.
 */
void qk_profile_free(struct QkProfile *profile);

/**
 * Estimate the distance between two `len`-dimensional vectors via the
 * swap test. Writes the distance and its square through the out
 * pointers (either may be null to skip it).
 *
 * # Safety
 * `a` and `b` must point to `len` readable doubles, `options` and
 * `profile` must be live, and non-null out pointers must be writable.
 */
enum QkStatus qk_distance(const double *a,
                          const double *b,
                          size_t len,
                          const struct QkEstimatorOptions *options,
                          const struct QkProfile *profile,
                          double *out_distance,
                          double *out_sq_distance);

/**
 * Cluster a dataset. `profile` may be null when `options->classical` is
 * set; otherwise it selects the execution target. Returns null on
 * failure.
 *
 * # Safety
 * `dataset` and `options` must be live, and `profile` must be live or
 * null as described above.
 */
struct QkRun *qk_kmeans(const struct QkDataset *dataset,
                        const struct QkKmeansOptions *options,
                        const struct QkProfile *profile);

/**
 * Number of iterations performed, or 0 when `run` is null.
 *
 * # Safety
 * `run` must be null or a live handle from `qk_kmeans`.
 */
size_t qk_run_iterations(const struct QkRun *run);

/**
 * Whether the run converged within its iteration cap.
 *
 * # Safety
 * `run` must be null or a live handle from `qk_kmeans`.
 */
bool qk_run_converged(const struct QkRun *run);

/**
 * Number of surviving clusters, or 0 when `run` is null.
 *
 * # Safety
 * `run` must be null or a live handle from `qk_kmeans`.
 */
size_t qk_run_k(const struct QkRun *run);

/**
 * Copy the per-point cluster labels into `out`.
 *
 * # Safety
 * `run` must be a live handle and `out` must point to at least `len`
 * writable size_t values; `len` must be at least the point count.
 */
enum QkStatus qk_run_labels(const struct QkRun *run, size_t *out, size_t len);

/**
 * Copy the coordinates of centroid `index` into `out`.
 *
 * # Safety
 * `run` must be a live handle and `out` must point to at least `len`
 * writable doubles; `len` must be at least the centroid dimension.
 */
enum QkStatus qk_run_centroid(const struct QkRun *run, size_t index, double *out, size_t len);

/**
 * Release a run handle. Passing null is a no-op.
 *
 * # Safety
 * `run` must be null or a live handle; it must not be used again.
 */
void qk_run_free(struct QkRun *run);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QKMEANS_H */
