#ifndef PROJSEP_H
#define PROJSEP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum ProjsepStatus {
  PROJSEP_STATUS_OK = 0,
  PROJSEP_STATUS_NULL_POINTER = 1,
  PROJSEP_STATUS_INVALID_ARGUMENT = 2,
  PROJSEP_STATUS_DIMENSION_MISMATCH = 3,
  PROJSEP_STATUS_NOT_SEPARABLE = 4,
  PROJSEP_STATUS_NOT_ALL_LABELS = 5,
  PROJSEP_STATUS_DEGENERATE = 6,
  PROJSEP_STATUS_PARSE = 7,
  PROJSEP_STATUS_IO = 8,
  PROJSEP_STATUS_NUMERICAL = 9,
  PROJSEP_STATUS_INTERNAL = 10,
} ProjsepStatus;

/**
 * Opaque labeled point set.
 */
typedef struct ProjsepDataset ProjsepDataset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *projsep_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *projsep_version(void);

/**
 * Builds a dataset from `n` points of dimension `d` (row-major) and `k`
 * label rows of length `n` (property-major, entries ±1).
 *
 * # Safety
 * `points` must hold `n * d` values, `labels` `k * n` values, and `out`
 * must be writable.
 */
enum ProjsepStatus projsep_dataset_new(const double *points,
                                       size_t n,
                                       size_t d,
                                       const int8_t *labels,
                                       size_t k,
                                       struct ProjsepDataset **out);

/**
 * Loads a dataset file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum ProjsepStatus projsep_dataset_load(const char *path, struct ProjsepDataset **out);

/**
 * Releases a dataset; null is ignored.
 *
 * # Safety
 * `ds` must come from this library and not be used afterwards.
 */
void projsep_dataset_free(struct ProjsepDataset *ds);

/**
 * Number of points, or 0 for null.
 *
 * # Safety
 * `ds` must be null or a live handle.
 */
size_t projsep_dataset_len(const struct ProjsepDataset *ds);

/**
 * Dimension, or 0 for null.
 *
 * # Safety
 * `ds` must be null or a live handle.
 */
size_t projsep_dataset_dim(const struct ProjsepDataset *ds);

/**
 * Number of properties, or 0 for null.
 *
 * # Safety
 * `ds` must be null or a live handle.
 */
size_t projsep_dataset_properties(const struct ProjsepDataset *ds);

/**
 * Separability of one property. `strict` selects strict separation. On
 * success `separable` is set, and `margin` receives the Euclidean margin
 * (0 unless strictly separable).
 *
 * # Safety
 * `ds` must be a live handle; `separable` and `margin` writable.
 */
enum ProjsepStatus projsep_separable(const struct ProjsepDataset *ds,
                                     size_t property_one_based,
                                     bool strict,
                                     bool *separable,
                                     double *margin);

/**
 * Unit projection vector destroying strict linear separability of
 * `hidden_one_based` while keeping the other properties separable through
 * their maximum-margin hyperplanes. With `perturb`, the vector is further
 * perturbed so that even weak separability is lost. Writes `d` values to
 * `w_out`.
 *
 * # Safety
 * `ds` must be a live handle and `w_out` must hold `dim` values.
 */
enum ProjsepStatus projsep_eliminating_projection(const struct ProjsepDataset *ds,
                                                  size_t hidden_one_based,
                                                  bool perturb,
                                                  double *w_out);

/**
 * SVM overlap `f(P, w)` of one property after projecting along `w` (length
 * `dim`, need not be unit).
 *
 * # Safety
 * `ds` must be a live handle, `w` must hold `dim` values and `value` be
 * writable.
 */
enum ProjsepStatus projsep_svm_overlap(const struct ProjsepDataset *ds,
                                       size_t property_one_based,
                                       const double *w,
                                       double lambda,
                                       double *value);

/**
 * Maximum Euclidean margin of one property, or a negative value when the
 * property is not strictly separable.
 *
 * # Safety
 * `ds` must be a live handle and `margin` writable.
 */
enum ProjsepStatus projsep_max_margin(const struct ProjsepDataset *ds,
                                      size_t property_one_based,
                                      double *margin);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PROJSEP_H */
