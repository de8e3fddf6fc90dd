#ifndef MMIFS_H
#define MMIFS_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  MMIFS_STATUS_OK = 0,
  MMIFS_STATUS_NULL_POINTER = 1,
  MMIFS_STATUS_INVALID_UTF8 = 2,
  MMIFS_STATUS_IO = 3,
  MMIFS_STATUS_INVALID_DATA = 4,
  MMIFS_STATUS_INVALID_PARAMETER = 5,
  MMIFS_STATUS_OUT_OF_RANGE = 6,
  MMIFS_STATUS_PANIC = 7,
} MmifsStatus;

/**
 * A loaded dataset.
 */
typedef struct MmifsDataset MmifsDataset;

/**
 * The outcome of one optimizer run.
 */
typedef struct MmifsRunResult MmifsRunResult;

typedef struct {
  size_t n;
  double w_plus;
  double w_minus;
  double statistic;
  double p_value;
} MmifsWilcoxon;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *mmifs_last_error(void);

/**
 * Library version as a static string.
 */
const char *mmifs_version(void);

/**
 * Loads a CSV. `label_column` is a header name or a 0-based column index.
 *
 * # Safety
 * `path` and `label_column` must be NUL-terminated strings; `out` must be
 * writable.
 */
MmifsStatus mmifs_dataset_load_csv(const char *path, const char *label_column, MmifsDataset **out);

/**
 * # Safety
 * `d` must be null or a handle from [`mmifs_dataset_load_csv`].
 */
size_t mmifs_dataset_n_features(const MmifsDataset *d);

/**
 * # Safety
 * `d` must be null or a handle from [`mmifs_dataset_load_csv`].
 */
size_t mmifs_dataset_n_instances(const MmifsDataset *d);

/**
 * # Safety
 * `d` must be null or a handle from [`mmifs_dataset_load_csv`].
 */
size_t mmifs_dataset_n_classes(const MmifsDataset *d);

/**
 * # Safety
 * `d` must be null or a handle not yet freed.
 */
void mmifs_dataset_free(MmifsDataset *d);

/**
 * Scales features to [0,1], splits stratified by class, and runs one
 * search. `algorithm` is `mmifs`, `blind_paes` or `random`.
 * `optimizer_json` is null or a JSON object of optimizer settings; missing
 * keys take their defaults.
 *
 * # Safety
 * `d` must be a live dataset handle, the strings NUL-terminated (or null
 * where allowed), and `out` writable.
 */
MmifsStatus mmifs_run(const MmifsDataset *d,
                      const char *algorithm,
                      const char *optimizer_json,
                      double train_fraction,
                      uint64_t split_seed,
                      MmifsRunResult **out);

/**
 * # Safety
 * `r` must be null or a live result handle.
 */
size_t mmifs_result_front_len(const MmifsRunResult *r);

/**
 * # Safety
 * `r` must be null or a live result handle.
 */
uint64_t mmifs_result_eval_count(const MmifsRunResult *r);

/**
 * Objectives of front point `i`; the front is sorted by feature count.
 *
 * # Safety
 * `r` must be a live result handle; the out pointers writable.
 */
MmifsStatus mmifs_result_front_point(const MmifsRunResult *r,
                                     size_t i,
                                     double *error_pct,
                                     size_t *n_selected);

/**
 * Writes the selection mask of front point `i` as 0/1 bytes. `mask_len`
 * must equal the dataset's feature count.
 *
 * # Safety
 * `r` must be a live result handle; `mask` must hold `mask_len` bytes.
 */
MmifsStatus mmifs_result_front_mask(const MmifsRunResult *r,
                                    size_t i,
                                    uint8_t *mask,
                                    size_t mask_len);

/**
 * Full run record as JSON. Release with [`mmifs_string_free`].
 *
 * # Safety
 * `r` must be a live result handle; `out` writable.
 */
MmifsStatus mmifs_result_to_json(const MmifsRunResult *r, char **out);

/**
 * # Safety
 * `r` must be null or a result handle not yet freed.
 */
void mmifs_result_free(MmifsRunResult *r);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void mmifs_string_free(char *s);

/**
 * Normalized hypervolume of a front given as parallel arrays, reference
 * point (100 %, `n_features`).
 *
 * # Safety
 * Arrays must hold `len` elements; `out` writable.
 */
MmifsStatus mmifs_hypervolume(const double *error_pct,
                              const size_t *n_selected,
                              size_t len,
                              size_t n_features,
                              double *out);

/**
 * Fraction of front B weakly dominated by some point of front A.
 *
 * # Safety
 * Arrays must hold the stated number of elements; `out` writable.
 */
MmifsStatus mmifs_c_metric(const double *a_error_pct,
                           const size_t *a_n_selected,
                           size_t a_len,
                           const double *b_error_pct,
                           const size_t *b_n_selected,
                           size_t b_len,
                           size_t n_features,
                           double *out);

/**
 * Exact two-sided Wilcoxon signed-rank test on paired differences.
 *
 * # Safety
 * `diffs` must hold `len` elements; `out` writable.
 */
MmifsStatus mmifs_wilcoxon(const double *diffs, size_t len, MmifsWilcoxon *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MMIFS_H */
