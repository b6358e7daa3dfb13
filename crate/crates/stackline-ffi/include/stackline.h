#ifndef STACKLINE_H
#define STACKLINE_H

/* Generated by cbindgen from stackline-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes for every FFI entry point.
 */
typedef enum StacklineStatus {
  STACKLINE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  STACKLINE_STATUS_NULL_POINTER = 1,
  /**
   * Arguments were structurally invalid (bad UTF-8, wrong shape).
   */
  STACKLINE_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The model file could not be read.
   */
  STACKLINE_STATUS_IO = 3,
  /**
   * The model file could not be parsed.
   */
  STACKLINE_STATUS_PARSE = 4,
  /**
   * The computation itself failed; see the last error message.
   */
  STACKLINE_STATUS_INTERNAL = 5,
} StacklineStatus;

/**
 * Opaque handle around a loaded model.
 */
typedef struct StacklineModel StacklineModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; do not free.
 */
const char *stackline_version(void);

/**
 * Returns the calling thread's last error message as a newly allocated
 * string, or null when no error has occurred. Free it with
 * [`stackline_string_free`].
 */
char *stackline_last_error_message(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned by
 * [`stackline_last_error_message`] (or null), not yet freed.
 */
void stackline_string_free(char *s);

/**
 * Loads a model file (single learner or stacked ensemble) and writes the
 * new handle to `out_model`.
 *
 * # Safety
 * `path` must point to a NUL-terminated string and `out_model` to
 * writable storage for one pointer; both must stay valid for the call.
 */
enum StacklineStatus stackline_model_load(const char *path, struct StacklineModel **out_model);

/**
 * Releases a model handle. Null is a no-op.
 *
 * # Safety
 * `model` must be a handle from [`stackline_model_load`], not yet freed.
 */
void stackline_model_free(struct StacklineModel *model);

/**
 * Writes the model's expected feature count to `out_n_features`.
 *
 * # Safety
 * `model` must be a live handle; `out_n_features` must be writable.
 */
enum StacklineStatus stackline_model_num_features(const struct StacklineModel *model,
                                                  size_t *out_n_features);

/**
 * Positive-class probabilities for `n_rows` x `n_features` row-major
 * features; writes `n_rows` doubles to `out_probabilities`.
 *
 * # Safety
 * `model` must be a live handle; `features` must hold
 * `n_rows * n_features` readable doubles and `out_probabilities`
 * `n_rows` writable doubles.
 */
enum StacklineStatus stackline_model_predict_proba(const struct StacklineModel *model,
                                                   const double *features,
                                                   size_t n_rows,
                                                   size_t n_features,
                                                   double *out_probabilities);

/**
 * Hard labels (0/1 at the 0.5 threshold); writes `n_rows` bytes.
 *
 * # Safety
 * Same contract as [`stackline_model_predict_proba`], with `out_labels`
 * holding `n_rows` writable bytes.
 */
enum StacklineStatus stackline_model_predict(const struct StacklineModel *model,
                                             const double *features,
                                             size_t n_rows,
                                             size_t n_features,
                                             uint8_t *out_labels);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STACKLINE_H */
