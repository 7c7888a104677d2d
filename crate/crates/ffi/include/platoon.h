#ifndef PLATOON_H
#define PLATOON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PlatoonAlgorithm {
  PLATOON_ALGORITHM_MAXGROWTH = 0,
  PLATOON_ALGORITHM_FRB = 1,
  PLATOON_ALGORITHM_ORACLE = 2,
} PlatoonAlgorithm;

/**
 * Result codes.
 */
typedef enum PlatoonStatus {
  PLATOON_STATUS_OK = 0,
  PLATOON_STATUS_NULL_ARGUMENT = 1,
  PLATOON_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed file, bad parameter or other rejected input.
   */
  PLATOON_STATUS_INVALID_INPUT = 3,
  /**
   * The brute-force miner refused an instance that is too large.
   */
  PLATOON_STATUS_LIMIT_EXCEEDED = 4,
  PLATOON_STATUS_IO = 5,
  PLATOON_STATUS_INDEX_OUT_OF_RANGE = 6,
  PLATOON_STATUS_INTERNAL = 7,
} PlatoonStatus;

/**
 * A loaded set of travel paths.
 */
typedef struct PlatoonDataset PlatoonDataset;

/**
 * Maximal patterns of one mining run, with their serialized form.
 */
typedef struct PlatoonResult PlatoonResult;

/**
 * Mining thresholds; `eps` is in dataset ticks.
 */
typedef struct PlatoonParams {
  size_t m;
  size_t k;
  size_t d;
  int64_t eps;
} PlatoonParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Reads a paths file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PlatoonStatus platoon_dataset_load(const char *path, struct PlatoonDataset **out);

/**
 * Parses the text of a paths file.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PlatoonStatus platoon_dataset_parse(const char *text, struct PlatoonDataset **out);

/**
 * Number of objects, 0 for a null handle.
 *
 * # Safety
 * `dataset` must be null or a live handle.
 */
size_t platoon_dataset_num_objects(const struct PlatoonDataset *dataset);

/**
 * # Safety
 * `dataset` must be null or a handle not yet freed.
 */
void platoon_dataset_free(struct PlatoonDataset *dataset);

/**
 * Mines the maximal patterns of `dataset` with all pruning enabled.
 *
 * # Safety
 * `dataset` and `params` must be valid, `out` a valid pointer.
 */
enum PlatoonStatus platoon_mine(const struct PlatoonDataset *dataset,
                                const struct PlatoonParams *params,
                                enum PlatoonAlgorithm algorithm,
                                struct PlatoonResult **out);

/**
 * Number of patterns, 0 for a null handle.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
size_t platoon_result_len(const struct PlatoonResult *result);

/**
 * Group size and route length of pattern `index`.
 *
 * # Safety
 * `result` must be a live handle; `num_objects` and `route_len` valid
 * pointers.
 */
enum PlatoonStatus platoon_result_pattern_size(const struct PlatoonResult *result,
                                               size_t index,
                                               size_t *num_objects,
                                               size_t *route_len);

/**
 * The patterns as JSON lines (provenance record first). Owned by the
 * result handle.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
const char *platoon_result_jsonl(const struct PlatoonResult *result);

/**
 * # Safety
 * `result` must be null or a handle not yet freed.
 */
void platoon_result_free(struct PlatoonResult *result);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on this thread.
 */
const char *platoon_last_error(void);

/**
 * Library version, static storage.
 */
const char *platoon_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLATOON_H */
