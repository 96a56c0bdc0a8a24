#ifndef EISENSTARK_H
#define EISENSTARK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EsFormat {
  ES_FORMAT_CSV = 0,
  ES_FORMAT_JSON = 1,
  ES_FORMAT_MARKDOWN = 2,
} EsFormat;

typedef enum EsStatus {
  ES_STATUS_OK = 0,
  ES_STATUS_NULL_POINTER = 1,
  // The request failed an admissibility gate or an argument was malformed.
  ES_STATUS_VALIDATION = 2,
  // The pipeline detected an internal inconsistency.
  ES_STATUS_INTERNAL = 3,
  // The value is infinite (the Merel class vanishes).
  ES_STATUS_INFINITY = 4,
  // The value is undefined for this row.
  ES_STATUS_UNDEFINED = 5,
  ES_STATUS_INVALID_UTF8 = 6,
  ES_STATUS_PANIC = 7,
} EsStatus;

// Opaque row handle.
typedef struct EsRow EsRow;

// Opaque table handle.
typedef struct EsTable EsTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last non-OK status on this thread, or NULL. The pointer
// stays valid until the next call into this library on the same thread.
const char *es_last_error(void);

// Library version as a static NUL-terminated string.
const char *es_version(void);

// Sets the on-disk cache directory; NULL disables it.
//
// # Safety
// `dir` is NULL or a valid NUL-terminated string.
enum EsStatus es_set_cache_dir(const char *dir);

// Exponent of the Merel unit in F_p.
//
// # Safety
// `out` is a valid pointer.
enum EsStatus es_merel_log(uint64_t q, uint64_t p, uint64_t *out);

// Exponent of the reduced Stark unit in F_p.
//
// # Safety
// `out` is a valid pointer.
enum EsStatus es_stark_log(int64_t disc, uint64_t q, uint64_t p, uint64_t *out);

// eta in F_p. The caller is responsible for the admissibility of the row.
//
// # Safety
// `out` is a valid pointer.
enum EsStatus es_eta(int64_t disc, uint64_t p, uint64_t q, uint64_t *out);

// Computes a validated row. On success `*out` owns a new handle.
//
// # Safety
// `out` is a valid pointer.
enum EsStatus es_row_compute(int64_t disc, uint64_t p, uint64_t q, struct EsRow **out);

// # Safety
// `row` is NULL or a handle from `es_row_compute` not yet freed.
void es_row_free(struct EsRow *row);

// Exponent of the Merel unit.
//
// # Safety
// `row` is a live handle and `out` a valid pointer.
enum EsStatus es_row_merel_log(const struct EsRow *row, uint64_t *out);

// Exponent of the reduced Stark unit.
//
// # Safety
// `row` is a live handle and `out` a valid pointer.
enum EsStatus es_row_stark_log(const struct EsRow *row, uint64_t *out);

// stark_log / merel_log; `Infinity` when the Merel class vanishes.
//
// # Safety
// `row` is a live handle and `out` a valid pointer.
enum EsStatus es_row_log_ratio(const struct EsRow *row, uint64_t *out);

// eta; `Undefined` when the Mazur gate fails.
//
// # Safety
// `row` is a live handle and `out` a valid pointer.
enum EsStatus es_row_eta(const struct EsRow *row, uint64_t *out);

// log_ratio / eta.
//
// # Safety
// `row` is a live handle and `out` a valid pointer.
enum EsStatus es_row_ratio(const struct EsRow *row, uint64_t *out);

// eta / log_ratio.
//
// # Safety
// `row` is a live handle and `out` a valid pointer.
enum EsStatus es_row_ratio_inv(const struct EsRow *row, uint64_t *out);

// `p` and `q` of a row.
//
// # Safety
// `row` is a live handle; `p` and `q` are valid pointers.
enum EsStatus es_row_primes(const struct EsRow *row, uint64_t *p, uint64_t *q);

// Computes every admissible row up to the bounds. Failed rows stay in the
// table and report `Internal` from their getters.
//
// # Safety
// `out` is a valid pointer.
enum EsStatus es_table_compute(int64_t disc,
                               uint64_t pmax,
                               uint64_t qmax,
                               uintptr_t jobs,
                               struct EsTable **out);

// # Safety
// `table` is a live handle.
uintptr_t es_table_len(const struct EsTable *table);

// Borrowed row `i`, valid while the table lives; NULL if out of range.
//
// # Safety
// `table` is a live handle.
const struct EsRow *es_table_row(const struct EsTable *table, uintptr_t i);

// Renders the table. `*out` receives a string released with `es_string_free`.
//
// # Safety
// `table` is a live handle and `out` a valid pointer.
enum EsStatus es_table_render(const struct EsTable *table, enum EsFormat format, char **out);

// # Safety
// `table` is NULL or a handle from `es_table_compute` not yet freed.
void es_table_free(struct EsTable *table);

// # Safety
// `s` is NULL or a string returned by this library not yet freed.
void es_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EISENSTARK_H */
