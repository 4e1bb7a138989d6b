#ifndef MONORD_H
#define MONORD_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum MonordStatus {
  MONORD_STATUS_OK = 0,
  MONORD_STATUS_NULL_POINTER = 1,
  MONORD_STATUS_INVALID_ARGUMENT = 2,
  MONORD_STATUS_PARSE = 3,
  MONORD_STATUS_NOT_AN_ORDER = 4,
  MONORD_STATUS_NOT_NORMALIZED = 5,
  MONORD_STATUS_NOT_A_LATTICE = 6,
  MONORD_STATUS_NEGATIVE_ENTRY = 7,
  MONORD_STATUS_SEARCH_TOO_LARGE = 8,
  MONORD_STATUS_BUDGET_EXCEEDED = 9,
  MONORD_STATUS_PANIC = 10,
} MonordStatus;

// Opaque level matrix.
typedef struct MonordLevel MonordLevel;

// Opaque classification report.
typedef struct MonordReport MonordReport;

// First failure of the order condition. `kind` is 0 when the level is an
// order, 1 for a nonzero diagonal entry `(i, i)` and 2 for a triangle
// `m[i][k] > m[i][j] + m[j][k]`.
typedef struct MonordViolation {
  uint32_t kind;
  size_t i;
  size_t j;
  size_t k;
} MonordViolation;

// Flattened verdicts of a report. Fields other than `is_order` are
// meaningful only when `is_order` is set; `period` is 0 and `a` is 0 when
// the order is not Eichler (and `a` is 0 for period one).
typedef struct MonordVerdicts {
  bool is_order;
  bool is_gorenstein;
  bool is_hereditary;
  bool is_bass;
  bool is_upper_triangular;
  size_t period;
  int64_t a;
  // 0 hereditary, 1 Eichler of period two, 2 not Bass.
  uint32_t bass_reason;
} MonordVerdicts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread. The pointer stays
// valid until the next failing call on the same thread.
const char *monord_last_error(void);

// Static description of a status code.
const char *monord_status_str(enum MonordStatus status);

// Builds a level from `n * n` row-major entries.
//
// # Safety
// `entries` must point to `len` readable `int64_t`; `out` must be writable.
enum MonordStatus monord_level_new(size_t n,
                                   const int64_t *entries,
                                   size_t len,
                                   struct MonordLevel **out);

// Parses a level file (text or JSON form).
//
// # Safety
// `text` must be a NUL-terminated UTF-8 string; `out` must be writable.
enum MonordStatus monord_level_parse(const char *text, struct MonordLevel **out);

// # Safety
// `level` must be null or a handle from this library not yet freed.
void monord_level_free(struct MonordLevel *level);

// Matrix size, or 0 for a null handle.
//
// # Safety
// `level` must be null or a live handle.
size_t monord_level_n(const struct MonordLevel *level);

// Copies the `n * n` row-major entries into `buf`.
//
// # Safety
// `level` must be a live handle and `buf` must hold `len` writable values.
enum MonordStatus monord_level_entries(const struct MonordLevel *level, int64_t *buf, size_t len);

// Order condition; `violation` may be null.
//
// # Safety
// `level` must be a live handle; `is_order` must be writable.
enum MonordStatus monord_is_order(const struct MonordLevel *level,
                                  bool *is_order,
                                  struct MonordViolation *violation);

// # Safety
// `level` must be a live handle; `out` must be writable.
enum MonordStatus monord_is_gorenstein(const struct MonordLevel *level, bool *out);

// Gorenstein verdict via projectivity of the dual's columns.
//
// # Safety
// `level` must be a live handle; `out` must be writable.
enum MonordStatus monord_is_gorenstein_by_duality(const struct MonordLevel *level, bool *out);

// # Safety
// `level` must be a live handle; `out` must be writable.
enum MonordStatus monord_is_bass(const struct MonordLevel *level, size_t search_cap, bool *out);

// Bass by overorder enumeration. `witness` may be null; when non-null it
// receives a non-Gorenstein overorder handle, or null if the order is Bass.
//
// # Safety
// `level` must be a live handle; `is_bass` must be writable.
enum MonordStatus monord_bass_oracle(const struct MonordLevel *level,
                                     uint64_t budget,
                                     bool *is_bass,
                                     struct MonordLevel **witness);

// # Safety
// `level` must be a live handle; `count` must be writable.
enum MonordStatus monord_overorder_count(const struct MonordLevel *level,
                                         uint64_t budget,
                                         size_t *count);

// Zero-first-row conjugate.
//
// # Safety
// `level` must be a live handle; `out` must be writable.
enum MonordStatus monord_normalize_positive(const struct MonordLevel *level,
                                            struct MonordLevel **out);

// # Safety
// `level` must be a live handle; `out` must be writable.
enum MonordStatus monord_canonical_form(const struct MonordLevel *level,
                                        size_t search_cap,
                                        struct MonordLevel **out);

// Raw dual (`-m^t`) and its column-normalized form. Either output may be null.
//
// # Safety
// `level` must be a live handle.
enum MonordStatus monord_dual_level(const struct MonordLevel *level,
                                    struct MonordLevel **raw,
                                    struct MonordLevel **normalized);

// # Safety
// `level` must be a live handle; `out` must be writable.
enum MonordStatus monord_truncate(const struct MonordLevel *level, struct MonordLevel **out);

// Full classification. Non-orders still produce a report.
//
// # Safety
// `level` must be a live handle; `out` must be writable.
enum MonordStatus monord_classify(const struct MonordLevel *level,
                                  size_t search_cap,
                                  struct MonordReport **out);

// # Safety
// `report` must be null or a live report handle.
void monord_report_free(struct MonordReport *report);

// # Safety
// `report` must be a live report handle; `out` must be writable.
enum MonordStatus monord_report_verdicts(const struct MonordReport *report,
                                         struct MonordVerdicts *out);

// The report as JSON; release with [`monord_string_free`]. Null on error.
//
// # Safety
// `report` must be a live report handle.
char *monord_report_json(const struct MonordReport *report);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void monord_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MONORD_H */
