#ifndef PD3_H
#define PD3_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Opaque decision result handle.
 */
typedef struct Pd3Report Pd3Report;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string (do not free).
 */
const char *pd3_version(void);

/**
 * Parse a document and run the decision pipeline.
 *
 * Returns an opaque report handle, or NULL on error (parse failure,
 * invalid embedding, inconsistent character). The handle must be freed
 * with [`pd3_report_free`].
 *
 * # Safety
 * `text` must be a valid NUL-terminated string. `error_out`, when not
 * NULL, must point to writable storage for one `char *`.
 */
struct Pd3Report *pd3_check(const char *text, char **error_out);

/**
 * Verdict code of a report.
 *
 * # Safety
 * `report` must be NULL or a handle returned by [`pd3_check`] that has
 * not been freed.
 */
int pd3_report_verdict(const struct Pd3Report *report);

/**
 * Full JSON certificate of a report (caller frees via
 * [`pd3_string_free`]).
 *
 * # Safety
 * `report` must be NULL or a live handle from [`pd3_check`].
 */
char *pd3_report_json(const struct Pd3Report *report);

/**
 * Canonicalized input echo of a report (caller frees).
 *
 * # Safety
 * `report` must be NULL or a live handle from [`pd3_check`].
 */
char *pd3_report_input(const struct Pd3Report *report);

/**
 * Release a report handle. NULL is accepted.
 *
 * # Safety
 * `report` must be NULL or a handle from [`pd3_check`], freed at most
 * once.
 */
void pd3_report_free(struct Pd3Report *report);

/**
 * Enumerate admissible linear trees; returns newline-separated JSON
 * documents (caller frees), or NULL with an error message when the
 * bounds are out of range.
 *
 * # Safety
 * `error_out`, when not NULL, must point to writable storage.
 */
char *pd3_enumerate(uint32_t max_vertices, uint32_t max_order, char **error_out);

/**
 * Release a string returned by this library. NULL is accepted.
 *
 * # Safety
 * `s` must be NULL or a string returned by a `pd3_*` function, freed at
 * most once.
 */
void pd3_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PD3_H */
