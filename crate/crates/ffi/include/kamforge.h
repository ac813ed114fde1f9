#ifndef KAMFORGE_H
#define KAMFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes of every fallible entry point.
typedef enum KfStatus {
  KF_STATUS_OK = 0,
  KF_STATUS_NULL_POINTER = 1,
  KF_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON or a document that fails schema validation.
  KF_STATUS_SCHEMA = 3,
  // The computation ran and failed; for scenarios the report is still returned.
  KF_STATUS_COMPUTATION = 4,
  // Operands live in different series spaces.
  KF_STATUS_MISMATCH = 5,
  KF_STATUS_IO = 6,
  KF_STATUS_PANIC = 7,
} KfStatus;

// Opaque truncated Poisson series.
typedef struct KfSeries KfSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Owned by the library; valid
// until the next call on the same thread.
const char *kf_last_error(void);

// Library version as a static NUL-terminated string.
const char *kf_version(void);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void kf_string_free(char *s);

// Parses the canonical series JSON into a new handle.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum KfStatus kf_series_from_json(const char *json, struct KfSeries **out);

// Canonical JSON of `s`; free the result with [`kf_string_free`].
//
// # Safety
// `s` must be a live handle; `out` must be writable.
enum KfStatus kf_series_to_json(const struct KfSeries *s, char **out);

// Number of stored (nonzero) terms, or 0 for a null handle.
//
// # Safety
// `s` must be null or a live handle.
uintptr_t kf_series_len(const struct KfSeries *s);

// # Safety
// `s` must be null or a handle from this library that has not been freed.
void kf_series_free(struct KfSeries *s);

// `a + b` as a new handle.
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
enum KfStatus kf_series_add(const struct KfSeries *a,
                            const struct KfSeries *b,
                            struct KfSeries **out);

// Truncated product `a·b`.
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
enum KfStatus kf_series_mul(const struct KfSeries *a,
                            const struct KfSeries *b,
                            struct KfSeries **out);

// Poisson bracket `{a, b}`.
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
enum KfStatus kf_series_bracket(const struct KfSeries *a,
                                const struct KfSeries *b,
                                struct KfSeries **out);

// `exp(ad_S) f` for a Hamiltonian generator `S`.
//
// # Safety
// `generator`, `f` must be live handles; `out` must be writable.
enum KfStatus kf_series_flow(const struct KfSeries *generator,
                             const struct KfSeries *f,
                             struct KfSeries **out);

// Exact equality of two series (same space and coefficients). Null handles compare unequal.
//
// # Safety
// `a`, `b` must be null or live handles.
bool kf_series_equal(const struct KfSeries *a, const struct KfSeries *b);

// Runs a scenario document and returns its JSON report in `report`.
//
// Returns `Computation` when the scenario failed but a report was produced, `Schema` (with
// no report) for invalid documents.
//
// # Safety
// `scenario_json` must be a NUL-terminated string; `report` must be writable.
enum KfStatus kf_run_scenario(const char *scenario_json, char **report);

// Runs a scenario file and writes the report atomically to `out_path`.
//
// # Safety
// Both paths must be NUL-terminated strings.
enum KfStatus kf_run_scenario_file(const char *path, const char *out_path);

// Invariant suite report as JSON. Returns `Computation` if any property failed.
//
// # Safety
// `report` must be writable.
enum KfStatus kf_selftest(uint64_t seed, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KAMFORGE_H */
