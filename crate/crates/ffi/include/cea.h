#ifndef CEA_H
#define CEA_H

/* This file is generated by cbindgen from cea-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every API function.
typedef enum CeaStatus {
  // The call succeeded.
  CEA_STATUS_OK = 0,
  // A required pointer argument was null.
  CEA_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  CEA_STATUS_UTF8_ERROR = 2,
  // The document could not be parsed.
  CEA_STATUS_PARSE_ERROR = 3,
  // No entity with the given name exists in the document.
  CEA_STATUS_NOT_FOUND = 4,
  // The inputs violate a precondition of the operation.
  CEA_STATUS_INVALID_INPUT = 5,
  // The computation failed internally.
  CEA_STATUS_COMPUTE_ERROR = 6,
} CeaStatus;

// Opaque document handle.
typedef struct CeaDocument CeaDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *cea_version(void);

// Static name of a status code.
const char *cea_status_name(enum CeaStatus status);

// Detailed message for the most recent failure on this thread, or null.
// The caller owns the returned string and frees it with
// [`cea_string_free`].
char *cea_last_error_message(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a pointer previously returned by one of the
// string-producing functions of this library, not yet freed.
void cea_string_free(char *s);

// Parses a JSON document from a string.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer. On
// success `*out` owns the document and must be released with
// [`cea_document_free`].
enum CeaStatus cea_document_parse(const char *json, double tol, struct CeaDocument **out);

// Loads a JSON document from a file path.
//
// # Safety
// As for [`cea_document_parse`].
enum CeaStatus cea_document_load(const char *path, double tol, struct CeaDocument **out);

// Releases a document handle.
//
// # Safety
// `doc` must be null or a pointer returned by a document constructor, not
// yet freed.
void cea_document_free(struct CeaDocument *doc);

// Does the named payload satisfy `0 <= a <= u`?
//
// # Safety
// `doc` must be a live document handle, `name` a NUL-terminated string,
// `verdict` a valid pointer.
enum CeaStatus cea_check_effect(const struct CeaDocument *doc,
                                const char *name,
                                double tol,
                                bool *verdict);

// Is the named effect sharp?
//
// # Safety
// As for [`cea_check_effect`].
enum CeaStatus cea_check_sharp(const struct CeaDocument *doc,
                               const char *name,
                               double tol,
                               bool *verdict);

// Is the named effect strong?
//
// # Safety
// As for [`cea_check_effect`].
enum CeaStatus cea_check_strong(const struct CeaDocument *doc,
                                const char *name,
                                double tol,
                                bool *verdict);

// Do the named outcome effects form an observable (sum to the unit)?
//
// # Safety
// As for [`cea_check_effect`].
enum CeaStatus cea_observable_validate(const struct CeaDocument *doc,
                                       const char *name,
                                       double tol,
                                       bool *verdict);

// Decides informational completeness of the named random variables (all
// of them when `names_len` is zero). When the family is not IC and
// `witness_json` is non-null, a JSON object `{"mu": [...], "nu": [...]}`
// with exact rational entries is returned through it.
//
// # Safety
// `doc` must be a live handle, `names` an array of `names_len`
// NUL-terminated strings (or null when `names_len` is 0), `verdict` a
// valid pointer, `witness_json` null or valid.
enum CeaStatus cea_ic_decide(const struct CeaDocument *doc,
                             const char *const *names,
                             size_t names_len,
                             bool *verdict,
                             char **witness_json);

// Runs the strong decomposition of the named quantum effects (all of them
// when `names_len` is zero) and returns a JSON report with residuals and
// remainder spectra.
//
// # Safety
// As for [`cea_ic_decide`]; `report_json` must be null or valid.
enum CeaStatus cea_strong_decomposition(const struct CeaDocument *doc,
                                        const char *const *names,
                                        size_t names_len,
                                        double tol,
                                        char **report_json);

// Rewrites the named commuting quantum effects as strong generators.
// `verdict` is true when strong generators were produced (their payloads
// are returned as JSON through `report_json`) and false when a proof-gap
// report was produced instead (also returned as JSON).
//
// # Safety
// As for [`cea_ic_decide`]; `report_json` must be null or valid.
enum CeaStatus cea_strongify(const struct CeaDocument *doc,
                             const char *const *names,
                             size_t names_len,
                             double tol,
                             uint64_t seed,
                             bool *verdict,
                             char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CEA_H */
