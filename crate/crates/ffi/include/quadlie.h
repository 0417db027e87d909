#ifndef QUADLIE_H
#define QUADLIE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every function.
 */
typedef enum QlStatus {
  QL_STATUS_OK = 0,
  QL_STATUS_NULL_POINTER = 1,
  QL_STATUS_INVALID_UTF8 = 2,
  QL_STATUS_VALIDATION = 3,
  QL_STATUS_DIMENSION = 4,
  QL_STATUS_PRECONDITION = 5,
  QL_STATUS_DOMAIN = 6,
  QL_STATUS_CONTRACT = 7,
  QL_STATUS_DEGENERATE = 8,
  QL_STATUS_SINGULAR = 9,
  QL_STATUS_CAPABILITY = 10,
  QL_STATUS_INTERNAL = 11,
  QL_STATUS_PANIC = 12,
} QlStatus;

/*
 Opaque oscillator data `(V, phi, delta)`.
 */
typedef struct QlOscillator QlOscillator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *ql_version(void);

/*
 Copies the last error message of this thread into `*out` (NULL when none).

 # Safety
 `out` must be a valid pointer; the string is released with `ql_string_free`.
 */
enum QlStatus ql_last_error(char **out);

/*
 Parses `{"field", "gram", "delta"}` into a new handle.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QlStatus ql_oscillator_from_json(const char *text, struct QlOscillator **out);

/*
 Releases a handle; NULL is ignored.

 # Safety
 `h` must come from `ql_oscillator_from_json` and not be used afterwards.
 */
void ql_oscillator_free(struct QlOscillator *h);

/*
 Releases a string returned by this library; NULL is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void ql_string_free(char *s);

/*
 `dim V`.

 # Safety
 `h` must be a live handle and `out` a valid pointer.
 */
enum QlStatus ql_oscillator_dim(const struct QlOscillator *h, uintptr_t *out);

/*
 Dimension of the space of invariant symmetric forms of the extension.

 # Safety
 `h` must be a live handle and `out` a valid pointer.
 */
enum QlStatus ql_quadratic_dimension(const struct QlOscillator *h, uintptr_t *out);

/*
 Structure constants and form of the double extension as JSON.

 # Safety
 `h` must be a live handle and `out` a valid pointer.
 */
enum QlStatus ql_construct(const struct QlOscillator *h, char **out);

/*
 Series, locality and structure report as JSON.

 # Safety
 `h` must be a live handle and `out` a valid pointer.
 */
enum QlStatus ql_analyze(const struct QlOscillator *h, char **out);

/*
 Canonical pair certificate of `delta` as JSON.

 # Safety
 `h` must be a live handle and `out` a valid pointer.
 */
enum QlStatus ql_canonical_pair(const struct QlOscillator *h, char **out);

/*
 Block classification of a nilpotent `delta` as JSON.

 # Safety
 `h` must be a live handle and `out` a valid pointer.
 */
enum QlStatus ql_classify_nilpotent(const struct QlOscillator *h, char **out);

/*
 Isometric isomorphism decision between two extensions as JSON.

 # Safety
 `a` and `b` must be live handles and `out` a valid pointer.
 */
enum QlStatus ql_decide_isometric(const struct QlOscillator *a,
                                  const struct QlOscillator *b,
                                  char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUADLIE_H */
