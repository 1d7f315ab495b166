#ifndef BMT_H
#define BMT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define BMT_FLAVOR_CRYSTALLINE 0

#define BMT_FLAVOR_SEMISTABLE 1

/*
 Both flavors; accepted by [`bmt_verify`] only.
 */
#define BMT_FLAVOR_BOTH 2

#define BMT_ALPHA_DIRECT 0

#define BMT_ALPHA_VIA_GL 1

#define BMT_ENUM_WEIGHTS 0

#define BMT_ENUM_SL_WEIGHTS 1

#define BMT_ENUM_TYPES 2

#define BMT_ENUM_PGL_TYPES 3

#define BMT_ENUM_CHARS 4

#define BMT_ENUM_GAMMA_CHARS 5

typedef enum BmtStatus {
  BMT_STATUS_OK = 0,
  BMT_STATUS_NULL_POINTER = 1,
  BMT_STATUS_INVALID_ARGUMENT = 2,
  BMT_STATUS_ARITHMETIC_FAULT = 3,
  BMT_STATUS_VERIFICATION_FAILED = 4,
  BMT_STATUS_PANIC = 5,
} BmtStatus;

/*
 Opaque multiplicity engine for one prime.
 */
typedef struct BmtEngine BmtEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Creates an engine for the odd prime `p`. `bound` is the largest
 `l1 - l2` the engine will be asked about; 0 selects the default `2p`.

 # Safety
 `out` must be a valid pointer to writable storage for one pointer.
 */
enum BmtStatus bmt_engine_new(uint64_t p, uint64_t bound, struct BmtEngine **out);

/*
 Releases an engine. Passing null is a no-op.

 # Safety
 `engine` must come from [`bmt_engine_new`] and not have been freed.
 */
void bmt_engine_free(struct BmtEngine *engine);

/*
 The prime of an engine, or 0 for null.

 # Safety
 `engine` must be null or a live engine.
 */
uint64_t bmt_engine_prime(const struct BmtEngine *engine);

/*
 The table `a_{l,t}` for `l = (l1, l2)` and a type descriptor such as
 `"ps:0,1"`, `"cusp:1"`, `"scalar:0"` or its JSON form.

 # Safety
 `engine` must be a live engine, `type_desc` a NUL-terminated string and
 `out_json` writable.
 */
enum BmtStatus bmt_a_table(const struct BmtEngine *engine,
                           int64_t l1,
                           int64_t l2,
                           const char *type_desc,
                           uint32_t flavor_code,
                           char **out_json);

/*
 The table `alpha_{lambda,tau}` for `lambda = (c, 0)` and `tau` the class of
 the given type, computed directly or through `GL_2`.

 # Safety
 As for [`bmt_a_table`].
 */
enum BmtStatus bmt_alpha_table(const struct BmtEngine *engine,
                               int64_t c,
                               const char *type_desc,
                               uint32_t flavor_code,
                               uint32_t method,
                               char **out_json);

/*
 Runs the integrality checks for one `(l, t)`. The report is written even
 when a check fails, in which case the status is `VerificationFailed`.

 # Safety
 As for [`bmt_a_table`].
 */
enum BmtStatus bmt_verify_integred(const struct BmtEngine *engine,
                                   int64_t l1,
                                   int64_t l2,
                                   const char *type_desc,
                                   uint32_t flavor_code,
                                   char **out_json);

/*
 The verification sweep over `primes[0..n_primes]` with `l1 - l2 <= bound`
 (0 selects `2p`) and `bases` random cycle bases per item.

 # Safety
 `primes` must point to `n_primes` values and `out_json` be writable.
 */
enum BmtStatus bmt_verify(const uint64_t *primes,
                          size_t n_primes,
                          uint64_t bound,
                          uint32_t flavor_code,
                          uint64_t seed,
                          uint64_t bases,
                          char **out_json);

/*
 Enumerates weights, types or characters (`BMT_ENUM_*`) for rank `n` and
 field size `q`.

 # Safety
 `out_json` must be writable.
 */
enum BmtStatus bmt_enumerate(uint32_t kind, uint64_t n, uint64_t q, char **out_json);

/*
 `#G_I = gcd(n, q - 1)`.

 # Safety
 `out` must be writable.
 */
enum BmtStatus bmt_order_gi(uint64_t n, uint64_t q, uint64_t *out);

/*
 Frees a string returned by this library. Passing null is a no-op.

 # Safety
 `s` must come from this library and not have been freed.
 */
void bmt_string_free(char *s);

/*
 Message of the last failed call on this thread, or an empty string. The
 pointer stays valid until the next call on the same thread.
 */
const char *bmt_last_error(void);

/*
 Library version as a static string.
 */
const char *bmt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BMT_H */
