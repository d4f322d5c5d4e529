#ifndef FINTORSION_H
#define FINTORSION_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes.
typedef enum FtStatus {
  FT_STATUS_OK = 0,
  FT_STATUS_NULL_ARGUMENT = 1,
  FT_STATUS_INVALID_UTF8 = 2,
  // Malformed document; the message names the field.
  FT_STATUS_DOCUMENT = 3,
  // Shapes or invariants of the complex are violated.
  FT_STATUS_INVALID_COMPLEX = 4,
  // The complex lacks a hypothesis of the computation (acyclicity,
  // an action, a supported order).
  FT_STATUS_PRECONDITION = 5,
  FT_STATUS_UNKNOWN_CHECK = 6,
  // A verification run produced at least one failing report.
  FT_STATUS_CHECK_FAILED = 7,
  // An internal error; the library state is unaffected.
  FT_STATUS_PANIC = 8,
} FtStatus;

// Opaque complex handle.
typedef struct FtComplex FtComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread. The pointer stays valid until
// the next failing call on the same thread.
const char *ft_last_error(void);

// Library version as a static string.
const char *ft_version(void);

// Version of the conventions every report is stamped with.
const char *ft_conventions_version(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void ft_string_free(char *s);

// Parses and validates a complex document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum FtStatus ft_complex_from_json(const char *json, struct FtComplex **out);

// # Safety
// `c` must be null or a handle from this library, not yet freed.
void ft_complex_free(struct FtComplex *c);

// Number of stored degrees, or 0 for a null handle.
//
// # Safety
// `c` must be null or a live handle.
uintptr_t ft_complex_len(const struct FtComplex *c);

// Rank in the `k`-th stored degree, or 0 when out of range.
//
// # Safety
// `c` must be null or a live handle.
uintptr_t ft_complex_rank(const struct FtComplex *c, uintptr_t k);

// Serializes the complex as a canonical document named `name`.
//
// # Safety
// `c` must be a live handle, `name` a NUL-terminated string and `out`
// writable.
enum FtStatus ft_complex_to_json(const struct FtComplex *c, const char *name, char **out);

// Cyclic tensor power with the cyclic permutation action.
//
// # Safety
// `c` must be a live handle and `out` writable.
enum FtStatus ft_tensor_power(const struct FtComplex *c, uint32_t p, struct FtComplex **out);

// Cohomology report as JSON.
//
// # Safety
// `c` must be a live handle and `out` writable.
enum FtStatus ft_cohomology_json(const struct FtComplex *c, char **out);

// Analytic torsion. Writes `log tau` to `log_out` and the factored value as
// JSON to `json_out`; either may be null.
//
// # Safety
// `c` must be a live handle; non-null outputs must be writable.
enum FtStatus ft_tau(const struct FtComplex *c, double *log_out, char **json_out);

// Exact twisted analytic torsion; fails with `Precondition` when the
// eigenspace traces are not integral (use [`ft_tau_sigma_numeric`]).
//
// # Safety
// As for [`ft_tau`].
enum FtStatus ft_tau_sigma(const struct FtComplex *c, double *log_out, char **json_out);

// Enclosure `[mid - radius, mid + radius]` of `log tau_sigma` computed with
// `bits` bits of working precision.
//
// # Safety
// `c` must be a live handle; `mid` and `radius` writable.
enum FtStatus ft_tau_sigma_numeric(const struct FtComplex *c,
                                   uint64_t bits,
                                   double *mid,
                                   double *radius);

// Naive equivariant Reidemeister torsion.
//
// # Safety
// As for [`ft_tau`].
enum FtStatus ft_nrt(const struct FtComplex *c, double *log_out, char **json_out);

// Equivariant Reidemeister torsion with metric volume forms.
//
// # Safety
// As for [`ft_tau`].
enum FtStatus ft_rt_sigma(const struct FtComplex *c, double *log_out, char **json_out);

// Runs `suite` (a check name or `"all"`) on `count` seeds from `seed` and
// writes the reports as a JSON array. Returns `CheckFailed` (with the
// reports still written) when any report fails.
//
// # Safety
// `suite` must be a NUL-terminated string and `out` writable.
enum FtStatus ft_verify(const char *suite, uint64_t seed, uint64_t count, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FINTORSION_H */
