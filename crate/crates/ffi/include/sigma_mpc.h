/* C interface for the sigma-mpc library. Generated by cbindgen; do not edit. */

#ifndef SIGMA_MPC_H
#define SIGMA_MPC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function; identical to the
// CLI's process exit codes.
enum SigmaMpcStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  SIGMA_MPC_STATUS_OK = 0,
  SIGMA_MPC_STATUS_INTERNAL_ERROR = 1,
  SIGMA_MPC_STATUS_VERIFICATION_FAILED = 2,
  SIGMA_MPC_STATUS_BAD_INPUT = 3,
  SIGMA_MPC_STATUS_BUDGET_EXCEEDED = 4,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum SigmaMpcStatus SigmaMpcStatus;
#else
typedef int32_t SigmaMpcStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Opaque handle to a finite field F_{p^h}.
typedef struct SigmaMpcField SigmaMpcField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the library, as a static NUL-terminated string.
const char *sigma_mpc_version(void);

// Schema version stamped into every JSON payload.
uint32_t sigma_mpc_schema_version(void);

// Human-readable name for a status code (static string).
const char *sigma_mpc_status_name(int32_t code);

// Message for the most recent failure on this thread, or null if the
// last call succeeded.  The pointer stays valid until the next
// sigma_mpc call on the same thread.
const char *sigma_mpc_last_error(void);

// Release a string returned through an out-parameter.  Passing null is
// a no-op.
void sigma_mpc_string_free(char *s);

// Create the field F_{p^h} with the library's pinned modulus.
// On success writes a handle to `out` and returns 0.
int32_t sigma_mpc_field_new(uint64_t p, uint32_t h, struct SigmaMpcField **out);

// Create a field from a JSON descriptor: either `{"q": 81}` or
// `{"p": 3, "h": 4}`, optionally with an explicit `"modulus"`.
int32_t sigma_mpc_field_from_json(const char *json, struct SigmaMpcField **out);

// Release a field handle.  Passing null is a no-op.
void sigma_mpc_field_free(struct SigmaMpcField *field);

// Field order p^h, or 0 if the handle is null.
uint64_t sigma_mpc_field_order(const struct SigmaMpcField *field);

// Field characteristic p, or 0 if the handle is null.
uint64_t sigma_mpc_field_characteristic(const struct SigmaMpcField *field);

// Extension degree h, or 0 if the handle is null.
uint32_t sigma_mpc_field_degree(const struct SigmaMpcField *field);

// JSON descriptor of the field (characteristic, degree, modulus).
int32_t sigma_mpc_field_describe(const struct SigmaMpcField *field, char **out_json);

// Galois pairing parameters for exponent `e`: writes `r` (the twist
// exponent of the pairing) and `g` (the degree of the subfield the
// sampling pool draws from) for the field's inner product
// `<u, v> = u . pi_e(v)`.
int32_t sigma_mpc_pairing_params(const struct SigmaMpcField *field,
                                 uint32_t e,
                                 uint32_t *out_r,
                                 uint32_t *out_g);

// Check the non-singular-by-columns property of a square matrix
// (JSON, entries as strings like "w^5" / "0" / "1").  Returns 0 when
// NSC; returns 2 and fills the report with a failing witness
// `{"ell": t, "cols": [...]}` otherwise.
int32_t sigma_mpc_nsc_check(const struct SigmaMpcField *field,
                            const char *matrix_json,
                            char **out_json);

// Lift an NSC matrix to one whose twisted Gram matrix is diagonal,
// using the unit-lower-triangular transform for the inner product
// with exponent `e` and companion matrix `m_tilde_json` (pass null
// for the identity).  Fills the certificate JSON (lifted matrix,
// triangular factor, companion diagonal).
int32_t sigma_mpc_quasi_lift(const struct SigmaMpcField *field,
                             const char *matrix_json,
                             const char *m_tilde_json,
                             uint32_t e,
                             char **out_json);

// Seeded rejection-sampling campaign for matrices whose twisted Gram
// matrix is diagonal: `trials` attempts at size `s` with exponent
// `e`, keeping up to `keep` full certificates.  Deterministic in
// `seed`.  Fills the campaign report JSON (trials, successes, rate,
// kept certificates).
int32_t sigma_mpc_quasi_sample(const struct SigmaMpcField *field,
                               size_t s,
                               uint32_t e,
                               uint64_t trials,
                               uint64_t seed,
                               size_t keep,
                               char **out_json);

// Check whether a square matrix is NSC with monomial Gram matrix
// A A^T (the defining-matrix condition for isometry-dual-preserving
// products).  Returns 0 and the decomposition when it is; returns 2
// with the Gram matrix in the report when it is not.
int32_t sigma_mpc_tau_od_check(const struct SigmaMpcField *field,
                               const char *matrix_json,
                               char **out_json);

// Exact minimum distance of the row space of a generator matrix
// (JSON), enumerating at most `budget` codewords via the cheaper of
// the direct and dual-transform routes.  Fills
// `{"length", "dimension", "distance", "method", "words_enumerated"}`.
int32_t sigma_mpc_code_distance(const struct SigmaMpcField *field,
                                const char *generator_json,
                                uint64_t budget,
                                char **out_json);

// Check self-orthogonality of the row space of `generator_json`
// under the isometry `isometry_json` (either
// `{"kind": "euclidean" | "hermitian" | "symplectic"}` or an explicit
// `{"m_tau": [...], "e": ...}`).  Returns 0 when self-orthogonal and
// 2 when not; the report carries `{"self_orthogonal": bool}`.
int32_t sigma_mpc_verify_self_orthogonal(const struct SigmaMpcField *field,
                                         const char *generator_json,
                                         const char *isometry_json,
                                         char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIGMA_MPC_H */
