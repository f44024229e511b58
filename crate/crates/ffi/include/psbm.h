#ifndef PSBM_H
#define PSBM_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum PsbStatus {
  PSB_STATUS_OK = 0,
  PSB_STATUS_NULL_POINTER = 1,
  PSB_STATUS_INVALID_UTF8 = 2,
  PSB_STATUS_UNKNOWN_POINT = 3,
  PSB_STATUS_UNKNOWN_BUILTIN = 4,
  PSB_STATUS_PARSE_ERROR = 5,
  PSB_STATUS_INVALID_ARGUMENT = 6,
  PSB_STATUS_INFEASIBLE = 7,
  PSB_STATUS_INVALID_EXPONENTS = 8,
  PSB_STATUS_MAP_LEAVES_CARRIER = 9,
  PSB_STATUS_OTHER = 10,
} PsbStatus;

// Opaque space handle.
typedef struct PsbSpace PsbSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread. Valid until the next failing
// call on the same thread; never null.
const char *psb_last_error(void);

// Library version as a static string.
const char *psb_version(void);

// Creates one of the builtin spaces (`quintic_ray`, `quintic_gap`,
// `two_point_a`, `two_point_b`).
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum PsbStatus psb_space_builtin(const char *name, struct PsbSpace **out);

// Parses a tabulated space from the text of a space file.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum PsbStatus psb_space_from_text(const char *text, struct PsbSpace **out);

// Releases a space handle. Null is ignored.
//
// # Safety
// `space` must come from a `psb_space_*` constructor and not be used again.
void psb_space_free(struct PsbSpace *space);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used again.
void psb_string_free(char *s);

// Writes `℘(p, q, r)` for points given by label or number.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum PsbStatus psb_space_evaluate(const struct PsbSpace *space,
                                  const char *p,
                                  const char *q,
                                  const char *r,
                                  double *out);

// Checks an axiom set (`s-metric`, `partial-s-metric`, `sb-metric`,
// `partial-sb`). Finite spaces are checked exhaustively when `samples` is
// 0; otherwise `samples` random quadruples are drawn with `seed`.
//
// # Safety
// Pointers must be valid; `report_json` receives a string to free with
// [`psb_string_free`] and may be null to skip the report.
enum PsbStatus psb_verify_axioms(const struct PsbSpace *space,
                                 const char *axiom_set,
                                 uintptr_t samples,
                                 uint64_t seed,
                                 bool *passed,
                                 char **report_json);

// JSON description of `D(center; radius)`. Region carriers are searched
// over `samples` grid and random points.
//
// # Safety
// Pointers must be valid; the result must be freed with [`psb_string_free`].
enum PsbStatus psb_open_ball(const struct PsbSpace *space,
                             const char *center,
                             double radius,
                             uintptr_t samples,
                             uint64_t seed,
                             char **out_json);

// JSON with the generated topology, separation verdicts and connectedness
// of a finite space.
//
// # Safety
// Pointers must be valid; the result must be freed with [`psb_string_free`].
enum PsbStatus psb_topology(const struct PsbSpace *space, char **out_json);

// Certifies the worked contraction spec (p=q=r=s=1/5, `paper_S`) under the
// Boyd-Wong inequality, or the Matkowski one when `matkowski` is set, over
// `samples` random triples.
//
// # Safety
// Pointers must be valid; `report_json` may be null.
enum PsbStatus psb_certify_paper(const struct PsbSpace *space,
                                 bool matkowski,
                                 uintptr_t samples,
                                 uint64_t seed,
                                 bool *passed,
                                 char **report_json);

// Picard iteration of `paper_S` from `start`; JSON trace with the
// fixed-point check of the limit.
//
// # Safety
// Pointers must be valid; the result must be freed with [`psb_string_free`].
enum PsbStatus psb_picard(const struct PsbSpace *space,
                          const char *start,
                          uintptr_t max_iter,
                          bool *converged,
                          char **out_json);

// Runs the full reproduction suite.
//
// # Safety
// Pointers must be valid; `report_json` may be null.
enum PsbStatus psb_repro(uint64_t seed, bool *passed, char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSBM_H */
