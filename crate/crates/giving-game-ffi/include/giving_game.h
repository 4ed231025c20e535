#ifndef GIVING_GAME_H
#define GIVING_GAME_H

/* Generated by cbindgen from giving-game-ffi; edit the Rust source instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Verdict of [`gg_decide`].
 */
typedef enum {
  GG_ANSWER_YES = 0,
  GG_ANSWER_NO = 1,
  /**
   * The branch cap aborted the search before it was exhaustive.
   */
  GG_ANSWER_UNKNOWN = 2,
} GgAnswer;

/**
 * Result code of every API call.
 */
typedef enum {
  GG_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  GG_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  GG_STATUS_INVALID_UTF8 = 2,
  /**
   * Bad input: unparsable JSON or spec, unknown label, size out of range.
   */
  GG_STATUS_INVALID_ARGUMENT = 3,
  /**
   * A requested step is not legal in the current state.
   */
  GG_STATUS_ILLEGAL_STEP = 4,
  /**
   * The run ended without reaching its stability phase.
   */
  GG_STATUS_NOT_STABILIZED = 5,
  /**
   * A search cap aborted the operation.
   */
  GG_STATUS_CAP_EXCEEDED = 6,
  /**
   * Internal invariant violation; indicates a library bug.
   */
  GG_STATUS_INTERNAL = 7,
  /**
   * A panic was caught at the boundary; indicates a library bug.
   */
  GG_STATUS_PANIC = 8,
} GgStatus;

/**
 * Opaque preference-matrix handle.
 */
typedef struct GgMatrix GgMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a matrix from its JSON wire form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer. On
 * `GG_STATUS_OK`, `*out` owns a handle to release with [`gg_matrix_free`].
 */
GgStatus gg_matrix_from_json(const char *json, GgMatrix **out);

/**
 * Builds a matrix from a generator spec: `trivial:N`, `random:N,MAX,SEED`,
 * `turquoise:K`, or `fixture:NAME`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer. On
 * `GG_STATUS_OK`, `*out` owns a handle to release with [`gg_matrix_free`].
 */
GgStatus gg_matrix_generate(const char *spec, GgMatrix **out);

/**
 * Serializes the matrix to its JSON wire form.
 *
 * # Safety
 * `m` must be a live handle from this library and `out` a valid pointer.
 * On `GG_STATUS_OK`, release `*out` with [`gg_string_free`].
 */
GgStatus gg_matrix_to_json(const GgMatrix *m, char **out);

/**
 * Number of agents, or 0 if the handle is NULL.
 *
 * # Safety
 * `m` must be NULL or a live handle from this library.
 */
size_t gg_matrix_agent_count(const GgMatrix *m);

/**
 * Releases a matrix handle. NULL is a no-op.
 *
 * # Safety
 * `m` must be NULL or an unreleased handle from this library.
 */
void gg_matrix_free(GgMatrix *m);

/**
 * Releases a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must be NULL or an unreleased string from this library.
 */
void gg_string_free(char *s);

/**
 * Plays one game and returns the trace JSON (same shape as the CLI).
 * `policy` is `first` or `random:SEED`.
 *
 * # Safety
 * `m` must be a live handle; `start` and `policy` NUL-terminated strings;
 * `out` a valid pointer. On `GG_STATUS_OK`, release `*out` with
 * [`gg_string_free`].
 */
GgStatus gg_simulate_json(const GgMatrix *m,
                          const char *start,
                          const char *policy,
                          size_t max_steps,
                          char **out);

/**
 * Decides whether {a, b} is a stability pair of the game from `start`.
 * Writes the verdict to `out_answer`; if `out_witness` is non-NULL it
 * receives the witness trace JSON on a yes from the exhaustive search and
 * NULL otherwise.
 *
 * # Safety
 * `m` must be a live handle; `start`, `a`, `b` NUL-terminated strings;
 * `out_answer` a valid pointer; `out_witness` NULL or a valid pointer.
 * A non-NULL `*out_witness` must be released with [`gg_string_free`].
 */
GgStatus gg_decide(const GgMatrix *m,
                   const char *start,
                   const char *a,
                   const char *b,
                   uint64_t branch_cap,
                   GgAnswer *out_answer,
                   char **out_witness);

/**
 * Graphviz DOT rendering of the blue-cell digraph.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer. On `GG_STATUS_OK`,
 * release `*out` with [`gg_string_free`].
 */
GgStatus gg_frame_dot(const GgMatrix *m, char **out);

/**
 * All stability pairs of the matrix (union over starts) as a JSON array
 * of label pairs, e.g. `[["A","B"],["C","D"]]`.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer. On `GG_STATUS_OK`,
 * release `*out` with [`gg_string_free`].
 */
GgStatus gg_stability_pairs_json(const GgMatrix *m, uint64_t branch_cap, char **out);

/**
 * Static name of a status code, e.g. `"ok"` or `"invalid argument"`.
 */
const char *gg_status_name(GgStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GIVING_GAME_H */
