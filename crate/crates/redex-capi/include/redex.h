/* C interface to the pattern-calculus rewriting engine. */

#ifndef REDEX_H
#define REDEX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Decision of a compound match.
 */
typedef enum RedexMatchDecision {
  /**
   * The pattern matches and produces bindings.
   */
  REDEX_MATCH_DECISION_POSITIVE = 0,
  /**
   * The match fails definitely (the redex contracts to its failure form).
   */
  REDEX_MATCH_DECISION_FAIL = 1,
  /**
   * Undecided: the term is not evaluated enough to decide the match.
   */
  REDEX_MATCH_DECISION_WAIT = 2,
} RedexMatchDecision;

/**
 * Status code returned by every fallible entry point.
 */
typedef enum RedexStatus {
  /**
   * The call succeeded.
   */
  REDEX_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  REDEX_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  REDEX_STATUS_INVALID_UTF8 = 2,
  /**
   * The input did not parse; `redex_last_error_message` has the reason.
   */
  REDEX_STATUS_PARSE_ERROR = 3,
  /**
   * A position did not parse or does not point at a redex of the term.
   */
  REDEX_STATUS_INVALID_POSITION = 4,
  /**
   * Normalization did not reach a normal form within the given fuse.
   */
  REDEX_STATUS_FUSE_EXCEEDED = 5,
} RedexStatus;

/**
 * Opaque handle to a term of the pattern calculus.
 */
typedef struct RedexTerm RedexTerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a term from the surface syntax into a fresh handle.
 *
 * # Safety
 * `input` must be a valid nul-terminated C string and `out` valid for
 * writes. On success `*out` owns the term and must be released with
 * [`redex_term_free`].
 */
enum RedexStatus redex_term_parse(const char *input, struct RedexTerm **out);

/**
 * Prints a term back into the surface syntax.
 *
 * # Safety
 * `term` must be a live handle from this library and `out` valid for
 * writes. On success `*out` must be released with [`redex_string_free`].
 */
enum RedexStatus redex_term_print(const struct RedexTerm *term, char **out);

/**
 * Writes the number of nodes of the term.
 *
 * # Safety
 * `term` must be a live handle and `out` valid for writes.
 */
enum RedexStatus redex_term_size(const struct RedexTerm *term, uintptr_t *out);

/**
 * Lists the positions of the contractible redexes of the term, in
 * left-to-right order, as digit strings (the empty string is the root).
 *
 * # Safety
 * `term` must be a live handle; `out` and `out_len` must be valid for
 * writes. On success the array must be released with
 * [`redex_string_array_free`] using the same length.
 */
enum RedexStatus redex_term_redexes(const struct RedexTerm *term, char ***out, uintptr_t *out_len);

/**
 * Contracts the redex at `position` and writes the resulting term.
 *
 * # Safety
 * `term` must be a live handle, `position` a valid nul-terminated C
 * string, and `out` valid for writes. On success `*out` must be released
 * with [`redex_term_free`].
 */
enum RedexStatus redex_term_step(const struct RedexTerm *term,
                                 const char *position,
                                 struct RedexTerm **out);

/**
 * Simultaneously contracts the redexes at `positions` (a complete
 * development of the set) and writes the resulting term.
 *
 * # Safety
 * `term` must be a live handle; `positions` must point to `len` valid
 * nul-terminated C strings; `out` must be valid for writes. On success
 * `*out` must be released with [`redex_term_free`].
 */
enum RedexStatus redex_term_develop(const struct RedexTerm *term,
                                    const char *const *positions,
                                    uintptr_t len,
                                    struct RedexTerm **out);

/**
 * Normalizes the term with the necessary-and-never-gripping strategy,
 * contracting one selected step set per round for at most `fuse` rounds.
 * Writes the normal form and the number of rounds taken; when the fuse is
 * exhausted first, returns `FuseExceeded` with `*out` left null and
 * `*out_rounds` equal to `fuse`.
 *
 * # Safety
 * `term` must be a live handle; `out` and `out_rounds` must be valid for
 * writes. On success `*out` must be released with [`redex_term_free`].
 */
enum RedexStatus redex_term_normalize(const struct RedexTerm *term,
                                      uintptr_t fuse,
                                      struct RedexTerm **out,
                                      uintptr_t *out_rounds);

/**
 * Lists the step set the normalizing strategy selects on the term, as
 * position strings; the array is empty exactly when the term is a normal
 * form.
 *
 * # Safety
 * `term` must be a live handle; `out` and `out_len` must be valid for
 * writes. On success the array must be released with
 * [`redex_string_array_free`] using the same length.
 */
enum RedexStatus redex_term_strategy(const struct RedexTerm *term, char ***out, uintptr_t *out_len);

/**
 * Matches `term` against `pattern` under the binders named in `binders`
 * (comma-separated; the empty string binds nothing). Writes the decision
 * and, when positive, one `name := term` string per binding.
 *
 * # Safety
 * `binders` must be a valid nul-terminated C string; `term` and `pattern`
 * must be live handles; `out_decision`, `out_bindings` and `out_len` must
 * be valid for writes. On success the bindings array must be released with
 * [`redex_string_array_free`] using the same length.
 */
enum RedexStatus redex_match(const char *binders,
                             const struct RedexTerm *term,
                             const struct RedexTerm *pattern,
                             enum RedexMatchDecision *out_decision,
                             char ***out_bindings,
                             uintptr_t *out_len);

/**
 * Returns the description of the most recent failure on this thread, or
 * null if nothing has failed yet. The caller owns the string.
 *
 * # Safety
 * The returned string, when not null, must be released with
 * [`redex_string_free`].
 */
char *redex_last_error_message(void);

/**
 * Releases a term handle. Null is ignored.
 *
 * # Safety
 * `term` must be null or a handle returned by this library that has not
 * been freed yet.
 */
void redex_term_free(struct RedexTerm *term);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library that has not been
 * freed yet.
 */
void redex_string_free(char *s);

/**
 * Releases a string array returned by this library, including its
 * elements. Null is ignored.
 *
 * # Safety
 * `array` must be null or an array of `len` strings returned by this
 * library, none of them freed yet.
 */
void redex_string_array_free(char **array, uintptr_t len);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* REDEX_H */
