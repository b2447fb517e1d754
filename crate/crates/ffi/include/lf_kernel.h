#ifndef LF_KERNEL_H
#define LF_KERNEL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The first four match the exit codes of the `lf` binary.
 */
typedef enum LfStatus {
  LF_STATUS_OK = 0,
  /**
   * The judgment does not hold: ill-typed, not equal, or rejected.
   */
  LF_STATUS_FAIL = 1,
  /**
   * Lexing, parsing or scoping failed.
   */
  LF_STATUS_PARSE_ERROR = 2,
  LF_STATUS_OUT_OF_FUEL = 3,
  LF_STATUS_NULL_ARGUMENT = 4,
  LF_STATUS_INVALID_UTF8 = 5,
  LF_STATUS_PANIC = 6,
} LfStatus;

/**
 * A checked signature with an ambient context.
 */
typedef struct LfSession LfSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and checks a signature. `fuel` bounds the reduction steps of each
 * later query; 0 selects the default. On success `*out` owns a new session.
 *
 * # Safety
 * `signature` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LfStatus lf_session_new(const char *signature, uint64_t fuel, struct LfSession **out);

/**
 * # Safety
 * `session` must come from [`lf_session_new`] and not be freed twice.
 */
void lf_session_free(struct LfSession *session);

/**
 * Number of declarations in the signature, or 0 for a null session.
 *
 * # Safety
 * `session` must be null or a live session.
 */
uintptr_t lf_session_len(const struct LfSession *session);

/**
 * Replaces the ambient context with `x:A, y:B, ...`.
 *
 * # Safety
 * `session` must be a live session and `context` a NUL-terminated string.
 */
enum LfStatus lf_session_set_context(struct LfSession *session, const char *context);

/**
 * Checks that `object` has type `family`.
 *
 * # Safety
 * `session` must be a live session; the strings must be NUL-terminated.
 */
enum LfStatus lf_check_object(const struct LfSession *session,
                              const char *object,
                              const char *family);

/**
 * Synthesizes the classifier of an object, family or kind and stores its
 * printed form in `*out`.
 *
 * # Safety
 * `session` must be a live session, `term` NUL-terminated and `out` valid.
 */
enum LfStatus lf_synth(const struct LfSession *session, const char *term, char **out);

/**
 * Decides whether `left` and `right` are definitionally equal at `family`.
 * Returns `LF_STATUS_OK` when equal and `LF_STATUS_FAIL` when not; the
 * mismatch is then described by [`lf_last_error_message`].
 *
 * # Safety
 * `session` must be a live session; the strings must be NUL-terminated.
 */
enum LfStatus lf_def_equal(const struct LfSession *session,
                           const char *family,
                           const char *left,
                           const char *right);

/**
 * Computes the quasi-canonical form of `object` at `family`.
 *
 * # Safety
 * `session` must be a live session, the strings NUL-terminated and `out`
 * valid.
 */
enum LfStatus lf_canonicalize(const struct LfSession *session,
                              const char *family,
                              const char *object,
                              char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void lf_string_free(char *s);

/**
 * The message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *lf_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LF_KERNEL_H */
