#ifndef TFSM_H
#define TFSM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TfsmStatus {
  TFSM_STATUS_OK = 0,
  TFSM_STATUS_NULL_ARGUMENT = 1,
  TFSM_STATUS_INVALID_UTF8 = 2,
  TFSM_STATUS_PARSE_ERROR = 3,
  TFSM_STATUS_VALIDATION_ERROR = 4,
  TFSM_STATUS_ALPHABET_MISMATCH = 5,
  TFSM_STATUS_NOT_TIME_PROGRESSIVE = 6,
  /**
   * `tfsm_simulate` only: the machine has no transition for some input.
   */
  TFSM_STATUS_REJECTED = 7,
  TFSM_STATUS_INTERNAL = 8,
} TfsmStatus;

/**
 * Opaque untimed Mealy machine.
 */
typedef struct TfsmMealy TfsmMealy;

/**
 * Opaque timed machine.
 */
typedef struct TfsmTimed TfsmTimed;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * Owned by the library; valid until the next call on this thread.
 */
const char *tfsm_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void tfsm_string_free(char *s);

/**
 * Parses and validates a timed machine in the text format.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a writable pointer.
 */
enum TfsmStatus tfsm_timed_parse(const char *source, struct TfsmTimed **out);

/**
 * Parses an untimed machine in the text format.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a writable pointer.
 */
enum TfsmStatus tfsm_mealy_parse(const char *source, struct TfsmMealy **out);

/**
 * # Safety
 * `m` must be null or a handle from this library that was not freed.
 */
void tfsm_timed_free(struct TfsmTimed *m);

/**
 * # Safety
 * `m` must be null or a handle from this library that was not freed.
 */
void tfsm_mealy_free(struct TfsmMealy *m);

/**
 * # Safety
 * `m` must be a live handle and `out` a writable pointer.
 */
enum TfsmStatus tfsm_timed_serialize(const struct TfsmTimed *m, char **out);

/**
 * # Safety
 * `m` must be a live handle and `out` a writable pointer.
 */
enum TfsmStatus tfsm_mealy_serialize(const struct TfsmMealy *m, char **out);

/**
 * Tick abstraction of a timed machine. Unreachable abstract states are
 * kept when `keep_unreachable` is true.
 *
 * # Safety
 * `m` must be a live handle and `out` a writable pointer.
 */
enum TfsmStatus tfsm_abstract(const struct TfsmTimed *m,
                              bool keep_unreachable,
                              struct TfsmMealy **out);

/**
 * Timed machine of a time-progressive FSM. With `merge` false every clock
 * interval keeps its own transition.
 *
 * # Safety
 * `m` must be a live handle and `out` a writable pointer.
 */
enum TfsmStatus tfsm_refine(const struct TfsmMealy *m, bool merge, struct TfsmTimed **out);

/**
 * # Safety
 * `m` must be a live handle and `out` a writable pointer.
 */
enum TfsmStatus tfsm_minimize(const struct TfsmMealy *m, struct TfsmMealy **out);

/**
 * Intersection of two timed machines over the same alphabets.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` a writable pointer.
 */
enum TfsmStatus tfsm_intersect(const struct TfsmTimed *a,
                               const struct TfsmTimed *b,
                               struct TfsmTimed **out);

/**
 * Decides equivalence of two timed machines. `*equal` receives the answer;
 * when `witness` is not null it receives a description of a distinguishing
 * timed word, or null if the machines are equivalent.
 *
 * # Safety
 * `a` and `b` must be live handles, `equal` writable, `witness` null or
 * writable.
 */
enum TfsmStatus tfsm_timed_equivalent(const struct TfsmTimed *a,
                                      const struct TfsmTimed *b,
                                      bool *equal,
                                      char **witness);

/**
 * Equivalence of two untimed machines, reported like
 * [`tfsm_timed_equivalent`].
 *
 * # Safety
 * `a` and `b` must be live handles, `equal` writable, `witness` null or
 * writable.
 */
enum TfsmStatus tfsm_mealy_equivalent(const struct TfsmMealy *a,
                                      const struct TfsmMealy *b,
                                      bool *equal,
                                      char **witness);

/**
 * Runs the machine on `word`, written as `SYMBOL@TIME` items with absolute
 * times (`"i@0.5 i@3/2"`). On success `*output` receives the timed output
 * word; a rejected input gives [`TfsmStatus::Rejected`].
 *
 * # Safety
 * `m` must be a live handle, `word` a NUL-terminated string and `output`
 * writable.
 */
enum TfsmStatus tfsm_simulate(const struct TfsmTimed *m, const char *word, char **output);

/**
 * # Safety
 * `m` must be a live handle and `out` a writable pointer.
 */
enum TfsmStatus tfsm_timed_export_dot(const struct TfsmTimed *m, char **out);

/**
 * # Safety
 * `m` must be a live handle and `out` a writable pointer.
 */
enum TfsmStatus tfsm_mealy_export_dot(const struct TfsmMealy *m, char **out);

/**
 * # Safety
 * `m` must be a live handle and `out` a writable pointer.
 */
enum TfsmStatus tfsm_export_timed_automaton(const struct TfsmTimed *m, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TFSM_H */
