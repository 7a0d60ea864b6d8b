/* C interface for the quasi-kernel digraph library. */

#ifndef QK_H
#define QK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QkStatus {
  QK_STATUS_OK = 0,
  QK_STATUS_NULL_POINTER = 1,
  QK_STATUS_INVALID_UTF8 = 2,
  QK_STATUS_INVALID_ARGUMENT = 3,
  QK_STATUS_PARSE_ERROR = 4,
  QK_STATUS_NOT_INDEPENDENT = 5,
  QK_STATUS_NOT_QUASI_KERNEL = 6,
  QK_STATUS_NOT_GOOD_QUASI_KERNEL = 7,
  QK_STATUS_HAS_SINK = 8,
  QK_STATUS_EMPTY_DIGRAPH = 9,
  QK_STATUS_NOT_SEMICOMPLETE = 10,
  QK_STATUS_NOT_ACYCLIC = 11,
  QK_STATUS_INVALID_PARTITION = 12,
  QK_STATUS_PRECONDITION_FAILED = 13,
  QK_STATUS_BUDGET_EXCEEDED = 14,
  QK_STATUS_BUFFER_TOO_SMALL = 15,
  QK_STATUS_INTERNAL_ERROR = 16,
  QK_STATUS_PANIC = 17,
} QkStatus;

/**
 * Outcome tag for the size-halving algorithms.
 */
typedef enum QkOutcomeKind {
  QK_OUTCOME_KIND_QUASI_KERNEL = 0,
  QK_OUTCOME_KIND_WITNESS = 1,
} QkOutcomeKind;

/**
 * Opaque digraph handle.
 */
typedef struct QkDigraph QkDigraph;

/**
 * Forbidden-pattern witness in C layout: `tails[0..tail_count]` are
 * in-neighbours of `center`; when `has_extra_arc` is set, the single arc
 * among the tails runs `extra_tail -> extra_head`.
 */
typedef struct QkWitness {
  uint32_t center;
  uint32_t tails[4];
  uint32_t tail_count;
  bool has_extra_arc;
  uint32_t extra_tail;
  uint32_t extra_head;
} QkWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qk_last_error_message(void);

/**
 * Build a digraph from parallel tail/head arrays.
 *
 * # Safety
 * `tails` and `heads` must point to `arc_count` readable elements each
 * (or be null when `arc_count` is 0), and `out` must be a valid location
 * to store the new handle.
 */
enum QkStatus qk_digraph_new(uint32_t n,
                             const uint32_t *tails,
                             const uint32_t *heads,
                             uintptr_t arc_count,
                             struct QkDigraph **out);

/**
 * Parse the edge-list text format.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid handle
 * location.
 */
enum QkStatus qk_digraph_parse(const char *text, struct QkDigraph **out);

/**
 * # Safety
 * `d` must be a handle returned by this library and not yet freed.
 */
void qk_digraph_free(struct QkDigraph *d);

/**
 * Order of the digraph; 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle from this library.
 */
uint32_t qk_digraph_order(const struct QkDigraph *d);

/**
 * Number of arcs; 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle from this library.
 */
uintptr_t qk_digraph_arc_count(const struct QkDigraph *d);

/**
 * Arc presence; false for a null handle or out-of-range ids.
 *
 * # Safety
 * `d` must be null or a live handle from this library.
 */
bool qk_digraph_has_arc(const struct QkDigraph *d, uint32_t tail, uint32_t head);

/**
 * Every vertex has an out-neighbour; false for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle from this library.
 */
bool qk_digraph_is_sink_free(const struct QkDigraph *d);

/**
 * At least one arc between every pair; false for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle from this library.
 */
bool qk_digraph_is_semicomplete(const struct QkDigraph *d);

/**
 * Exactly one arc between every pair; false for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle from this library.
 */
bool qk_digraph_is_tournament(const struct QkDigraph *d);

/**
 * No directed cycle; false for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle from this library.
 */
bool qk_digraph_is_dag(const struct QkDigraph *d);

/**
 * Odd directed cycle present; false for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle from this library.
 */
bool qk_digraph_has_odd_directed_cycle(const struct QkDigraph *d);

/**
 * Canonical edge-list serialization; free the string with
 * [`qk_string_free`].
 *
 * # Safety
 * `d` must be a live handle and `out` a valid pointer location.
 */
enum QkStatus qk_digraph_serialize(const struct QkDigraph *d, char **out);

/**
 * DOT export; free the string with [`qk_string_free`].
 *
 * # Safety
 * As for [`qk_digraph_serialize`].
 */
enum QkStatus qk_digraph_to_dot(const struct QkDigraph *d, char **out);

/**
 * # Safety
 * `s` must have been produced by this library and not yet freed.
 */
void qk_string_free(char *s);

/**
 * The six-vertex kernel-free digraph with a good quasi-kernel.
 *
 * # Safety
 * `out` must be a valid handle location.
 */
enum QkStatus qk_construct_dstar(struct QkDigraph **out);

/**
 * The order-(2k+1)^2 sharpness family member.
 *
 * # Safety
 * `out` must be a valid handle location.
 */
enum QkStatus qk_construct_dk(uint32_t k, struct QkDigraph **out);

/**
 * True iff the ids form a kernel.
 *
 * # Safety
 * `d` must be a live handle, `ids` must point to `len` readable elements
 * (or be null when `len` is 0), and `out` must be valid.
 */
enum QkStatus qk_verify_kernel(const struct QkDigraph *d,
                               const uint32_t *ids,
                               uintptr_t len,
                               bool *out);

/**
 * True iff the ids form a quasi-kernel.
 *
 * # Safety
 * As for [`qk_verify_kernel`].
 */
enum QkStatus qk_verify_quasi_kernel(const struct QkDigraph *d,
                                     const uint32_t *ids,
                                     uintptr_t len,
                                     bool *out);

/**
 * True iff the ids form a good quasi-kernel.
 *
 * # Safety
 * As for [`qk_verify_kernel`].
 */
enum QkStatus qk_is_good_quasi_kernel(const struct QkDigraph *d,
                                      const uint32_t *ids,
                                      uintptr_t len,
                                      bool *out);

/**
 * Quasi-kernel by the inductive construction. Always succeeds; the result
 * is written through the buffer triple.
 *
 * # Safety
 * `d` must be a live handle; `buf` must have `capacity` writable slots;
 * `out_len` must be valid.
 */
enum QkStatus qk_quasi_kernel_cl(const struct QkDigraph *d,
                                 uint32_t *buf,
                                 uintptr_t capacity,
                                 uintptr_t *out_len);

/**
 * Exact minimum quasi-kernel. `cap` bounds the size searched; pass 0 for
 * the digraph order (always succeeds).
 *
 * # Safety
 * As for [`qk_quasi_kernel_cl`].
 */
enum QkStatus qk_minimum_quasi_kernel(const struct QkDigraph *d,
                                      uintptr_t cap,
                                      uint32_t *buf,
                                      uintptr_t capacity,
                                      uintptr_t *out_len);

/**
 * Exhaustive kernel search. `budget` caps the order; pass 0 for the
 * default. `found` reports whether a kernel exists; the set is only
 * written when it does.
 *
 * # Safety
 * As for [`qk_quasi_kernel_cl`], plus `found` must be valid.
 */
enum QkStatus qk_kernel_exact(const struct QkDigraph *d,
                              uintptr_t budget,
                              bool *found,
                              uint32_t *buf,
                              uintptr_t capacity,
                              uintptr_t *out_len);

/**
 * One refinement round through the second in-neighbourhood of the given
 * quasi-kernel.
 *
 * # Safety
 * As for the verifiers plus the buffer triple contract.
 */
enum QkStatus qk_jacob_meyniel_refine(const struct QkDigraph *d,
                                      const uint32_t *ids,
                                      uintptr_t len,
                                      uint32_t *buf,
                                      uintptr_t capacity,
                                      uintptr_t *out_len);

/**
 * Small quasi-kernel or anti-claw witness for a sink-free digraph.
 *
 * # Safety
 * `d` live handle; `kind`, `witness`, `out_len` valid; `buf` has
 * `capacity` writable slots.
 */
enum QkStatus qk_small_qk_anti_claw_free(const struct QkDigraph *d,
                                         enum QkOutcomeKind *kind,
                                         struct QkWitness *witness,
                                         uint32_t *buf,
                                         uintptr_t capacity,
                                         uintptr_t *out_len);

/**
 * Small quasi-kernel or four-in-neighbour witness for a sink-free
 * digraph.
 *
 * # Safety
 * As for [`qk_small_qk_anti_claw_free`].
 */
enum QkStatus qk_small_qk_k41_free(const struct QkDigraph *d,
                                   enum QkOutcomeKind *kind,
                                   struct QkWitness *witness,
                                   uint32_t *buf,
                                   uintptr_t capacity,
                                   uintptr_t *out_len);

/**
 * Sub-half quasi-kernel of a sink-free one-way split digraph (recognized
 * internally).
 *
 * # Safety
 * As for [`qk_quasi_kernel_cl`].
 */
enum QkStatus qk_split_small_qk(const struct QkDigraph *d,
                                uint32_t *buf,
                                uintptr_t capacity,
                                uintptr_t *out_len);

/**
 * Exact minimum quasi-kernel of a sink-free one-way split digraph in
 * polynomial time (recognized internally).
 *
 * # Safety
 * As for [`qk_quasi_kernel_cl`].
 */
enum QkStatus qk_split_min_qk(const struct QkDigraph *d,
                              uint32_t *buf,
                              uintptr_t capacity,
                              uintptr_t *out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QK_H */
