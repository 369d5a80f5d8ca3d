#ifndef PATHTRACE_H
#define PATHTRACE_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes for every fallible call.
typedef enum PtStatus {
  PT_STATUS_OK = 0,
  PT_STATUS_NULL_POINTER = 1,
  PT_STATUS_INVALID_ARGUMENT = 2,
  PT_STATUS_OUT_OF_RANGE = 3,
  PT_STATUS_CAP_EXCEEDED = 4,
  PT_STATUS_BUFFER_TOO_SMALL = 5,
  PT_STATUS_NUMERIC = 6,
  PT_STATUS_PANIC = 7,
} PtStatus;

typedef enum PtFamily {
  PT_FAMILY_PATH = 0,
  PT_FAMILY_CYCLE = 1,
  PT_FAMILY_COMPLETE = 2,
  PT_FAMILY_STAR = 3,
  PT_FAMILY_COMPLETE_MINUS_EDGE = 4,
} PtFamily;

// Opaque graph handle.
typedef struct PtGraph PtGraph;

// Opaque trace set handle.
typedef struct PtTraceSet PtTraceSet;

// Analytic error rates for G(n, p).
typedef struct PtErRates {
  size_t n;
  double p;
  double p_miss;
  double p_fa;
  double p_err;
} PtErRates;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *pt_last_error(void);

// Build a graph from `edge_count` pairs stored flat in `edges`
// (`u0, v0, u1, v1, ...`).
//
// # Safety
// `edges` must point to `2 * edge_count` readable values (or be null when
// `edge_count` is 0); `out` must be valid for writes.
enum PtStatus pt_graph_new(size_t n, const size_t *edges, size_t edge_count, struct PtGraph **out);

// # Safety
// `out` must be valid for writes.
enum PtStatus pt_graph_named(enum PtFamily family, size_t n, struct PtGraph **out);

// # Safety
// `out` must be valid for writes.
enum PtStatus pt_graph_sample_er(size_t n, double p, uint64_t seed, struct PtGraph **out);

// # Safety
// `g` must be null or a handle from this library that has not been freed.
void pt_graph_free(struct PtGraph *g);

// Vertex count, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t pt_graph_vertex_count(const struct PtGraph *g);

// # Safety
// `g` must be null or a live handle.
size_t pt_graph_edge_count(const struct PtGraph *g);

// # Safety
// `g` must be null or a live handle.
bool pt_graph_has_edge(const struct PtGraph *g, size_t u, size_t v);

// Copy the sorted edge list into `buf` as flat `(u, v)` pairs with `u < v`.
// `*written` receives the number of pairs; when `capacity` (in pairs) is too
// small nothing is copied, `*written` holds the required size and
// `BufferTooSmall` is returned.
//
// # Safety
// `g` must be a live handle, `buf` valid for `2 * capacity` writes, and
// `written` valid for one write.
enum PtStatus pt_graph_edges(const struct PtGraph *g,
                             size_t *buf,
                             size_t capacity,
                             size_t *written);

// All traces of size `k` of `g`.
//
// # Safety
// `g` must be a live handle; `out` valid for writes.
enum PtStatus pt_trace_set_from_graph(const struct PtGraph *g, size_t k, struct PtTraceSet **out);

// # Safety
// `ts` must be null or a live handle.
size_t pt_trace_set_len(const struct PtTraceSet *ts);

// # Safety
// `ts` must be null or a handle that has not been freed.
void pt_trace_set_free(struct PtTraceSet *ts);

// Reconstruct a graph on `n` vertices. `max_trace_size` of 0 selects the
// default cap.
//
// # Safety
// `ts` must be a live handle; `out` valid for writes.
enum PtStatus pt_reconstruct(const struct PtTraceSet *ts,
                             size_t n,
                             size_t max_trace_size,
                             struct PtGraph **out);

// Predicted size-3 reconstruction of `g`. `in_regime` (optional) is set to
// whether `n > 3` and `|E| > 2`.
//
// # Safety
// `g` must be a live handle; `out` valid for writes; `in_regime` null or
// valid for one write.
enum PtStatus pt_theorem_oracle(const struct PtGraph *g, struct PtGraph **out, bool *in_regime);

// Count edges of `truth` missing from `estimate` and edges of `estimate`
// absent from `truth`.
//
// # Safety
// Both handles must be live; `missed` and `false_alarms` valid for writes.
enum PtStatus pt_edge_diff(const struct PtGraph *truth,
                           const struct PtGraph *estimate,
                           size_t *missed,
                           size_t *false_alarms);

// # Safety
// `out` must be valid for writes.
enum PtStatus pt_er_rates(size_t n, double p, struct PtErRates *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATHTRACE_H */
