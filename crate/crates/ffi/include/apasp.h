#ifndef APASP_H
#define APASP_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a fallible call.
typedef enum ApaspStatus {
  APASP_STATUS_OK = 0,
  // A required pointer argument was null.
  APASP_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  APASP_STATUS_INVALID_UTF8 = 2,
  // Graph or update text was malformed.
  APASP_STATUS_PARSE = 3,
  // A vertex label did not name a vertex of the graph.
  APASP_STATUS_UNKNOWN_VERTEX = 4,
  // The update was well formed but not applicable to the current graph.
  // The session is unchanged.
  APASP_STATUS_INVALID_UPDATE = 5,
  // The engine detected a broken internal invariant. The session should
  // be discarded.
  APASP_STATUS_ENGINE = 6,
  // The maintained state disagrees with a fresh rebuild.
  APASP_STATUS_DIVERGED = 7,
  // The library panicked. The session should be discarded.
  APASP_STATUS_PANIC = 8,
} ApaspStatus;

// Opaque handle to a graph and its maintained tuple system.
typedef struct ApaspSession ApaspSession;

// Per-update counters.
typedef struct ApaspUpdateStats {
  uint64_t triples_touched_cleanup;
  uint64_t triples_touched_fixup;
  uint64_t new_triples_created;
  uint64_t heap_ops;
} ApaspUpdateStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or null if no
// call has failed yet. The pointer stays valid until the next failing call
// on this thread and must not be freed.
const char *apasp_last_error(void);

// Parses `graph_text` and builds its tuple system. On success `*out`
// receives a new session.
//
// # Safety
// `graph_text` must be null or a nul-terminated string. `out` must be null
// or valid for writing one pointer.
enum ApaspStatus apasp_session_new(const char *graph_text, struct ApaspSession **out);

// Releases a session. Null is ignored.
//
// # Safety
// `session` must be null or a pointer returned by `apasp_session_new` that
// has not been freed.
void apasp_session_free(struct ApaspSession *session);

// Number of vertices, or 0 for a null session.
//
// # Safety
// `session` must be null or a live session.
size_t apasp_session_vertex_count(const struct ApaspSession *session);

// Number of triples with a positive count, or 0 for a null session.
//
// # Safety
// `session` must be null or a live session.
size_t apasp_session_triple_count(const struct ApaspSession *session);

// Applies one `update <vertex> [<src> <dst> <weight|del>]...` line. When
// `stats` is not null it receives the update's counters. On
// `APASP_STATUS_PARSE`, `APASP_STATUS_UNKNOWN_VERTEX` and
// `APASP_STATUS_INVALID_UPDATE` the session is unchanged.
//
// # Safety
// `session` must be null or a live session, `update_line` null or a
// nul-terminated string, `stats` null or valid for writing.
enum ApaspStatus apasp_session_apply(struct ApaspSession *session,
                                     const char *update_line,
                                     struct ApaspUpdateStats *stats);

// Distance and number of shortest paths from vertex `x` to vertex `y`,
// both given by label. Unreachable pairs report infinity and 0.
//
// # Safety
// `session` must be null or a live session, `x` and `y` null or
// nul-terminated strings, `distance` and `sigma` null or valid for writing.
enum ApaspStatus apasp_session_query(const struct ApaspSession *session,
                                     const char *x,
                                     const char *y,
                                     double *distance,
                                     uint64_t *sigma);

// Canonical text dump of the tuple system. `*out` receives a string to be
// released with `apasp_string_free`.
//
// # Safety
// `session` must be null or a live session, `out` null or valid for writing.
enum ApaspStatus apasp_session_dump(const struct ApaspSession *session, char **out);

// Current graph in the graph file format. `*out` receives a string to be
// released with `apasp_string_free`.
//
// # Safety
// `session` must be null or a live session, `out` null or valid for writing.
enum ApaspStatus apasp_session_graph(const struct ApaspSession *session, char **out);

// Betweenness centrality as `<label> <score>` lines sorted by label.
// `*out` receives a string to be released with `apasp_string_free`.
//
// # Safety
// `session` must be null or a live session, `out` null or valid for writing.
enum ApaspStatus apasp_session_betweenness(const struct ApaspSession *session, char **out);

// Rebuilds the tuple system from scratch and compares it with the
// maintained one. Returns `APASP_STATUS_DIVERGED` with the differences in
// `apasp_last_error` if they disagree.
//
// # Safety
// `session` must be null or a live session.
enum ApaspStatus apasp_session_verify(const struct ApaspSession *session);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string returned by this library that has not been
// freed.
void apasp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* APASP_H */
