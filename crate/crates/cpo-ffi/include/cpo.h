/* C ABI for the cpo-core knowledge-graph engine. Generated by cbindgen; do not edit. */

#ifndef CPO_H
#define CPO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call in this ABI.
typedef enum CpoStatus {
  // The call succeeded and all requested outputs were written.
  CPO_STATUS_OK = 0,
  // A required pointer argument was NULL.
  CPO_STATUS_NULL_POINTER = 1,
  // An input string was not valid UTF-8.
  CPO_STATUS_UTF8 = 2,
  // An input could not be parsed or accepted (malformed
  // JSON/triples/JSONL, unknown class or relation name, malformed
  // decimal, out-of-range threshold or generator-spec value).
  CPO_STATUS_PARSE = 3,
  // The input parsed but is semantically invalid: wellformedness
  // violations, nonconforming shapes, or events inconsistent with
  // their mapping table.
  CPO_STATUS_VALIDATION = 4,
  // The reasoner rejected the graph (pipeline cycle, dangling
  // reference) or a result no longer matches the graph it came from.
  CPO_STATUS_REASONER = 5,
  // An internal invariant failed; a bug, not a caller error.
  CPO_STATUS_INTERNAL = 6,
} CpoStatus;

// An in-memory workflow graph (opaque).
typedef struct CpoGraph CpoGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string. Never free this pointer.
const char *cpo_version(void);

// Writes the built-in class taxonomy in its canonical text form.
//
// # Safety
// `out_text` must be NULL or valid for writes.
enum CpoStatus cpo_taxonomy_export(char **out_text);

// Sets `*out` to true when class `sub` is `sup` or a descendant of it.
// Class names are spelled as in the taxonomy export; unknown names fail
// with `Parse`.
//
// # Safety
// `sub` and `sup` must be NUL-terminated; `out` must be valid for writes.
enum CpoStatus cpo_class_is_subclass_of(const char *sub, const char *sup, bool *out);

// Parses a graph from its JSON interchange form into a new handle.
//
// # Safety
// `text` must be NUL-terminated; `out_graph` must be valid for writes.
enum CpoStatus cpo_graph_from_json(const char *text, struct CpoGraph **out_graph);

// Parses a graph from the line-oriented triples form into a new handle.
//
// # Safety
// `text` must be NUL-terminated; `out_graph` must be valid for writes.
enum CpoStatus cpo_graph_from_triples(const char *text, struct CpoGraph **out_graph);

// Writes a graph's canonical JSON interchange form.
//
// # Safety
// `graph` must be a live handle; `out_text` must be valid for writes.
enum CpoStatus cpo_graph_to_json(const struct CpoGraph *graph, char **out_text);

// Writes a graph's asserted content in the line-oriented triples form.
// Derived classes and system annotations are not part of that form.
//
// # Safety
// `graph` must be a live handle; `out_text` must be valid for writes.
enum CpoStatus cpo_graph_to_triples(const struct CpoGraph *graph, char **out_text);

// Releases a graph handle. NULL is a no-op.
//
// # Safety
// `graph` must be NULL or a handle from this library, freed at most once.
void cpo_graph_free(struct CpoGraph *graph);

// Checks wellformedness and shape conformance, writing the same JSON
// report the CLI produces. Returns `Ok` when the graph conforms and
// `Validation` when it does not — the report is written in both cases.
// `vetting_json`, `marks_json`, and `threshold` may be NULL (no records,
// no marks, default threshold); shape checking consults a classification,
// so a pipeline cycle or dangling reference fails with `Reasoner`.
//
// # Safety
// `graph` must be a live handle; string inputs must be NULL or
// NUL-terminated; `out_report` must be NULL or valid for writes.
enum CpoStatus cpo_graph_validate(const struct CpoGraph *graph,
                                  const char *vetting_json,
                                  const char *marks_json,
                                  const char *threshold,
                                  bool allow_warranted_mere_guess,
                                  char **out_report);

// Classifies belief and warrant status, writing the classification result
// in the CLI's JSON result format. `vetting_json`, `marks_json`, and
// `threshold` may be NULL as in [`cpo_graph_validate`].
//
// # Safety
// `graph` must be a live handle; string inputs must be NULL or
// NUL-terminated; `out_result` must be valid for writes.
enum CpoStatus cpo_graph_classify(const struct CpoGraph *graph,
                                  const char *vetting_json,
                                  const char *marks_json,
                                  const char *threshold,
                                  bool allow_warranted_mere_guess,
                                  char **out_result);

// Classifies and writes the result back into the graph in place: derived
// classes for believed / properly-functioning / warranted nodes and a
// system annotation on mere guesses. Asserted content is unchanged, so
// the call is idempotent.
//
// # Safety
// `graph` must be a live handle with no other outstanding borrow; string
// inputs must be NULL or NUL-terminated.
enum CpoStatus cpo_graph_annotate(struct CpoGraph *graph,
                                  const char *vetting_json,
                                  const char *marks_json,
                                  const char *threshold,
                                  bool allow_warranted_mere_guess);

// Tags a JSONL event log into a workflow graph using a mapping table.
// Optional outputs: the tagged-step records (JSONL), vetting records
// derived from the mapping (JSON), and skipped events with reasons
// (JSONL). Unmappable events are skipped, never an error; malformed input
// fails with `Parse` and an inconsistent mapping with `Validation`.
//
// # Safety
// `events_jsonl` and `mapping_json` must be NUL-terminated; out-pointers
// must be NULL or valid for writes.
enum CpoStatus cpo_tag(const char *events_jsonl,
                       const char *mapping_json,
                       struct CpoGraph **out_graph,
                       char **out_records,
                       char **out_vetting,
                       char **out_skipped);

// Runs outcome analytics over tagged-step records (JSONL) and an
// outcomes file (JSON), writing the CLI's analysis report JSON. When
// `by_unit` is true the per-unit comparison section is included.
//
// # Safety
// `records_jsonl` and `outcomes_json` must be NUL-terminated;
// `out_report` must be valid for writes.
enum CpoStatus cpo_analyze(const char *records_jsonl,
                           const char *outcomes_json,
                           bool by_unit,
                           char **out_report);

// Generates a synthetic corpus from a generator spec (JSON) and a seed,
// in the CLI's four file formats: events (JSONL), mapping table (JSON),
// outcomes (JSON), and veridicality marks (JSON). Each out-pointer may be
// NULL to skip that output. A malformed or out-of-range spec fails with
// `Parse`. Generation is deterministic in (spec, seed).
//
// # Safety
// `spec_json` must be NUL-terminated; out-pointers must be NULL or valid
// for writes.
enum CpoStatus cpo_generate(const char *spec_json,
                            uint64_t seed,
                            char **out_events,
                            char **out_mapping,
                            char **out_outcomes,
                            char **out_marks);

// Message for the most recent failure on this thread, or NULL when the
// most recent call succeeded. The pointer is borrowed: it stays valid
// until the next library call on the same thread. Do not free it.
const char *cpo_last_error(void);

// Releases a string produced by this library. NULL is a no-op.
//
// # Safety
// `text` must be NULL or a string from this library, freed at most once.
void cpo_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CPO_H */
