/* C interface to the zw diagram library. Generated by cbindgen; do not edit. */

#ifndef ZW_H
#define ZW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum ZwStatus {
  ZW_STATUS_OK = 0,
  // A required pointer argument was null.
  ZW_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  ZW_STATUS_UTF8 = 2,
  // The input did not parse.
  ZW_STATUS_PARSE = 3,
  // The diagram breaks a structural invariant.
  ZW_STATUS_INVALID = 4,
  // A leg cap or width limit was exceeded.
  ZW_STATUS_RESOURCE = 5,
  // The modulus was out of range.
  ZW_STATUS_BAD_MODULUS = 6,
  // An internal error; the library state is unaffected.
  ZW_STATUS_INTERNAL = 7,
} ZwStatus;

// Opaque diagram handle.
typedef struct ZwDiagram ZwDiagram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread. Valid until the next
// failing call on the same thread; never null.
const char *zw_last_error(void);

// Parse a term such as `(cup * id) ; (id * cap)`.
enum ZwStatus zw_diagram_from_term(const char *src, struct ZwDiagram **out);

// Parse the JSON graph format.
enum ZwStatus zw_diagram_from_json(const char *src, struct ZwDiagram **out);

// Release a diagram. Null is ignored.
void zw_diagram_free(struct ZwDiagram *d);

// Release a string returned by this library. Null is ignored.
void zw_string_free(char *s);

// Number of boundary legs, or 0 for a null handle.
size_t zw_diagram_num_legs(const struct ZwDiagram *d);

// Number of vertices, or 0 for a null handle.
size_t zw_diagram_num_vertices(const struct ZwDiagram *d);

// Serialize to the JSON graph format.
enum ZwStatus zw_diagram_to_json(const struct ZwDiagram *d, char **out);

// Evaluate to the tensor text format. `modulus` 0 means the integers;
// `leg_cap` 0 means the default cap.
enum ZwStatus zw_eval(const struct ZwDiagram *d, uint64_t modulus, size_t leg_cap, char **out);

// Normalize into a new diagram handle.
enum ZwStatus zw_normalize(const struct ZwDiagram *d, uint64_t modulus, struct ZwDiagram **out);

// The normal-form file of a diagram's tensor.
enum ZwStatus zw_normal_form_json(const struct ZwDiagram *d, uint64_t modulus, char **out);

// Whether the diagram is a normal-form template.
enum ZwStatus zw_is_normal_form(const struct ZwDiagram *d, bool *out);

// Graphviz DOT text.
enum ZwStatus zw_render_dot(const struct ZwDiagram *d, char **out);

// Check the rule catalog up to `max_arity`; `modulus` 0 means the
// integers, otherwise `or(modulus)` is included. Stores the number of
// unsound rules in `failed`.
enum ZwStatus zw_verify_rules(size_t max_arity, uint64_t modulus, size_t *failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZW_H */
