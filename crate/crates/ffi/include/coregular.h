#ifndef COREGULAR_H
#define COREGULAR_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Width reported for `infinity`.
 */
#define COREG_WIDTH_INFINITE -1

/*
 Width reported when the engine could not decide.
 */
#define COREG_WIDTH_UNDETERMINED -2

/*
 Length reported for modules of infinite length.
 */
#define COREG_LENGTH_INFINITE -1

typedef enum CoregStatus {
  COREG_STATUS_OK = 0,
  COREG_STATUS_NULL_POINTER = 1,
  COREG_STATUS_INVALID_UTF8 = 2,
  COREG_STATUS_PARSE = 3,
  COREG_STATUS_UNRESOLVED_REFERENCE = 4,
  COREG_STATUS_INVALID_ARGUMENT = 5,
  COREG_STATUS_UNSUPPORTED = 6,
  COREG_STATUS_BUDGET_EXCEEDED = 7,
  COREG_STATUS_INCONSISTENT = 8,
  COREG_STATUS_PANIC = 9,
} CoregStatus;

/*
 An Artinian abelian group: finite part plus Prüfer part.
 */
typedef struct CoregArtinianGroup CoregArtinianGroup;

/*
 A parsed instance file.
 */
typedef struct CoregInstance CoregInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. Valid until the
 next failing call on the same thread.
 */
const char *coreg_last_error(void);

/*
 # Safety
 `s` must be NULL or a string returned by this library, not yet freed.
 */
void coreg_string_free(char *s);

/*
 Parses instance-file text. On a parse failure the message lists every
 error as `line:column: message`.

 # Safety
 `src` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CoregStatus coreg_instance_parse(const char *src, struct CoregInstance **out);

/*
 # Safety
 `inst` must be NULL or a handle from `coreg_instance_parse`, not yet freed.
 */
void coreg_instance_free(struct CoregInstance *inst);

/*
 `sha256:` digest of the canonical form; free with `coreg_string_free`.

 # Safety
 `inst` must be a live handle.
 */
char *coreg_instance_digest(const struct CoregInstance *inst);

/*
 `fwidth(ideal, artinian)` for named items of the instance, in either the
 polynomial or the integer world. Writes a nonnegative width,
 `COREG_WIDTH_INFINITE` or `COREG_WIDTH_UNDETERMINED`.

 # Safety
 `inst` must be a live handle, the names NUL-terminated strings and `out`
 a valid pointer.
 */
enum CoregStatus coreg_fwidth(const struct CoregInstance *inst,
                              const char *ideal,
                              const char *artinian,
                              int64_t *out);

/*
 `fdepth(ideal, module)` over a polynomial ring, with the same encoding as
 `coreg_fwidth`.

 # Safety
 As for `coreg_fwidth`.
 */
enum CoregStatus coreg_fdepth(const struct CoregInstance *inst,
                              const char *ideal,
                              const char *module,
                              int64_t *out);

/*
 Runs a `coreg` command against the instance and hands back the JSON
 report. `argv` holds the command and its flags without the program name
 or instance path, e.g. `{"fwidth", "--ideal", "a", "--N", "N"}`.
 `exit_code` receives the code the command line tool would exit with.
 Usage errors return `CoregStatus::InvalidArgument` with the clap message.

 # Safety
 `inst` must be a live handle, `argv` must point to `argc` NUL-terminated
 strings, and `out_json` and `exit_code` must be valid pointers.
 */
enum CoregStatus coreg_report(const struct CoregInstance *inst,
                              size_t argc,
                              const char *const *argv,
                              char **out_json,
                              int32_t *exit_code);

/*
 Builds `(+) Z/p^e (+) Z(q^inf)^k` from prime powers. `finite` holds
 `finite_len` pairs `(p, e)` flattened; `prufer` holds `prufer_len` pairs
 `(q, k)` flattened.

 # Safety
 The arrays must hold `2 * len` readable entries (or be NULL when the
 length is 0) and `out` must be a valid pointer.
 */
enum CoregStatus coreg_artinian_group_new(const uint64_t *finite,
                                          size_t finite_len,
                                          const uint64_t *prufer,
                                          size_t prufer_len,
                                          struct CoregArtinianGroup **out);

/*
 # Safety
 `g` must be NULL or a handle from `coreg_artinian_group_new`, not yet freed.
 */
void coreg_artinian_group_free(struct CoregArtinianGroup *g);

/*
 Length of the group, or `COREG_LENGTH_INFINITE`.

 # Safety
 `g` must be a live handle and `out` a valid pointer.
 */
enum CoregStatus coreg_artinian_group_length(const struct CoregArtinianGroup *g, int64_t *out);

/*
 `fwidth((a), N)` over the integers.

 # Safety
 `g` must be a live handle and `out` a valid pointer.
 */
enum CoregStatus coreg_artinian_group_fwidth(const struct CoregArtinianGroup *g,
                                             int64_t a,
                                             int64_t *out);

/*
 Canonical text of the group, e.g. `Z/4 + Z(2^inf)`; free with
 `coreg_string_free`.

 # Safety
 `g` must be a live handle.
 */
char *coreg_artinian_group_to_string(const struct CoregArtinianGroup *g);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COREGULAR_H */
