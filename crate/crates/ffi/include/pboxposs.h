#ifndef PBOXPOSS_H
#define PBOXPOSS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PbpJointRule {
  PBP_JOINT_RULE_FRECHET = 0,
  PBP_JOINT_RULE_INDEPENDENT = 1,
  PBP_JOINT_RULE_RANDOM_SET_OUTER = 2,
} PbpJointRule;

// Result code of every fallible call.
typedef enum PbpStatus {
  PBP_STATUS_OK = 0,
  PBP_STATUS_NULL_POINTER = 1,
  PBP_STATUS_INVALID_UTF8 = 2,
  PBP_STATUS_INVALID_DOCUMENT = 3,
  PBP_STATUS_INVALID_ARGUMENT = 4,
  // The model does not support the operation, e.g. converting a p-box
  // that is not a possibility measure.
  PBP_STATUS_NOT_APPLICABLE = 5,
  PBP_STATUS_PANIC = 6,
} PbpStatus;

// Opaque p-box handle.
typedef struct PbpPBox PbpPBox;

// Opaque possibility distribution handle.
typedef struct PbpPossDist PbpPossDist;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static NUL-terminated string.
const char *pbp_version(void);

// Message of the last failed call on this thread, empty after a success.
// Valid until the next call on the same thread.
const char *pbp_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void pbp_string_free(char *s);

// Builds a p-box from a document with `classes`, `lower` and `upper`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum PbpStatus pbp_pbox_from_json(const char *json, struct PbpPBox **out);

// # Safety
// `p` must be null or a handle from this library, not yet freed.
void pbp_pbox_free(struct PbpPBox *p);

// The p-box as a JSON document.
//
// # Safety
// `p` must be a live handle and `out` a writable pointer.
enum PbpStatus pbp_pbox_to_json(const struct PbpPBox *p, char **out);

// Upper probability of the event given as comma-separated labels.
//
// # Safety
// `p` must be a live handle, `event` a NUL-terminated string and `out` a
// writable pointer.
enum PbpStatus pbp_pbox_upper(const struct PbpPBox *p, const char *event, char **out);

// Lower probability of the event given as comma-separated labels.
//
// # Safety
// As for [`pbp_pbox_upper`].
enum PbpStatus pbp_pbox_lower(const struct PbpPBox *p, const char *event, char **out);

// # Safety
// `p` must be a live handle and `out` a writable pointer.
enum PbpStatus pbp_pbox_is_maxitive(const struct PbpPBox *p, bool *out);

// The possibility distribution of a maxitive p-box. Returns
// `PBP_STATUS_NOT_APPLICABLE` otherwise, with a witness event in the error
// message.
//
// # Safety
// `p` must be a live handle and `out` a writable pointer.
enum PbpStatus pbp_pbox_to_possibility(const struct PbpPBox *p, struct PbpPossDist **out);

// Builds a distribution from a document with `pi`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum PbpStatus pbp_possibility_from_json(const char *json, struct PbpPossDist **out);

// # Safety
// `pi` must be null or a handle from this library, not yet freed.
void pbp_possibility_free(struct PbpPossDist *pi);

// The distribution as a JSON document `{"pi": {...}}`.
//
// # Safety
// `pi` must be a live handle and `out` a writable pointer.
enum PbpStatus pbp_possibility_to_json(const struct PbpPossDist *pi, char **out);

// Possibility of the event given as comma-separated labels.
//
// # Safety
// `pi` must be a live handle, `event` a NUL-terminated string and `out` a
// writable pointer.
enum PbpStatus pbp_possibility_measure(const struct PbpPossDist *pi, const char *event, char **out);

// The p-box induced on the level-set ordering of the distribution.
//
// # Safety
// `pi` must be a live handle and `out` a writable pointer.
enum PbpStatus pbp_possibility_to_pbox(const struct PbpPossDist *pi, struct PbpPBox **out);

// Joint distribution of the marginals in a document with `marginals`,
// returned as a JSON document `{"pi": {...}}` with points labelled
// `x1|x2|…`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum PbpStatus pbp_joint(const char *json, enum PbpJointRule rule, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PBOXPOSS_H */
