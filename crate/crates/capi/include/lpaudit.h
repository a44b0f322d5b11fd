#ifndef LPAUDIT_H
#define LPAUDIT_H

/* Generated by cbindgen from lpaudit-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a call. Anything other than `LP_STATUS_OK` leaves a
// diagnostic in `lp_last_error_message`.
typedef enum {
  LP_STATUS_OK = 0,
  // A required pointer argument was null.
  LP_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  LP_STATUS_UTF8 = 2,
  // A document failed to parse.
  LP_STATUS_PARSE = 3,
  // The joint and channel disagree on the source alphabet.
  LP_STATUS_AXIS_MISMATCH = 4,
  // A value sits outside the function's domain.
  LP_STATUS_DOMAIN = 5,
  // An argument was structurally invalid.
  LP_STATUS_INVALID_ARGUMENT = 6,
  // An internal invariant failed; the library state is still sound.
  LP_STATUS_PANIC = 7,
} LpStatus;

// A channel handle.
typedef struct LpChannel LpChannel;

// A joint distribution handle.
typedef struct LpJoint LpJoint;

// A computed leakage report handle.
typedef struct LpReport LpReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string; never freed.
const char *lp_version(void);

// Message for the current thread's most recent failure, or null after a
// success. The pointer is invalidated by the next library call on the
// same thread; copy it if it must outlive that.
const char *lp_last_error_message(void);

// Parses a joint distribution document.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
LpStatus lp_joint_parse_json(const char *text, LpJoint **out);

// Frees a joint handle; null is a no-op.
//
// # Safety
// `joint` must come from this library and not already be freed.
void lp_joint_free(LpJoint *joint);

// Parses a channel document.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
LpStatus lp_channel_parse_json(const char *text, LpChannel **out);

// Builds a binary symmetric channel with flip probability `p` over the
// two-symbol source axis `x0, x1`.
//
// # Safety
// `out` must be a writable pointer.
LpStatus lp_channel_bsc(double p, LpChannel **out);

// Frees a channel handle; null is a no-op.
//
// # Safety
// `channel` must come from this library and not already be freed.
void lp_channel_free(LpChannel *channel);

// Computes the full leakage report for a joint and a channel on its
// source axis: both privacy levels, the LDP bound, both utility measures,
// and the internal consistency flags.
//
// # Safety
// `joint` and `channel` must be live handles and `out` writable.
LpStatus lp_report_compute(const LpJoint *joint, const LpChannel *channel, LpReport **out);

// Frees a report handle; null is a no-op.
//
// # Safety
// `report` must come from this library and not already be freed.
void lp_report_free(LpReport *report);

// Conditional privacy level in bits; NaN if `report` is null.
//
// # Safety
// `report` must be null or a live handle.
double lp_report_gamma_lpp(const LpReport *report);

// Unconditional privacy level in bits; NaN if `report` is null.
//
// # Safety
// `report` must be null or a live handle.
double lp_report_gamma_ulpp(const LpReport *report);

// Local differential privacy level in bits; NaN if `report` is null and
// +inf for a channel with a structural zero.
//
// # Safety
// `report` must be null or a live handle.
double lp_report_epsilon_ldp(const LpReport *report);

// Shannon utility in bits; NaN if `report` is null.
//
// # Safety
// `report` must be null or a live handle.
double lp_report_utility_i1(const LpReport *report);

// Min-entropy utility in bits; NaN if `report` is null.
//
// # Safety
// `report` must be null or a live handle.
double lp_report_utility_iinf(const LpReport *report);

// Whether every internal consistency flag holds; false if `report` is
// null.
//
// # Safety
// `report` must be null or a live handle.
bool lp_report_flags_pass(const LpReport *report);

// Serializes the report as pretty-printed JSON with floats rounded to 12
// significant digits. Free the string with `lp_string_free`.
//
// # Safety
// `report` must be a live handle and `out` writable.
LpStatus lp_report_to_json(const LpReport *report, char **out);

// Frees a string returned by this library.
//
// # Safety
// `s` must come from this library and not already be freed.
void lp_string_free(char *s);

// Certifies the conditional privacy level of `channel` on `joint` against
// a budget of `gamma` bits at comparison tolerance `tolerance`. Writes
// the verdict and the achieved level.
//
// # Safety
// `joint` and `channel` must be live handles; `out_pass` and
// `out_achieved` must be writable.
LpStatus lp_certify(const LpJoint *joint,
                    const LpChannel *channel,
                    double gamma,
                    double tolerance,
                    bool *out_pass,
                    double *out_achieved);

// Maximal leakage of `channel` under the source marginal of `joint`, in
// bits.
//
// # Safety
// `joint` and `channel` must be live handles and `out_bits` writable.
LpStatus lp_max_leakage(const LpJoint *joint, const LpChannel *channel, double *out_bits);

// Local differential privacy level of a channel alone, in bits; +inf when
// a structural zero makes the channel uncertifiable.
//
// # Safety
// `channel` must be a live handle and `out_bits` writable.
LpStatus lp_ldp_epsilon(const LpChannel *channel, double *out_bits);

// Worst-group accuracy floor forced by a balanced-accuracy target `beta`
// in (0.5, 1).
//
// # Safety
// `out` must be a writable pointer.
LpStatus lp_accuracy_bound(double beta, double *out);

// Inverse of the binary entropy function on [0, 1], returning the root in
// [0, 1/2].
//
// # Safety
// `out` must be a writable pointer.
LpStatus lp_binary_entropy_inverse(double t, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LPAUDIT_H */
