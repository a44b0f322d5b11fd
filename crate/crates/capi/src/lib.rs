//! C bindings over the exact leakage measures and the certifier.
//!
//! Every constructor returns an owned handle through an out-pointer and a
//! status code; handles are freed with their matching `*_free` function.
//! On failure the out-pointer is nulled and a message is stored per thread,
//! readable via [`lp_last_error_message`] until the next call on that
//! thread. No call unwinds across the boundary: a panic is caught and
//! surfaced as `LP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lpaudit::certify::{
    accuracy_bound, binary_entropy_inverse, certify_lpp, ldp_epsilon, theorem_report,
    AccuracyBoundInput, CertBudget, LeakageReport,
};
use lpaudit::dist::{channel_from_json, joint_from_json, Alphabet, Channel, JointPmf};
use lpaudit::error::Error;
use lpaudit::fmtnum::round_json_numbers;
use lpaudit::measures::max_leakage;

/// Outcome of a call. Anything other than `LP_STATUS_OK` leaves a
/// diagnostic in `lp_last_error_message`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LpStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    /// A document failed to parse.
    Parse = 3,
    /// The joint and channel disagree on the source alphabet.
    AxisMismatch = 4,
    /// A value sits outside the function's domain.
    Domain = 5,
    /// An argument was structurally invalid.
    InvalidArgument = 6,
    /// An internal invariant failed; the library state is still sound.
    Panic = 7,
}

/// A joint distribution handle.
pub struct LpJoint(JointPmf);

/// A channel handle.
pub struct LpChannel(Channel);

/// A computed leakage report handle.
pub struct LpReport(LeakageReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn ok() -> LpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    LpStatus::Ok
}

fn null_arg(what: &str) -> LpStatus {
    set_error(format!("null pointer: {what}"));
    LpStatus::NullArgument
}

fn status_for(err: &Error) -> LpStatus {
    match err {
        Error::Parse(_) | Error::Io(_) => LpStatus::Parse,
        Error::AxisMismatch(_) => LpStatus::AxisMismatch,
        Error::Domain(_)
        | Error::NegativeMass { .. }
        | Error::NotNormalized { .. }
        | Error::ZeroEvent { .. }
        | Error::UndefinedPosterior { .. }
        | Error::ZeroMass { .. }
        | Error::Divergence(_) => LpStatus::Domain,
        _ => LpStatus::InvalidArgument,
    }
}

fn report_err(err: Error) -> LpStatus {
    let status = status_for(&err);
    set_error(err.to_string());
    status
}

fn guard<F: FnOnce() -> LpStatus>(f: F) -> LpStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic".into());
        LpStatus::Panic
    })
}

unsafe fn cstr<'a>(p: *const c_char) -> Result<&'a str, LpStatus> {
    if p.is_null() {
        return Err(null_arg("string argument"));
    }
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8".into());
        LpStatus::Utf8
    })
}

/// Library version as a static NUL-terminated string; never freed.
#[no_mangle]
pub extern "C" fn lp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the current thread's most recent failure, or null after a
/// success. The pointer is invalidated by the next library call on the
/// same thread; copy it if it must outlive that.
#[no_mangle]
pub extern "C" fn lp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Parses a joint distribution document.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lp_joint_parse_json(
    text: *const c_char,
    out: *mut *mut LpJoint,
) -> LpStatus {
    guard(|| {
        let Some(out) = (unsafe { out.as_mut() }) else {
            return null_arg("out");
        };
        *out = std::ptr::null_mut();
        let text = match unsafe { cstr(text) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        match joint_from_json(text) {
            Ok(j) => {
                *out = Box::into_raw(Box::new(LpJoint(j)));
                ok()
            }
            Err(e) => report_err(e),
        }
    })
}

/// Frees a joint handle; null is a no-op.
///
/// # Safety
/// `joint` must come from this library and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn lp_joint_free(joint: *mut LpJoint) {
    if !joint.is_null() {
        drop(unsafe { Box::from_raw(joint) });
    }
}

/// Parses a channel document.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lp_channel_parse_json(
    text: *const c_char,
    out: *mut *mut LpChannel,
) -> LpStatus {
    guard(|| {
        let Some(out) = (unsafe { out.as_mut() }) else {
            return null_arg("out");
        };
        *out = std::ptr::null_mut();
        let text = match unsafe { cstr(text) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        match channel_from_json(text) {
            Ok(ch) => {
                *out = Box::into_raw(Box::new(LpChannel(ch)));
                ok()
            }
            Err(e) => report_err(e),
        }
    })
}

/// Builds a binary symmetric channel with flip probability `p` over the
/// two-symbol source axis `x0, x1`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lp_channel_bsc(p: f64, out: *mut *mut LpChannel) -> LpStatus {
    guard(|| {
        let Some(out) = (unsafe { out.as_mut() }) else {
            return null_arg("out");
        };
        *out = std::ptr::null_mut();
        match Channel::bsc(p, Alphabet::indexed("x", 2), Alphabet::indexed("z", 2)) {
            Ok(ch) => {
                *out = Box::into_raw(Box::new(LpChannel(ch)));
                ok()
            }
            Err(e) => report_err(e),
        }
    })
}

/// Frees a channel handle; null is a no-op.
///
/// # Safety
/// `channel` must come from this library and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn lp_channel_free(channel: *mut LpChannel) {
    if !channel.is_null() {
        drop(unsafe { Box::from_raw(channel) });
    }
}

/// Computes the full leakage report for a joint and a channel on its
/// source axis: both privacy levels, the LDP bound, both utility measures,
/// and the internal consistency flags.
///
/// # Safety
/// `joint` and `channel` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_report_compute(
    joint: *const LpJoint,
    channel: *const LpChannel,
    out: *mut *mut LpReport,
) -> LpStatus {
    guard(|| {
        let Some(out) = (unsafe { out.as_mut() }) else {
            return null_arg("out");
        };
        *out = std::ptr::null_mut();
        let (Some(j), Some(ch)) = (unsafe { joint.as_ref() }, unsafe { channel.as_ref() }) else {
            return null_arg("joint or channel");
        };
        match theorem_report(&j.0, &ch.0) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(LpReport(r)));
                ok()
            }
            Err(e) => report_err(e),
        }
    })
}

/// Frees a report handle; null is a no-op.
///
/// # Safety
/// `report` must come from this library and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn lp_report_free(report: *mut LpReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}

unsafe fn report_field(report: *const LpReport, get: impl Fn(&LeakageReport) -> f64) -> f64 {
    unsafe { report.as_ref() }.map_or(f64::NAN, |r| get(&r.0))
}

/// Conditional privacy level in bits; NaN if `report` is null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_report_gamma_lpp(report: *const LpReport) -> f64 {
    unsafe { report_field(report, |r| r.gamma_lpp.0) }
}

/// Unconditional privacy level in bits; NaN if `report` is null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_report_gamma_ulpp(report: *const LpReport) -> f64 {
    unsafe { report_field(report, |r| r.gamma_ulpp.0) }
}

/// Local differential privacy level in bits; NaN if `report` is null and
/// +inf for a channel with a structural zero.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_report_epsilon_ldp(report: *const LpReport) -> f64 {
    unsafe { report_field(report, |r| r.epsilon_ldp.epsilon.0) }
}

/// Shannon utility in bits; NaN if `report` is null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_report_utility_i1(report: *const LpReport) -> f64 {
    unsafe { report_field(report, |r| r.utility_i1.0) }
}

/// Min-entropy utility in bits; NaN if `report` is null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_report_utility_iinf(report: *const LpReport) -> f64 {
    unsafe { report_field(report, |r| r.utility_iinf.0) }
}

/// Whether every internal consistency flag holds; false if `report` is
/// null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_report_flags_pass(report: *const LpReport) -> bool {
    unsafe { report.as_ref() }.is_some_and(|r| r.0.all_flags_pass())
}

/// Serializes the report as pretty-printed JSON with floats rounded to 12
/// significant digits. Free the string with `lp_string_free`.
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_report_to_json(
    report: *const LpReport,
    out: *mut *mut c_char,
) -> LpStatus {
    guard(|| {
        let Some(out) = (unsafe { out.as_mut() }) else {
            return null_arg("out");
        };
        *out = std::ptr::null_mut();
        let Some(r) = (unsafe { report.as_ref() }) else {
            return null_arg("report");
        };
        let mut v = match serde_json::to_value(&r.0) {
            Ok(v) => v,
            Err(e) => return report_err(e.into()),
        };
        round_json_numbers(&mut v);
        let text = match serde_json::to_string_pretty(&v) {
            Ok(t) => t,
            Err(e) => return report_err(e.into()),
        };
        match CString::new(text) {
            Ok(c) => {
                *out = c.into_raw();
                ok()
            }
            Err(_) => {
                set_error("serialized report contained a NUL byte".into());
                LpStatus::Panic
            }
        }
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn lp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Certifies the conditional privacy level of `channel` on `joint` against
/// a budget of `gamma` bits at comparison tolerance `tolerance`. Writes
/// the verdict and the achieved level.
///
/// # Safety
/// `joint` and `channel` must be live handles; `out_pass` and
/// `out_achieved` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_certify(
    joint: *const LpJoint,
    channel: *const LpChannel,
    gamma: f64,
    tolerance: f64,
    out_pass: *mut bool,
    out_achieved: *mut f64,
) -> LpStatus {
    guard(|| {
        let (Some(out_pass), Some(out_achieved)) = (unsafe { out_pass.as_mut() }, unsafe {
            out_achieved.as_mut()
        }) else {
            return null_arg("out_pass or out_achieved");
        };
        let (Some(j), Some(ch)) = (unsafe { joint.as_ref() }, unsafe { channel.as_ref() }) else {
            return null_arg("joint or channel");
        };
        if !tolerance.is_finite() || tolerance < 0.0 {
            set_error(format!(
                "tolerance must be finite and nonnegative, got {tolerance}"
            ));
            return LpStatus::InvalidArgument;
        }
        let budget = match CertBudget::new(gamma) {
            Ok(b) => b,
            Err(e) => return report_err(e),
        };
        match certify_lpp(&j.0, &ch.0, budget, tolerance) {
            Ok(outcome) => {
                *out_pass = outcome.pass;
                *out_achieved = outcome.achieved.0;
                ok()
            }
            Err(e) => report_err(e),
        }
    })
}

/// Maximal leakage of `channel` under the source marginal of `joint`, in
/// bits.
///
/// # Safety
/// `joint` and `channel` must be live handles and `out_bits` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_max_leakage(
    joint: *const LpJoint,
    channel: *const LpChannel,
    out_bits: *mut f64,
) -> LpStatus {
    guard(|| {
        let Some(out_bits) = (unsafe { out_bits.as_mut() }) else {
            return null_arg("out_bits");
        };
        let (Some(j), Some(ch)) = (unsafe { joint.as_ref() }, unsafe { channel.as_ref() }) else {
            return null_arg("joint or channel");
        };
        match max_leakage(&j.0.marginal(0), &ch.0) {
            Ok(v) => {
                *out_bits = v.bits;
                ok()
            }
            Err(e) => report_err(e),
        }
    })
}

/// Local differential privacy level of a channel alone, in bits; +inf when
/// a structural zero makes the channel uncertifiable.
///
/// # Safety
/// `channel` must be a live handle and `out_bits` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_ldp_epsilon(channel: *const LpChannel, out_bits: *mut f64) -> LpStatus {
    guard(|| {
        let Some(out_bits) = (unsafe { out_bits.as_mut() }) else {
            return null_arg("out_bits");
        };
        let Some(ch) = (unsafe { channel.as_ref() }) else {
            return null_arg("channel");
        };
        match ldp_epsilon(&ch.0) {
            Ok(eps) => {
                *out_bits = eps.epsilon.0;
                ok()
            }
            Err(e) => report_err(e),
        }
    })
}

/// Worst-group accuracy floor forced by a balanced-accuracy target `beta`
/// in (0.5, 1).
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lp_accuracy_bound(beta: f64, out: *mut f64) -> LpStatus {
    guard(|| {
        let Some(out) = (unsafe { out.as_mut() }) else {
            return null_arg("out");
        };
        match AccuracyBoundInput::new(beta) {
            Ok(input) => {
                *out = accuracy_bound(input);
                ok()
            }
            Err(e) => report_err(e),
        }
    })
}

/// Inverse of the binary entropy function on [0, 1], returning the root in
/// [0, 1/2].
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lp_binary_entropy_inverse(t: f64, out: *mut f64) -> LpStatus {
    guard(|| {
        let Some(out) = (unsafe { out.as_mut() }) else {
            return null_arg("out");
        };
        match binary_entropy_inverse(t) {
            Ok(p) => {
                *out = p;
                ok()
            }
            Err(e) => report_err(e),
        }
    })
}
