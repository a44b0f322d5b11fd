//! Budget certification, the executable theorem suite, and the closed-form
//! task-accuracy bound.
//!
//! Certification compares an achieved leakage value against a budget with a
//! fixed absolute tolerance and reports the residual, so a pass is
//! reproducible rather than platform-dependent.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dist::{posterior_positivity, push_forward, Channel, JointPmf, Pmf, PosteriorReport};
use crate::error::{Error, Result};
use crate::fmtnum::sig12;
use crate::measures::{cond_max_leakage, conditional_mi, i_inf, max_leakage, shannon_mi};

/// Absolute tolerance for budget comparisons and theorem flags.
pub const CERT_TOL: f64 = 1e-9;

/// A quantity in bits. Serializes finite values at 12 significant digits
/// and infinities as the strings "inf" / "-inf", which plain JSON numbers
/// cannot carry.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bits(pub f64);

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(sig12(self.0))
        } else if self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_f64()
                .map(Bits)
                .ok_or_else(|| serde::de::Error::custom("bits value out of range")),
            serde_json::Value::String(s) if s == "inf" => Ok(Bits(f64::INFINITY)),
            serde_json::Value::String(s) if s == "-inf" => Ok(Bits(f64::NEG_INFINITY)),
            _ => Err(serde::de::Error::custom(
                "bits value must be a number or inf",
            )),
        }
    }
}

/// Leakage budget in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertBudget {
    pub gamma: f64,
}

impl CertBudget {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::Domain(format!(
                "leakage budget must be finite and nonnegative, got {gamma}"
            )));
        }
        Ok(CertBudget { gamma })
    }
}

/// Local differential privacy level of a channel, base-2 convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LdpEpsilon {
    pub epsilon: Bits,
}

/// One named theorem check with its slack.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremFlag {
    pub name: String,
    pub pass: bool,
    pub residual: Bits,
    pub note: String,
}

/// Everything the certifier knows about one (joint, channel) pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeakageReport {
    pub gamma_lpp: Bits,
    pub gamma_ulpp: Bits,
    pub epsilon_ldp: LdpEpsilon,
    pub utility_i1: Bits,
    pub utility_iinf: Bits,
    pub posterior: PosteriorReport,
    pub theorem_flags: Vec<TheoremFlag>,
}

impl LeakageReport {
    pub fn all_flags_pass(&self) -> bool {
        self.theorem_flags.iter().all(|f| f.pass)
    }
}

/// Outcome of a budget certification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertOutcome {
    pub pass: bool,
    pub achieved: Bits,
    pub budget: f64,
    /// achieved − budget; negative slack means a comfortable pass.
    pub residual: Bits,
}

fn certify(achieved: f64, budget: CertBudget, tol: f64) -> CertOutcome {
    CertOutcome {
        pass: achieved <= budget.gamma + tol,
        achieved: Bits(achieved),
        budget: budget.gamma,
        residual: Bits(achieved - budget.gamma),
    }
}

/// Privacy level ε = log₂ max_z max_{x,x'} P(z|x)/P(z|x'); infinite when
/// some output distinguishes two inputs with certainty.
pub fn ldp_epsilon(ch: &Channel) -> Result<LdpEpsilon> {
    if ch.input_axes().len() != 1 {
        return Err(Error::AxisMismatch(
            "privacy level is defined for single-input channels".into(),
        ));
    }
    let (n_rows, n_out) = (ch.n_rows(), ch.n_out());
    let mut max_ratio = 1.0f64;
    for z in 0..n_out {
        let mut hi = 0.0f64;
        let mut lo = f64::INFINITY;
        for x in 0..n_rows {
            let p = ch.get(x, z);
            hi = hi.max(p);
            lo = lo.min(p);
        }
        if hi == 0.0 {
            continue;
        }
        if lo == 0.0 {
            return Ok(LdpEpsilon {
                epsilon: Bits(f64::INFINITY),
            });
        }
        max_ratio = max_ratio.max(hi / lo);
    }
    Ok(LdpEpsilon {
        epsilon: Bits(max_ratio.log2().max(0.0)),
    })
}

/// Certifies the conditional leakage of a channel against a budget.
pub fn certify_lpp(
    jxy: &JointPmf,
    ch: &Channel,
    budget: CertBudget,
    tol: f64,
) -> Result<CertOutcome> {
    let achieved = cond_max_leakage(jxy, ch)?.bits;
    Ok(certify(achieved, budget, tol))
}

/// Certifies the unconditional leakage of a channel against a budget.
pub fn certify_ulpp(px: &Pmf, ch: &Channel, budget: CertBudget, tol: f64) -> Result<CertOutcome> {
    let achieved = max_leakage(px, ch)?.bits;
    Ok(certify(achieved, budget, tol))
}

/// True when all channel rows agree on the support of `px` within `tol`;
/// the shape a zero-leakage channel must have.
pub fn rows_identical_on_support(px: &Pmf, ch: &Channel, tol: f64) -> bool {
    let support = px.support();
    let Some((&first, rest)) = support.split_first() else {
        return true;
    };
    for &x in rest {
        for z in 0..ch.n_out() {
            if (ch.get(x, z) - ch.get(first, z)).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// Runs every closed-form theorem check on one (joint, channel) pair and
/// assembles the full report.
pub fn theorem_report(jxy: &JointPmf, ch: &Channel) -> Result<LeakageReport> {
    if jxy.rank() != 2 {
        return Err(Error::AxisMismatch(format!(
            "certification expects a two-axis joint, got {} axes",
            jxy.rank()
        )));
    }
    let posterior = posterior_positivity(jxy)?;
    let px = jxy.marginal(0);
    let gamma_lpp = cond_max_leakage(jxy, ch)?.bits;
    let gamma_ulpp = max_leakage(&px, ch)?.bits;
    let epsilon_ldp = ldp_epsilon(ch)?;

    let jyz = push_forward(jxy.into(), ch, false)?;
    let utility_i1 = shannon_mi(&jyz)?.bits;
    let utility_iinf = i_inf(&jyz)?.bits;

    let jxzy = push_forward(jxy.into(), ch, true)?.permute(&[0, 2, 1]);
    let cmi = conditional_mi(&jxzy)?.bits;

    let mut flags = Vec::with_capacity(4);

    let utility_residual = (utility_i1 - gamma_lpp).max(utility_iinf - gamma_lpp);
    flags.push(if posterior.strictly_positive {
        TheoremFlag {
            name: "utility_within_conditional_leakage".into(),
            pass: utility_residual <= CERT_TOL,
            residual: Bits(utility_residual),
            note: "both utilities must sit below the conditional leakage".into(),
        }
    } else {
        TheoremFlag {
            name: "utility_within_conditional_leakage".into(),
            pass: true,
            residual: Bits(utility_residual),
            note: "not binding: posterior has zero cells".into(),
        }
    });

    let gap = (gamma_lpp - gamma_ulpp).abs();
    flags.push(if posterior.strictly_positive {
        TheoremFlag {
            name: "conditional_equals_unconditional".into(),
            pass: gap <= CERT_TOL,
            residual: Bits(gap),
            note: "strictly positive posterior collapses the two leakages".into(),
        }
    } else {
        TheoremFlag {
            name: "conditional_equals_unconditional".into(),
            pass: true,
            residual: Bits(gap),
            note: "not binding: posterior has zero cells".into(),
        }
    });

    let eps = epsilon_ldp.epsilon.0;
    flags.push(TheoremFlag {
        name: "privacy_level_dominates_leakage".into(),
        pass: gamma_lpp <= eps + CERT_TOL,
        residual: Bits(gamma_lpp - eps),
        note: "a private channel cannot leak more than its privacy level".into(),
    });

    let lpp_zero = gamma_lpp <= CERT_TOL;
    let cmi_zero = cmi <= CERT_TOL;
    flags.push(TheoremFlag {
        name: "zero_leakage_iff_zero_conditional_information".into(),
        pass: lpp_zero == cmi_zero,
        residual: Bits(gamma_lpp.max(cmi)),
        note: format!(
            "gamma_lpp {} 1e-9, conditional information {} 1e-9",
            if lpp_zero { "<=" } else { ">" },
            if cmi_zero { "<=" } else { ">" }
        ),
    });

    Ok(LeakageReport {
        gamma_lpp: Bits(gamma_lpp),
        gamma_ulpp: Bits(gamma_ulpp),
        epsilon_ldp,
        utility_i1: Bits(utility_i1),
        utility_iinf: Bits(utility_iinf),
        posterior,
        theorem_flags: flags,
    })
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("entropy argument {p} outside [0,1]")));
    }
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).log2();
    }
    Ok(h)
}

/// The unique p ∈ [0, 1/2] with H₂(p) = t, by bisection.
pub fn binary_entropy_inverse(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("entropy value {t} outside [0,1]")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    if t == 1.0 {
        return Ok(0.5);
    }
    let mut lo = 0.0f64;
    let mut hi = 0.5f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let h = binary_entropy(mid)?;
        if (h - t).abs() <= 1e-13 {
            return Ok(mid);
        }
        if h < t {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() < f64::EPSILON {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Argument to [`accuracy_bound`]; an adversary accuracy strictly between
/// chance and certainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyBoundInput {
    pub beta: f64,
}

impl AccuracyBoundInput {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.5 && beta < 1.0) {
            return Err(Error::Domain(format!(
                "accuracy bound needs beta strictly inside (1/2, 1), got {beta}"
            )));
        }
        Ok(AccuracyBoundInput { beta })
    }
}

/// Upper bound on binary task accuracy given an adversary accuracy β:
/// 1 + log₂(β) / (2 log₂(−6 / log₂(β))).
pub fn accuracy_bound(input: AccuracyBoundInput) -> f64 {
    let log_beta = input.beta.log2();
    1.0 + log_beta / (2.0 * (-6.0 / log_beta).log2())
}
