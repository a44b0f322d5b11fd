//! Exact information and leakage measures on finite distributions.
//!
//! All values are base-2 logarithms, reported in bits. Joints place the
//! target on axis 0; when a measure conditions on a side variable, that
//! variable sits on the last axis.

use serde::{Deserialize, Serialize};

use crate::dist::{Channel, JointPmf, Pmf};
use crate::error::{Error, Result};

/// Rényi order selector; only the two orders used by the gain measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaOrder {
    One,
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureKind {
    ShannonMI,
    CondMI,
    IInf,
    IInfCond,
    MaxLeakage,
    CondMaxLeakage,
}

/// A measure result in bits, tagged with which measure produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub bits: f64,
    pub kind: MeasureKind,
}

impl MeasureValue {
    fn clamped(bits: f64, kind: MeasureKind) -> Self {
        let bits = if bits < 0.0 { 0.0 } else { bits };
        MeasureValue { bits, kind }
    }
}

/// Shannon mutual information I(A;B) over a two-axis joint.
pub fn shannon_mi(j: &JointPmf) -> Result<MeasureValue> {
    if j.rank() != 2 {
        return Err(Error::AxisMismatch(format!(
            "shannon_mi expects a two-axis joint, got {} axes",
            j.rank()
        )));
    }
    let pa = j.marginal(0);
    let pb = j.marginal(1);
    let (na, nb) = (j.dim(0), j.dim(1));
    let mut bits = 0.0;
    for a in 0..na {
        for b in 0..nb {
            let pab = j.get(&[a, b]);
            if pab > 0.0 {
                bits += pab * (pab / (pa.probs()[a] * pb.probs()[b])).log2();
            }
        }
    }
    Ok(MeasureValue::clamped(bits, MeasureKind::ShannonMI))
}

/// Conditional mutual information I(A;B|C) over a three-axis joint,
/// conditioning on the last axis.
pub fn conditional_mi(j: &JointPmf) -> Result<MeasureValue> {
    if j.rank() != 3 {
        return Err(Error::AxisMismatch(format!(
            "conditional_mi expects a three-axis joint, got {} axes",
            j.rank()
        )));
    }
    let pac = j.marginal_pair(0, 2);
    let pbc = j.marginal_pair(1, 2);
    let pc = j.marginal(2);
    let (na, nb, nc) = (j.dim(0), j.dim(1), j.dim(2));
    let mut bits = 0.0;
    for a in 0..na {
        for b in 0..nb {
            for c in 0..nc {
                let pabc = j.get(&[a, b, c]);
                if pabc > 0.0 {
                    let num = pabc * pc.probs()[c];
                    let den = pac.get(&[a, c]) * pbc.get(&[b, c]);
                    bits += pabc * (num / den).log2();
                }
            }
        }
    }
    Ok(MeasureValue::clamped(bits, MeasureKind::CondMI))
}

/// Bayes-optimal guessing accuracy of axis 0 given all remaining axes:
/// Σ_obs max_s P(s, obs).
pub fn bayes_accuracy(j: &JointPmf) -> f64 {
    let ns = j.dim(0);
    let n_obs = j.probs().len() / ns;
    let mut total = 0.0;
    for obs in 0..n_obs {
        let mut best = 0.0;
        for s in 0..ns {
            let p = j.probs()[s * n_obs + obs];
            if p > best {
                best = p;
            }
        }
        total += best;
    }
    total
}

/// Guessing accuracy with no observation: the best constant guess.
pub fn baseline_accuracy(p: &Pmf) -> f64 {
    p.max_prob()
}

/// Multiplicative accuracy gain log₂(Pr[S=Ŝ(W)] / max_s P(s)) over a
/// two-axis joint (S, W).
pub fn i_inf(j: &JointPmf) -> Result<MeasureValue> {
    if j.rank() != 2 {
        return Err(Error::AxisMismatch(format!(
            "i_inf expects a two-axis joint, got {} axes",
            j.rank()
        )));
    }
    let acc = bayes_accuracy(j);
    let base = baseline_accuracy(&j.marginal(0));
    Ok(MeasureValue::clamped(
        (acc / base).log2(),
        MeasureKind::IInf,
    ))
}

/// Conditional accuracy gain over a three-axis joint (S, W, W'), giving
/// log₂(Σ_{w,w'} max_s P(s,w,w') / Σ_{w'} max_s P(s,w')). The conditioning
/// variable W' is the last axis.
pub fn i_inf_cond(j: &JointPmf) -> Result<MeasureValue> {
    if j.rank() != 3 {
        return Err(Error::AxisMismatch(format!(
            "i_inf_cond expects a three-axis joint, got {} axes",
            j.rank()
        )));
    }
    let num = bayes_accuracy(j);
    let den = bayes_accuracy(&j.marginal_pair(0, 2));
    Ok(MeasureValue::clamped(
        (num / den).log2(),
        MeasureKind::IInfCond,
    ))
}

/// Σ_z max_{x ∈ support} P(z|x), evaluated z-major so the same support
/// always produces the identical floating-point expression.
fn leakage_sum(support: &[usize], ch: &Channel) -> f64 {
    let mut total = 0.0;
    for z in 0..ch.n_out() {
        let mut best = f64::NEG_INFINITY;
        for &x in support {
            let v = ch.get(x, z);
            if v > best {
                best = v;
            }
        }
        total += best;
    }
    total
}

fn check_feature_channel(ch: &Channel, x_len: usize) -> Result<()> {
    if ch.input_axes().len() != 1 || ch.input_axes()[0].len() != x_len {
        return Err(Error::AxisMismatch(format!(
            "feature channel must read exactly the {x_len}-symbol source axis"
        )));
    }
    Ok(())
}

/// Maximal leakage L(X→Z) = log₂ Σ_z max_{x ∈ supp(px)} P(z|x).
pub fn max_leakage(px: &Pmf, ch: &Channel) -> Result<MeasureValue> {
    check_feature_channel(ch, px.len())?;
    let support = px.support();
    if support.is_empty() {
        return Err(Error::EmptyInput("pmf support"));
    }
    let bits = leakage_sum(&support, ch).log2();
    Ok(MeasureValue::clamped(bits, MeasureKind::MaxLeakage))
}

/// Conditional maximal leakage L(X→Z|Y) =
/// log₂ max_y Σ_z max_{x ∈ supp(X|Y=y)} P(z|x), skipping y with P(y)=0.
///
/// When every posterior P(y|x) is strictly positive the per-y supports all
/// equal supp(X), and the value coincides bitwise with [`max_leakage`].
pub fn cond_max_leakage(jxy: &JointPmf, ch: &Channel) -> Result<MeasureValue> {
    if jxy.rank() != 2 {
        return Err(Error::AxisMismatch(format!(
            "cond_max_leakage expects a two-axis joint, got {} axes",
            jxy.rank()
        )));
    }
    check_feature_channel(ch, jxy.dim(0))?;
    let (nx, ny) = (jxy.dim(0), jxy.dim(1));
    let mut best = f64::NEG_INFINITY;
    let mut any_y = false;
    for y in 0..ny {
        let support: Vec<usize> = (0..nx).filter(|&x| jxy.get(&[x, y]) > 0.0).collect();
        if support.is_empty() {
            continue;
        }
        any_y = true;
        let sum = leakage_sum(&support, ch);
        if sum > best {
            best = sum;
        }
    }
    if !any_y {
        return Err(Error::EmptyInput("joint support"));
    }
    Ok(MeasureValue::clamped(
        best.log2(),
        MeasureKind::CondMaxLeakage,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{push_forward, Alphabet, Axis};
    use crate::rng::substream;
    use rand::Rng;

    const H2_QUARTER: f64 = 0.8112781244591328;

    fn uniform_binary_joint(axis_a: &str, axis_b: &str, flip: f64) -> JointPmf {
        let a = Alphabet::indexed(axis_a, 2);
        let b = Alphabet::indexed(axis_b, 2);
        let pa = Pmf::uniform(a.clone());
        let ch = Channel::bsc(flip, a, b).unwrap();
        push_forward((&pa).into(), &ch, true).unwrap()
    }

    #[test]
    fn mi_of_independent_pair_is_zero() {
        let a = Alphabet::indexed("a", 2);
        let b = Alphabet::indexed("b", 3);
        let j = JointPmf::new(vec![a, b], vec![1.0 / 6.0; 6]).unwrap();
        assert_eq!(shannon_mi(&j).unwrap().bits, 0.0);
    }

    #[test]
    fn mi_of_identity_copy_is_one_bit() {
        let j = uniform_binary_joint("y", "z", 0.0);
        assert!((shannon_mi(&j).unwrap().bits - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mi_through_bsc_quarter() {
        let j = uniform_binary_joint("x", "z", 0.25);
        let expected = 1.0 - H2_QUARTER;
        assert!((shannon_mi(&j).unwrap().bits - expected).abs() < 1e-12);
    }

    #[test]
    fn cond_mi_vanishes_on_markov_chain() {
        // X uniform over 4, Y = X mod 2, Z drawn from Y through a BSC:
        // given Y, Z carries nothing further about X.
        let x = Alphabet::indexed("x", 4);
        let y = Alphabet::indexed("y", 2);
        let z = Alphabet::indexed("z", 2);
        let mut probs = vec![0.0; 4 * 2 * 2];
        for xi in 0..4 {
            let yi = xi % 2;
            for zi in 0..2 {
                let pz = if zi == yi { 0.8 } else { 0.2 };
                probs[(xi * 2 + zi) * 2 + yi] = 0.25 * pz;
            }
        }
        let j = JointPmf::new(vec![x, z, y], probs).unwrap();
        assert!(conditional_mi(&j).unwrap().bits.abs() < 1e-12);
    }

    #[test]
    fn cond_mi_full_residual_bit() {
        // X uniform over 4, Y = X mod 2, Z = X: after Y one bit remains.
        let x = Alphabet::indexed("x", 4);
        let z = Alphabet::indexed("z", 4);
        let y = Alphabet::indexed("y", 2);
        let mut probs = vec![0.0; 4 * 4 * 2];
        for xi in 0..4 {
            probs[(xi * 4 + xi) * 2 + xi % 2] = 0.25;
        }
        let j = JointPmf::new(vec![x, z, y], probs).unwrap();
        assert!((conditional_mi(&j).unwrap().bits - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cond_mi_independent_triple_is_zero() {
        let a = Alphabet::indexed("a", 2);
        let b = Alphabet::indexed("b", 2);
        let c = Alphabet::indexed("c", 2);
        let j = JointPmf::new(vec![a, b, c], vec![0.125; 8]).unwrap();
        assert_eq!(conditional_mi(&j).unwrap().bits, 0.0);
    }

    #[test]
    fn bayes_accuracy_perfect_copy() {
        let j = uniform_binary_joint("s", "w", 0.0);
        assert_eq!(bayes_accuracy(&j), 1.0);
    }

    #[test]
    fn bayes_accuracy_independent_is_baseline() {
        let j = uniform_binary_joint("s", "w", 0.5);
        assert!((bayes_accuracy(&j) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bayes_accuracy_bsc_quarter() {
        let j = uniform_binary_joint("s", "w", 0.25);
        assert!((bayes_accuracy(&j) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn i_inf_identity_copy_one_bit() {
        let j = uniform_binary_joint("s", "w", 0.0);
        assert!((i_inf(&j).unwrap().bits - 1.0).abs() < 1e-12);
    }

    #[test]
    fn i_inf_independent_zero() {
        let j = uniform_binary_joint("s", "w", 0.5);
        assert_eq!(i_inf(&j).unwrap().bits, 0.0);
    }

    #[test]
    fn i_inf_bsc_quarter() {
        let j = uniform_binary_joint("s", "w", 0.25);
        let expected = 0.5849625007211562;
        assert!((i_inf(&j).unwrap().bits - expected).abs() < 1e-12);
    }

    fn triple_via_two_channels(flip_w: f64, flip_wp: f64) -> JointPmf {
        let s = Alphabet::indexed("s", 2);
        let w = Alphabet::indexed("w", 2);
        let wp = Alphabet::indexed("wp", 2);
        let mut probs = vec![0.0; 8];
        for si in 0..2 {
            for wi in 0..2 {
                for wpi in 0..2 {
                    let pw = if wi == si { 1.0 - flip_w } else { flip_w };
                    let pwp = if wpi == si { 1.0 - flip_wp } else { flip_wp };
                    probs[(si * 2 + wi) * 2 + wpi] = 0.5 * pw * pwp;
                }
            }
        }
        JointPmf::new(vec![s, w, wp], probs).unwrap()
    }

    #[test]
    fn i_inf_cond_uninformative_extra_source() {
        // W independent of (S, W'): numerator and denominator coincide.
        let s = Alphabet::indexed("s", 2);
        let w = Alphabet::indexed("w", 2);
        let wp = Alphabet::indexed("wp", 2);
        let mut probs = vec![0.0; 8];
        for si in 0..2 {
            for wi in 0..2 {
                for wpi in 0..2 {
                    let pwp = if wpi == si { 0.75 } else { 0.25 };
                    probs[(si * 2 + wi) * 2 + wpi] = 0.5 * 0.5 * pwp;
                }
            }
        }
        let j = JointPmf::new(vec![s, w, wp], probs).unwrap();
        assert_eq!(i_inf_cond(&j).unwrap().bits, 0.0);
    }

    #[test]
    fn i_inf_cond_constant_side_channel_reduces_to_i_inf() {
        let s = Alphabet::indexed("s", 2);
        let w = Alphabet::indexed("w", 2);
        let wp = Alphabet::indexed("wp", 1);
        let probs = vec![0.5, 0.0, 0.0, 0.5];
        let j3 = JointPmf::new(vec![s.clone(), w.clone(), wp], probs.clone()).unwrap();
        let j2 = JointPmf::new(vec![s, w], probs).unwrap();
        assert_eq!(i_inf_cond(&j3).unwrap().bits, i_inf(&j2).unwrap().bits);
    }

    #[test]
    fn i_inf_cond_symmetric_repeated_observation_adds_nothing() {
        // Two equally noisy looks at S: the second cannot change the
        // best guess, only its confidence, so the gain is exactly zero.
        let j = triple_via_two_channels(0.25, 0.25);
        assert_eq!(i_inf_cond(&j).unwrap().bits, 0.0);
    }

    #[test]
    fn i_inf_cond_sharper_second_source() {
        // W through BSC(0.1) read alongside W' through BSC(0.25).
        let j = triple_via_two_channels(0.1, 0.25);
        let expected = 0.2630344058337938;
        assert!((i_inf_cond(&j).unwrap().bits - expected).abs() < 1e-12);
    }

    fn bsc_quarter() -> (Pmf, Channel) {
        let x = Alphabet::indexed("x", 2);
        let z = Alphabet::indexed("z", 2);
        let px = Pmf::uniform(x.clone());
        let ch = Channel::bsc(0.25, x, z).unwrap();
        (px, ch)
    }

    #[test]
    fn max_leakage_identity_full_support() {
        let x = Alphabet::indexed("x", 4);
        let px = Pmf::uniform(x.clone());
        let ch = Channel::identity(x);
        assert!((max_leakage(&px, &ch).unwrap().bits - 2.0).abs() < 1e-12);
    }

    #[test]
    fn max_leakage_constant_channel_zero() {
        let x = Alphabet::indexed("x", 3);
        let z = Alphabet::indexed("z", 2);
        let px = Pmf::uniform(x.clone());
        let ch = Channel::constant(x, z);
        assert_eq!(max_leakage(&px, &ch).unwrap().bits, 0.0);
    }

    #[test]
    fn max_leakage_bsc_quarter() {
        let (px, ch) = bsc_quarter();
        let expected = 0.5849625007211562;
        assert!((max_leakage(&px, &ch).unwrap().bits - expected).abs() < 1e-12);
    }

    #[test]
    fn max_leakage_restricted_to_support() {
        // Mass only on two of three inputs; the excluded row would
        // otherwise dominate every output column.
        let x = Alphabet::indexed("x", 3);
        let z = Alphabet::indexed("z", 2);
        let px = Pmf::new(x.clone(), vec![0.5, 0.5, 0.0]).unwrap();
        let ch = Channel::new(vec![x], z, vec![0.6, 0.4, 0.6, 0.4, 1.0, 0.0]).unwrap();
        assert_eq!(max_leakage(&px, &ch).unwrap().bits, 0.0);
    }

    #[test]
    fn cond_max_leakage_positive_posterior_matches_unconditional_bitwise() {
        let x = Alphabet::indexed("x", 2);
        let y = Alphabet::indexed("y", 2);
        let z = Alphabet::indexed("z", 2);
        let jxy = JointPmf::new(vec![x.clone(), y], vec![0.45, 0.05, 0.1, 0.4]).unwrap();
        let ch = Channel::bsc(0.25, x, z).unwrap();
        let cond = cond_max_leakage(&jxy, &ch).unwrap().bits;
        let uncond = max_leakage(&jxy.marginal(0), &ch).unwrap().bits;
        assert_eq!(cond, uncond);
    }

    #[test]
    fn cond_max_leakage_label_copy_channel() {
        // X uniform over 4, Y = X mod 2, channel copies that parity.
        // Per y the surviving rows agree on one column, so nothing leaks.
        let x = Alphabet::indexed("x", 4);
        let y = Alphabet::indexed("y", 2);
        let z = Alphabet::indexed("z", 2);
        let mut probs = vec![0.0; 8];
        for xi in 0..4 {
            probs[xi * 2 + xi % 2] = 0.25;
        }
        let jxy = JointPmf::new(vec![x.clone(), y], probs).unwrap();
        let ch = Channel::deterministic(x, z, &[0, 1, 0, 1]).unwrap();
        assert_eq!(cond_max_leakage(&jxy, &ch).unwrap().bits, 0.0);
    }

    #[test]
    fn cond_max_leakage_constant_channel_zero() {
        let x = Alphabet::indexed("x", 2);
        let y = Alphabet::indexed("y", 2);
        let z = Alphabet::indexed("z", 2);
        let jxy = JointPmf::new(vec![x.clone(), y], vec![0.25; 4]).unwrap();
        let ch = Channel::constant(x, z);
        assert_eq!(cond_max_leakage(&jxy, &ch).unwrap().bits, 0.0);
    }

    // --- randomized invariants over small seeded instances ----------------

    fn random_pmf(rng: &mut impl Rng, axis: Axis) -> Pmf {
        let n = axis.len();
        let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        Pmf::new(axis, raw.iter().map(|r| r / total).collect()).unwrap()
    }

    fn random_channel(rng: &mut impl Rng, input: Axis, output: Axis) -> Channel {
        let (ni, no) = (input.len(), output.len());
        let mut rows = Vec::with_capacity(ni * no);
        for _ in 0..ni {
            let raw: Vec<f64> = (0..no).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            rows.extend(raw.iter().map(|r| r / total));
        }
        Channel::new(vec![input], output, rows).unwrap()
    }

    fn compose(a: &Channel, b: &Channel) -> Channel {
        // Row-stochastic product: (a then b) as a single channel.
        let ni = a.n_rows();
        let nm = a.n_out();
        let no = b.n_out();
        let mut rows = vec![0.0; ni * no];
        for i in 0..ni {
            for m in 0..nm {
                for o in 0..no {
                    rows[i * no + o] += a.get(i, m) * b.get(m, o);
                }
            }
        }
        Channel::new(a.input_axes().to_vec(), b.output_axis().clone(), rows).unwrap()
    }

    #[test]
    fn data_processing_and_mi_bounds_hold_on_random_chains() {
        let mut rng = substream(11, "measure_invariants");
        for trial in 0..200 {
            let ny = 2 + (trial % 3);
            let nx = 2 + ((trial / 3) % 3);
            let nz = 2 + ((trial / 9) % 3);
            let yax = Alphabet::indexed("y", ny);
            let xax = Alphabet::indexed("x", nx);
            let zax = Alphabet::indexed("z", nz);
            let py = random_pmf(&mut rng, yax.clone());
            let ch_yx = random_channel(&mut rng, yax.clone(), xax.clone());
            let ch_xz = random_channel(&mut rng, xax.clone(), zax);
            let ch_yz = compose(&ch_yx, &ch_xz);

            let jyx = push_forward((&py).into(), &ch_yx, true).unwrap();
            let px = jyx.marginal(1);
            let jxz = push_forward((&px).into(), &ch_xz, true).unwrap();
            let jyz = push_forward((&py).into(), &ch_yz, true).unwrap();

            let l_yz = max_leakage(&py, &ch_yz).unwrap().bits;
            let l_xz = max_leakage(&px, &ch_xz).unwrap().bits;
            let l_yx = max_leakage(&py, &ch_yx).unwrap().bits;
            assert!(l_yz <= l_xz.min(l_yx) + 1e-9, "data processing violated");

            assert!(shannon_mi(&jxz).unwrap().bits <= l_xz + 1e-9);
            assert!(i_inf(&jxz).unwrap().bits <= l_xz + 1e-9);
            assert!(shannon_mi(&jyz).unwrap().bits <= l_yz + 1e-9);
            assert!(i_inf(&jyz).unwrap().bits <= l_yz + 1e-9);
        }
    }

    #[test]
    fn conditional_never_exceeds_unconditional_and_meets_it_under_positivity() {
        let mut rng = substream(12, "cond_leakage_invariants");
        for trial in 0..200 {
            let nx = 2 + (trial % 3);
            let ny = 2 + ((trial / 3) % 3);
            let nz = 2 + ((trial / 9) % 3);
            let xax = Alphabet::indexed("x", nx);
            let yax = Alphabet::indexed("y", ny);
            let zax = Alphabet::indexed("z", nz);
            let px = random_pmf(&mut rng, xax.clone());
            let ch_xy = random_channel(&mut rng, xax.clone(), yax);
            let ch_xz = random_channel(&mut rng, xax, zax);
            let jxy = push_forward((&px).into(), &ch_xy, true).unwrap();

            let cond = cond_max_leakage(&jxy, &ch_xz).unwrap().bits;
            let uncond = max_leakage(&px, &ch_xz).unwrap().bits;
            assert!(cond <= uncond + 1e-9);
            // Random strictly positive rows give a strictly positive
            // posterior, so the two closed forms coincide exactly.
            assert!((cond - uncond).abs() <= 1e-12);
        }
    }

    #[test]
    fn i_inf_matches_brute_force_oracle() {
        let mut rng = substream(13, "iinf_oracle");
        for trial in 0..200 {
            let ns = 2 + (trial % 4);
            let nw = 2 + ((trial / 4) % 4);
            let sax = Alphabet::indexed("s", ns);
            let wax = Alphabet::indexed("w", nw);
            let raw: Vec<f64> = (0..ns * nw).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|r| r / total).collect();
            let j = JointPmf::new(vec![sax, wax], probs.clone()).unwrap();

            // Oracle: enumerate every deterministic guessing rule.
            let mut best_acc = 0.0f64;
            let mut rule = vec![0usize; nw];
            loop {
                let mut acc = 0.0;
                for w in 0..nw {
                    acc += probs[rule[w] * nw + w];
                }
                if acc > best_acc {
                    best_acc = acc;
                }
                let mut k = 0;
                loop {
                    if k == nw {
                        break;
                    }
                    rule[k] += 1;
                    if rule[k] < ns {
                        break;
                    }
                    rule[k] = 0;
                    k += 1;
                }
                if k == nw {
                    break;
                }
            }
            let mut base = 0.0f64;
            for s in 0..ns {
                let m: f64 = probs[s * nw..(s + 1) * nw].iter().sum();
                base = base.max(m);
            }
            let expected = (best_acc / base).log2();
            assert!((i_inf(&j).unwrap().bits - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn measures_invariant_under_relabeling() {
        // Reverse both alphabets of the BSC joint and compare everything.
        let j = uniform_binary_joint("s", "w", 0.25);
        let sax = Alphabet::new("s", vec!["1".into(), "0".into()]).unwrap();
        let wax = Alphabet::new("w", vec!["1".into(), "0".into()]).unwrap();
        let p = j.probs();
        let flipped = vec![p[3], p[2], p[1], p[0]];
        let jf = JointPmf::new(vec![sax, wax], flipped).unwrap();
        assert!((shannon_mi(&j).unwrap().bits - shannon_mi(&jf).unwrap().bits).abs() < 1e-12);
        assert!((i_inf(&j).unwrap().bits - i_inf(&jf).unwrap().bits).abs() < 1e-12);
        assert!((bayes_accuracy(&j) - bayes_accuracy(&jf)).abs() < 1e-12);
    }
}
