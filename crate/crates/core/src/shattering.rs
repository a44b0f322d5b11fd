//! The maximally revealing attribute construction and attribute-gain
//! evaluation.
//!
//! An attribute is any randomized function of the data (or of data and
//! label). The shattering attribute splits each source symbol `x` into
//! `⌈P(x)/p_min⌉` equally likely shards, which makes every posterior cell
//! hit the floor `p_min` and drives the inference gain all the way up to
//! the maximal-leakage closed form. Random attribute sampling provides the
//! matching soundness check from below.

use rand::Rng;
use rand_distr::Exp1;

use crate::dist::{channel_to_json, Alphabet, Axis, Channel, JointPmf, Pmf};
use crate::error::{Error, Result};
use crate::measures::{i_inf, i_inf_cond, MeasureValue};
use crate::rng::substream;

/// Cap on the shattered alphabet size; beyond this the construction is
/// exact but useless, and the allocation alone would dominate.
const MAX_SHATTER_CELLS: usize = 100_000;

/// Tolerance under which a ratio is treated as an exact integer, so that
/// round-off in `P(x)/p_min` cannot inflate the shard count.
const INTEGRALITY_SNAP: f64 = 1e-12;

/// Shape data for a shattering construction.
#[derive(Debug, Clone)]
pub struct ShatteringSpec {
    /// Smallest source probability; also the max of the shattered marginal.
    pub p_min: f64,
    /// Per-symbol ratios P(x)/p_min, each ≥ 1.
    pub ratios: Vec<f64>,
    /// Alphabet of (x, k) shard symbols.
    pub s_alphabet: Axis,
}

/// A channel from the data (optionally data and label) to an attribute.
#[derive(Debug, Clone)]
pub struct AttributeMechanism {
    pub channel: Channel,
    pub label: String,
}

impl AttributeMechanism {
    pub fn to_json(&self) -> String {
        channel_to_json(&self.channel, Some("attribute"))
    }
}

fn snapped_parts(r: f64) -> (usize, usize) {
    let nearest = r.round();
    if (r - nearest).abs() <= INTEGRALITY_SNAP {
        let n = nearest as usize;
        (n, n)
    } else {
        (r.floor() as usize, r.ceil() as usize)
    }
}

/// Builds the shattering attribute of a strictly positive source
/// distribution.
///
/// Symbol `x` with ratio `r = P(x)/p_min` maps to shards `(x,1)..(x,⌈r⌉)`;
/// the first `⌊r⌋` receive probability `p_min/P(x)` and a fractional tail
/// takes the remainder. Rows of distinct symbols never overlap, so the
/// mechanism matrix is block diagonal with at least one zero entry whenever
/// the source has more than one symbol.
pub fn shattering_attribute(px: &Pmf) -> Result<(ShatteringSpec, AttributeMechanism)> {
    let probs = px.probs();
    let mut p_min = f64::INFINITY;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            return Err(Error::ZeroMass {
                symbol: px.axis().symbols[i].clone(),
            });
        }
        p_min = p_min.min(p);
    }

    let mut ratios = Vec::with_capacity(probs.len());
    let mut shard_counts = Vec::with_capacity(probs.len());
    let mut total_cells = 0usize;
    for &p in probs {
        let r = p / p_min;
        let (_, hi) = snapped_parts(r);
        total_cells += hi;
        if total_cells > MAX_SHATTER_CELLS {
            return Err(Error::TooLarge {
                what: "shattered attribute alphabet",
                size: total_cells as u128,
                cap: MAX_SHATTER_CELLS as u128,
            });
        }
        ratios.push(r);
        shard_counts.push(hi);
    }

    let mut symbols = Vec::with_capacity(total_cells);
    for (i, &count) in shard_counts.iter().enumerate() {
        let name = &px.axis().symbols[i];
        for k in 1..=count {
            symbols.push(format!("({name},{k})"));
        }
    }
    let s_axis = Alphabet::new(format!("{}_shards", px.axis().name), symbols)?;

    let mut rows = vec![0.0; probs.len() * total_cells];
    let mut offset = 0usize;
    for (i, &p) in probs.iter().enumerate() {
        let (lo, hi) = snapped_parts(ratios[i]);
        let cell = p_min / p;
        for k in 0..lo {
            rows[i * total_cells + offset + k] = cell;
        }
        if hi > lo {
            rows[i * total_cells + offset + hi - 1] = 1.0 - (hi - 1) as f64 * cell;
        }
        offset += hi;
    }
    let channel = Channel::new(vec![px.axis().clone()], s_axis.clone(), rows)?;

    if probs.len() > 1 {
        assert!(
            channel.rows_flat().contains(&0.0),
            "shattering mechanism lost its block structure"
        );
    }
    debug_assert!({
        let mut max_marginal = 0.0f64;
        for s in 0..total_cells {
            let m: f64 = (0..probs.len()).map(|x| probs[x] * channel.get(x, s)).sum();
            max_marginal = max_marginal.max(m);
        }
        (max_marginal - p_min).abs() <= 1e-12
    });

    let spec = ShatteringSpec {
        p_min,
        ratios,
        s_alphabet: s_axis,
    };
    let mech = AttributeMechanism {
        channel,
        label: "shattering".into(),
    };
    Ok((spec, mech))
}

fn check_x_axis(expected: &Axis, got: &Axis, what: &str) -> Result<()> {
    if **expected != **got {
        return Err(Error::AxisMismatch(format!(
            "{what} reads axis '{}', source provides '{}'",
            got.name, expected.name
        )));
    }
    Ok(())
}

/// Inference gain I_∞(S;Z) of an attribute against a feature channel,
/// both driven by the same source distribution.
pub fn attribute_gain(px: &Pmf, attr: &AttributeMechanism, feat: &Channel) -> Result<MeasureValue> {
    if attr.channel.input_axes().len() != 1 {
        return Err(Error::AxisMismatch(
            "unconditional gain needs an attribute of the data alone".into(),
        ));
    }
    check_x_axis(px.axis(), &attr.channel.input_axes()[0], "attribute")?;
    if feat.input_axes().len() != 1 {
        return Err(Error::AxisMismatch(
            "feature channel must read the data axis".into(),
        ));
    }
    check_x_axis(px.axis(), &feat.input_axes()[0], "feature channel")?;

    let ns = attr.channel.n_out();
    let nz = feat.n_out();
    let mut probs = vec![0.0; ns * nz];
    for (x, &p) in px.probs().iter().enumerate() {
        for s in 0..ns {
            let ps = attr.channel.get(x, s);
            if ps == 0.0 {
                continue;
            }
            for z in 0..nz {
                probs[s * nz + z] += p * ps * feat.get(x, z);
            }
        }
    }
    let j = JointPmf::new(
        vec![
            attr.channel.output_axis().clone(),
            feat.output_axis().clone(),
        ],
        probs,
    )?;
    i_inf(&j)
}

/// Conditional inference gain I_∞(S;Z|Y) of an attribute that may read the
/// label as well as the data.
pub fn attribute_gain_cond(
    jxy: &JointPmf,
    attr: &AttributeMechanism,
    feat: &Channel,
) -> Result<MeasureValue> {
    if jxy.rank() != 2 {
        return Err(Error::AxisMismatch(format!(
            "conditional gain expects a two-axis joint, got {} axes",
            jxy.rank()
        )));
    }
    let x_axis = &jxy.axes()[0];
    let y_axis = &jxy.axes()[1];
    let attr_inputs = attr.channel.input_axes();
    match attr_inputs.len() {
        1 => check_x_axis(x_axis, &attr_inputs[0], "attribute")?,
        2 => {
            check_x_axis(x_axis, &attr_inputs[0], "attribute")?;
            check_x_axis(y_axis, &attr_inputs[1], "attribute label input")?;
        }
        _ => unreachable!("channels carry 1 or 2 input axes"),
    }
    if feat.input_axes().len() != 1 {
        return Err(Error::AxisMismatch(
            "feature channel must read the data axis".into(),
        ));
    }
    check_x_axis(x_axis, &feat.input_axes()[0], "feature channel")?;

    let (nx, ny) = (jxy.dim(0), jxy.dim(1));
    let ns = attr.channel.n_out();
    let nz = feat.n_out();
    let mut probs = vec![0.0; ns * nz * ny];
    for x in 0..nx {
        for y in 0..ny {
            let pxy = jxy.get(&[x, y]);
            if pxy == 0.0 {
                continue;
            }
            let row = if attr_inputs.len() == 2 {
                x * ny + y
            } else {
                x
            };
            for s in 0..ns {
                let ps = attr.channel.get(row, s);
                if ps == 0.0 {
                    continue;
                }
                for z in 0..nz {
                    probs[(s * nz + z) * ny + y] += pxy * ps * feat.get(x, z);
                }
            }
        }
    }
    let j = JointPmf::new(
        vec![
            attr.channel.output_axis().clone(),
            feat.output_axis().clone(),
            y_axis.clone(),
        ],
        probs,
    )?;
    i_inf_cond(&j)
}

/// Draws an attribute mechanism with rows uniform on the simplex,
/// deterministically from the seed.
pub fn sample_random_attribute(
    input_axes: Vec<Axis>,
    s_size: usize,
    seed: u64,
) -> Result<AttributeMechanism> {
    if s_size == 0 {
        return Err(Error::EmptyInput("attribute alphabet"));
    }
    let n_rows: usize = input_axes.iter().map(|a| a.len()).product();
    let s_axis = Alphabet::indexed("s", s_size);
    let mut rng = substream(seed, "attr_sample");
    let mut rows = Vec::with_capacity(n_rows * s_size);
    for _ in 0..n_rows {
        let raw: Vec<f64> = (0..s_size).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = raw.iter().sum();
        rows.extend(raw.iter().map(|v| v / total));
    }
    let channel = Channel::new(input_axes, s_axis, rows)?;
    Ok(AttributeMechanism {
        channel,
        label: format!("random#{seed}"),
    })
}
