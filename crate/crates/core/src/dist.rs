//! Finite discrete distributions and channels.
//!
//! All probability mass lives in dense tensors over named alphabets.
//! Validation clamps tiny negative round-off to zero and enforces
//! normalization within [`PROB_TOL`]. Support is strict positivity after
//! clamping, because downstream closed forms are discontinuous in the
//! support set.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Validation tolerance for probability vectors.
pub const PROB_TOL: f64 = 1e-9;

/// A named, ordered set of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    pub name: String,
    pub symbols: Vec<String>,
}

/// Shared alphabet handle; axes compare by content, not pointer.
pub type Axis = Arc<Alphabet>;

impl Alphabet {
    pub fn new(name: impl Into<String>, symbols: Vec<String>) -> Result<Axis> {
        let name = name.into();
        if symbols.is_empty() {
            return Err(Error::EmptyInput("alphabet symbols"));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::Parse(format!(
                    "alphabet '{name}' repeats symbol '{s}'"
                )));
            }
        }
        Ok(Arc::new(Alphabet { name, symbols }))
    }

    /// Alphabet `{0, 1, ..., n-1}` with decimal symbol labels.
    pub fn indexed(name: impl Into<String>, n: usize) -> Axis {
        let symbols = (0..n).map(|i| i.to_string()).collect();
        Alphabet::new(name, symbols).expect("indexed alphabet is always valid")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }
}

/// Clamps entries in `(-PROB_TOL, 0)` to zero and checks the vector is a
/// probability distribution.
pub fn validate_probs(probs: &mut [f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::EmptyInput("probability vector"));
    }
    let mut sum = 0.0;
    for (i, p) in probs.iter_mut().enumerate() {
        if !p.is_finite() {
            return Err(Error::Parse(format!("non-finite probability at index {i}")));
        }
        if *p < 0.0 {
            if *p < -PROB_TOL {
                return Err(Error::NegativeMass {
                    index: i,
                    value: *p,
                    tol: PROB_TOL,
                });
            }
            *p = 0.0;
        }
        sum += *p;
    }
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(Error::NotNormalized {
            sum,
            excess: sum - 1.0,
            tol: PROB_TOL,
        });
    }
    Ok(())
}

/// Probability mass function over a single alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    axis: Axis,
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(axis: Axis, mut probs: Vec<f64>) -> Result<Self> {
        if probs.len() != axis.len() {
            return Err(Error::AxisMismatch(format!(
                "pmf over '{}' needs {} entries, got {}",
                axis.name,
                axis.len(),
                probs.len()
            )));
        }
        validate_probs(&mut probs)?;
        Ok(Pmf { axis, probs })
    }

    pub fn uniform(axis: Axis) -> Self {
        let n = axis.len();
        let probs = vec![1.0 / n as f64; n];
        Pmf { axis, probs }
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn max_prob(&self) -> f64 {
        self.probs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices with strictly positive mass, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.probs.len())
            .filter(|&i| self.probs[i] > 0.0)
            .collect()
    }
}

/// Joint distribution over 2 or 3 axes, stored row-major.
///
/// Marginalization can produce intermediate values over a single axis; those
/// are returned as [`Pmf`], never as a one-axis joint. Serialized joints
/// always carry 2 or 3 axes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    axes: Vec<Axis>,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(axes: Vec<Axis>, mut probs: Vec<f64>) -> Result<Self> {
        if !(2..=3).contains(&axes.len()) {
            return Err(Error::AxisMismatch(format!(
                "joint needs 2 or 3 axes, got {}",
                axes.len()
            )));
        }
        let cells: usize = axes.iter().map(|a| a.len()).product();
        if probs.len() != cells {
            return Err(Error::AxisMismatch(format!(
                "joint needs {} cells for axes ({}), got {}",
                cells,
                axes.iter()
                    .map(|a| a.name.as_str())
                    .collect::<Vec<_>>()
                    .join(", "),
                probs.len()
            )));
        }
        validate_probs(&mut probs)?;
        Ok(JointPmf { axes, probs })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn dim(&self, axis: usize) -> usize {
        self.axes[axis].len()
    }

    /// True when every cell is strictly positive.
    pub fn full_support(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.axes.len()];
        for i in (0..self.axes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.axes[i + 1].len();
        }
        strides
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        debug_assert_eq!(idx.len(), self.axes.len());
        let strides = self.strides();
        let flat: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
        self.probs[flat]
    }

    /// Marginal over one axis.
    pub fn marginal(&self, axis: usize) -> Pmf {
        let strides = self.strides();
        let n = self.dim(axis);
        let mut probs = vec![0.0; n];
        for (flat, &p) in self.probs.iter().enumerate() {
            let i = (flat / strides[axis]) % n;
            probs[i] += p;
        }
        Pmf {
            axis: self.axes[axis].clone(),
            probs,
        }
    }

    /// Marginal joint over two of this joint's axes, in the given order.
    pub fn marginal_pair(&self, a: usize, b: usize) -> JointPmf {
        assert!(a != b, "marginal_pair needs distinct axes");
        let strides = self.strides();
        let (na, nb) = (self.dim(a), self.dim(b));
        let mut probs = vec![0.0; na * nb];
        for (flat, &p) in self.probs.iter().enumerate() {
            let ia = (flat / strides[a]) % na;
            let ib = (flat / strides[b]) % nb;
            probs[ia * nb + ib] += p;
        }
        JointPmf {
            axes: vec![self.axes[a].clone(), self.axes[b].clone()],
            probs,
        }
    }

    /// Reorders axes; `perm[i]` names the old axis placed at position `i`.
    pub fn permute(&self, perm: &[usize]) -> JointPmf {
        assert_eq!(perm.len(), self.axes.len());
        let old_strides = self.strides();
        let axes: Vec<Axis> = perm.iter().map(|&i| self.axes[i].clone()).collect();
        let dims: Vec<usize> = axes.iter().map(|a| a.len()).collect();
        let mut new_strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            new_strides[i] = new_strides[i + 1] * dims[i + 1];
        }
        let mut probs = vec![0.0; self.probs.len()];
        for (flat, &p) in self.probs.iter().enumerate() {
            let mut new_flat = 0;
            for (pos, &old_axis) in perm.iter().enumerate() {
                let idx = (flat / old_strides[old_axis]) % self.dim(old_axis);
                new_flat += idx * new_strides[pos];
            }
            probs[new_flat] = p;
        }
        JointPmf { axes, probs }
    }
}

/// Conditions a two-axis joint on one value of one axis.
///
/// Returns the renormalized distribution of the other axis.
pub fn condition_joint(j: &JointPmf, axis: usize, symbol: &str) -> Result<Pmf> {
    if j.rank() != 2 {
        return Err(Error::AxisMismatch(format!(
            "condition_joint expects a two-axis joint, got {} axes",
            j.rank()
        )));
    }
    if axis > 1 {
        return Err(Error::AxisMismatch(format!("axis {axis} out of range")));
    }
    let v = j.axes[axis].index_of(symbol).ok_or_else(|| {
        Error::Parse(format!(
            "symbol '{symbol}' not in alphabet '{}'",
            j.axes[axis].name
        ))
    })?;
    let other = 1 - axis;
    let n = j.dim(other);
    let mut probs: Vec<f64> = (0..n)
        .map(|u| {
            let idx = if axis == 0 { [v, u] } else { [u, v] };
            j.get(&idx)
        })
        .collect();
    let mass: f64 = probs.iter().sum();
    if mass <= 0.0 {
        return Err(Error::ZeroEvent {
            symbol: symbol.to_string(),
        });
    }
    for p in &mut probs {
        *p /= mass;
    }
    Ok(Pmf {
        axis: j.axes[other].clone(),
        probs,
    })
}

/// Row-stochastic map from one or two input alphabets to an output alphabet.
///
/// Rows are stored input-major: with inputs (X, Y) the row for `(x, y)` sits
/// at `x * |Y| + y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    input_axes: Vec<Axis>,
    output_axis: Axis,
    rows: Vec<f64>,
}

impl Channel {
    pub fn new(input_axes: Vec<Axis>, output_axis: Axis, mut rows: Vec<f64>) -> Result<Self> {
        if !(1..=2).contains(&input_axes.len()) {
            return Err(Error::AxisMismatch(format!(
                "channel needs 1 or 2 input axes, got {}",
                input_axes.len()
            )));
        }
        let n_in: usize = input_axes.iter().map(|a| a.len()).product();
        let n_out = output_axis.len();
        if rows.len() != n_in * n_out {
            return Err(Error::AxisMismatch(format!(
                "channel needs {n_in} rows of {n_out} entries, got {} entries",
                rows.len()
            )));
        }
        for r in 0..n_in {
            validate_probs(&mut rows[r * n_out..(r + 1) * n_out])?;
        }
        Ok(Channel {
            input_axes,
            output_axis,
            rows,
        })
    }

    /// Deterministic channel sending input row `i` to output `map[i]`.
    pub fn deterministic(input: Axis, output: Axis, map: &[usize]) -> Result<Self> {
        if map.len() != input.len() {
            return Err(Error::AxisMismatch(format!(
                "map covers {} inputs, alphabet '{}' has {}",
                map.len(),
                input.name,
                input.len()
            )));
        }
        let n_out = output.len();
        let mut rows = vec![0.0; input.len() * n_out];
        for (i, &z) in map.iter().enumerate() {
            if z >= n_out {
                return Err(Error::AxisMismatch(format!(
                    "map value {z} outside output alphabet of size {n_out}"
                )));
            }
            rows[i * n_out + z] = 1.0;
        }
        Channel::new(vec![input], output, rows)
    }

    /// Identity channel on one alphabet.
    pub fn identity(axis: Axis) -> Self {
        let map: Vec<usize> = (0..axis.len()).collect();
        Channel::deterministic(axis.clone(), axis, &map).expect("identity map is valid")
    }

    /// Channel whose every row is a point mass on output symbol 0.
    pub fn constant(input: Axis, output: Axis) -> Self {
        let map = vec![0usize; input.len()];
        Channel::deterministic(input, output, &map).expect("constant map is valid")
    }

    /// Binary symmetric channel with flip probability `p`.
    pub fn bsc(p: f64, input: Axis, output: Axis) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "bsc flip probability {p} outside [0,1]"
            )));
        }
        if input.len() != 2 || output.len() != 2 {
            return Err(Error::AxisMismatch("bsc needs binary alphabets".into()));
        }
        Channel::new(vec![input], output, vec![1.0 - p, p, p, 1.0 - p])
    }

    pub fn input_axes(&self) -> &[Axis] {
        &self.input_axes
    }

    pub fn output_axis(&self) -> &Axis {
        &self.output_axis
    }

    pub fn n_rows(&self) -> usize {
        self.input_axes.iter().map(|a| a.len()).product()
    }

    pub fn n_out(&self) -> usize {
        self.output_axis.len()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let n = self.n_out();
        &self.rows[r * n..(r + 1) * n]
    }

    pub fn rows_flat(&self) -> &[f64] {
        &self.rows
    }

    pub fn get(&self, row: usize, out: usize) -> f64 {
        self.rows[row * self.n_out() + out]
    }

    /// Content hash over rows rounded to 12 decimal digits.
    ///
    /// Stable across runs, so equal channels deduplicate in frontier output.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for p in &self.rows {
            hasher.update(format!("{:.12};", p).as_bytes());
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Source argument for [`push_forward`].
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Marginal(&'a Pmf),
    Joint(&'a JointPmf),
}

impl<'a> From<&'a Pmf> for Source<'a> {
    fn from(p: &'a Pmf) -> Self {
        Source::Marginal(p)
    }
}

impl<'a> From<&'a JointPmf> for Source<'a> {
    fn from(j: &'a JointPmf) -> Self {
        Source::Joint(j)
    }
}

impl<'a> Source<'a> {
    fn axes(&self) -> Vec<Axis> {
        match self {
            Source::Marginal(p) => vec![p.axis.clone()],
            Source::Joint(j) => j.axes.clone(),
        }
    }

    fn probs(&self) -> &[f64] {
        match self {
            Source::Marginal(p) => &p.probs,
            Source::Joint(j) => &j.probs,
        }
    }
}

/// Pushes a source distribution through a channel.
///
/// The channel's input axes must equal the leading source axes; trailing
/// source axes ride along unchanged, which is exactly the Markov-extension
/// semantics P(z | x, rest) = P(z | x). With `keep_source` the result spans
/// (source axes, output); without it the consumed axes are summed out,
/// which requires at least one trailing axis so the result is still a joint.
pub fn push_forward(source: Source<'_>, mech: &Channel, keep_source: bool) -> Result<JointPmf> {
    let src_axes = source.axes();
    let m = mech.input_axes.len();
    if m > src_axes.len() {
        return Err(Error::AxisMismatch(format!(
            "channel consumes {m} axes, source has {}",
            src_axes.len()
        )));
    }
    for (i, axis) in mech.input_axes.iter().enumerate() {
        if **axis != *src_axes[i] {
            return Err(Error::AxisMismatch(format!(
                "channel input axis '{}' does not match source axis '{}'",
                axis.name, src_axes[i].name
            )));
        }
    }
    let n_out = mech.n_out();
    let rest_dims: usize = src_axes[m..].iter().map(|a| a.len()).product();
    let src_probs = source.probs();

    if keep_source {
        let mut axes = src_axes.clone();
        axes.push(mech.output_axis.clone());
        if axes.len() > 3 {
            return Err(Error::AxisMismatch(
                "push_forward result would exceed 3 axes; marginalize first".into(),
            ));
        }
        let mut probs = vec![0.0; src_probs.len() * n_out];
        for (flat, &p) in src_probs.iter().enumerate() {
            let row = flat / rest_dims;
            for z in 0..n_out {
                probs[flat * n_out + z] = p * mech.get(row, z);
            }
        }
        Ok(JointPmf { axes, probs })
    } else {
        if src_axes.len() - m + 1 < 2 {
            return Err(Error::AxisMismatch(
                "dropping the source leaves a single axis; marginalize a kept result instead"
                    .into(),
            ));
        }
        let mut axes: Vec<Axis> = src_axes[m..].to_vec();
        axes.push(mech.output_axis.clone());
        let mut probs = vec![0.0; rest_dims * n_out];
        for (flat, &p) in src_probs.iter().enumerate() {
            let row = flat / rest_dims;
            let rest = flat % rest_dims;
            for z in 0..n_out {
                probs[rest * n_out + z] += p * mech.get(row, z);
            }
        }
        Ok(JointPmf { axes, probs })
    }
}

/// Assessment of Assumption "strictly positive posterior" on a joint (X, Y).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorReport {
    pub min_posterior: f64,
    pub strictly_positive: bool,
    /// (x, y) symbol pairs attaining the minimum posterior.
    pub witnesses: Vec<(String, String)>,
}

/// Computes min over (x, y) of P(y | x) and whether it is strictly positive.
pub fn posterior_positivity(jxy: &JointPmf) -> Result<PosteriorReport> {
    if jxy.rank() != 2 {
        return Err(Error::AxisMismatch(format!(
            "posterior check expects a two-axis joint, got {} axes",
            jxy.rank()
        )));
    }
    let px = jxy.marginal(0);
    let (nx, ny) = (jxy.dim(0), jxy.dim(1));
    for x in 0..nx {
        if px.probs[x] <= 0.0 {
            return Err(Error::UndefinedPosterior {
                symbol: jxy.axes[0].symbols[x].clone(),
            });
        }
    }
    let mut min = f64::INFINITY;
    let mut witnesses = Vec::new();
    for x in 0..nx {
        for y in 0..ny {
            let post = jxy.get(&[x, y]) / px.probs[x];
            if post < min {
                min = post;
                witnesses.clear();
            }
            if post == min {
                witnesses.push((
                    jxy.axes[0].symbols[x].clone(),
                    jxy.axes[1].symbols[y].clone(),
                ));
            }
        }
    }
    Ok(PosteriorReport {
        min_posterior: min,
        strictly_positive: min > 0.0,
        witnesses,
    })
}

// --- JSON file formats -----------------------------------------------------

#[derive(Serialize, Deserialize)]
struct JointFile {
    axes: Vec<Alphabet>,
    probs: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct ChannelFile {
    input_axes: Vec<Alphabet>,
    output_axis: Alphabet,
    rows: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    role: Option<String>,
}

fn flatten_nested(value: &serde_json::Value, dims: &[usize], out: &mut Vec<f64>) -> Result<()> {
    match dims {
        [] => match value.as_f64() {
            Some(x) => {
                out.push(x);
                Ok(())
            }
            None => Err(Error::Parse("probs leaf is not a number".into())),
        },
        [d, rest @ ..] => {
            let arr = value
                .as_array()
                .ok_or_else(|| Error::Parse("probs nesting does not match axes".into()))?;
            if arr.len() != *d {
                return Err(Error::Parse(format!(
                    "probs level has {} entries, axis needs {d}",
                    arr.len()
                )));
            }
            for v in arr {
                flatten_nested(v, rest, out)?;
            }
            Ok(())
        }
    }
}

fn nest_flat(probs: &[f64], dims: &[usize]) -> serde_json::Value {
    match dims {
        [] => serde_json::json!(probs[0]),
        [_, rest @ ..] => {
            let chunk: usize = rest.iter().product();
            let items: Vec<serde_json::Value> =
                probs.chunks(chunk).map(|c| nest_flat(c, rest)).collect();
            serde_json::Value::Array(items)
        }
    }
}

/// Parses the joint JSON document format.
pub fn joint_from_json(text: &str) -> Result<JointPmf> {
    let file: JointFile = serde_json::from_str(text)?;
    let axes: Vec<Axis> = file
        .axes
        .into_iter()
        .map(|a| Alphabet::new(a.name, a.symbols))
        .collect::<Result<_>>()?;
    if !(2..=3).contains(&axes.len()) {
        return Err(Error::Parse(format!(
            "joint file needs 2 or 3 axes, got {}",
            axes.len()
        )));
    }
    let dims: Vec<usize> = axes.iter().map(|a| a.len()).collect();
    let mut probs = Vec::with_capacity(dims.iter().product());
    flatten_nested(&file.probs, &dims, &mut probs)?;
    JointPmf::new(axes, probs)
}

/// Serializes a joint to the JSON document format.
pub fn joint_to_json(j: &JointPmf) -> String {
    let dims: Vec<usize> = j.axes.iter().map(|a| a.len()).collect();
    let file = JointFile {
        axes: j.axes.iter().map(|a| (**a).clone()).collect(),
        probs: nest_flat(&j.probs, &dims),
    };
    serde_json::to_string_pretty(&file).expect("joint serialization cannot fail")
}

/// Parses the channel JSON document format.
pub fn channel_from_json(text: &str) -> Result<Channel> {
    let file: ChannelFile = serde_json::from_str(text)?;
    let input_axes: Vec<Axis> = file
        .input_axes
        .into_iter()
        .map(|a| Alphabet::new(a.name, a.symbols))
        .collect::<Result<_>>()?;
    let output_axis = Alphabet::new(file.output_axis.name, file.output_axis.symbols)?;
    let n_rows: usize = input_axes.iter().map(|a| a.len()).product();
    if file.rows.len() != n_rows {
        return Err(Error::Parse(format!(
            "channel file has {} rows, inputs need {n_rows}",
            file.rows.len()
        )));
    }
    let mut flat = Vec::with_capacity(n_rows * output_axis.len());
    for row in &file.rows {
        if row.len() != output_axis.len() {
            return Err(Error::Parse(format!(
                "channel row has {} entries, output axis needs {}",
                row.len(),
                output_axis.len()
            )));
        }
        flat.extend_from_slice(row);
    }
    Channel::new(input_axes, output_axis, flat)
}

/// Serializes a channel; attribute mechanisms carry `"role": "attribute"`.
pub fn channel_to_json(ch: &Channel, role: Option<&str>) -> String {
    let rows: Vec<Vec<f64>> = (0..ch.n_rows()).map(|r| ch.row(r).to_vec()).collect();
    let file = ChannelFile {
        input_axes: ch.input_axes.iter().map(|a| (**a).clone()).collect(),
        output_axis: (*ch.output_axis).clone(),
        rows,
        role: role.map(str::to_string),
    };
    serde_json::to_string_pretty(&file).expect("channel serialization cannot fail")
}
