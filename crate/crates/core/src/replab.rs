//! Desk-scale learned representations: a linear encoder over one-hot
//! categorical features, a softmax task head, and an optional adversary
//! head trained against the encoder by gradient reversal.
//!
//! Training is plain mini-batch SGD with hand-written gradients, fully
//! sequential so that a (dataset, split, config, seed) tuple reproduces the
//! parameter trajectory bit for bit. The encoder update follows
//! `grad(task loss) - lambda * grad(adversary loss)`: both heads descend
//! their own cross-entropy while the encoder is pushed to starve the
//! adversary. Trained representations leave through an equal-frequency
//! quantizer as categorical `z_*` columns the plug-in auditor understands.

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::empirical::{Column, Dataset, DatasetSplit, ReprColumns, ReprProvider};
use crate::error::{Error, Result};
use crate::rng::{substream, substream_indexed};

/// Linear map from one-hot features to a k-dimensional representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncoderParams {
    /// Row-major k × d_in weight matrix.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub k: usize,
    pub d_in: usize,
    /// Feature columns in encoding order.
    pub feature_names: Vec<String>,
    /// Alphabet size of each feature column; offsets follow from these.
    pub feature_arities: Vec<usize>,
}

impl EncoderParams {
    /// Random small-weight initialization keyed by seed.
    pub fn seeded(ds: &Dataset, features: &[String], k: usize, seed: u64) -> Result<EncoderParams> {
        if k == 0 {
            return Err(Error::Domain(
                "representation width must be at least 1".into(),
            ));
        }
        if features.is_empty() {
            return Err(Error::EmptyInput("feature columns"));
        }
        let mut feature_arities = Vec::with_capacity(features.len());
        for f in features {
            feature_arities.push(ds.column(f)?.arity());
        }
        let d_in: usize = feature_arities.iter().sum();
        let mut rng = substream(seed, "enc_init");
        let normal = Normal::new(0.0, 0.1).unwrap();
        let weights = (0..k * d_in).map(|_| normal.sample(&mut rng)).collect();
        Ok(EncoderParams {
            weights,
            bias: vec![0.0; k],
            k,
            d_in,
            feature_names: features.to_vec(),
            feature_arities,
        })
    }

    /// One-hot active indices for the given rows, in encoding order.
    pub fn encode_rows(&self, ds: &Dataset, rows: &[usize]) -> Result<Vec<Vec<usize>>> {
        let mut cols = Vec::with_capacity(self.feature_names.len());
        for (name, &arity) in self.feature_names.iter().zip(&self.feature_arities) {
            let col = ds.column(name)?;
            if col.arity() != arity {
                return Err(Error::AxisMismatch(format!(
                    "feature '{name}' has {} values, encoder expects {arity}",
                    col.arity()
                )));
            }
            cols.push(col);
        }
        let mut offsets = Vec::with_capacity(cols.len());
        let mut acc = 0usize;
        for &a in &self.feature_arities {
            offsets.push(acc);
            acc += a;
        }
        Ok(rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .zip(&offsets)
                    .map(|(c, off)| off + c.codes[r] as usize)
                    .collect()
            })
            .collect())
    }

    /// z = W x + b for a one-hot x given by its active indices.
    pub fn forward(&self, active: &[usize]) -> Vec<f64> {
        let mut z = self.bias.clone();
        for (i, zi) in z.iter_mut().enumerate() {
            let row = &self.weights[i * self.d_in..(i + 1) * self.d_in];
            for &a in active {
                *zi += row[a];
            }
        }
        z
    }
}

/// Affine map plus softmax over one categorical target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxHead {
    /// Row-major n_classes × k weight matrix.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub n_classes: usize,
}

impl SoftmaxHead {
    pub fn seeded(n_classes: usize, k: usize, seed: u64, stream: &str) -> Result<SoftmaxHead> {
        if n_classes < 2 {
            return Err(Error::Domain(format!(
                "softmax head needs at least 2 classes, got {n_classes}"
            )));
        }
        let mut rng = substream(seed, stream);
        let normal = Normal::new(0.0, 0.1).unwrap();
        let weights = (0..n_classes * k)
            .map(|_| normal.sample(&mut rng))
            .collect();
        Ok(SoftmaxHead {
            weights,
            bias: vec![0.0; n_classes],
            n_classes,
        })
    }

    pub fn logits(&self, z: &[f64]) -> Vec<f64> {
        let k = z.len();
        (0..self.n_classes)
            .map(|c| {
                let row = &self.weights[c * k..(c + 1) * k];
                self.bias[c] + row.iter().zip(z).map(|(w, zi)| w * zi).sum::<f64>()
            })
            .collect()
    }

    pub fn predict(&self, z: &[f64]) -> u32 {
        let logits = self.logits(z);
        let mut best = 0usize;
        for (c, &l) in logits.iter().enumerate() {
            if l > logits[best] {
                best = c;
            }
        }
        best as u32
    }
}

fn log_sum_exp(logits: &[f64]) -> f64 {
    let m = logits.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if !m.is_finite() {
        return m;
    }
    m + logits.iter().map(|&l| (l - m).exp()).sum::<f64>().ln()
}

/// Cross-entropy in nats of one head over a batch, averaged.
fn batch_head_loss(
    encoder: &EncoderParams,
    head: &SoftmaxHead,
    xs: &[Vec<usize>],
    targets: &[u32],
) -> f64 {
    let mut total = 0.0;
    for (x, &t) in xs.iter().zip(targets) {
        let logits = head.logits(&encoder.forward(x));
        total += log_sum_exp(&logits) - logits[t as usize];
    }
    total / xs.len() as f64
}

/// Average task cross-entropy of a batch, in nats.
pub fn batch_task_loss(
    encoder: &EncoderParams,
    task_head: &SoftmaxHead,
    xs: &[Vec<usize>],
    ys: &[u32],
) -> f64 {
    batch_head_loss(encoder, task_head, xs, ys)
}

/// Average adversary cross-entropy of a batch, in nats.
pub fn batch_adv_loss(
    encoder: &EncoderParams,
    adv_head: &SoftmaxHead,
    xs: &[Vec<usize>],
    ss: &[u32],
) -> f64 {
    batch_head_loss(encoder, adv_head, xs, ss)
}

/// Batch-averaged gradients of every parameter block.
///
/// Head blocks are gradients of that head's own cross-entropy; the encoder
/// block is the gradient of `task loss - lambda * adversary loss`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub d_encoder_w: Vec<f64>,
    pub d_encoder_b: Vec<f64>,
    pub d_task_w: Vec<f64>,
    pub d_task_b: Vec<f64>,
    pub d_adv_w: Option<Vec<f64>>,
    pub d_adv_b: Option<Vec<f64>>,
}

pub fn batch_gradients(
    encoder: &EncoderParams,
    task_head: &SoftmaxHead,
    adv_head: Option<&SoftmaxHead>,
    xs: &[Vec<usize>],
    ys: &[u32],
    ss: Option<&[u32]>,
    lambda: f64,
) -> Gradients {
    let k = encoder.k;
    let d_in = encoder.d_in;
    let mut g = Gradients {
        d_encoder_w: vec![0.0; k * d_in],
        d_encoder_b: vec![0.0; k],
        d_task_w: vec![0.0; task_head.n_classes * k],
        d_task_b: vec![0.0; task_head.n_classes],
        d_adv_w: adv_head.map(|h| vec![0.0; h.n_classes * k]),
        d_adv_b: adv_head.map(|h| vec![0.0; h.n_classes]),
    };
    let scale = 1.0 / xs.len() as f64;

    for (row, x) in xs.iter().enumerate() {
        let z = encoder.forward(x);
        let mut dz = vec![0.0; k];

        let head_pass = |head: &SoftmaxHead,
                         target: u32,
                         dw: &mut [f64],
                         db: &mut [f64],
                         dz: &mut [f64],
                         dz_sign: f64| {
            let logits = head.logits(&z);
            let lse = log_sum_exp(&logits);
            for c in 0..head.n_classes {
                let mut delta = (logits[c] - lse).exp();
                if c as u32 == target {
                    delta -= 1.0;
                }
                db[c] += scale * delta;
                for i in 0..k {
                    dw[c * k + i] += scale * delta * z[i];
                    dz[i] += dz_sign * delta * head.weights[c * k + i];
                }
            }
        };

        head_pass(
            task_head,
            ys[row],
            &mut g.d_task_w,
            &mut g.d_task_b,
            &mut dz,
            1.0,
        );
        if let (Some(head), Some(ss)) = (adv_head, ss) {
            head_pass(
                head,
                ss[row],
                g.d_adv_w.as_mut().unwrap(),
                g.d_adv_b.as_mut().unwrap(),
                &mut dz,
                -lambda,
            );
        }

        for (i, &dzi) in dz.iter().enumerate() {
            g.d_encoder_b[i] += scale * dzi;
            let row_w = &mut g.d_encoder_w[i * d_in..(i + 1) * d_in];
            for &a in x {
                row_w[a] += scale * dzi;
            }
        }
    }
    g
}

/// Mini-batch SGD hyperparameters; `censor_lambda` scales the reversed
/// adversary gradient seen by the encoder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub censor_lambda: f64,
    pub censor_target: Option<String>,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.05,
            epochs: 40,
            batch_size: 32,
            censor_lambda: 0.0,
            censor_target: None,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Domain(format!(
                "learning rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::Domain("batch size must be at least 1".into()));
        }
        if !(self.censor_lambda >= 0.0 && self.censor_lambda.is_finite()) {
            return Err(Error::Domain(format!(
                "censoring weight must be nonnegative and finite, got {}",
                self.censor_lambda
            )));
        }
        if self.censor_lambda > 0.0 && self.censor_target.is_none() {
            return Err(Error::Domain(
                "censoring weight is positive but no censor target is set".into(),
            ));
        }
        Ok(())
    }
}

/// Encoder plus heads after training, with the full-pass task loss recorded
/// at initialization and after every epoch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub encoder: EncoderParams,
    pub task_head: SoftmaxHead,
    pub adversary_head: Option<SoftmaxHead>,
    pub loss_history: Vec<f64>,
}

/// Ceiling on the global L2 norm of a batch gradient; steeper gradients
/// are rescaled so extreme censoring weights cannot run the parameters off
/// to infinity.
pub const GRAD_CLIP: f64 = 5.0;

/// L2 shrinkage on the adversary head's weights. Each step the head's
/// weights decay toward zero alongside the cross-entropy descent, keeping
/// the head's read direction proportional to the signal that remains in
/// the representation. The reversal then settles once the signal is gone
/// instead of cycling around zero at a fixed amplitude.
pub const ADV_WEIGHT_DECAY: f64 = 0.05;

fn clip_scale(gradients: &Gradients) -> f64 {
    let mut sq = 0.0;
    let blocks: [&[f64]; 4] = [
        &gradients.d_encoder_w,
        &gradients.d_encoder_b,
        &gradients.d_task_w,
        &gradients.d_task_b,
    ];
    for block in blocks {
        sq += block.iter().map(|g| g * g).sum::<f64>();
    }
    for block in [&gradients.d_adv_w, &gradients.d_adv_b]
        .into_iter()
        .flatten()
    {
        sq += block.iter().map(|g| g * g).sum::<f64>();
    }
    let norm = sq.sqrt();
    if norm > GRAD_CLIP {
        GRAD_CLIP / norm
    } else {
        1.0
    }
}

fn train_impl(
    ds: &Dataset,
    split: &DatasetSplit,
    features: &[String],
    task: &str,
    k: usize,
    cfg: &TrainConfig,
    censor: Option<&str>,
) -> Result<TrainedModel> {
    cfg.validate()?;
    let task_col = ds.column(task)?;
    let mut encoder = EncoderParams::seeded(ds, features, k, cfg.seed)?;
    let mut task_head = SoftmaxHead::seeded(task_col.arity().max(2), k, cfg.seed, "task_init")?;
    let mut adv_head = match censor {
        Some(target) => Some(SoftmaxHead::seeded(
            ds.column(target)?.arity().max(2),
            k,
            cfg.seed,
            "adv_init",
        )?),
        None => None,
    };

    let xs_all = encoder.encode_rows(ds, &split.train_idx)?;
    let ys_all: Vec<u32> = split.train_idx.iter().map(|&r| task_col.codes[r]).collect();
    let ss_all: Option<Vec<u32>> = censor.map(|target| {
        let col = ds.column(target).unwrap();
        split.train_idx.iter().map(|&r| col.codes[r]).collect()
    });

    let check_loss = |encoder: &EncoderParams, head: &SoftmaxHead, epoch: usize| -> Result<f64> {
        let loss = batch_task_loss(encoder, head, &xs_all, &ys_all);
        if !loss.is_finite() {
            return Err(Error::Divergence(format!(
                "task loss became non-finite after epoch {epoch}"
            )));
        }
        Ok(loss)
    };

    let mut loss_history = vec![check_loss(&encoder, &task_head, 0)?];
    let n = xs_all.len();
    let lr = cfg.learning_rate;
    let lambda = cfg.censor_lambda;

    for epoch in 0..cfg.epochs {
        let mut order: Vec<usize> = (0..n).collect();
        {
            use rand::seq::SliceRandom;
            let mut rng = substream_indexed(cfg.seed, "shuffle", epoch as u64);
            order.shuffle(&mut rng);
        }
        for batch in order.chunks(cfg.batch_size) {
            let xs: Vec<Vec<usize>> = batch.iter().map(|&i| xs_all[i].clone()).collect();
            let ys: Vec<u32> = batch.iter().map(|&i| ys_all[i]).collect();
            let ss: Option<Vec<u32>> = ss_all
                .as_ref()
                .map(|s| batch.iter().map(|&i| s[i]).collect());
            let g = batch_gradients(
                &encoder,
                &task_head,
                adv_head.as_ref(),
                &xs,
                &ys,
                ss.as_deref(),
                lambda,
            );
            let step = lr * clip_scale(&g);
            for (w, d) in encoder.weights.iter_mut().zip(&g.d_encoder_w) {
                *w -= step * d;
            }
            for (b, d) in encoder.bias.iter_mut().zip(&g.d_encoder_b) {
                *b -= step * d;
            }
            for (w, d) in task_head.weights.iter_mut().zip(&g.d_task_w) {
                *w -= step * d;
            }
            for (b, d) in task_head.bias.iter_mut().zip(&g.d_task_b) {
                *b -= step * d;
            }
            if let Some(head) = adv_head.as_mut() {
                for (w, d) in head.weights.iter_mut().zip(g.d_adv_w.as_ref().unwrap()) {
                    *w -= step * (d + ADV_WEIGHT_DECAY * *w);
                }
                for (b, d) in head.bias.iter_mut().zip(g.d_adv_b.as_ref().unwrap()) {
                    *b -= step * d;
                }
            }
        }
        loss_history.push(check_loss(&encoder, &task_head, epoch + 1)?);
    }

    Ok(TrainedModel {
        encoder,
        task_head,
        adversary_head: adv_head,
        loss_history,
    })
}

/// Trains encoder and task head by plain ERM; requires censoring disabled.
pub fn train_encoder_erm(
    ds: &Dataset,
    split: &DatasetSplit,
    features: &[String],
    task: &str,
    k: usize,
    cfg: &TrainConfig,
) -> Result<TrainedModel> {
    if cfg.censor_lambda != 0.0 {
        return Err(Error::Domain(
            "censoring weight must be 0 for plain training".into(),
        ));
    }
    train_impl(ds, split, features, task, k, cfg, None)
}

/// Trains with an adversary head on the censor target; the encoder ascends
/// the adversary's loss scaled by `censor_lambda`.
pub fn train_encoder_censored(
    ds: &Dataset,
    split: &DatasetSplit,
    features: &[String],
    task: &str,
    k: usize,
    cfg: &TrainConfig,
) -> Result<TrainedModel> {
    let target = cfg
        .censor_target
        .clone()
        .ok_or_else(|| Error::Domain("censored training requires a censor target".into()))?;
    train_impl(ds, split, features, task, k, cfg, Some(&target))
}

/// Fraction of rows whose task-head prediction matches the label.
pub fn eval_accuracy(
    model: &TrainedModel,
    ds: &Dataset,
    task: &str,
    rows: &[usize],
) -> Result<f64> {
    if rows.is_empty() {
        return Err(Error::EmptyInput("evaluation rows"));
    }
    let task_col = ds.column(task)?;
    let xs = model.encoder.encode_rows(ds, rows)?;
    let hits = xs
        .iter()
        .zip(rows)
        .filter(|(x, &r)| model.task_head.predict(&model.encoder.forward(x)) == task_col.codes[r])
        .count();
    Ok(hits as f64 / rows.len() as f64)
}

/// Per-dimension equal-frequency bin edges fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizerSpec {
    pub bins_per_dim: usize,
    /// Interior cut points per representation dimension, strictly
    /// increasing; duplicates from ties are dropped.
    pub edges: Vec<Vec<f64>>,
}

impl QuantizerSpec {
    fn assign(&self, dim: usize, v: f64) -> u32 {
        self.edges[dim].partition_point(|&e| v >= e) as u32
    }
}

/// Fits equal-frequency cut points on the representations of the given
/// rows.
pub fn fit_quantizer(
    encoder: &EncoderParams,
    ds: &Dataset,
    rows: &[usize],
    bins_per_dim: usize,
) -> Result<QuantizerSpec> {
    if bins_per_dim < 2 {
        return Err(Error::Domain(format!(
            "quantizer needs at least 2 bins per dimension, got {bins_per_dim}"
        )));
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("quantizer fitting rows"));
    }
    let xs = encoder.encode_rows(ds, rows)?;
    let reprs: Vec<Vec<f64>> = xs.iter().map(|x| encoder.forward(x)).collect();
    let n = reprs.len();
    let mut edges = Vec::with_capacity(encoder.k);
    for dim in 0..encoder.k {
        let mut values: Vec<f64> = reprs.iter().map(|z| z[dim]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut cuts: Vec<f64> = Vec::new();
        for i in 1..bins_per_dim {
            let cut = values[i * n / bins_per_dim];
            if cuts.last().is_none_or(|&last| cut > last) {
                cuts.push(cut);
            }
        }
        edges.push(cuts);
    }
    Ok(QuantizerSpec {
        bins_per_dim,
        edges,
    })
}

/// Quantizes every row's representation into categorical `z_0..z_{k-1}`
/// columns.
pub fn export_representations(
    encoder: &EncoderParams,
    ds: &Dataset,
    quant: &QuantizerSpec,
) -> Result<Vec<Column>> {
    if quant.edges.len() != encoder.k {
        return Err(Error::AxisMismatch(format!(
            "quantizer covers {} dimensions, encoder has {}",
            quant.edges.len(),
            encoder.k
        )));
    }
    let rows: Vec<usize> = (0..ds.n_rows()).collect();
    let xs = encoder.encode_rows(ds, &rows)?;
    let mut columns = Vec::with_capacity(encoder.k);
    let codes_per_dim: Vec<Vec<u32>> = {
        let mut out = vec![Vec::with_capacity(rows.len()); encoder.k];
        for x in &xs {
            let z = encoder.forward(x);
            for (dim, &v) in z.iter().enumerate() {
                out[dim].push(quant.assign(dim, v));
            }
        }
        out
    };
    for (dim, codes) in codes_per_dim.into_iter().enumerate() {
        let n_bins = quant.edges[dim].len() + 1;
        let alphabet: Vec<String> = (0..n_bins).map(|b| b.to_string()).collect();
        columns.push(Column::from_codes(format!("z_{dim}"), alphabet, codes)?);
    }
    Ok(columns)
}

/// Trains a fresh encoder per task and hands its quantized representation
/// columns to the auditor; tasks listed in `censor_targets` get a
/// gradient-reversal adversary on the named column.
pub struct LearnedRepr {
    pub features: Vec<String>,
    pub k: usize,
    pub bins_per_dim: usize,
    pub base: TrainConfig,
    pub censor_targets: std::collections::HashMap<String, String>,
}

impl ReprProvider for LearnedRepr {
    fn provide(&mut self, ds: &Dataset, split: &DatasetSplit, task: &str) -> Result<ReprColumns> {
        let mut cfg = self.base.clone();
        let model = match self.censor_targets.get(task) {
            Some(target) => {
                cfg.censor_target = Some(target.clone());
                train_encoder_censored(ds, split, &self.features, task, self.k, &cfg)?
            }
            None => {
                cfg.censor_lambda = 0.0;
                cfg.censor_target = None;
                train_encoder_erm(ds, split, &self.features, task, self.k, &cfg)?
            }
        };
        let quant = fit_quantizer(&model.encoder, ds, &split.train_idx, self.bins_per_dim)?;
        let new_columns = export_representations(&model.encoder, ds, &quant)?;
        let names = new_columns.iter().map(|c| c.name.clone()).collect();
        Ok(ReprColumns { new_columns, names })
    }
}
