//! Sample-based audits: dataset handling, plug-in Bayes adversaries,
//! accuracy-ratio gain estimators, and the audit matrix.
//!
//! Everything here sees only finite samples. The estimators mirror the
//! exact measures: each gain is a log ratio of empirical prediction
//! accuracies, with the plug-in tables fitted on the adversary split and
//! accuracies taken on the held-out evaluation split. Negative estimates
//! are sampling noise and are reported unclamped so bias stays visible.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::JointPmf;
use crate::error::{Error, Result};
use crate::fmtnum::fmt12;
use crate::rng::substream;

/// One named categorical column; values live in a per-column alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub alphabet: Vec<String>,
    pub codes: Vec<u32>,
}

impl Column {
    /// Builds a column from raw string values; the alphabet is the sorted
    /// set of distinct values.
    pub fn from_values(name: impl Into<String>, values: &[&str]) -> Column {
        let mut alphabet: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        alphabet.sort();
        alphabet.dedup();
        let index: HashMap<&str, u32> = alphabet
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i as u32))
            .collect();
        let codes = values.iter().map(|v| index[v]).collect();
        Column {
            name: name.into(),
            alphabet,
            codes,
        }
    }

    /// Builds a column from pre-assigned codes into an explicit alphabet.
    pub fn from_codes(
        name: impl Into<String>,
        alphabet: Vec<String>,
        codes: Vec<u32>,
    ) -> Result<Column> {
        let name = name.into();
        if alphabet.is_empty() {
            return Err(Error::EmptyInput("column alphabet"));
        }
        for (i, a) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(a) {
                return Err(Error::Parse(format!("column '{name}' repeats value '{a}'")));
            }
        }
        if let Some(&bad) = codes.iter().find(|&&c| c as usize >= alphabet.len()) {
            return Err(Error::Parse(format!(
                "column '{name}' has code {bad} outside its {}-value alphabet",
                alphabet.len()
            )));
        }
        Ok(Column {
            name,
            alphabet,
            codes,
        })
    }

    pub fn arity(&self) -> usize {
        self.alphabet.len()
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }
}

/// A table of equal-length categorical columns with unique names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    columns: Vec<Column>,
}

impl Dataset {
    pub fn new(columns: Vec<Column>) -> Result<Dataset> {
        if columns.is_empty() {
            return Err(Error::EmptyInput("dataset columns"));
        }
        let n = columns[0].len();
        for c in &columns {
            if c.len() != n {
                return Err(Error::Parse(format!(
                    "column '{}' has {} rows, expected {n}",
                    c.name,
                    c.len()
                )));
            }
        }
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::Parse(format!("duplicate column name '{}'", c.name)));
            }
        }
        Ok(Dataset { columns })
    }

    pub fn n_rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    }

    pub fn add_column(&mut self, col: Column) -> Result<()> {
        if col.len() != self.n_rows() {
            return Err(Error::Parse(format!(
                "column '{}' has {} rows, dataset has {}",
                col.name,
                col.len(),
                self.n_rows()
            )));
        }
        if self.columns.iter().any(|c| c.name == col.name) {
            return Err(Error::Parse(format!(
                "duplicate column name '{}'",
                col.name
            )));
        }
        self.columns.push(col);
        Ok(())
    }

    /// Parses a CSV document with a header row; every value is categorical.
    pub fn from_csv_str(text: &str) -> Result<Dataset> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = reader
            .headers()?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        if headers.is_empty() {
            return Err(Error::EmptyInput("csv header"));
        }
        let mut raw: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
        for record in reader.records() {
            let record = record?;
            if record.len() != headers.len() {
                return Err(Error::Parse(format!(
                    "csv row has {} fields, header has {}",
                    record.len(),
                    headers.len()
                )));
            }
            for (i, field) in record.iter().enumerate() {
                raw[i].push(field.trim().to_string());
            }
        }
        if raw[0].is_empty() {
            return Err(Error::EmptyInput("csv rows"));
        }
        let columns = headers
            .into_iter()
            .zip(raw)
            .map(|(name, values)| {
                let refs: Vec<&str> = values.iter().map(String::as_str).collect();
                Column::from_values(name, &refs)
            })
            .collect();
        Dataset::new(columns)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.column_names().join(","));
        out.push('\n');
        for row in 0..self.n_rows() {
            let fields: Vec<&str> = self
                .columns
                .iter()
                .map(|c| c.alphabet[c.codes[row] as usize].as_str())
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Draws `n` iid rows from an exact joint; one column per axis, named
    /// after it.
    pub fn sample_from_joint(j: &JointPmf, n: usize, seed: u64) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::EmptyInput("sample size"));
        }
        let probs = j.probs();
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in probs {
            acc += p;
            cdf.push(acc);
        }
        let dims: Vec<usize> = j.axes().iter().map(|a| a.len()).collect();
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let mut rng = substream(seed, "joint_sample");
        let mut codes: Vec<Vec<u32>> = vec![Vec::with_capacity(n); dims.len()];
        for _ in 0..n {
            let u: f64 = rng.gen();
            let flat = match cdf.binary_search_by(|c| c.partial_cmp(&u).unwrap()) {
                Ok(i) => i + 1,
                Err(i) => i,
            }
            .min(probs.len() - 1);
            for (axis, stride) in strides.iter().enumerate() {
                codes[axis].push(((flat / stride) % dims[axis]) as u32);
            }
        }
        let columns = j
            .axes()
            .iter()
            .zip(codes)
            .map(|(axis, codes)| Column::from_codes(axis.name.clone(), axis.symbols.clone(), codes))
            .collect::<Result<_>>()?;
        Dataset::new(columns)
    }
}

/// Disjoint adversary / train / eval row indices covering the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub adv_idx: Vec<usize>,
    pub train_idx: Vec<usize>,
    pub eval_idx: Vec<usize>,
    pub seed: u64,
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Shuffles rows by seed and cuts 20% for the adversary, then 80/20 of the
/// remainder for train/eval.
pub fn split_dataset(ds: &Dataset, seed: u64) -> Result<DatasetSplit> {
    let n = ds.n_rows();
    if n < 10 {
        return Err(Error::TooSmall { rows: n, min: 10 });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = substream(seed, "split_shuffle");
    order.shuffle(&mut rng);
    let n_adv = round_half_up(0.20 * n as f64);
    let remaining = n - n_adv;
    let n_train = round_half_up(0.80 * remaining as f64);
    let adv_idx = order[..n_adv].to_vec();
    let train_idx = order[n_adv..n_adv + n_train].to_vec();
    let eval_idx = order[n_adv + n_train..].to_vec();
    Ok(DatasetSplit {
        adv_idx,
        train_idx,
        eval_idx,
        seed,
    })
}

/// Smoothed conditional frequency table for one target given zero or more
/// conditioning columns.
#[derive(Debug, Clone)]
pub struct PluginTable {
    target: String,
    n_target: usize,
    given: Vec<String>,
    given_dims: Vec<usize>,
    counts: HashMap<u64, Vec<u64>>,
    marginal: Vec<u64>,
    smoothing: f64,
}

impl PluginTable {
    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn given(&self) -> &[String] {
        &self.given
    }

    fn cell_key(&self, given_codes: &[u32]) -> u64 {
        debug_assert_eq!(given_codes.len(), self.given_dims.len());
        let mut key = 0u64;
        for (c, d) in given_codes.iter().zip(&self.given_dims) {
            key = key * (*d as u64) + (*c as u64);
        }
        key
    }

    /// The estimated conditional pmf of the target in one conditioning
    /// cell; unseen cells fall back to the marginal over the fitting rows.
    pub fn estimate(&self, given_codes: &[u32]) -> Vec<f64> {
        let key = self.cell_key(given_codes);
        match self.counts.get(&key) {
            Some(cell) => {
                let total: u64 = cell.iter().sum();
                let den = total as f64 + self.smoothing * self.n_target as f64;
                cell.iter()
                    .map(|&c| (c as f64 + self.smoothing) / den)
                    .collect()
            }
            None => {
                let total: u64 = self.marginal.iter().sum();
                self.marginal
                    .iter()
                    .map(|&c| c as f64 / total as f64)
                    .collect()
            }
        }
    }

    /// The most likely target code given the conditioning cell; ties break
    /// toward the lowest code, and unseen cells use the marginal.
    pub fn predict(&self, given_codes: &[u32]) -> u32 {
        let key = self.cell_key(given_codes);
        let counts = match self.counts.get(&key) {
            Some(cell) => cell,
            None => &self.marginal,
        };
        let mut best = 0usize;
        for (i, &c) in counts.iter().enumerate() {
            if c > counts[best] {
                best = i;
            }
        }
        best as u32
    }
}

/// Counts target/conditioning co-occurrences over the given rows.
pub fn fit_plugin(
    ds: &Dataset,
    rows: &[usize],
    target: &str,
    given: &[String],
    smoothing: f64,
) -> Result<PluginTable> {
    if rows.is_empty() {
        return Err(Error::EmptyInput("fitting rows"));
    }
    if smoothing < 0.0 {
        return Err(Error::Domain(format!(
            "smoothing must be nonnegative, got {smoothing}"
        )));
    }
    let target_col = ds.column(target)?;
    let given_cols: Vec<&Column> = given.iter().map(|g| ds.column(g)).collect::<Result<_>>()?;
    let given_dims: Vec<usize> = given_cols.iter().map(|c| c.arity()).collect();
    let key_space: u128 = given_dims.iter().map(|&d| d as u128).product();
    if key_space > u64::MAX as u128 {
        return Err(Error::TooLarge {
            what: "conditioning cells",
            size: key_space,
            cap: u64::MAX as u128,
        });
    }

    let n_target = target_col.arity();
    let mut counts: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut marginal = vec![0u64; n_target];
    let mut key_codes = vec![0u32; given_cols.len()];
    for &row in rows {
        let t = target_col.codes[row] as usize;
        marginal[t] += 1;
        for (i, col) in given_cols.iter().enumerate() {
            key_codes[i] = col.codes[row];
        }
        let mut key = 0u64;
        for (c, d) in key_codes.iter().zip(&given_dims) {
            key = key * (*d as u64) + (*c as u64);
        }
        counts.entry(key).or_insert_with(|| vec![0u64; n_target])[t] += 1;
    }
    Ok(PluginTable {
        target: target.to_string(),
        n_target,
        given: given.to_vec(),
        given_dims,
        counts,
        marginal,
        smoothing,
    })
}

/// Free-function form of [`PluginTable::predict`].
pub fn predict_map(table: &PluginTable, given_codes: &[u32]) -> u32 {
    table.predict(given_codes)
}

/// Gain estimates for one (task, sensitive) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditCell {
    pub task: String,
    pub sensitive: String,
    pub fundamental: f64,
    pub adv_gain: f64,
    pub utility: f64,
    pub delta_adv: f64,
    /// True when the task and sensitive column coincide.
    pub diagonal: bool,
    /// Estimates that came out negative; sampling noise, not clamped.
    pub negative_estimates: Vec<String>,
}

fn accuracy(table: &PluginTable, truth: &Column, given_cols: &[&Column], rows: &[usize]) -> f64 {
    let mut hits = 0usize;
    let mut codes = vec![0u32; given_cols.len()];
    for &row in rows {
        for (i, col) in given_cols.iter().enumerate() {
            codes[i] = col.codes[row];
        }
        if table.predict(&codes) == truth.codes[row] {
            hits += 1;
        }
    }
    hits as f64 / rows.len() as f64
}

/// Laplace smoothing used for tables conditioned on representation cells.
pub const FEATURE_SMOOTHING: f64 = 1.0;

/// Estimates fundamental leakage, adversary gain, and utility for one
/// (task, sensitive) pair from representation columns.
pub fn estimate_gains(
    ds: &Dataset,
    split: &DatasetSplit,
    task: &str,
    sensitive: &str,
    z_cols: &[String],
) -> Result<AuditCell> {
    if split.eval_idx.is_empty() {
        return Err(Error::EmptyInput("evaluation rows"));
    }
    let task_col = ds.column(task)?;
    let sens_col = ds.column(sensitive)?;
    let z_refs: Vec<&Column> = z_cols.iter().map(|z| ds.column(z)).collect::<Result<_>>()?;

    let mut zy_given: Vec<String> = z_cols.to_vec();
    zy_given.push(task.to_string());
    let mut zy_cols: Vec<&Column> = z_refs.clone();
    zy_cols.push(task_col);

    let s_base = fit_plugin(ds, &split.adv_idx, sensitive, &[], 0.0)?;
    let s_given_y = fit_plugin(ds, &split.adv_idx, sensitive, &[task.to_string()], 0.0)?;
    let s_given_zy = fit_plugin(ds, &split.adv_idx, sensitive, &zy_given, FEATURE_SMOOTHING)?;
    let y_base = fit_plugin(ds, &split.adv_idx, task, &[], 0.0)?;
    let y_given_z = fit_plugin(ds, &split.adv_idx, task, z_cols, FEATURE_SMOOTHING)?;

    let rows = &split.eval_idx;
    let acc_s = accuracy(&s_base, sens_col, &[], rows);
    let acc_s_y = accuracy(&s_given_y, sens_col, &[task_col], rows);
    let acc_s_zy = accuracy(&s_given_zy, sens_col, &zy_cols, rows);
    let acc_y = accuracy(&y_base, task_col, &[], rows);
    let acc_y_z = accuracy(&y_given_z, task_col, &z_refs, rows);

    let fundamental = (acc_s_y / acc_s).log2();
    let adv_gain = (acc_s_zy / acc_s_y).log2();
    let utility = (acc_y_z / acc_y).log2();
    let delta_adv = adv_gain - utility;

    let mut negative_estimates = Vec::new();
    for (name, v) in [
        ("fundamental", fundamental),
        ("adv_gain", adv_gain),
        ("utility", utility),
    ] {
        if v < 0.0 {
            negative_estimates.push(name.to_string());
        }
    }

    Ok(AuditCell {
        task: task.to_string(),
        sensitive: sensitive.to_string(),
        fundamental,
        adv_gain,
        utility,
        delta_adv,
        diagonal: task == sensitive,
        negative_estimates,
    })
}

/// Representation columns to audit for one task: names of existing columns
/// plus any freshly built ones to append.
pub struct ReprColumns {
    pub new_columns: Vec<Column>,
    pub names: Vec<String>,
}

/// Source of representation columns, one call per task.
pub trait ReprProvider {
    fn provide(&mut self, ds: &Dataset, split: &DatasetSplit, task: &str) -> Result<ReprColumns>;
}

/// Audits pre-existing representation columns, the same set for every task.
pub struct FixedColumns(pub Vec<String>);

impl ReprProvider for FixedColumns {
    fn provide(&mut self, _: &Dataset, _: &DatasetSplit, _: &str) -> Result<ReprColumns> {
        Ok(ReprColumns {
            new_columns: Vec::new(),
            names: self.0.clone(),
        })
    }
}

/// Grid of audit cells, row-major over (task, sensitive).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditMatrix {
    pub tasks: Vec<String>,
    pub sensitives: Vec<String>,
    pub cells: Vec<AuditCell>,
}

impl AuditMatrix {
    pub fn cell(&self, task: &str, sensitive: &str) -> Option<&AuditCell> {
        self.cells
            .iter()
            .find(|c| c.task == task && c.sensitive == sensitive)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("task,sensitive,fundamental,adv_gain,utility,delta_adv\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.task,
                c.sensitive,
                fmt12(c.fundamental),
                fmt12(c.adv_gain),
                fmt12(c.utility),
                fmt12(c.delta_adv)
            ));
        }
        out
    }
}

/// Builds the full audit grid, fetching representations per task.
pub fn audit_matrix(
    ds: &Dataset,
    split: &DatasetSplit,
    tasks: &[String],
    sensitives: &[String],
    provider: &mut dyn ReprProvider,
) -> Result<AuditMatrix> {
    let mut jobs: Vec<(String, Dataset, Vec<String>)> = Vec::with_capacity(tasks.len());
    for task in tasks {
        let repr = provider.provide(ds, split, task)?;
        let mut scratch = ds.clone();
        for col in repr.new_columns {
            scratch.add_column(col)?;
        }
        for name in &repr.names {
            scratch.column(name)?;
        }
        jobs.push((task.clone(), scratch, repr.names));
    }

    let cells: Vec<Result<AuditCell>> = jobs
        .par_iter()
        .flat_map(|(task, scratch, names)| {
            sensitives
                .par_iter()
                .map(move |sensitive| estimate_gains(scratch, split, task, sensitive, names))
        })
        .collect();
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;

    Ok(AuditMatrix {
        tasks: tasks.to_vec(),
        sensitives: sensitives.to_vec(),
        cells,
    })
}

/// Averages audit matrices cell-wise over repeated runs; the delta identity
/// is restored from the averaged components.
pub fn average_matrices(mats: &[AuditMatrix]) -> Result<AuditMatrix> {
    let Some(first) = mats.first() else {
        return Err(Error::EmptyInput("audit matrices"));
    };
    for m in mats {
        if m.tasks != first.tasks || m.sensitives != first.sensitives {
            return Err(Error::AxisMismatch(
                "audit matrices cover different grids".into(),
            ));
        }
    }
    let k = mats.len() as f64;
    let cells = first
        .cells
        .iter()
        .enumerate()
        .map(|(i, proto)| {
            let fundamental = mats.iter().map(|m| m.cells[i].fundamental).sum::<f64>() / k;
            let adv_gain = mats.iter().map(|m| m.cells[i].adv_gain).sum::<f64>() / k;
            let utility = mats.iter().map(|m| m.cells[i].utility).sum::<f64>() / k;
            let mut negative_estimates = Vec::new();
            for (name, v) in [
                ("fundamental", fundamental),
                ("adv_gain", adv_gain),
                ("utility", utility),
            ] {
                if v < 0.0 {
                    negative_estimates.push(name.to_string());
                }
            }
            AuditCell {
                task: proto.task.clone(),
                sensitive: proto.sensitive.clone(),
                fundamental,
                adv_gain,
                utility,
                delta_adv: adv_gain - utility,
                diagonal: proto.diagonal,
                negative_estimates,
            }
        })
        .collect();
    Ok(AuditMatrix {
        tasks: first.tasks.clone(),
        sensitives: first.sensitives.clone(),
        cells,
    })
}

/// Pairwise absolute Pearson correlations between binary columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PearsonMatrix {
    pub columns: Vec<String>,
    /// Row-major |r| values.
    pub values: Vec<f64>,
    /// Pairs involving a constant column, where r is undefined.
    pub undefined_pairs: Vec<(String, String)>,
}

pub fn pearson_matrix(ds: &Dataset, columns: &[String]) -> Result<PearsonMatrix> {
    let mut encoded: Vec<(&Column, bool)> = Vec::with_capacity(columns.len());
    for name in columns {
        let col = ds.column(name)?;
        if col.arity() > 2 {
            return Err(Error::NotBinary {
                column: name.clone(),
                arity: col.arity(),
            });
        }
        let constant = col.arity() < 2 || {
            let first = col.codes[0];
            col.codes.iter().all(|&c| c == first)
        };
        encoded.push((col, constant));
    }
    let n = ds.n_rows() as f64;
    let k = columns.len();
    let mut values = vec![0.0; k * k];
    let mut undefined_pairs = Vec::new();
    for i in 0..k {
        values[i * k + i] = 1.0;
        for jx in (i + 1)..k {
            let (a, a_const) = encoded[i];
            let (b, b_const) = encoded[jx];
            let r = if a_const || b_const {
                undefined_pairs.push((columns[i].clone(), columns[jx].clone()));
                0.0
            } else {
                let mean_a = a.codes.iter().map(|&c| c as f64).sum::<f64>() / n;
                let mean_b = b.codes.iter().map(|&c| c as f64).sum::<f64>() / n;
                let mut cov = 0.0;
                let mut var_a = 0.0;
                let mut var_b = 0.0;
                for row in 0..ds.n_rows() {
                    let da = a.codes[row] as f64 - mean_a;
                    let db = b.codes[row] as f64 - mean_b;
                    cov += da * db;
                    var_a += da * da;
                    var_b += db * db;
                }
                (cov / (var_a * var_b).sqrt()).abs()
            };
            values[i * k + jx] = r;
            values[jx * k + i] = r;
        }
    }
    Ok(PearsonMatrix {
        columns: columns.to_vec(),
        values,
        undefined_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Alphabet;
    use crate::measures::{i_inf, i_inf_cond};

    fn coin_dataset(n: usize, seed: u64) -> Dataset {
        let mut rng = substream(seed, "coin_data");
        let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let alphabet = vec!["0".to_string(), "1".to_string()];
        Dataset::new(vec![
            Column::from_codes("a", alphabet.clone(), a).unwrap(),
            Column::from_codes("b", alphabet, b).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn split_of_hundred_rows() {
        let ds = coin_dataset(100, 1);
        let split = split_dataset(&ds, 7).unwrap();
        assert_eq!(split.adv_idx.len(), 20);
        assert_eq!(split.train_idx.len(), 64);
        assert_eq!(split.eval_idx.len(), 16);
    }

    #[test]
    fn split_of_ten_rows_rounds_half_up() {
        let ds = coin_dataset(10, 1);
        let split = split_dataset(&ds, 7).unwrap();
        assert_eq!(split.adv_idx.len(), 2);
        assert_eq!(split.train_idx.len(), 6);
        assert_eq!(split.eval_idx.len(), 2);
    }

    #[test]
    fn split_rejects_tiny_datasets() {
        let ds = coin_dataset(9, 1);
        assert!(matches!(split_dataset(&ds, 0), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn split_is_deterministic_and_partitions() {
        for n in [10usize, 37, 250, 13143] {
            let ds = coin_dataset(n, 2);
            let a = split_dataset(&ds, 11).unwrap();
            let b = split_dataset(&ds, 11).unwrap();
            assert_eq!(a, b);
            let mut all: Vec<usize> = a
                .adv_idx
                .iter()
                .chain(&a.train_idx)
                .chain(&a.eval_idx)
                .copied()
                .collect();
            all.sort_unstable();
            assert_eq!(all, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn split_13143_matches_rounding_rule() {
        let ds = coin_dataset(13143, 3);
        let split = split_dataset(&ds, 5).unwrap();
        assert_eq!(split.adv_idx.len(), 2629);
        assert_eq!(split.train_idx.len(), 8411);
        assert_eq!(split.eval_idx.len(), 2103);
    }

    #[test]
    fn plugin_degenerate_target_is_certain() {
        let ds = Dataset::new(vec![
            Column::from_values("s", &["a", "a", "a", "a"]),
            Column::from_values("g", &["0", "1", "0", "1"]),
        ])
        .unwrap();
        let t = fit_plugin(&ds, &[0, 1, 2, 3], "s", &["g".to_string()], 0.0).unwrap();
        assert_eq!(t.estimate(&[0]), vec![1.0]);
        assert_eq!(t.estimate(&[1]), vec![1.0]);
    }

    #[test]
    fn plugin_frequency_arithmetic() {
        let ds = Dataset::new(vec![
            Column::from_values("s", &["0", "0", "0", "1"]),
            Column::from_values("g", &["c", "c", "c", "c"]),
        ])
        .unwrap();
        let t = fit_plugin(&ds, &[0, 1, 2, 3], "s", &["g".to_string()], 0.0).unwrap();
        assert_eq!(t.estimate(&[0]), vec![0.75, 0.25]);
        assert_eq!(t.predict(&[0]), 0);
    }

    #[test]
    fn plugin_smoothing_shifts_towards_uniform() {
        let ds = Dataset::new(vec![
            Column::from_values("s", &["0", "0", "0", "1"]),
            Column::from_values("g", &["c", "c", "c", "c"]),
        ])
        .unwrap();
        let t = fit_plugin(&ds, &[0, 1, 2, 3], "s", &["g".to_string()], 1.0).unwrap();
        let est = t.estimate(&[0]);
        assert!((est[0] - 4.0 / 6.0).abs() < 1e-12);
        assert!((est[1] - 2.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn plugin_tie_breaks_to_lowest_code() {
        let ds = Dataset::new(vec![
            Column::from_values("s", &["0", "1"]),
            Column::from_values("g", &["c", "c"]),
        ])
        .unwrap();
        let t = fit_plugin(&ds, &[0, 1], "s", &["g".to_string()], 0.0).unwrap();
        assert_eq!(t.predict(&[0]), 0);
    }

    #[test]
    fn plugin_unseen_cell_uses_marginal() {
        let ds = Dataset::new(vec![
            Column::from_values("s", &["1", "1", "0"]),
            Column::from_values("g", &["a", "a", "a", "b"]),
        ]);
        // Unequal lengths are invalid; rebuild properly with 4 rows.
        assert!(ds.is_err());
        let ds = Dataset::new(vec![
            Column::from_values("s", &["1", "1", "0", "1"]),
            Column::from_values("g", &["a", "a", "a", "b"]),
        ])
        .unwrap();
        let t = fit_plugin(&ds, &[0, 1, 2], "s", &["g".to_string()], 0.0).unwrap();
        // Cell "b" (code 1) was never seen among fitting rows.
        assert_eq!(t.predict(&[1]), 1);
        let est = t.estimate(&[1]);
        assert!((est[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn plugin_is_row_order_invariant() {
        let ds = Dataset::new(vec![
            Column::from_values("s", &["0", "1", "0", "1", "0"]),
            Column::from_values("g", &["a", "a", "b", "b", "a"]),
        ])
        .unwrap();
        let t1 = fit_plugin(&ds, &[0, 1, 2, 3, 4], "s", &["g".to_string()], 0.0).unwrap();
        let t2 = fit_plugin(&ds, &[4, 3, 2, 1, 0], "s", &["g".to_string()], 0.0).unwrap();
        for g in 0..2 {
            assert_eq!(t1.predict(&[g]), t2.predict(&[g]));
            assert_eq!(t1.estimate(&[g]), t2.estimate(&[g]));
        }
    }

    fn bsc_joint_xyz() -> JointPmf {
        // S uniform binary; Y via BSC(0.1); Z via BSC(0.25), independent.
        let s = Alphabet::indexed("s", 2);
        let y = Alphabet::indexed("y", 2);
        let z = Alphabet::indexed("z", 2);
        let mut probs = vec![0.0; 8];
        for si in 0..2 {
            for yi in 0..2 {
                for zi in 0..2 {
                    let py: f64 = if yi == si { 0.9 } else { 0.1 };
                    let pz: f64 = if zi == si { 0.75 } else { 0.25 };
                    probs[(si * 2 + yi) * 2 + zi] = 0.5 * py * pz;
                }
            }
        }
        JointPmf::new(vec![s, y, z], probs).unwrap()
    }

    #[test]
    fn plugin_converges_to_true_conditional() {
        let j = bsc_joint_xyz();
        let ds = Dataset::sample_from_joint(&j, 40_000, 42).unwrap();
        let rows: Vec<usize> = (0..ds.n_rows()).collect();
        let t = fit_plugin(&ds, &rows, "s", &["y".to_string()], 0.0).unwrap();
        // True P(s|y=0) = (0.9, 0.1).
        let est = t.estimate(&[0]);
        let tv = 0.5 * ((est[0] - 0.9).abs() + (est[1] - 0.1).abs());
        assert!(tv < 0.02, "tv distance {tv}");
    }

    #[test]
    fn gains_track_exact_measures_on_sampled_joint() {
        let j = bsc_joint_xyz();
        let ds = Dataset::sample_from_joint(&j, 100_000, 7).unwrap();
        let split = split_dataset(&ds, 7).unwrap();
        let cell = estimate_gains(&ds, &split, "y", "s", &["z".to_string()]).unwrap();

        let jsy = j.marginal_pair(0, 1);
        let exact_fundamental = i_inf(&jsy).unwrap().bits;
        let jszy = j.permute(&[0, 2, 1]);
        let exact_adv = i_inf_cond(&jszy).unwrap().bits;
        let jyz = j.marginal_pair(1, 2);
        let exact_utility = i_inf(&jyz).unwrap().bits;

        assert!((cell.fundamental - exact_fundamental).abs() < 0.02);
        assert!((cell.adv_gain - exact_adv).abs() < 0.02);
        assert!((cell.utility - exact_utility).abs() < 0.02);
        assert_eq!(cell.delta_adv, cell.adv_gain - cell.utility);
    }

    #[test]
    fn constant_representation_gains_nothing() {
        let j = bsc_joint_xyz();
        let mut ds = Dataset::sample_from_joint(&j, 5_000, 9).unwrap();
        let n = ds.n_rows();
        ds.add_column(Column::from_codes("zc", vec!["k".into()], vec![0; n]).unwrap())
            .unwrap();
        let split = split_dataset(&ds, 9).unwrap();
        let cell = estimate_gains(&ds, &split, "y", "s", &["zc".to_string()]).unwrap();
        assert!(cell.adv_gain.abs() < 0.02);
        assert!(cell.utility.abs() < 0.02);
        assert!(cell.delta_adv.abs() < 0.04);
    }

    #[test]
    fn task_equal_to_sensitive_has_no_residual_gain() {
        let j = bsc_joint_xyz();
        let ds = Dataset::sample_from_joint(&j, 20_000, 11).unwrap();
        let split = split_dataset(&ds, 11).unwrap();
        let cell = estimate_gains(&ds, &split, "s", "s", &["z".to_string()]).unwrap();
        assert!(cell.diagonal);
        // Perfect revelation: accuracy with the label given is 1, so the
        // fundamental gain is -log2 of the baseline guesser's accuracy.
        let s = ds.column("s").unwrap();
        let count =
            |rows: &[usize], code: u32| rows.iter().filter(|&&r| s.codes[r] == code).count();
        let guess = if count(&split.adv_idx, 1) > count(&split.adv_idx, 0) {
            1
        } else {
            0
        };
        let baseline = count(&split.eval_idx, guess) as f64 / split.eval_idx.len() as f64;
        assert!((cell.fundamental - (1.0 / baseline).log2()).abs() < 1e-12);
        assert!(cell.adv_gain.abs() < 0.02);
    }

    #[test]
    fn audit_matrix_shape_and_delta_identity() {
        let j = bsc_joint_xyz();
        let ds = Dataset::sample_from_joint(&j, 2_000, 13).unwrap();
        let split = split_dataset(&ds, 13).unwrap();
        let mut provider = FixedColumns(vec!["z".to_string()]);
        let m = audit_matrix(
            &ds,
            &split,
            &["y".to_string(), "s".to_string()],
            &["s".to_string(), "y".to_string(), "z".to_string()],
            &mut provider,
        )
        .unwrap();
        assert_eq!(m.cells.len(), 6);
        for c in &m.cells {
            assert_eq!(c.delta_adv, c.adv_gain - c.utility);
        }
        assert!(m.cell("s", "s").unwrap().diagonal);
        assert!(!m.cell("y", "s").unwrap().diagonal);
    }

    #[test]
    fn audit_matrix_on_constant_dataset_is_flat() {
        let n = 50;
        let ds = Dataset::new(vec![
            Column::from_codes("y", vec!["0".into(), "1".into()], vec![0; n]).unwrap(),
            Column::from_codes("s", vec!["0".into(), "1".into()], vec![0; n]).unwrap(),
            Column::from_codes("z", vec!["0".into(), "1".into()], vec![0; n]).unwrap(),
        ])
        .unwrap();
        let split = split_dataset(&ds, 3).unwrap();
        let mut provider = FixedColumns(vec!["z".to_string()]);
        let m = audit_matrix(
            &ds,
            &split,
            &["y".to_string()],
            &["s".to_string()],
            &mut provider,
        )
        .unwrap();
        let c = &m.cells[0];
        assert_eq!(c.fundamental, 0.0);
        assert_eq!(c.adv_gain, 0.0);
        assert_eq!(c.utility, 0.0);
        assert_eq!(c.delta_adv, 0.0);
    }

    #[test]
    fn averaging_restores_delta_identity() {
        let j = bsc_joint_xyz();
        let mut mats = Vec::new();
        for seed in 0..3 {
            let ds = Dataset::sample_from_joint(&j, 2_000, seed).unwrap();
            let split = split_dataset(&ds, seed).unwrap();
            let mut provider = FixedColumns(vec!["z".to_string()]);
            mats.push(
                audit_matrix(
                    &ds,
                    &split,
                    &["y".to_string()],
                    &["s".to_string()],
                    &mut provider,
                )
                .unwrap(),
            );
        }
        let avg = average_matrices(&mats).unwrap();
        let c = &avg.cells[0];
        assert_eq!(c.delta_adv, c.adv_gain - c.utility);
        let manual: f64 = mats.iter().map(|m| m.cells[0].adv_gain).sum::<f64>() / 3.0;
        assert!((c.adv_gain - manual).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip_preserves_values() {
        let ds = Dataset::new(vec![
            Column::from_values("y", &["1", "0", "1"]),
            Column::from_values("f_color", &["red", "blue", "red"]),
        ])
        .unwrap();
        let text = ds.to_csv_string();
        let back = Dataset::from_csv_str(&text).unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn csv_rejects_ragged_rows() {
        let text = "a,b\n1,2\n3\n";
        assert!(Dataset::from_csv_str(text).is_err());
    }

    #[test]
    fn sampling_matches_marginal_frequencies() {
        let x = Alphabet::indexed("x", 2);
        let y = Alphabet::indexed("y", 2);
        let j = JointPmf::new(vec![x, y], vec![0.5, 0.2, 0.2, 0.1]).unwrap();
        let ds = Dataset::sample_from_joint(&j, 50_000, 21).unwrap();
        let xcol = ds.column("x").unwrap();
        let ones = xcol.codes.iter().filter(|&&c| c == 1).count() as f64;
        let freq = ones / ds.n_rows() as f64;
        assert!((freq - 0.3).abs() < 0.01);
    }

    #[test]
    fn pearson_identical_and_complementary_columns() {
        let a: Vec<u32> = (0..1000).map(|i| (i % 2) as u32).collect();
        let b: Vec<u32> = a.iter().map(|&c| 1 - c).collect();
        let alphabet = vec!["0".to_string(), "1".to_string()];
        let ds = Dataset::new(vec![
            Column::from_codes("a", alphabet.clone(), a.clone()).unwrap(),
            Column::from_codes("same", alphabet.clone(), a).unwrap(),
            Column::from_codes("flip", alphabet, b).unwrap(),
        ])
        .unwrap();
        let m = pearson_matrix(
            &ds,
            &["a".to_string(), "same".to_string(), "flip".to_string()],
        )
        .unwrap();
        // Row 0: r(a, a), r(a, same), r(a, flip); the flip carries |r| = 1.
        assert_eq!(m.values[0], 1.0);
        assert_eq!(m.values[1], 1.0);
        assert_eq!(m.values[2], 1.0);
        assert!(m.undefined_pairs.is_empty());
    }

    #[test]
    fn pearson_independent_coins_are_weakly_correlated() {
        let ds = coin_dataset(100_000, 31);
        let m = pearson_matrix(&ds, &["a".to_string(), "b".to_string()]).unwrap();
        assert!(m.values[1] <= 0.02);
    }

    #[test]
    fn pearson_flags_constant_columns() {
        let alphabet = vec!["0".to_string(), "1".to_string()];
        let ds = Dataset::new(vec![
            Column::from_codes("a", alphabet.clone(), vec![0, 1, 0, 1]).unwrap(),
            Column::from_codes("k", alphabet, vec![1, 1, 1, 1]).unwrap(),
        ])
        .unwrap();
        let m = pearson_matrix(&ds, &["a".to_string(), "k".to_string()]).unwrap();
        assert_eq!(m.values[1], 0.0);
        assert_eq!(m.undefined_pairs.len(), 1);
        assert_eq!(m.values[3], 1.0);
    }

    #[test]
    fn pearson_rejects_wide_alphabets() {
        let ds = Dataset::new(vec![
            Column::from_values("c", &["x", "y", "z"]),
            Column::from_values("d", &["0", "1", "0"]),
        ])
        .unwrap();
        assert!(matches!(
            pearson_matrix(&ds, &["c".to_string(), "d".to_string()]),
            Err(Error::NotBinary { .. })
        ));
    }
}
