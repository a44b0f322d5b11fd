//! Seeded generators for synthetic joints, channels, and datasets.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::dist::{Alphabet, Channel, JointPmf};
use crate::empirical::{Column, Dataset};
use crate::error::{Error, Result};
use crate::rng::substream;

/// Task label column of the three-attribute battery.
pub const BATTERY_TASK: &str = "y";
/// Sensitive columns of the three-attribute battery.
pub const BATTERY_SENSITIVES: [&str; 3] = ["s_near", "s_and", "s_far"];
/// Feature columns of the three-attribute battery.
pub const BATTERY_FEATURES: [&str; 4] = ["f_a", "f_b", "f_c", "f_d"];

/// A random full-support joint over |X| × |Y|; every cell is bounded away
/// from zero, so the posterior is strictly positive.
pub fn random_positive_joint(nx: usize, ny: usize, seed: u64) -> Result<JointPmf> {
    if nx == 0 || ny == 0 {
        return Err(Error::EmptyInput("joint dimensions"));
    }
    let mut rng = substream(seed, "positive_joint");
    let cells = nx * ny;
    let mut probs: Vec<f64> = (0..cells).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = probs.iter().sum();
    let floor = 0.1 / cells as f64;
    for p in &mut probs {
        *p = 0.9 * (*p / total) + floor;
    }
    JointPmf::new(
        vec![Alphabet::indexed("x", nx), Alphabet::indexed("y", ny)],
        probs,
    )
}

/// A random row-stochastic channel with strictly positive entries.
pub fn random_channel(n_in: usize, n_out: usize, seed: u64) -> Result<Channel> {
    if n_in == 0 || n_out == 0 {
        return Err(Error::EmptyInput("channel dimensions"));
    }
    let mut rng = substream(seed, "channel");
    let mut rows = vec![0.0; n_in * n_out];
    for x in 0..n_in {
        let row = &mut rows[x * n_out..(x + 1) * n_out];
        for v in row.iter_mut() {
            *v = Exp1.sample(&mut rng);
        }
        let total: f64 = row.iter().sum();
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    Channel::new(
        vec![Alphabet::indexed("x", n_in)],
        Alphabet::indexed("z", n_out),
        rows,
    )
}

/// Uniform two-bit strings labeled by their parity.
pub fn parity_joint() -> JointPmf {
    deterministic_label_joint("parity").unwrap()
}

/// A joint whose label is a deterministic function of the input:
/// `parity` (two bits), `majority` (three bits), or `copy` (one bit).
pub fn deterministic_label_joint(kind: &str) -> Result<JointPmf> {
    let (bits, label): (usize, fn(usize) -> usize) = match kind {
        "parity" => (2, |x| (x.count_ones() % 2) as usize),
        "majority" => (3, |x| usize::from(x.count_ones() >= 2)),
        "copy" => (1, |x| x),
        other => {
            return Err(Error::Domain(format!(
                "unknown label map '{other}', expected parity, majority, or copy"
            )))
        }
    };
    let nx = 1usize << bits;
    let symbols: Vec<String> = (0..nx).map(|x| format!("{x:0bits$b}")).collect();
    let x_axis = Alphabet::new("x", symbols)?;
    let y_axis = Alphabet::indexed("y", 2);
    let mut probs = vec![0.0; nx * 2];
    for x in 0..nx {
        probs[x * 2 + label(x)] = 1.0 / nx as f64;
    }
    JointPmf::new(vec![x_axis, y_axis], probs)
}

/// Number of levels of the battery's task-independent jitter feature `f_d`.
pub const BATTERY_JITTER_LEVELS: u32 = 12;

/// The whack-a-mole battery: three fair coins a, b, c and a many-valued
/// jitter coordinate d drive one task label and three correlated sensitive
/// attributes.
///
/// The task label `y` follows P(y=1 | a,b,c) = 0.22 + 0.36a + 0.14b + 0.12c,
/// so a carries most of the signal while b and c each carry a weak share.
/// `s_near` is a slightly noisy copy of b, `s_and` is b AND c, and `s_far`
/// is a slightly noisy copy of c. Since b and c are conditionally
/// independent given the task, censoring the b side leaves the c side
/// leaking, and vice versa. The jitter feature `f_d` is independent of
/// everything else; an encoder trained on these features spreads each
/// (a,b,c) cell across `BATTERY_JITTER_LEVELS` nearby values, so a
/// separation that censoring has pushed below the jitter spread is no
/// longer recoverable from quantized outputs, while trained separations
/// stand clear of it.
pub fn battery_dataset(n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::EmptyInput("battery rows"));
    }
    let mut rng = substream(seed, "battery");
    let mut cols: Vec<Vec<u32>> = (0..8).map(|_| Vec::with_capacity(n)).collect();
    for _ in 0..n {
        let a = rng.gen_range(0u32..2);
        let b = rng.gen_range(0u32..2);
        let c = rng.gen_range(0u32..2);
        let d = rng.gen_range(0u32..BATTERY_JITTER_LEVELS);
        let p_y = 0.22 + 0.36 * f64::from(a) + 0.14 * f64::from(b) + 0.12 * f64::from(c);
        let y = u32::from(rng.gen::<f64>() < p_y);
        let s_near = b ^ u32::from(rng.gen::<f64>() < 0.05);
        let s_and = b & c;
        let s_far = c ^ u32::from(rng.gen::<f64>() < 0.05);
        for (col, v) in cols.iter_mut().zip([a, b, c, d, y, s_near, s_and, s_far]) {
            col.push(v);
        }
    }
    let names = ["f_a", "f_b", "f_c", "f_d", "y", "s_near", "s_and", "s_far"];
    let binary = vec!["0".to_string(), "1".to_string()];
    let jitter: Vec<String> = (0..BATTERY_JITTER_LEVELS).map(|v| v.to_string()).collect();
    let columns = names
        .iter()
        .zip(cols)
        .map(|(name, codes)| {
            let alphabet = if *name == "f_d" {
                jitter.clone()
            } else {
                binary.clone()
            };
            Column::from_codes(*name, alphabet, codes)
        })
        .collect::<Result<_>>()?;
    Dataset::new(columns)
}
