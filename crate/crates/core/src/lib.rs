//! Exact leakage measures, least-privilege certification, and empirical
//! privacy audits for categorical data.
//!
//! The crate is organized around three layers:
//!
//! * exact computation on finite distributions ([`dist`], [`measures`],
//!   [`shattering`]),
//! * certification against leakage budgets and closed-form bounds
//!   ([`certify`], [`frontier`]),
//! * empirical audits of learned or tabular representations
//!   ([`empirical`], [`replab`]).
//!
//! Everything downstream of [`dist`] assumes validated inputs; constructors
//! are the only place mass is checked.

pub mod certify;
pub mod dist;
pub mod empirical;
pub mod error;
pub mod fmtnum;
pub mod frontier;
pub mod manifest;
pub mod measures;
pub mod render;
pub mod replab;
pub mod rng;
pub mod shattering;
pub mod synth;

pub use dist::{Alphabet, Axis, Channel, JointPmf, Pmf, PosteriorReport};
pub use error::{Error, Result};
