//! Syntactic complexity from bracketed constituency trees.

mod tree;
mod units;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use tree::{parse_bracketed, ParseTree};
pub use units::{count_tree, count_units, ProductionCounts};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("unbalanced brackets near byte {offset}")]
    Unbalanced { offset: usize },
    #[error("empty node at byte {offset}")]
    EmptyNode { offset: usize },
    #[error("token `{token}` outside any bracket at byte {offset}")]
    StrayToken { offset: usize, token: String },
    #[error("no words to measure")]
    NoWords,
}

/// The 14 ratios; `None` marks a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynMetricVector(pub [Option<f64>; 14]);

impl SynMetricVector {
    pub const NAMES: [&'static str; 14] = [
        "MLC", "MLS", "MLT", "C/S", "C/T", "CT/T", "DC/C", "DC/T", "CP/C", "CP/T", "T/S", "CN/C",
        "CN/T", "VP/T",
    ];

    pub fn get(&self, name: &str) -> Option<f64> {
        Self::NAMES
            .iter()
            .position(|n| *n == name)
            .and_then(|i| self.0[i])
    }

    pub fn values(&self) -> &[Option<f64>; 14] {
        &self.0
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// MLC=W/C, MLS=W/S, MLT=W/T, then the clause, subordination,
/// coordination and particular-structure ratios.
pub fn syntax_metrics(pc: &ProductionCounts) -> Result<SynMetricVector, SyntaxError> {
    if pc.w == 0 {
        return Err(SyntaxError::NoWords);
    }
    Ok(SynMetricVector([
        ratio(pc.w, pc.c),
        ratio(pc.w, pc.s),
        ratio(pc.w, pc.t),
        ratio(pc.c, pc.s),
        ratio(pc.c, pc.t),
        ratio(pc.ct, pc.t),
        ratio(pc.dc, pc.c),
        ratio(pc.dc, pc.t),
        ratio(pc.cp, pc.c),
        ratio(pc.cp, pc.t),
        ratio(pc.t, pc.s),
        ratio(pc.cn, pc.c),
        ratio(pc.cn, pc.t),
        ratio(pc.vp, pc.t),
    ]))
}
