//! Conventional prototype-selection algorithms.
//!
//! All selectors take any labeled collection (original instances or PSASA
//! prototypes) and return the ids of the retained points. Neighbor ranking
//! is by Euclidean distance with ties broken by ascending id, so results do
//! not depend on worker count.
//!
//! | selector | rule |
//! |----------|------|
//! | ENN   | drop points misclassified by their k nearest neighbors |
//! | DROP3 | ENN, then drop points whose associates do no worse without them |
//! | ICF   | ENN, then repeatedly drop points with `|reachable| > |coverage|` |
//! | LSSm  | keep points with usefulness ≥ harmfulness |
//! | LSBo  | LSSm, then greedily keep points whose local set misses the kept set |

mod drop3;
mod enn;
mod icf;
mod local_set;
mod neighbors;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::dataset::Instance;
use crate::error::{Error, Result};

pub use drop3::drop3;
pub use enn::enn;
pub use icf::{coverage_reachable, icf};
pub use local_set::{local_set, lsbo, lssm};
pub use neighbors::NeighborIndex;

pub(crate) use neighbors::{vote, Points};

/// Selector names accepted on the command line; `None` passes input through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectorKind {
    None,
    Enn,
    Drop3,
    Icf,
    Lssm,
    Lsbo,
}

impl SelectorKind {
    pub const ALL: [SelectorKind; 6] = [
        SelectorKind::None,
        SelectorKind::Enn,
        SelectorKind::Drop3,
        SelectorKind::Icf,
        SelectorKind::Lssm,
        SelectorKind::Lsbo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Enn => "enn",
            Self::Drop3 => "drop3",
            Self::Icf => "icf",
            Self::Lssm => "lssm",
            Self::Lsbo => "lsbo",
        }
    }

    /// Display name used in result tables, e.g. `DROP3`.
    pub fn display_name(self) -> &'static str {
        match self {
            Self::None => "None",
            Self::Enn => "ENN",
            Self::Drop3 => "DROP3",
            Self::Icf => "ICF",
            Self::Lssm => "LSSm",
            Self::Lsbo => "LSBo",
        }
    }

    /// Whether the selector's neighborhood size is configurable.
    pub fn uses_k(self) -> bool {
        matches!(self, Self::Enn | Self::Drop3 | Self::Icf)
    }
}

impl fmt::Display for SelectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SelectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownSelector(s.to_string()))
    }
}

/// Outcome of one selector run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    /// Retained ids, ascending.
    pub selected: Vec<usize>,
    pub algorithm: SelectorKind,
    pub params: BTreeMap<String, usize>,
    pub wall_time: Duration,
    /// Degenerate-input notes (e.g. a single class); empty on normal runs.
    pub warnings: Vec<String>,
}

impl SelectionResult {
    pub(crate) fn new(algorithm: SelectorKind, mut selected: Vec<usize>) -> Self {
        selected.sort_unstable();
        Self {
            selected,
            algorithm,
            params: BTreeMap::new(),
            wall_time: Duration::ZERO,
            warnings: Vec::new(),
        }
    }

    pub(crate) fn with_k(mut self, k: usize) -> Self {
        self.params.insert("k".into(), k);
        self
    }

    pub(crate) fn warn(mut self, msg: impl Into<String>) -> Self {
        let msg = msg.into();
        log::warn!("{}: {msg}", self.algorithm.display_name());
        self.warnings.push(msg);
        self
    }

    pub(crate) fn timed(mut self, start: Instant) -> Self {
        self.wall_time = start.elapsed();
        self
    }

    /// Fraction of the input discarded.
    pub fn reduction(&self, input_len: usize) -> f64 {
        if input_len == 0 {
            0.0
        } else {
            (input_len - self.selected.len()) as f64 / input_len as f64
        }
    }
}

/// Runs the selector `kind` on `points`. `k` is ignored by LSSm, LSBo and
/// the pass-through selector.
pub fn select(kind: SelectorKind, points: &[Instance], k: usize) -> Result<SelectionResult> {
    match kind {
        SelectorKind::None => {
            let start = Instant::now();
            Points::new(points)?;
            Ok(SelectionResult::new(kind, points.iter().map(|p| p.id).collect()).timed(start))
        }
        SelectorKind::Enn => enn(points, k),
        SelectorKind::Drop3 => drop3(points, k),
        SelectorKind::Icf => icf(points, k),
        SelectorKind::Lssm => lssm(points),
        SelectorKind::Lsbo => lsbo(points),
    }
}
