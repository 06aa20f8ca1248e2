//! Garden-of-Eden analysis: image pattern sets, witness searches, entropy
//! series, exact oracles and the combined report.

pub mod entropy;
pub mod finite;
pub mod image;
pub mod oracle;
pub mod report;
pub mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::amenability::folner_boxes;
use crate::error::{Error, Result};
use crate::space::{CellSet, CellSpace};

pub use entropy::{entropy_row_checks, entropy_series, tiling_deficit_rows, EntropyMode, EntropyRow, EntropySeries, RowCheck, Subject};
pub use finite::{finite_space_oracle, FiniteVerdict};
pub use image::{image_patterns, iterated_image_patterns, out_neighborhood, ImageSet};
pub use oracle::{pre_injectivity_oracle_1d, surjectivity_oracle_1d};
pub use report::{goe_report, AnalysisReport, Budgets, Verdict};
pub use search::{
    erasable_domain, find_goe_pattern, find_mutually_erasable, verify_goe_pattern, verify_mutually_erasable, verify_witness,
    GoeWitness, SearchOutcome, WindowOutcome, WindowStatus,
};

/// Følner indices to try, in order. Written `a..=b`, `a..b` or `i,j,k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Schedule(Vec<usize>);

impl Schedule {
    /// `lo..=hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        Schedule((lo..=hi).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// The Følner boxes of the schedule, dropping any window equal to the one
    /// before it (finite spaces repeat `M`).
    pub fn windows<S: CellSpace>(&self, space: &S) -> Result<Vec<(usize, CellSet<S::Cell>)>> {
        let mut out: Vec<(usize, CellSet<S::Cell>)> = Vec::with_capacity(self.0.len());
        for &i in &self.0 {
            let f = folner_boxes(space, i)?;
            if out.last().is_some_and(|(_, prev)| *prev == f) {
                continue;
            }
            out.push((i, f));
        }
        Ok(out)
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad window schedule {s:?}; expected a..=b, a..b or a comma list"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let indices: Vec<usize> = if let Some((a, b)) = s.split_once("..=") {
            (num(a)?..=num(b)?).collect()
        } else if let Some((a, b)) = s.split_once("..") {
            (num(a)?..num(b)?).collect()
        } else {
            s.split(',').map(num).collect::<Result<_>>()?
        };
        if indices.is_empty() || indices.contains(&0) {
            return Err(bad());
        }
        Ok(Schedule(indices))
    }
}

impl TryFrom<String> for Schedule {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Schedule> for String {
    fn from(s: Schedule) -> String {
        s.to_string()
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.0;
        if v.len() > 1 && v.windows(2).all(|w| w[1] == w[0] + 1) {
            write!(f, "{}..={}", v[0], v[v.len() - 1])
        } else {
            let parts: Vec<String> = v.iter().map(|i| i.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}
