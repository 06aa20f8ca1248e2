//! JSON descriptors for spaces and rules, and dispatch from a runtime space
//! descriptor to code generic over [`CellSpace`].

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::automaton::{LocalRule, SemiCellularAutomaton};
use crate::error::{Error, Result};
use crate::rules;
use crate::space::{cosets_of_cells, CellSpace};
use crate::spaces::{Dihedral, Lattice, P4m, P4mCoordinates, PermutationSpace};

/// `{"kind": "zd" | "p4m" | "dihedral" | "finite-perm", ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceDescriptor {
    Zd {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit: Option<i64>,
    },
    P4m {
        #[serde(default)]
        coordinates: P4mCoordinates,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit: Option<i64>,
    },
    Dihedral {
        n: usize,
    },
    FinitePerm {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
}

/// Code generic over the concrete space type.
pub trait SpaceVisitor {
    type Output;

    fn visit<S: CellSpace>(self, space: S) -> Result<Self::Output>;
}

impl SpaceDescriptor {
    pub fn zd(dim: usize) -> Self {
        SpaceDescriptor::Zd { dim, limit: None }
    }

    pub fn build<V: SpaceVisitor>(&self, visitor: V) -> Result<V::Output> {
        match *self {
            SpaceDescriptor::Zd { dim, limit } => match dim {
                1 => visitor.visit(limit.map_or_else(Lattice::<1>::new, Lattice::with_limit)),
                2 => visitor.visit(limit.map_or_else(Lattice::<2>::new, Lattice::with_limit)),
                3 => visitor.visit(limit.map_or_else(Lattice::<3>::new, Lattice::with_limit)),
                _ => Err(Error::Unsupported(format!("Z^{dim}: dimensions 1 to 3 are built in"))),
            },
            SpaceDescriptor::P4m { coordinates, limit } => visitor.visit(match limit {
                Some(l) => P4m::with_limit(coordinates, l),
                None => P4m::new(coordinates),
            }),
            SpaceDescriptor::Dihedral { n } => visitor.visit(Dihedral::new(n)?),
            SpaceDescriptor::FinitePerm { degree, ref generators } => {
                visitor.visit(PermutationSpace::from_generators(degree, generators)?)
            }
        }
    }
}

/// A rule by built-in name, or an explicit table over a cell neighbourhood.
///
/// Table rules list neighbourhood cells `m` (meaning the cosets `ι(m)`) and a
/// table of `q^|N|` values indexed by local configurations, read as base-`q`
/// numbers with the first coset in canonical order as the leading digit.
/// Canonical order is the order of coset representatives; listing the cells
/// in a different order is allowed and does not change the indexing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RuleDescriptor {
    Name(String),
    Builtin {
        builtin: String,
    },
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        q: u8,
        neighborhood: Vec<Value>,
        table: Vec<u8>,
    },
}

impl RuleDescriptor {
    pub fn builtin(name: impl Into<String>) -> Self {
        RuleDescriptor::Builtin { builtin: name.into() }
    }

    pub fn label(&self) -> String {
        match self {
            RuleDescriptor::Name(n) | RuleDescriptor::Builtin { builtin: n } => n.clone(),
            RuleDescriptor::Table { name, .. } => name.clone().unwrap_or_else(|| "table".into()),
        }
    }

    /// `strict` rejects neighbourhoods that are not closed under `G₀`.
    pub fn build<S: CellSpace>(&self, space: S, strict: bool) -> Result<SemiCellularAutomaton<S>> {
        match self {
            RuleDescriptor::Name(n) | RuleDescriptor::Builtin { builtin: n } => rules::builtin(space, n),
            RuleDescriptor::Table {
                name,
                q,
                neighborhood,
                table,
            } => {
                let cells = neighborhood
                    .iter()
                    .map(|v| {
                        serde_json::from_value::<S::Cell>(v.clone())
                            .map_err(|e| Error::Config(format!("neighbourhood cell {v}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if let Some(bad) = cells.iter().find(|c| !space.contains(c)) {
                    return Err(Error::Config(format!("neighbourhood cell {bad:?} is not a cell of the space")));
                }
                let n = cosets_of_cells(&space, &cells);
                if n.len() != cells.len() {
                    return Err(Error::Config("neighbourhood cells must be distinct".into()));
                }
                let rule = LocalRule::from_table(name.clone().unwrap_or_else(|| "table".into()), *q, n.len(), table.clone())?;
                SemiCellularAutomaton::new(space, *q, n, rule, strict)
            }
        }
    }
}
