//! Experiment configuration: the versioned JSON file, inline shorthands and
//! command-line overrides.

use std::path::Path;

use anyhow::{bail, Context, Result};
use cellspace_core::analyzer::{Budgets, EntropyMode, Schedule, Subject};
use cellspace_core::config::{RuleDescriptor, SpaceDescriptor};
use cellspace_core::rules;
use cellspace_core::space::{cosets_of_cells, CellSet, CellSpace, CosetSet, SpaceKind};
use cellspace_core::spaces::P4mCoordinates;
use serde::Deserialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    #[serde(deserialize_with = "space_field")]
    pub space: SpaceDescriptor,
    #[serde(default)]
    pub rule: Option<RuleDescriptor>,
    #[serde(default)]
    pub params: Params,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Følner indices of the Garden-of-Eden windows.
    pub windows: Option<Schedule>,
    /// Følner indices of the erasable-pair cores.
    pub cores: Option<Schedule>,
    pub entropy: Option<Schedule>,
    /// Indices for the `folner` and `tile` tables.
    pub folner: Option<Schedule>,
    pub budget_patterns: Option<u64>,
    pub seed: Option<u64>,
    /// Switches entropy to sampled lower bounds with this many sources per row.
    pub samples: Option<u64>,
    /// Reject neighbourhoods that are not closed under the stabiliser.
    pub strict: Option<bool>,
    pub subject: Option<Subject>,
    /// The set `A` for `geometry`.
    pub set: Option<Region>,
    /// `E`: a standard name or a list of cells.
    pub e: Option<Neighbourhood>,
    /// A cell whose coset is used for Følner defects.
    pub coset: Option<Value>,
    /// Candidate region for `tile`.
    pub region: Option<Region>,
    /// State count for the full shift when no rule is given.
    pub q: Option<u8>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Region {
    Cells(Vec<Value>),
    Folner { folner: usize },
    /// `[lo, hi)` in every coordinate.
    Cube { cube: [i64; 2] },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Neighbourhood {
    Name(String),
    Cells(Vec<Value>),
}

/// Overrides from the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub space: Option<String>,
    pub rule: Option<String>,
    pub seed: Option<u64>,
    pub budget_patterns: Option<u64>,
    pub windows: Option<Schedule>,
}

pub fn load(path: Option<&Path>, o: &Overrides) -> Result<ExperimentConfig> {
    let mut config = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let config: ExperimentConfig = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
            if config.schema != SCHEMA {
                bail!("unsupported config schema {}; this build reads schema {SCHEMA}", config.schema);
            }
            Some(config)
        }
        None => None,
    };
    if let Some(s) = &o.space {
        let space = parse_space(s)?;
        match &mut config {
            Some(c) => c.space = space,
            None => {
                config = Some(ExperimentConfig {
                    schema: SCHEMA,
                    space,
                    rule: None,
                    params: Params::default(),
                })
            }
        }
    }
    let mut config = config.context("no space given; pass --config or --space")?;
    if let Some(r) = &o.rule {
        config.rule = Some(parse_rule(r)?);
    }
    let p = &mut config.params;
    if o.seed.is_some() {
        p.seed = o.seed;
    }
    if o.budget_patterns.is_some() {
        p.budget_patterns = o.budget_patterns;
    }
    if o.windows.is_some() {
        p.windows = o.windows.clone();
    }
    Ok(config)
}

/// `z1`, `z2`, `z3`, `p4m`, `p4m:twisted`, `dihedral:N`, or a JSON descriptor.
pub fn parse_space(s: &str) -> Result<SpaceDescriptor> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).context("parsing --space JSON");
    }
    Ok(match s {
        "z1" | "z" => SpaceDescriptor::zd(1),
        "z2" => SpaceDescriptor::zd(2),
        "z3" => SpaceDescriptor::zd(3),
        "p4m" => SpaceDescriptor::P4m {
            coordinates: P4mCoordinates::Translation,
            limit: None,
        },
        "p4m:twisted" => SpaceDescriptor::P4m {
            coordinates: P4mCoordinates::Twisted,
            limit: None,
        },
        _ => match s.strip_prefix("dihedral:") {
            Some(n) => SpaceDescriptor::Dihedral {
                n: n.parse().with_context(|| format!("bad polygon size in {s:?}"))?,
            },
            None => bail!("unknown space {s:?}; expected z1, z2, z3, p4m, p4m:twisted, dihedral:N or JSON"),
        },
    })
}

/// Config files may use the same shorthands as `--space`.
fn space_field<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<SpaceDescriptor, D::Error> {
    match Value::deserialize(d)? {
        Value::String(s) => parse_space(&s).map_err(serde::de::Error::custom),
        v => serde_json::from_value(v).map_err(serde::de::Error::custom),
    }
}

/// A built-in rule name or a JSON rule descriptor.
pub fn parse_rule(s: &str) -> Result<RuleDescriptor> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).context("parsing --rule JSON");
    }
    Ok(RuleDescriptor::builtin(s))
}

impl Params {
    pub fn budget(&self) -> u64 {
        self.budget_patterns.unwrap_or(cellspace_core::analyzer::report::DEFAULT_PATTERN_BUDGET)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn entropy_mode(&self) -> EntropyMode {
        match self.samples {
            Some(samples) => EntropyMode::SampledLowerBound {
                samples,
                seed: self.seed(),
            },
            None => EntropyMode::Exact,
        }
    }

    pub fn budgets(&self) -> Budgets {
        let d = Budgets::default();
        Budgets {
            patterns: self.budget(),
            windows: self.windows.clone().unwrap_or(d.windows),
            cores: self.cores.clone().unwrap_or(d.cores),
            entropy: self.entropy.clone().unwrap_or(d.entropy),
            entropy_mode: self.entropy_mode(),
        }
    }
}

pub fn cell<S: CellSpace>(space: &S, v: &Value) -> Result<S::Cell> {
    let c: S::Cell = serde_json::from_value(v.clone()).with_context(|| format!("cell {v} does not fit {:?}", space.kind()))?;
    if !space.contains(&c) {
        bail!("cell {v} is outside the space window");
    }
    Ok(c)
}

fn coordinate_dims(kind: SpaceKind) -> Option<usize> {
    match kind {
        SpaceKind::Lattice { dim } => Some(dim),
        SpaceKind::P4m => Some(2),
        _ => None,
    }
}

impl Region {
    pub fn cells<S: CellSpace>(&self, space: &S) -> Result<CellSet<S::Cell>> {
        match self {
            Region::Cells(v) => v.iter().map(|c| cell(space, c)).collect(),
            Region::Folner { folner } => Ok(space.folner_box(*folner)?),
            Region::Cube { cube: [lo, hi] } => {
                let mut points: Vec<Vec<i64>> = vec![vec![]];
                let dims = coordinate_dims(space.kind());
                for _ in 0..dims.unwrap_or(1) {
                    points = points
                        .into_iter()
                        .flat_map(|p| {
                            (*lo..*hi).map(move |x| {
                                let mut q = p.clone();
                                q.push(x);
                                q
                            })
                        })
                        .collect();
                }
                points
                    .into_iter()
                    .map(|p| match dims {
                        Some(_) => cell(space, &Value::from(p)),
                        None => cell(space, &Value::from(p[0])),
                    })
                    .collect()
            }
        }
    }
}

impl Neighbourhood {
    /// `g0` (or `stabiliser`) names `{G₀}`; other names are the space's
    /// standard neighbourhoods.
    pub fn cosets<S: CellSpace>(&self, space: &S) -> Result<CosetSet<S::Element>> {
        match self {
            Neighbourhood::Name(n) if n == "g0" || n == "stabiliser" => Ok([space.stabiliser_coset()].into_iter().collect()),
            Neighbourhood::Name(n) => Ok(rules::named_neighbourhood(space, n)?),
            Neighbourhood::Cells(v) => {
                let cells = v.iter().map(|c| cell(space, c)).collect::<Result<Vec<_>>>()?;
                Ok(cosets_of_cells(space, &cells))
            }
        }
    }
}

/// The first standard neighbourhood the space has: Moore box, polygon ring
/// or the whole finite space.
pub fn default_e<S: CellSpace>(space: &S) -> Result<CosetSet<S::Element>> {
    for name in ["moore", "ring", "all"] {
        if let Ok(e) = rules::named_neighbourhood(space, name) {
            return Ok(e);
        }
    }
    bail!("no standard neighbourhood on {:?}; give params.e", space.kind())
}

pub fn e_of<S: CellSpace>(space: &S, p: &Params) -> Result<CosetSet<S::Element>> {
    match &p.e {
        Some(e) => e.cosets(space),
        None => default_e(space),
    }
}
