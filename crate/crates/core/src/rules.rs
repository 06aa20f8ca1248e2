//! Built-in local rules and the automata they define on the built-in spaces.
//!
//! Names accepted by [`builtin`]: `eca:K` (K in 0..=255, over Z), `life`
//! (over Z² or p4m), `majority` (von Neumann on lattices and p4m, the ring
//! `{0, 1, n-1}` on polygons), `identity[:q]` and `zero[:q]` (any space,
//! neighbourhood `{G₀}`), and `ring-symmetric:K` (K in 0..64, polygons).

use crate::automaton::{LocalRule, SemiCellularAutomaton};
use crate::error::{Error, Result};
use crate::space::{cosets_of_cells, CellSpace, CosetSet, SpaceKind};
use crate::spaces::Lattice;

/// `ι` of a named standard cell neighbourhood.
pub fn named_neighbourhood<S: CellSpace>(space: &S, name: &str) -> Result<CosetSet<S::Element>> {
    let cells = space
        .named_cells(name)
        .ok_or_else(|| Error::Unsupported(format!("no {name} neighbourhood on {:?}", space.kind())))?;
    Ok(cosets_of_cells(space, &cells))
}

fn singleton<S: CellSpace>(space: &S) -> CosetSet<S::Element> {
    [space.stabiliser_coset()].into_iter().collect()
}

/// Elementary CA number `k` in Wolfram's numbering: the state vector
/// `(m-1, m, m+1)` read as a binary number selects bit `k`.
pub fn eca(space: Lattice<1>, k: u8) -> Result<SemiCellularAutomaton<Lattice<1>>> {
    eca_on(space, k)
}

fn eca_on<S: CellSpace>(space: S, k: u8) -> Result<SemiCellularAutomaton<S>> {
    if space.kind() != (SpaceKind::Lattice { dim: 1 }) {
        return Err(Error::Unsupported(format!("eca rules need Z, got {:?}", space.kind())));
    }
    let n = named_neighbourhood(&space, "von-neumann")?;
    let table = (0..8).map(|i| (k >> i) & 1).collect();
    let rule = LocalRule::from_table(format!("eca:{k}"), 2, 3, table)?;
    SemiCellularAutomaton::new(space, 2, n, rule, true)
}

/// Conway's Game of Life on the Moore neighbourhood of Z² or p4m.
pub fn life<S: CellSpace>(space: S) -> Result<SemiCellularAutomaton<S>> {
    if !matches!(space.kind(), SpaceKind::Lattice { dim: 2 } | SpaceKind::P4m) {
        return Err(Error::Unsupported(format!("life needs Z² or p4m, got {:?}", space.kind())));
    }
    let n = named_neighbourhood(&space, "moore")?;
    let center = n.index_of(&space.stabiliser_coset()).expect("Moore box contains its centre");
    let rule = LocalRule::from_fn("life", 2, n.len(), |l| {
        let alive: u8 = l.iter().sum::<u8>() - l[center];
        match (l[center], alive) {
            (1, 2) | (_, 3) => 1,
            _ => 0,
        }
    })?;
    SemiCellularAutomaton::new(space, 2, n, rule, true)
}

/// Binary majority vote; ties keep the centre state.
pub fn majority<S: CellSpace>(space: S) -> Result<SemiCellularAutomaton<S>> {
    let name = match space.kind() {
        SpaceKind::Dihedral { .. } => "ring",
        SpaceKind::FinitePerm { .. } => "all",
        _ => "von-neumann",
    };
    let n = named_neighbourhood(&space, name)?;
    let center = n.index_of(&space.stabiliser_coset()).expect("neighbourhood contains G0");
    let size = n.len();
    let rule = LocalRule::from_fn("majority", 2, size, |l| {
        let ones = l.iter().filter(|&&s| s == 1).count();
        match (2 * ones).cmp(&size) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Equal => l[center],
        }
    })?;
    SemiCellularAutomaton::new(space, 2, n, rule, true)
}

/// `δ(ℓ) = ℓ(G₀)`.
pub fn identity<S: CellSpace>(space: S, q: u8) -> Result<SemiCellularAutomaton<S>> {
    let n = singleton(&space);
    let rule = LocalRule::from_fn(format!("identity:{q}"), q, 1, |l| l[0])?;
    SemiCellularAutomaton::new(space, q, n, rule, true)
}

/// The constant rule `δ = 0`.
pub fn zero<S: CellSpace>(space: S, q: u8) -> Result<SemiCellularAutomaton<S>> {
    let n = singleton(&space);
    let rule = LocalRule::from_fn(format!("zero:{q}"), q, 1, |_| 0)?;
    SemiCellularAutomaton::new(space, q, n, rule, true)
}

/// The binary rule on the polygon ring `{0, 1, n-1}` that depends only on the
/// centre state `c` and the number `s` of live neighbours: bit `3c + s` of `k`.
/// These are exactly the rules with `δ(c, a, b) = δ(c, b, a)`.
pub fn ring_symmetric<S: CellSpace>(space: S, k: u8) -> Result<SemiCellularAutomaton<S>> {
    if k >= 64 {
        return Err(Error::Config(format!("ring-symmetric code {k} is not below 64")));
    }
    if !matches!(space.kind(), SpaceKind::Dihedral { .. }) {
        return Err(Error::Unsupported(format!("ring rules need a polygon, got {:?}", space.kind())));
    }
    let n = named_neighbourhood(&space, "ring")?;
    let center = n.index_of(&space.stabiliser_coset()).expect("ring contains G0");
    let rule = LocalRule::from_fn(format!("ring-symmetric:{k}"), 2, 3, |l| {
        let s = l.iter().sum::<u8>() - l[center];
        (k >> (3 * l[center] + s)) & 1
    })?;
    SemiCellularAutomaton::new(space, 2, n, rule, true)
}

/// Ring-symmetric codes of the identity and majority rules.
pub const RING_IDENTITY: u8 = 0b111_000;
pub const RING_MAJORITY: u8 = 0b110_100;

fn parse_suffix<T: std::str::FromStr>(name: &str, suffix: Option<&str>, default: T) -> Result<T> {
    match suffix {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|_| Error::Config(format!("bad parameter {s:?} in builtin rule {name:?}"))),
    }
}

/// Builds a named built-in rule over `space`.
pub fn builtin<S: CellSpace>(space: S, name: &str) -> Result<SemiCellularAutomaton<S>> {
    let (head, suffix) = match name.split_once(':') {
        Some((h, s)) => (h, Some(s)),
        None => (name, None),
    };
    match head {
        "eca" => {
            let k = suffix.ok_or_else(|| Error::Config("eca needs a rule number, as in eca:90".into()))?;
            let k: u8 = parse_suffix(name, Some(k), 0)?;
            eca_on(space, k)
        }
        "life" => life(space),
        "majority" => majority(space),
        "identity" => identity(space, parse_suffix(name, suffix, 2)?),
        "zero" => zero(space, parse_suffix(name, suffix, 2)?),
        "ring-symmetric" => {
            let k = suffix.ok_or_else(|| Error::Config("ring-symmetric needs a code".into()))?;
            ring_symmetric(space, parse_suffix(name, Some(k), 0)?)
        }
        _ => Err(Error::Config(format!("unknown builtin rule {name:?}"))),
    }
}
