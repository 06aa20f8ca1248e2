//! Semi-cellular automata over cell spaces and their windowed dynamics.
//!
//! Full configurations never exist here: every application of the global
//! transition function is the restriction `Δ_A⁻` that maps a pattern on `A`
//! to the pattern on the `N`-interior of `A` it determines.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_enumerable, Error, Result};
use crate::geometry;
use crate::space::{CellSet, CellSpace, Coset, CosetSet};

// ---------------------------------------------------------------------------
// Patterns

/// A finite partial configuration: cells in canonical order with one state
/// each. Two patterns on the same domain compare lexicographically by states.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPattern<C>", bound(deserialize = "C: Ord + Clone + Deserialize<'de>"))]
pub struct Pattern<C> {
    cells: Vec<C>,
    states: Vec<u8>,
}

#[derive(Deserialize)]
struct RawPattern<C> {
    cells: Vec<C>,
    states: Vec<u8>,
}

impl<C: Ord + Clone> TryFrom<RawPattern<C>> for Pattern<C> {
    type Error = Error;

    fn try_from(raw: RawPattern<C>) -> Result<Self> {
        Pattern::new(raw.cells, raw.states)
    }
}

impl<C: Ord + Clone> Pattern<C> {
    /// Cells must be strictly increasing and match `states` in length.
    pub fn new(cells: Vec<C>, states: Vec<u8>) -> Result<Self> {
        if cells.len() != states.len() {
            return Err(Error::Precondition(format!(
                "pattern has {} cells but {} states",
                cells.len(),
                states.len()
            )));
        }
        if cells.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("pattern cells must be sorted and distinct".into()));
        }
        Ok(Pattern { cells, states })
    }

    pub fn empty() -> Self {
        Pattern {
            cells: Vec::new(),
            states: Vec::new(),
        }
    }

    pub fn from_map(map: BTreeMap<C, u8>) -> Self {
        let (cells, states) = map.into_iter().unzip();
        Pattern { cells, states }
    }

    pub fn from_fn(domain: &CellSet<C>, mut f: impl FnMut(&C) -> u8) -> Self {
        let cells: Vec<C> = domain.iter().cloned().collect();
        let states = cells.iter().map(&mut f).collect();
        Pattern { cells, states }
    }

    /// The pattern on `domain` whose states are the base-`q` digits of
    /// `index`, first cell most significant.
    pub fn from_index(domain: &CellSet<C>, q: u8, index: u64) -> Self {
        let cells: Vec<C> = domain.iter().cloned().collect();
        let mut states = vec![0u8; cells.len()];
        decode_index(index, q, &mut states);
        Pattern { cells, states }
    }

    pub fn constant(domain: &CellSet<C>, state: u8) -> Self {
        Self::from_fn(domain, |_| state)
    }

    pub fn cells(&self) -> &[C] {
        &self.cells
    }

    pub fn states(&self) -> &[u8] {
        &self.states
    }

    pub fn domain(&self) -> CellSet<C> {
        self.cells.iter().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, m: &C) -> Option<u8> {
        self.cells.binary_search(m).ok().map(|i| self.states[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&C, u8)> + '_ {
        self.cells.iter().zip(self.states.iter().copied())
    }

    pub fn to_map(&self) -> BTreeMap<C, u8> {
        self.iter().map(|(c, s)| (c.clone(), s)).collect()
    }

    /// Restriction to a subset of the domain.
    pub fn restrict(&self, sub: &CellSet<C>) -> Result<Self> {
        let mut cells = Vec::with_capacity(sub.len());
        let mut states = Vec::with_capacity(sub.len());
        for m in sub {
            let s = self
                .get(m)
                .ok_or_else(|| Error::Precondition("restriction to a cell outside the domain".into()))?;
            cells.push(m.clone());
            states.push(s);
        }
        Ok(Pattern { cells, states })
    }

    /// Whether the two patterns agree on every cell of `cells`.
    pub fn agrees_on(&self, other: &Self, cells: &CellSet<C>) -> bool {
        cells.iter().all(|m| self.get(m).is_some() && self.get(m) == other.get(m))
    }

    /// Base-`q` index of the state vector (lexicographic rank).
    pub fn index(&self, q: u8) -> u64 {
        encode_index(&self.states, q)
    }

    /// Canonical byte encoding: the domain's JSON followed by the states.
    pub fn encoding(&self) -> Vec<u8>
    where
        C: Serialize,
    {
        let mut out = serde_json::to_vec(&self.cells).expect("cells serialise");
        out.extend_from_slice(&self.states);
        out
    }
}

pub(crate) fn encode_index(states: &[u8], q: u8) -> u64 {
    states.iter().fold(0u64, |acc, &s| acc * q as u64 + s as u64)
}

pub(crate) fn decode_index(mut index: u64, q: u8, out: &mut [u8]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % q as u64) as u8;
        index /= q as u64;
    }
}

// ---------------------------------------------------------------------------
// Local rules

/// A local transition function `Q^N → Q` stored as a table indexed by the
/// base-`q` encoding of the local configuration, the first coset of `N` in
/// canonical order being the most significant digit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRule {
    name: String,
    q: u8,
    arity: usize,
    table: Vec<u8>,
}

impl LocalRule {
    pub fn from_table(name: impl Into<String>, q: u8, arity: usize, table: Vec<u8>) -> Result<Self> {
        if q == 0 {
            return Err(Error::EmptyStates);
        }
        let expected = ensure_enumerable("local rule table", q, arity, 1 << 26)?;
        if table.len() as u64 != expected {
            return Err(Error::Config(format!(
                "rule table has {} entries, expected {q}^{arity} = {expected}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v >= q) {
            return Err(Error::Config(format!("rule table value {bad} is not a state below {q}")));
        }
        Ok(LocalRule {
            name: name.into(),
            q,
            arity,
            table,
        })
    }

    pub fn from_fn(name: impl Into<String>, q: u8, arity: usize, f: impl Fn(&[u8]) -> u8) -> Result<Self> {
        if q == 0 {
            return Err(Error::EmptyStates);
        }
        let size = ensure_enumerable("local rule table", q, arity, 1 << 26)?;
        let mut local = vec![0u8; arity];
        let table = (0..size)
            .map(|i| {
                decode_index(i, q, &mut local);
                f(&local)
            })
            .collect();
        Self::from_table(name, q, arity, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, local: &[u8]) -> u8 {
        self.table[encode_index(local, self.q) as usize]
    }

    #[inline]
    pub(crate) fn eval_index(&self, index: usize) -> u8 {
        self.table[index]
    }
}

// ---------------------------------------------------------------------------
// Automata

/// `⟨R, Q, N, δ⟩` with `Q = {0, …, q-1}` and `G₀·N ⊆ N`.
#[derive(Debug, Clone)]
pub struct SemiCellularAutomaton<S: CellSpace> {
    space: S,
    q: u8,
    neighbourhood: CosetSet<S::Element>,
    offsets: Vec<Coset<S::Element>>,
    rule: LocalRule,
    added: Vec<Coset<S::Element>>,
}

/// Outcome of the exhaustive •-invariance check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BulletInvariance<E> {
    pub invariant: bool,
    pub checks: u64,
    /// `(g₀, ℓ)` with `δ(g₀ • ℓ) ≠ δ(ℓ)`.
    pub witness: Option<(E, Vec<u8>)>,
}

impl<S: CellSpace> SemiCellularAutomaton<S> {
    /// Builds the automaton. If `N` is not closed under the stabiliser, a
    /// `strict` build fails; otherwise the missing cosets are added and the
    /// rule is lifted to ignore them ([`Self::added_cosets`] lists them).
    pub fn new(space: S, q: u8, neighbourhood: CosetSet<S::Element>, rule: LocalRule, strict: bool) -> Result<Self> {
        if q == 0 {
            return Err(Error::EmptyStates);
        }
        if rule.q() != q {
            return Err(Error::Config(format!("rule is over {} states, automaton over {q}", rule.q())));
        }
        if rule.arity() != neighbourhood.len() {
            return Err(Error::Config(format!(
                "rule arity {} does not match neighbourhood size {}",
                rule.arity(),
                neighbourhood.len()
            )));
        }
        let missing = neighbourhood.missing_for_closure(&space);
        let (neighbourhood, rule) = if missing.is_empty() {
            (neighbourhood, rule)
        } else if strict {
            return Err(Error::NotStabiliserClosed { missing: missing.len() });
        } else {
            let closed = neighbourhood.stabiliser_closure(&space);
            let positions: Vec<usize> = neighbourhood
                .iter()
                .map(|c| closed.index_of(c).expect("closure contains original"))
                .collect();
            let lifted = LocalRule::from_fn(format!("{}+closure", rule.name()), q, closed.len(), |local| {
                let projected: Vec<u8> = positions.iter().map(|&i| local[i]).collect();
                rule.eval(&projected)
            })?;
            (closed, lifted)
        };
        let offsets = neighbourhood.to_vec();
        Ok(SemiCellularAutomaton {
            space,
            q,
            neighbourhood,
            offsets,
            rule,
            added: missing,
        })
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn neighbourhood(&self) -> &CosetSet<S::Element> {
        &self.neighbourhood
    }

    pub fn rule(&self) -> &LocalRule {
        &self.rule
    }

    pub fn added_cosets(&self) -> &[Coset<S::Element>] {
        &self.added
    }

    /// Evaluates the local rule at `m` against any state lookup.
    pub fn eval_at(&self, m: &S::Cell, mut state: impl FnMut(&S::Cell) -> Option<u8>) -> Result<u8> {
        let mut local = Vec::with_capacity(self.offsets.len());
        for n in &self.offsets {
            let cell = self.space.semi_act(m, n)?;
            local.push(state(&cell).ok_or_else(|| Error::RegionOverflow(format!("{cell:?} outside pattern")))?);
        }
        Ok(self.rule.eval(&local))
    }

    /// Exhaustively checks `δ(g₀ • ℓ) = δ(ℓ)` for every `g₀ ∈ G₀` and every
    /// local configuration, where `(g₀ • ℓ)(n) = ℓ(g₀⁻¹·n)`.
    pub fn check_bullet_invariance(&self, budget: u64) -> Result<BulletInvariance<S::Element>> {
        let size = ensure_enumerable("local configurations", self.q, self.offsets.len(), budget)?;
        let stabiliser = self.space.stabiliser();
        let mut checks = 0u64;
        let mut local = vec![0u8; self.offsets.len()];
        let mut moved = vec![0u8; self.offsets.len()];
        for g0 in stabiliser {
            let inv = self.space.inverse(g0);
            let perm: Vec<usize> = self
                .offsets
                .iter()
                .map(|n| {
                    let image = self.space.coset_mul(&inv, n);
                    self.neighbourhood.index_of(&image).expect("neighbourhood is G0-closed")
                })
                .collect();
            for idx in 0..size {
                decode_index(idx, self.q, &mut local);
                for (slot, &j) in moved.iter_mut().zip(&perm) {
                    *slot = local[j];
                }
                checks += 1;
                if self.rule.eval(&moved) != self.rule.eval_index(idx as usize) {
                    return Ok(BulletInvariance {
                        invariant: false,
                        checks,
                        witness: Some((g0.clone(), local.clone())),
                    });
                }
            }
        }
        Ok(BulletInvariance {
            invariant: true,
            checks,
            witness: None,
        })
    }

    /// The index plan for `Δ_A⁻` on `domain`.
    pub fn plan(&self, domain: &CellSet<S::Cell>) -> Result<StepPlan<S::Cell>> {
        let region = geometry::margin(&self.space, domain, &self.neighbourhood)?;
        let outputs = geometry::interior(&self.space, domain, &self.neighbourhood, &region)?;
        let cells: Vec<S::Cell> = domain.iter().cloned().collect();
        let mut taps = Vec::with_capacity(outputs.len() * self.offsets.len());
        for m in &outputs {
            for n in &self.offsets {
                let cell = self.space.semi_act(m, n)?;
                let pos = cells.binary_search(&cell).expect("interior cell sees only the domain");
                taps.push(pos as u32);
            }
        }
        Ok(StepPlan {
            domain: cells,
            outputs: outputs.into_iter().collect(),
            arity: self.offsets.len(),
            taps,
        })
    }

    /// `Δ_A⁻(p)`: the pattern on `interior(A, N)` with
    /// `out(m) = δ(n ↦ p(m ⇀ n))`.
    pub fn restricted_step(&self, p: &Pattern<S::Cell>) -> Result<Pattern<S::Cell>> {
        self.check_states(p)?;
        let plan = self.plan(&p.domain())?;
        let mut out = vec![0u8; plan.outputs.len()];
        plan.apply(&self.rule, p.states(), &mut out);
        Ok(Pattern {
            cells: plan.outputs,
            states: out,
        })
    }

    pub(crate) fn check_states(&self, p: &Pattern<S::Cell>) -> Result<()> {
        match p.states().iter().find(|&&s| s >= self.q) {
            Some(s) => Err(Error::Precondition(format!("state {s} is not below {}", self.q))),
            None => Ok(()),
        }
    }
}

/// Precomputed neighbour positions for `Δ_A⁻` on a fixed domain.
#[derive(Debug, Clone)]
pub struct StepPlan<C> {
    pub domain: Vec<C>,
    pub outputs: Vec<C>,
    arity: usize,
    taps: Vec<u32>,
}

impl<C> StepPlan<C> {
    /// Writes the image states (one per output cell) of `states` on the domain.
    #[inline]
    pub fn apply(&self, rule: &LocalRule, states: &[u8], out: &mut [u8]) {
        let q = rule.q() as usize;
        for (slot, taps) in out.iter_mut().zip(self.taps.chunks_exact(self.arity.max(1))) {
            let mut idx = 0usize;
            for &t in taps {
                idx = idx * q + states[t as usize] as usize;
            }
            *slot = rule.eval_index(idx);
        }
        if self.arity == 0 {
            for slot in out.iter_mut() {
                *slot = rule.eval_index(0);
            }
        }
    }

    pub fn positions_of(&self, cells: &CellSet<C>) -> Option<Vec<usize>>
    where
        C: Ord,
    {
        cells.iter().map(|c| self.outputs.binary_search(c).ok()).collect()
    }
}

// ---------------------------------------------------------------------------
// Pattern actions and occurrences

/// `g ▸ p`: the pattern on `g ◂ dom(p)` with `(g ▸ p)(m) = p(g⁻¹ ◂ m)`.
pub fn induced_left_action<S: CellSpace>(space: &S, g: &S::Element, p: &Pattern<S::Cell>) -> Result<Pattern<S::Cell>> {
    let mut map = BTreeMap::new();
    for (m, s) in p.iter() {
        map.insert(space.act(g, m)?, s);
    }
    Ok(Pattern::from_map(map))
}

/// `m ⇁ p`: the pattern on `m ⇀ ι(dom(p))` with `(m ⇀ ι(a)) ↦ p(a)`.
pub fn induced_right_semi_action<S: CellSpace>(space: &S, m: &S::Cell, p: &Pattern<S::Cell>) -> Result<Pattern<S::Cell>> {
    let mut map = BTreeMap::new();
    for (a, s) in p.iter() {
        map.insert(space.semi_act(m, &space.iota(a))?, s);
    }
    Ok(Pattern::from_map(map))
}

/// Whether `p` occurs at `m` in the window configuration `c`. Errors with
/// `RegionOverflow` when `m ⇀ ι(dom(p))` is not inside `dom(c)`.
pub fn occurs<S: CellSpace>(space: &S, p: &Pattern<S::Cell>, m: &S::Cell, c: &Pattern<S::Cell>) -> Result<bool> {
    let moved = induced_right_semi_action(space, m, p)?;
    let mut agree = true;
    for (cell, s) in moved.iter() {
        match c.get(cell) {
            None => return Err(Error::RegionOverflow(format!("{cell:?} outside the configuration window"))),
            Some(v) if v != s => agree = false,
            Some(_) => {}
        }
    }
    Ok(agree)
}

/// `N′ = {g⁻¹·n′ : n, n′ ∈ N, g ∈ n}`.
pub fn derive_n_prime<S: CellSpace>(space: &S, n: &CosetSet<S::Element>) -> CosetSet<S::Element> {
    let mut out = CosetSet::new();
    for c in n {
        for g in space.coset_elements(c) {
            let inv = space.inverse(&g);
            for d in n {
                out.insert(space.coset_mul(&inv, d));
            }
        }
    }
    debug_assert!(out.is_stabiliser_closed(space));
    out
}

/// Replaces the occurrence of `p` at every site in `sites` by `p_new`.
///
/// `p` and `p_new` live on `closure(core, N′)`, agree outside `core` and have
/// equal restricted steps; the images `s ⇀ ι(dom p)` of the sites must be
/// pairwise disjoint and `p` must occur at each site. Any failed condition is
/// reported as a `Precondition` error naming it.
pub fn replace_occurrences<S: CellSpace>(
    ca: &SemiCellularAutomaton<S>,
    c: &Pattern<S::Cell>,
    sites: &CellSet<S::Cell>,
    core: &CellSet<S::Cell>,
    p: &Pattern<S::Cell>,
    p_new: &Pattern<S::Cell>,
) -> Result<Pattern<S::Cell>> {
    let space = ca.space();
    let n_prime = derive_n_prime(space, ca.neighbourhood());
    let region = geometry::margin(space, core, &n_prime)?;
    let expected = geometry::closure(space, core, &n_prime, &region)?;
    if p.domain() != expected || p_new.domain() != expected {
        return Err(Error::Precondition("patterns are not defined on closure(A, N′)".into()));
    }
    let outside: CellSet<S::Cell> = expected.difference(core).cloned().collect();
    if !p.agrees_on(p_new, &outside) {
        return Err(Error::Precondition("patterns differ outside A".into()));
    }
    if ca.restricted_step(p)? != ca.restricted_step(p_new)? {
        return Err(Error::Precondition("restricted steps of the patterns differ".into()));
    }
    let mut taken = CellSet::new();
    let mut replacements = Vec::with_capacity(sites.len());
    for s in sites {
        let moved = induced_right_semi_action(space, s, p_new)?;
        for cell in moved.cells() {
            if !taken.insert(cell.clone()) {
                return Err(Error::Precondition(format!("site images overlap at {cell:?}")));
            }
        }
        match occurs(space, p, s, c) {
            Ok(true) => {}
            Ok(false) => return Err(Error::Precondition(format!("pattern does not occur at site {s:?}"))),
            Err(Error::RegionOverflow(_)) => {
                return Err(Error::Precondition(format!("site {s:?} is not inside the configuration window")))
            }
            Err(e) => return Err(e),
        }
        replacements.push(moved);
    }
    let mut map = c.to_map();
    for moved in replacements {
        for (cell, s) in moved.iter() {
            map.insert(cell.clone(), s);
        }
    }
    Ok(Pattern::from_map(map))
}

/// Visits every state vector of length `len` over `q` states, in parallel
/// chunks of consecutive indices. Each chunk gets its own scratch value from
/// `init`; `f` receives the scratch, the index and the state vector.
pub(crate) fn for_each_pattern<T, I, F>(q: u8, len: usize, budget: u64, what: &str, init: I, f: F) -> Result<()>
where
    I: Fn() -> T + Sync,
    F: Fn(&mut T, u64, &[u8]) + Sync,
{
    let total = ensure_enumerable(what, q, len, budget)?;
    let chunk = 1u64 << 12;
    let chunks = total.div_ceil(chunk);
    (0..chunks).into_par_iter().for_each(|k| {
        let mut scratch = init();
        let mut states = vec![0u8; len];
        let lo = k * chunk;
        let hi = (lo + chunk).min(total);
        decode_index(lo, q, &mut states);
        for idx in lo..hi {
            f(&mut scratch, idx, &states);
            increment(&mut states, q);
        }
    });
    Ok(())
}

#[inline]
pub(crate) fn increment(states: &mut [u8], q: u8) {
    for s in states.iter_mut().rev() {
        *s += 1;
        if *s < q {
            return;
        }
        *s = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules;
    use crate::spaces::{Isometry, Lattice, P4m, PointOp};

    fn line(values: &[(i64, u8)]) -> Pattern<[i64; 1]> {
        Pattern::from_map(values.iter().map(|&(x, s)| ([x], s)).collect())
    }

    #[test]
    fn pattern_rejects_unsorted_cells() {
        assert!(Pattern::new(vec![[1i64], [0]], vec![0, 0]).is_err());
        assert!(Pattern::new(vec![[0i64]], vec![0, 1]).is_err());
    }

    #[test]
    fn pattern_index_round_trip() {
        let domain: CellSet<[i64; 1]> = (0..5).map(|x| [x]).collect();
        for idx in [0u64, 1, 7, 242] {
            assert_eq!(Pattern::from_index(&domain, 3, idx).index(3), idx);
        }
    }

    #[test]
    fn rule_zero_kills_everything() {
        let ca = rules::eca(Lattice::<1>::new(), 0).unwrap();
        let p = line(&[(0, 1), (1, 1), (2, 0), (3, 1)]);
        let out = ca.restricted_step(&p).unwrap();
        assert_eq!(out.cells(), &[[1], [2]]);
        assert!(out.states().iter().all(|&s| s == 0));
    }

    #[test]
    fn rule_90_is_xor_of_neighbours() {
        let ca = rules::eca(Lattice::<1>::new(), 90).unwrap();
        let out = ca.restricted_step(&line(&[(0, 1), (1, 0), (2, 0)])).unwrap();
        assert_eq!(out, line(&[(1, 1)]));
    }

    #[test]
    fn life_block_persists() {
        let ca = rules::life(P4m::default()).unwrap();
        let z = Lattice::<2>::new();
        let window = z.cube(0, 6);
        let block: CellSet<[i64; 2]> = [[2, 2], [2, 3], [3, 2], [3, 3]].into_iter().collect();
        let p = Pattern::from_fn(&window, |c| block.contains(c) as u8);
        let out = ca.restricted_step(&p).unwrap();
        assert_eq!(out.domain(), z.cube(1, 5));
        assert_eq!(out, p.restrict(&z.cube(1, 5)).unwrap());
    }

    #[test]
    fn life_is_bullet_invariant() {
        let ca = rules::life(P4m::default()).unwrap();
        let r = ca.check_bullet_invariance(1 << 20).unwrap();
        assert!(r.invariant);
        assert_eq!(r.checks, 4096);
    }

    #[test]
    fn east_sensitive_rule_is_not_invariant() {
        let s = P4m::default();
        let moore = rules::named_neighbourhood(&s, "moore").unwrap();
        let east = moore.index_of(&s.coset(&Isometry::translation([1, 0]))).unwrap();
        let rule = LocalRule::from_fn("east", 2, moore.len(), |l| l[east]).unwrap();
        let ca = SemiCellularAutomaton::new(s, 2, moore, rule, true).unwrap();
        let r = ca.check_bullet_invariance(1 << 20).unwrap();
        assert!(!r.invariant);
        let (g0, local) = r.witness.unwrap();
        assert_ne!(g0, Isometry::point(PointOp::IDENTITY));
        assert_eq!(local.len(), 9);
    }

    #[test]
    fn strict_construction_rejects_open_neighbourhood() {
        let s = P4m::default();
        let east: CosetSet<_> = [s.coset(&Isometry::translation([1, 0]))].into_iter().collect();
        let rule = LocalRule::from_fn("copy-east", 2, 1, |l| l[0]).unwrap();
        let err = SemiCellularAutomaton::new(s.clone(), 2, east.clone(), rule.clone(), true).unwrap_err();
        assert_eq!(err, Error::NotStabiliserClosed { missing: 3 });
        let ca = SemiCellularAutomaton::new(s, 2, east, rule, false).unwrap();
        assert_eq!(ca.neighbourhood().len(), 4);
        assert_eq!(ca.added_cosets().len(), 3);
    }

    #[test]
    fn empty_state_set_is_rejected() {
        let z = Lattice::<1>::new();
        let n: CosetSet<_> = [z.stabiliser_coset()].into_iter().collect();
        let rule = LocalRule::from_fn("id", 2, 1, |l| l[0]).unwrap();
        assert_eq!(SemiCellularAutomaton::new(z, 0, n, rule, true).unwrap_err(), Error::EmptyStates);
    }

    #[test]
    fn left_action_moves_domain() {
        let s = P4m::default();
        let p = Pattern::from_map([([0, 0], 1u8)].into_iter().collect());
        let moved = induced_left_action(&s, &Isometry::translation([1, 0]), &p).unwrap();
        assert_eq!(moved.cells(), &[[1, 0]]);
        let l_shape = Pattern::from_map([([0, 0], 1u8), ([1, 0], 2), ([0, 1], 3)].into_iter().collect());
        let r = induced_left_action(&s, &Isometry::point(PointOp::ROT90), &l_shape).unwrap();
        assert_eq!(r.to_map(), [([0, 0], 1u8), ([0, 1], 2), ([-1, 0], 3)].into_iter().collect());
    }

    #[test]
    fn right_semi_action_shifts_line_patterns() {
        let z = Lattice::<1>::new();
        let p = line(&[(0, 1), (1, 0)]);
        assert_eq!(induced_right_semi_action(&z, &[5], &p).unwrap(), line(&[(5, 1), (6, 0)]));
        assert_eq!(induced_right_semi_action(&z, &[0], &p).unwrap(), p);
    }

    #[test]
    fn occurrence_checks() {
        let z = Lattice::<1>::new();
        let c = line(&[(0, 0), (1, 0), (2, 0)]);
        assert!(occurs(&z, &Pattern::empty(), &[1], &c).unwrap());
        assert!(!occurs(&z, &line(&[(0, 1)]), &[0], &c).unwrap());
        assert!(occurs(&z, &line(&[(0, 0), (1, 0)]), &[1], &c).unwrap());
        assert!(matches!(occurs(&z, &line(&[(0, 0)]), &[7], &c), Err(Error::RegionOverflow(_))));
    }

    #[test]
    fn n_prime_of_intervals() {
        let z = Lattice::<1>::new();
        let n: CosetSet<_> = (-1..=1).map(|k| z.coset(&[k])).collect();
        let expected: CosetSet<_> = (-2..=2).map(|k| z.coset(&[k])).collect();
        assert_eq!(derive_n_prime(&z, &n), expected);
        let g0: CosetSet<_> = [z.stabiliser_coset()].into_iter().collect();
        assert_eq!(derive_n_prime(&z, &g0), g0);
    }

    #[test]
    fn trivial_replacements_leave_configuration_alone() {
        let ca = rules::eca(Lattice::<1>::new(), 0).unwrap();
        let z = ca.space().clone();
        let core: CellSet<_> = [[0i64]].into_iter().collect();
        let dom = z.cube(-2, 3);
        let p = Pattern::constant(&dom, 0);
        let c = Pattern::constant(&z.cube(-10, 11), 0);
        let sites: CellSet<_> = [[0i64], [5]].into_iter().collect();
        assert_eq!(replace_occurrences(&ca, &c, &sites, &core, &p, &p).unwrap(), c);
        assert_eq!(replace_occurrences(&ca, &c, &CellSet::new(), &core, &p, &p).unwrap(), c);
    }

    #[test]
    fn replacement_preconditions_are_named() {
        let ca = rules::eca(Lattice::<1>::new(), 0).unwrap();
        let z = ca.space().clone();
        let core: CellSet<_> = [[0i64]].into_iter().collect();
        let dom = z.cube(-2, 3);
        let p = Pattern::constant(&dom, 0);
        let mut far = p.to_map();
        far.insert([2], 1);
        let far = Pattern::from_map(far);
        let c = Pattern::constant(&z.cube(-10, 11), 0);
        let sites: CellSet<_> = [[0i64]].into_iter().collect();
        let err = replace_occurrences(&ca, &c, &sites, &core, &p, &far).unwrap_err();
        assert_eq!(err, Error::Precondition("patterns differ outside A".into()));

        let overlapping: CellSet<_> = [[0i64], [2]].into_iter().collect();
        let err = replace_occurrences(&ca, &c, &overlapping, &core, &p, &p).unwrap_err();
        assert!(matches!(err, Error::Precondition(msg) if msg.contains("overlap")));
    }
}
