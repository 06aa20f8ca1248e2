//! Cell spaces: transitive left group sets with finite stabilisers and a
//! chosen coordinate system, together with the quotient-set semi-action
//! `m ⇀ gG₀ = g_{m₀,m} · g ◂ m₀` they induce.
//!
//! Cosets of the stabiliser `G₀` are held as canonical representatives: the
//! least element of `{g·g₀ : g₀ ∈ G₀}` under the element's total order.

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::hash::Hash;

use rand::RngCore;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite cell sets are kept sorted in the space's total cell order.
pub type CellSet<C> = BTreeSet<C>;

/// Values that can serve as group elements or cells.
pub trait Point:
    Clone + Eq + Ord + Hash + Debug + Send + Sync + Serialize + DeserializeOwned + 'static
{
}

impl<T> Point for T where
    T: Clone + Eq + Ord + Hash + Debug + Send + Sync + Serialize + DeserializeOwned + 'static
{
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SpaceKind {
    Lattice { dim: usize },
    P4m,
    Dihedral { n: usize },
    FinitePerm { degree: usize },
}

impl SpaceKind {
    pub fn is_finite(&self) -> bool {
        matches!(self, SpaceKind::Dihedral { .. } | SpaceKind::FinitePerm { .. })
    }
}

/// A left homogeneous space with a coordinate system `⟨m₀, (g_{m₀,m})⟩`.
///
/// Implementations must guarantee `act(transporter(m), origin()) == m` and
/// `transporter(origin()) == identity()`. The stabiliser list must be exactly
/// the (finite) stabiliser of the origin.
pub trait CellSpace: Debug + Clone + Send + Sync + 'static {
    type Element: Point;
    type Cell: Point;

    fn kind(&self) -> SpaceKind;

    fn identity(&self) -> Self::Element;

    fn compose(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    fn inverse(&self, a: &Self::Element) -> Self::Element;

    /// Left action `g ◂ m`. Errors with `RegionOverflow` when the result leaves
    /// the declared window of an infinite space.
    fn act(&self, g: &Self::Element, m: &Self::Cell) -> Result<Self::Cell>;

    fn origin(&self) -> Self::Cell;

    /// The coordinate `g_{m₀,m}`.
    fn transporter(&self, m: &Self::Cell) -> Self::Element;

    /// The stabiliser `G₀` of the origin, identity first.
    fn stabiliser(&self) -> &[Self::Element];

    /// Whether `m` is a cell of the declared window.
    fn contains(&self, m: &Self::Cell) -> bool;

    /// Every cell, for finite spaces.
    fn finite_cells(&self) -> Option<Vec<Self::Cell>> {
        None
    }

    /// A superset of every cell within `radius` steps of `cells`, where the
    /// radius of a coset is given by [`CellSpace::coset_radius`]. Any `m` with
    /// `m ⇀ c ∈ cells` lies inside `margin_region(cells, coset_radius(c))`.
    fn margin_region(&self, cells: &CellSet<Self::Cell>, radius: i64) -> Result<CellSet<Self::Cell>>;

    fn coset_radius(&self, c: &Coset<Self::Element>) -> i64;

    /// The `i`-th member of the built-in right Følner sequence.
    fn folner_box(&self, i: usize) -> Result<CellSet<Self::Cell>> {
        let _ = i;
        Err(Error::Unsupported(format!("no built-in Følner sequence for {:?}", self.kind())))
    }

    /// Cells `m` whose cosets `ι(m)` form a named standard neighbourhood
    /// ("moore", "von-neumann" on square lattices, "ring" on polygons).
    fn named_cells(&self, name: &str) -> Option<Vec<Self::Cell>> {
        let _ = name;
        None
    }

    /// The integer coordinate of a cell of `Z`, `None` for every other space.
    fn line_coordinate(&self, m: &Self::Cell) -> Option<i64> {
        let _ = m;
        None
    }

    /// A random element whose translation part (if any) is bounded by `radius`.
    fn sample_element(&self, rng: &mut dyn RngCore, radius: i64) -> Self::Element;

    /// A random cell within `radius` of the origin.
    fn sample_cell(&self, rng: &mut dyn RngCore, radius: i64) -> Self::Cell {
        let g = self.sample_element(rng, radius);
        self.act(&g, &self.origin()).expect("sampled element stays in window")
    }

    // ---------------------------------------------------------------------
    // Provided: cosets and the semi-action.

    /// Canonical coset `gG₀`.
    fn coset(&self, g: &Self::Element) -> Coset<Self::Element> {
        let rep = self
            .stabiliser()
            .iter()
            .map(|g0| self.compose(g, g0))
            .min()
            .expect("stabiliser contains the identity");
        Coset(rep)
    }

    /// The coset `G₀` itself.
    fn stabiliser_coset(&self) -> Coset<Self::Element> {
        self.coset(&self.identity())
    }

    /// All elements of a coset, sorted.
    fn coset_elements(&self, c: &Coset<Self::Element>) -> Vec<Self::Element> {
        let mut v: Vec<_> = self.stabiliser().iter().map(|g0| self.compose(&c.0, g0)).collect();
        v.sort();
        v.dedup();
        v
    }

    fn coset_contains(&self, c: &Coset<Self::Element>, g: &Self::Element) -> bool {
        self.coset(g) == *c
    }

    /// Left multiplication `g · c` on cosets.
    fn coset_mul(&self, g: &Self::Element, c: &Coset<Self::Element>) -> Coset<Self::Element> {
        self.coset(&self.compose(g, &c.0))
    }

    /// The semi-action `m ⇀ c`.
    fn semi_act(&self, m: &Self::Cell, c: &Coset<Self::Element>) -> Result<Self::Cell> {
        let g = self.compose(&self.transporter(m), &c.0);
        self.act(&g, &self.origin())
    }

    /// `ι(m) = G_{m₀,m}`, the coset of the transporter.
    fn iota(&self, m: &Self::Cell) -> Coset<Self::Element> {
        self.coset(&self.transporter(m))
    }

    /// An element `g ∈ c` with `(m ⇀ c) ⇀ 𝔤′ = m ⇀ g·𝔤′` for every `𝔤′`; in
    /// particular `(m ⇀ c) ⇀ g⁻¹G₀ = m`.
    fn undo_representative(&self, m: &Self::Cell, c: &Coset<Self::Element>) -> Result<Self::Element> {
        let target = self.semi_act(m, c)?;
        Ok(self.compose(&self.inverse(&self.transporter(m)), &self.transporter(&target)))
    }
}

/// An element of `G/G₀`, stored as its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Coset<E>(E);

impl<E> Coset<E> {
    pub fn rep(&self) -> &E {
        &self.0
    }

    pub fn into_rep(self) -> E {
        self.0
    }
}

/// A finite set of cosets, iterated in canonical (representative) order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CosetSet<E: Ord>(BTreeSet<Coset<E>>);

impl<E: Ord + Clone> CosetSet<E> {
    pub fn new() -> Self {
        CosetSet(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: &Coset<E>) -> bool {
        self.0.contains(c)
    }

    pub fn insert(&mut self, c: Coset<E>) -> bool {
        self.0.insert(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Coset<E>> + '_ {
        self.0.iter()
    }

    pub fn to_vec(&self) -> Vec<Coset<E>> {
        self.0.iter().cloned().collect()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Self) -> Self {
        CosetSet(self.0.union(&other.0).cloned().collect())
    }

    /// Position of `c` in canonical order.
    pub fn index_of(&self, c: &Coset<E>) -> Option<usize> {
        self.0.iter().position(|x| x == c)
    }

    /// Whether `G₀·E ⊆ E`.
    pub fn is_stabiliser_closed<S: CellSpace<Element = E>>(&self, space: &S) -> bool {
        self.missing_for_closure(space).is_empty()
    }

    /// Cosets `g₀·e` not already in the set.
    pub fn missing_for_closure<S: CellSpace<Element = E>>(&self, space: &S) -> Vec<Coset<E>> {
        let mut missing = BTreeSet::new();
        for c in &self.0 {
            for g0 in space.stabiliser() {
                let d = space.coset_mul(g0, c);
                if !self.0.contains(&d) {
                    missing.insert(d);
                }
            }
        }
        missing.into_iter().collect()
    }

    /// The smallest `G₀`-closed superset.
    pub fn stabiliser_closure<S: CellSpace<Element = E>>(&self, space: &S) -> Self {
        let mut out = self.clone();
        for c in self.missing_for_closure(space) {
            out.insert(c);
        }
        out
    }
}

impl<E: Ord + Clone> Default for CosetSet<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E: Ord> FromIterator<Coset<E>> for CosetSet<E> {
    fn from_iter<I: IntoIterator<Item = Coset<E>>>(iter: I) -> Self {
        CosetSet(iter.into_iter().collect())
    }
}

impl<'a, E: Ord> IntoIterator for &'a CosetSet<E> {
    type Item = &'a Coset<E>;
    type IntoIter = std::collections::btree_set::Iter<'a, Coset<E>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// `ι(A)`: the cosets of the transporters of the given cells.
pub fn cosets_of_cells<S: CellSpace>(space: &S, cells: &[S::Cell]) -> CosetSet<S::Element> {
    cells.iter().map(|m| space.iota(m)).collect()
}
