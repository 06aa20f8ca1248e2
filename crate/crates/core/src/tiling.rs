//! `(E, E′)`-tilings: centres whose `E`-images are pairwise disjoint while
//! their `E′`-images cover the space.
//!
//! A maximal family of pairwise disjoint `E`-images is built greedily by
//! scanning the region in cell order. Maximality is all that covering by
//! `E′ = {g·g′⁻¹G₀ : g ∈ e, g′ ∈ e′, e, e′ ∈ E}` needs.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::amenability::Rational;
use crate::error::{Error, Result};
use crate::geometry;
use crate::space::{CellSet, CellSpace, CosetSet};

#[derive(Debug, Clone)]
pub struct Tiling<S: CellSpace> {
    pub centers: CellSet<S::Cell>,
    pub e: CosetSet<S::Element>,
    pub e_prime: CosetSet<S::Element>,
    pub region: CellSet<S::Cell>,
}

/// `{g·g′⁻¹G₀ : e, e′ ∈ E, g ∈ e, g′ ∈ e′}`.
pub fn derive_e_prime<S: CellSpace>(space: &S, e: &CosetSet<S::Element>) -> CosetSet<S::Element> {
    let elems: Vec<S::Element> = e.iter().flat_map(|c| space.coset_elements(c)).collect();
    let mut out = CosetSet::new();
    for g in &elems {
        for h in &elems {
            out.insert(space.coset(&space.compose(g, &space.inverse(h))));
        }
    }
    out
}

/// Greedy maximal selection: a cell `t` of the region is accepted when
/// `t ⇀ E` lies in the region and is disjoint from every accepted image.
pub fn greedy_tiling<S: CellSpace>(space: &S, region: &CellSet<S::Cell>, e: &CosetSet<S::Element>) -> Result<Tiling<S>> {
    if e.is_empty() {
        return Err(Error::Precondition("tiling needs a non-empty E".into()));
    }
    let mut used = CellSet::new();
    let mut centers = CellSet::new();
    for t in region {
        let image = geometry::semi_image(space, t, e)?;
        if image.iter().all(|m| region.contains(m) && !used.contains(m)) {
            used.extend(image);
            centers.insert(t.clone());
        }
    }
    Ok(Tiling {
        centers,
        e: e.clone(),
        e_prime: derive_e_prime(space, e),
        region: region.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TilingViolation<C> {
    /// Two centres whose `E`-images share `cell`.
    Overlap { cell: C, first: C, second: C },
    /// A cell of the checked interior outside every `E′`-image.
    Uncovered { cell: C },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TilingReport<C> {
    pub disjoint: bool,
    pub covering: bool,
    /// Cells the covering condition was checked on.
    pub checked_cells: usize,
    pub violation: Option<TilingViolation<C>>,
}

impl<C> TilingReport<C> {
    pub fn passed(&self) -> bool {
        self.disjoint && self.covering
    }
}

/// Checks both tiling conditions exactly. Covering is asserted on
/// `interior(region, E′ ∪ E)`, which is `interior(region, E′)` whenever
/// `G₀ ∈ E`.
pub fn verify_tiling<S: CellSpace>(space: &S, tiling: &Tiling<S>) -> Result<TilingReport<S::Cell>> {
    let centers: Vec<&S::Cell> = tiling.centers.iter().collect();
    let images = centers
        .par_iter()
        .map(|t| geometry::semi_image(space, t, &tiling.e))
        .collect::<Result<Vec<_>>>()?;
    let mut owner: BTreeMap<&S::Cell, &S::Cell> = BTreeMap::new();
    let mut overlap = None;
    'outer: for (t, image) in centers.iter().zip(&images) {
        for m in image {
            if let Some(prev) = owner.insert(m, t) {
                if prev != *t {
                    overlap = Some(TilingViolation::Overlap {
                        cell: m.clone(),
                        first: prev.clone(),
                        second: (*t).clone(),
                    });
                    break 'outer;
                }
            }
        }
    }

    let checked = geometry::interior(space, &tiling.region, &tiling.e_prime.union(&tiling.e), &tiling.region)?;
    let covers = centers
        .par_iter()
        .map(|t| geometry::semi_image(space, t, &tiling.e_prime))
        .collect::<Result<Vec<_>>>()?;
    let covered: CellSet<&S::Cell> = covers.iter().flatten().collect();
    let uncovered = checked.iter().find(|m| !covered.contains(m)).cloned();

    let disjoint = overlap.is_none();
    let covering = uncovered.is_none();
    let violation = overlap.or(uncovered.map(|cell| TilingViolation::Uncovered { cell }));
    Ok(TilingReport {
        disjoint,
        covering,
        checked_cells: checked.len(),
        violation,
    })
}

/// `|T ∩ F^{-E}| / |F|`.
pub fn tiling_density<S: CellSpace>(space: &S, tiling: &Tiling<S>, f: &CellSet<S::Cell>) -> Result<Rational> {
    if f.is_empty() {
        return Err(Error::Precondition("density over an empty set".into()));
    }
    Ok(Rational::new(interior_hits(space, tiling, f)? as u64, f.len() as u64))
}

/// `|T ∩ F^{-E}|`.
pub fn interior_hits<S: CellSpace>(space: &S, tiling: &Tiling<S>, f: &CellSet<S::Cell>) -> Result<usize> {
    let inner = geometry::interior(space, f, &tiling.e, &tiling.centers)?;
    Ok(inner.len())
}
