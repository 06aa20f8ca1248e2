//! `E`-interiors, `E`-closures, `E`-boundaries and semi-action preimages of
//! finite cell sets.
//!
//! Every operation ranges over an explicit finite `region` of candidate cells
//! and is exact within it. [`margin`] computes a region that contains every
//! cell whose `E`-image can meet a given set, which makes the results equal to
//! the corresponding subsets of the whole space.

use crate::error::Result;
use crate::space::{CellSet, CellSpace, Coset, CosetSet};

/// `m ⇀ E`, in the canonical order of `E`.
pub fn semi_image<S: CellSpace>(space: &S, m: &S::Cell, e: &CosetSet<S::Element>) -> Result<Vec<S::Cell>> {
    e.iter().map(|c| space.semi_act(m, c)).collect()
}

/// A region containing `a` and every cell `m` with `(m ⇀ E) ∩ a ≠ ∅`.
pub fn margin<S: CellSpace>(space: &S, a: &CellSet<S::Cell>, e: &CosetSet<S::Element>) -> Result<CellSet<S::Cell>> {
    let radius = e.iter().map(|c| space.coset_radius(c)).max().unwrap_or(0);
    space.margin_region(a, radius)
}

/// `{m ∈ region : m ⇀ E ⊆ A}`.
pub fn interior<S: CellSpace>(
    space: &S,
    a: &CellSet<S::Cell>,
    e: &CosetSet<S::Element>,
    region: &CellSet<S::Cell>,
) -> Result<CellSet<S::Cell>> {
    let mut out = CellSet::new();
    for m in region {
        let mut inside = true;
        for c in e {
            if !a.contains(&space.semi_act(m, c)?) {
                inside = false;
                break;
            }
        }
        if inside {
            out.insert(m.clone());
        }
    }
    Ok(out)
}

/// `{m ∈ region : (m ⇀ E) ∩ A ≠ ∅}`.
pub fn closure<S: CellSpace>(
    space: &S,
    a: &CellSet<S::Cell>,
    e: &CosetSet<S::Element>,
    region: &CellSet<S::Cell>,
) -> Result<CellSet<S::Cell>> {
    let mut out = CellSet::new();
    for m in region {
        for c in e {
            if a.contains(&space.semi_act(m, c)?) {
                out.insert(m.clone());
                break;
            }
        }
    }
    Ok(out)
}

/// `closure(A, E) ∖ interior(A, E)`.
pub fn boundary<S: CellSpace>(
    space: &S,
    a: &CellSet<S::Cell>,
    e: &CosetSet<S::Element>,
    region: &CellSet<S::Cell>,
) -> Result<CellSet<S::Cell>> {
    let inner = interior(space, a, e, region)?;
    let outer = closure(space, a, e, region)?;
    Ok(outer.difference(&inner).cloned().collect())
}

/// `{m ∈ region : m ⇀ c ∈ A}`.
pub fn semi_preimage<S: CellSpace>(
    space: &S,
    a: &CellSet<S::Cell>,
    c: &Coset<S::Element>,
    region: &CellSet<S::Cell>,
) -> Result<CellSet<S::Cell>> {
    let mut out = CellSet::new();
    for m in region {
        if a.contains(&space.semi_act(m, c)?) {
            out.insert(m.clone());
        }
    }
    Ok(out)
}

/// `g ◂ A`.
pub fn translate<S: CellSpace>(space: &S, g: &S::Element, a: &CellSet<S::Cell>) -> Result<CellSet<S::Cell>> {
    a.iter().map(|m| space.act(g, m)).collect()
}

/// `m ⇀ ι(A)`.
pub fn semi_translate<S: CellSpace>(space: &S, m: &S::Cell, a: &CellSet<S::Cell>) -> Result<CellSet<S::Cell>> {
    a.iter().map(|x| space.semi_act(m, &space.iota(x))).collect()
}

/// Interior, closure and boundary computed over the automatic margin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry<C: Ord> {
    pub interior: CellSet<C>,
    pub closure: CellSet<C>,
    pub boundary: CellSet<C>,
}

pub fn geometry<S: CellSpace>(space: &S, a: &CellSet<S::Cell>, e: &CosetSet<S::Element>) -> Result<Geometry<S::Cell>> {
    let region = margin(space, a, e)?;
    let interior = interior(space, a, e, &region)?;
    let closure = closure(space, a, e, &region)?;
    let boundary = closure.difference(&interior).cloned().collect();
    Ok(Geometry {
        interior,
        closure,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Isometry, Lattice, P4m};

    fn moore2(z: &Lattice<2>) -> CosetSet<[i64; 2]> {
        (-1..=1).flat_map(|x| (-1..=1).map(move |y| [x, y])).map(|v| z.coset(&v)).collect()
    }

    #[test]
    fn stabiliser_coset_fixes_everything() {
        let z = Lattice::<2>::new();
        let a = z.cube(0, 4);
        let e: CosetSet<_> = [z.stabiliser_coset()].into_iter().collect();
        let g = geometry(&z, &a, &e).unwrap();
        assert_eq!(g.interior, a);
        assert_eq!(g.closure, a);
        assert!(g.boundary.is_empty());
    }

    #[test]
    fn moore_box_interior_closure_boundary() {
        let z = Lattice::<2>::new();
        let e = moore2(&z);
        for n in 3..8 {
            let a = z.cube(0, n);
            let g = geometry(&z, &a, &e).unwrap();
            assert_eq!(g.interior, z.cube(1, n - 1));
            assert_eq!(g.closure, z.cube(-1, n + 1));
            assert_eq!(g.boundary.len() as i64, 8 * n);
        }
    }

    #[test]
    fn empty_set_has_empty_geometry() {
        let z = Lattice::<2>::new();
        let g = geometry(&z, &CellSet::new(), &moore2(&z)).unwrap();
        assert!(g.interior.is_empty() && g.closure.is_empty() && g.boundary.is_empty());
    }

    #[test]
    fn preimage_under_translation() {
        let z = Lattice::<3>::new();
        let a: CellSet<_> = [[4, 5, 6]].into_iter().collect();
        let c = z.coset(&[1, -2, 3]);
        let region = margin(&z, &a, &[c.clone()].into_iter().collect()).unwrap();
        let pre = semi_preimage(&z, &a, &c, &region).unwrap();
        assert_eq!(pre.into_iter().collect::<Vec<_>>(), vec![[3, 7, 3]]);
    }

    #[test]
    fn p4m_preimage_respects_corollary_bound() {
        let s = P4m::default();
        let a: CellSet<_> = [[2, 2]].into_iter().collect();
        let c = s.coset(&Isometry::translation([1, 1]));
        let region = margin(&s, &a, &[c.clone()].into_iter().collect()).unwrap();
        let pre = semi_preimage(&s, &a, &c, &region).unwrap();
        assert!(pre.len() <= 8);
        assert_eq!(pre.len(), 1);
    }
}
