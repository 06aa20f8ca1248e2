use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{CellSet, CellSpace, Coset, SpaceKind};

/// An element `v ↦ ±v + shift (mod n)` of the dihedral group `D_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DihedralElement {
    pub shift: u32,
    pub flip: bool,
}

/// The vertices of a regular `n`-gon under its symmetry group. The stabiliser
/// of vertex 0 is `{id, v ↦ -v}` and vertex `k` is reached by rotating `k`
/// steps.
#[derive(Debug, Clone)]
pub struct Dihedral {
    n: u32,
    stabiliser: Vec<DihedralElement>,
}

impl Dihedral {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Config(format!("dihedral space needs n >= 3, got {n}")));
        }
        let n = n as u32;
        Ok(Dihedral {
            n,
            stabiliser: vec![
                DihedralElement { shift: 0, flip: false },
                DihedralElement { shift: 0, flip: true },
            ],
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn rotation(&self, k: i64) -> DihedralElement {
        DihedralElement {
            shift: k.rem_euclid(self.n as i64) as u32,
            flip: false,
        }
    }

    fn signed(&self, flip: bool, v: u32) -> u32 {
        if flip {
            (self.n - v) % self.n
        } else {
            v
        }
    }
}

impl CellSpace for Dihedral {
    type Element = DihedralElement;
    type Cell = u32;

    fn kind(&self) -> SpaceKind {
        SpaceKind::Dihedral { n: self.n as usize }
    }

    fn identity(&self) -> DihedralElement {
        DihedralElement { shift: 0, flip: false }
    }

    fn compose(&self, a: &DihedralElement, b: &DihedralElement) -> DihedralElement {
        DihedralElement {
            shift: (a.shift + self.signed(a.flip, b.shift)) % self.n,
            flip: a.flip ^ b.flip,
        }
    }

    fn inverse(&self, a: &DihedralElement) -> DihedralElement {
        if a.flip {
            *a
        } else {
            DihedralElement {
                shift: (self.n - a.shift) % self.n,
                flip: false,
            }
        }
    }

    fn act(&self, g: &DihedralElement, m: &u32) -> Result<u32> {
        if *m >= self.n {
            return Err(Error::RegionOverflow(format!("vertex {m} of a {}-gon", self.n)));
        }
        Ok((self.signed(g.flip, *m) + g.shift) % self.n)
    }

    fn origin(&self) -> u32 {
        0
    }

    fn transporter(&self, m: &u32) -> DihedralElement {
        DihedralElement { shift: *m, flip: false }
    }

    fn stabiliser(&self) -> &[DihedralElement] {
        &self.stabiliser
    }

    fn contains(&self, m: &u32) -> bool {
        *m < self.n
    }

    fn finite_cells(&self) -> Option<Vec<u32>> {
        Some((0..self.n).collect())
    }

    fn margin_region(&self, _cells: &CellSet<u32>, _radius: i64) -> Result<CellSet<u32>> {
        Ok((0..self.n).collect())
    }

    fn coset_radius(&self, _c: &Coset<DihedralElement>) -> i64 {
        0
    }

    fn folner_box(&self, _i: usize) -> Result<CellSet<u32>> {
        Ok((0..self.n).collect())
    }

    fn named_cells(&self, name: &str) -> Option<Vec<u32>> {
        match name {
            "ring" => Some(vec![0, 1, self.n - 1]),
            "all" => Some((0..self.n).collect()),
            _ => None,
        }
    }

    fn sample_element(&self, rng: &mut dyn RngCore, _radius: i64) -> DihedralElement {
        DihedralElement {
            shift: rng.random_range(0..self.n),
            flip: rng.random_bool(0.5),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_axioms_exhaustive() {
        let d = Dihedral::new(5).unwrap();
        let all: Vec<_> = (0..5)
            .flat_map(|s| [false, true].map(|f| DihedralElement { shift: s, flip: f }))
            .collect();
        for a in &all {
            assert_eq!(d.compose(a, &d.inverse(a)), d.identity());
            for b in &all {
                for m in 0..5 {
                    let lhs = d.act(&d.compose(a, b), &m).unwrap();
                    let rhs = d.act(a, &d.act(b, &m).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn stabiliser_fixes_origin() {
        let d = Dihedral::new(6).unwrap();
        for g0 in d.stabiliser() {
            assert_eq!(d.act(g0, &0).unwrap(), 0);
        }
    }

    #[test]
    fn semi_action_is_rotation() {
        let d = Dihedral::new(7).unwrap();
        let c = d.coset(&d.rotation(3));
        assert_eq!(d.semi_act(&5, &c).unwrap(), 1);
        assert_eq!(d.iota(&4), d.coset(&d.rotation(4)));
    }

    #[test]
    fn rejects_degenerate_polygons() {
        assert!(Dihedral::new(2).is_err());
    }
}
