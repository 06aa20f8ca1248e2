//! The wallpaper group p4m = Z² ⋊ D4 acting on the square lattice.
//!
//! An element `(t, r)` maps `x ↦ R·x + t`. The stabiliser of the origin is the
//! point group D4, so cosets are determined by their translation part and the
//! canonical representative of `(t, r)G₀` is `(t, identity)`.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{CellSet, CellSpace, Coset, SpaceKind};
use crate::spaces::lattice::{box_margin, DEFAULT_LIMIT};

/// One of the eight symmetries of the square, `0` being the identity,
/// `1..=3` the rotations by 90°, 180°, 270° and `4..=7` the reflections
/// `reflect_x ∘ rotation^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointOp(u8);

const MATRICES: [[[i64; 2]; 2]; 8] = [
    [[1, 0], [0, 1]],
    [[0, -1], [1, 0]],
    [[-1, 0], [0, -1]],
    [[0, 1], [-1, 0]],
    [[1, 0], [0, -1]],
    [[0, -1], [-1, 0]],
    [[-1, 0], [0, 1]],
    [[0, 1], [1, 0]],
];

impl PointOp {
    pub const IDENTITY: PointOp = PointOp(0);
    pub const ROT90: PointOp = PointOp(1);
    pub const ROT180: PointOp = PointOp(2);
    pub const ROT270: PointOp = PointOp(3);
    pub const REFLECT_X: PointOp = PointOp(4);

    pub fn all() -> impl Iterator<Item = PointOp> {
        (0..8).map(PointOp)
    }

    pub fn rotation(quarter_turns: i64) -> PointOp {
        PointOp(quarter_turns.rem_euclid(4) as u8)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn matrix(self) -> [[i64; 2]; 2] {
        MATRICES[self.0 as usize]
    }

    pub fn apply(self, v: [i64; 2]) -> [i64; 2] {
        let m = self.matrix();
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    fn from_matrix(m: [[i64; 2]; 2]) -> PointOp {
        let k = MATRICES.iter().position(|x| *x == m).expect("D4 is closed");
        PointOp(k as u8)
    }

    pub fn then(self, other: PointOp) -> PointOp {
        // `self.then(other)` is `self ∘ other` as matrices.
        let a = self.matrix();
        let b = other.matrix();
        let mut c = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        PointOp::from_matrix(c)
    }

    pub fn inverse(self) -> PointOp {
        let m = self.matrix();
        // Orthogonal: inverse is the transpose.
        PointOp::from_matrix([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }
}

/// An element `x ↦ op·x + shift` of p4m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Isometry {
    pub shift: [i64; 2],
    pub op: PointOp,
}

impl Isometry {
    pub fn translation(shift: [i64; 2]) -> Self {
        Isometry {
            shift,
            op: PointOp::IDENTITY,
        }
    }

    pub fn point(op: PointOp) -> Self {
        Isometry { shift: [0, 0], op }
    }
}

/// Which transporters `g_{m₀,m}` the space uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum P4mCoordinates {
    /// `g_{m₀,m}` is the pure translation by `m`.
    #[default]
    Translation,
    /// `g_{m₀,m}` translates by `m` after rotating by `(x + y) mod 4` quarter
    /// turns; exercises the semi-action away from the translation formulas.
    Twisted,
}

#[derive(Debug, Clone)]
pub struct P4m {
    coordinates: P4mCoordinates,
    limit: i64,
    stabiliser: Vec<Isometry>,
}

impl P4m {
    pub fn new(coordinates: P4mCoordinates) -> Self {
        Self::with_limit(coordinates, DEFAULT_LIMIT)
    }

    pub fn with_limit(coordinates: P4mCoordinates, limit: i64) -> Self {
        P4m {
            coordinates,
            limit,
            stabiliser: PointOp::all().map(Isometry::point).collect(),
        }
    }

    pub fn coordinates(&self) -> P4mCoordinates {
        self.coordinates
    }

    fn check(&self, v: [i64; 2]) -> Result<[i64; 2]> {
        if v[0].abs() <= self.limit && v[1].abs() <= self.limit {
            Ok(v)
        } else {
            Err(Error::RegionOverflow(format!("{v:?}")))
        }
    }
}

impl Default for P4m {
    fn default() -> Self {
        P4m::new(P4mCoordinates::Translation)
    }
}

impl CellSpace for P4m {
    type Element = Isometry;
    type Cell = [i64; 2];

    fn kind(&self) -> SpaceKind {
        SpaceKind::P4m
    }

    fn identity(&self) -> Isometry {
        Isometry::point(PointOp::IDENTITY)
    }

    fn compose(&self, a: &Isometry, b: &Isometry) -> Isometry {
        let r = a.op.apply(b.shift);
        Isometry {
            shift: [a.shift[0] + r[0], a.shift[1] + r[1]],
            op: a.op.then(b.op),
        }
    }

    fn inverse(&self, a: &Isometry) -> Isometry {
        let inv = a.op.inverse();
        let t = inv.apply(a.shift);
        Isometry {
            shift: [-t[0], -t[1]],
            op: inv,
        }
    }

    fn act(&self, g: &Isometry, m: &[i64; 2]) -> Result<[i64; 2]> {
        let r = g.op.apply(*m);
        self.check([r[0] + g.shift[0], r[1] + g.shift[1]])
    }

    fn origin(&self) -> [i64; 2] {
        [0, 0]
    }

    fn transporter(&self, m: &[i64; 2]) -> Isometry {
        match self.coordinates {
            P4mCoordinates::Translation => Isometry::translation(*m),
            P4mCoordinates::Twisted => Isometry {
                shift: *m,
                op: PointOp::rotation(m[0] + m[1]),
            },
        }
    }

    fn stabiliser(&self) -> &[Isometry] {
        &self.stabiliser
    }

    fn contains(&self, m: &[i64; 2]) -> bool {
        m[0].abs() <= self.limit && m[1].abs() <= self.limit
    }

    fn margin_region(&self, cells: &CellSet<[i64; 2]>, radius: i64) -> Result<CellSet<[i64; 2]>> {
        box_margin(cells, radius, |v| self.check(v))
    }

    // D4 preserves the sup norm, so `|m ⇀ (t, r) - m|∞ = |t|∞` under either
    // coordinate choice.
    fn coset_radius(&self, c: &Coset<Isometry>) -> i64 {
        let t = c.rep().shift;
        t[0].abs().max(t[1].abs())
    }

    fn folner_box(&self, i: usize) -> Result<CellSet<[i64; 2]>> {
        if i == 0 {
            return Err(Error::Precondition("Følner index must be positive".into()));
        }
        let n = i as i64;
        self.check([n - 1, n - 1])?;
        Ok((0..n).flat_map(|x| (0..n).map(move |y| [x, y])).collect())
    }

    fn named_cells(&self, name: &str) -> Option<Vec<[i64; 2]>> {
        match name {
            "moore" => Some((-1..=1).flat_map(|x| (-1..=1).map(move |y| [x, y])).collect()),
            "von-neumann" => Some(super::lattice::von_neumann::<2>()),
            _ => None,
        }
    }

    fn sample_element(&self, rng: &mut dyn RngCore, radius: i64) -> Isometry {
        Isometry {
            shift: [rng.random_range(-radius..=radius), rng.random_range(-radius..=radius)],
            op: PointOp(rng.random_range(0..8)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_group_is_a_group() {
        for a in PointOp::all() {
            assert_eq!(a.then(a.inverse()), PointOp::IDENTITY);
            for b in PointOp::all() {
                for c in PointOp::all() {
                    assert_eq!(a.then(b).then(c), a.then(b.then(c)));
                }
            }
        }
        assert_eq!(PointOp::ROT90.then(PointOp::ROT90), PointOp::ROT180);
    }

    #[test]
    fn rotation_acts_on_cells() {
        let s = P4m::default();
        assert_eq!(s.act(&Isometry::point(PointOp::ROT90), &[1, 0]).unwrap(), [0, 1]);
    }

    #[test]
    fn canonical_coset_drops_point_part() {
        let s = P4m::default();
        let g = Isometry {
            shift: [3, -2],
            op: PointOp::ROT270,
        };
        assert_eq!(s.coset(&g).rep(), &Isometry::translation([3, -2]));
    }

    #[test]
    fn coset_multiplication_rotates_translation() {
        let s = P4m::default();
        let east = s.coset(&Isometry::translation([1, 0]));
        let north = s.coset(&Isometry::translation([0, 1]));
        assert_eq!(s.coset_mul(&Isometry::point(PointOp::ROT90), &east), north);
    }

    #[test]
    fn translation_coordinates_give_translation_semi_action() {
        let s = P4m::default();
        let east = s.coset(&Isometry::translation([1, 0]));
        assert_eq!(s.semi_act(&[4, 7], &east).unwrap(), [5, 7]);
    }

    #[test]
    fn twisted_transporters_reach_their_cell() {
        let s = P4m::new(P4mCoordinates::Twisted);
        for x in -3..=3 {
            for y in -3..=3 {
                let m = [x, y];
                assert_eq!(s.act(&s.transporter(&m), &s.origin()).unwrap(), m);
            }
        }
        assert_eq!(s.transporter(&[0, 0]), s.identity());
        // (1,0) is rotated by a quarter turn: east of (1,0) is north of it.
        let east = s.coset(&Isometry::translation([1, 0]));
        assert_eq!(s.semi_act(&[1, 0], &east).unwrap(), [1, 1]);
    }
}
