use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::space::{CellSet, CellSpace, Coset, SpaceKind};

/// Default bound on coordinates of the infinite lattices.
pub const DEFAULT_LIMIT: i64 = 1 << 20;

/// `Z^D` acting on itself by translation. The stabiliser is trivial, so every
/// coset is a single translation and `m ⇀ v = m + v`.
///
/// Coordinates are bounded by `limit` in absolute value; anything beyond
/// signals region overflow.
#[derive(Debug, Clone)]
pub struct Lattice<const D: usize> {
    limit: i64,
    stabiliser: Vec<[i64; D]>,
}

impl<const D: usize> Lattice<D> {
    pub fn new() -> Self {
        Self::with_limit(DEFAULT_LIMIT)
    }

    pub fn with_limit(limit: i64) -> Self {
        assert!(D >= 1, "lattice dimension must be positive");
        Lattice {
            limit,
            stabiliser: vec![[0; D]],
        }
    }

    pub fn limit(&self) -> i64 {
        self.limit
    }

    fn check(&self, v: [i64; D]) -> Result<[i64; D]> {
        if v.iter().all(|x| x.abs() <= self.limit) {
            Ok(v)
        } else {
            Err(Error::RegionOverflow(format!("{v:?}")))
        }
    }

    /// The cells of the box `[lo, hi)^D`.
    pub fn cube(&self, lo: i64, hi: i64) -> CellSet<[i64; D]> {
        let mut out = CellSet::new();
        if hi <= lo {
            return out;
        }
        let mut cur = [lo; D];
        loop {
            out.insert(cur);
            let mut k = D;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < hi {
                    break;
                }
                cur[k] = lo;
            }
        }
    }
}

impl<const D: usize> Default for Lattice<D> {
    fn default() -> Self {
        Self::new()
    }
}

// Serde implements its traits for arrays of each fixed length only, so the
// space impl is stamped out per supported dimension.
macro_rules! lattice_space {
    ($($d:literal),*) => {$(
        impl CellSpace for Lattice<$d> {
            type Element = [i64; $d];
            type Cell = [i64; $d];

            fn kind(&self) -> SpaceKind {
                SpaceKind::Lattice { dim: $d }
            }

            fn identity(&self) -> [i64; $d] {
                [0; $d]
            }

            fn compose(&self, a: &[i64; $d], b: &[i64; $d]) -> [i64; $d] {
                std::array::from_fn(|k| a[k] + b[k])
            }

            fn inverse(&self, a: &[i64; $d]) -> [i64; $d] {
                std::array::from_fn(|k| -a[k])
            }

            fn act(&self, g: &[i64; $d], m: &[i64; $d]) -> Result<[i64; $d]> {
                self.check(self.compose(g, m))
            }

            fn origin(&self) -> [i64; $d] {
                [0; $d]
            }

            fn transporter(&self, m: &[i64; $d]) -> [i64; $d] {
                *m
            }

            fn stabiliser(&self) -> &[[i64; $d]] {
                &self.stabiliser
            }

            fn contains(&self, m: &[i64; $d]) -> bool {
                m.iter().all(|x| x.abs() <= self.limit)
            }

            fn margin_region(&self, cells: &CellSet<[i64; $d]>, radius: i64) -> Result<CellSet<[i64; $d]>> {
                box_margin(cells, radius, |v| self.check(v))
            }

            fn coset_radius(&self, c: &Coset<[i64; $d]>) -> i64 {
                c.rep().iter().map(|x| x.abs()).max().unwrap_or(0)
            }

            /// The corner-anchored box `[0, i)^$d`.
            fn folner_box(&self, i: usize) -> Result<CellSet<[i64; $d]>> {
                if i == 0 {
                    return Err(Error::Precondition("Følner index must be positive".into()));
                }
                let out = self.cube(0, i as i64);
                for c in [[0; $d], [i as i64 - 1; $d]] {
                    self.check(c)?;
                }
                Ok(out)
            }

            fn named_cells(&self, name: &str) -> Option<Vec<[i64; $d]>> {
                match name {
                    "moore" => Some(self.cube(-1, 2).into_iter().collect()),
                    "von-neumann" => Some(von_neumann::<$d>()),
                    _ => None,
                }
            }

            fn line_coordinate(&self, m: &[i64; $d]) -> Option<i64> {
                ($d == 1).then(|| m[0])
            }

            fn sample_element(&self, rng: &mut dyn RngCore, radius: i64) -> [i64; $d] {
                std::array::from_fn(|_| rng.random_range(-radius..=radius))
            }
        }
    )*};
}

lattice_space!(1, 2, 3);

pub(crate) fn von_neumann<const D: usize>() -> Vec<[i64; D]> {
    let mut cells = vec![[0; D]];
    for k in 0..D {
        for step in [-1, 1] {
            let mut v = [0; D];
            v[k] = step;
            cells.push(v);
        }
    }
    cells.sort();
    cells
}

/// Bounding box of `cells` grown by `radius` in every coordinate.
pub(crate) fn box_margin<const D: usize>(
    cells: &CellSet<[i64; D]>,
    radius: i64,
    check: impl Fn([i64; D]) -> Result<[i64; D]>,
) -> Result<CellSet<[i64; D]>> {
    let mut out = CellSet::new();
    let Some(first) = cells.first() else {
        return Ok(out);
    };
    let mut lo = *first;
    let mut hi = *first;
    for c in cells {
        for k in 0..D {
            lo[k] = lo[k].min(c[k]);
            hi[k] = hi[k].max(c[k]);
        }
    }
    for k in 0..D {
        lo[k] -= radius;
        hi[k] += radius;
    }
    check(lo)?;
    check(hi)?;
    let mut cur = lo;
    loop {
        out.insert(cur);
        let mut k = D;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] <= hi[k] {
                break;
            }
            cur[k] = lo[k];
        }
    }
}
