use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{CellSet, CellSpace, Coset, SpaceKind};

/// Upper bound on the order of a generated permutation group.
pub const MAX_GROUP_ORDER: usize = 1 << 16;

/// A permutation of `0..degree`, stored as its image list. Composition is
/// `(a·b)(x) = a(b(x))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let distinct: BTreeSet<_> = images.iter().copied().collect();
        if distinct.len() != n || images.iter().any(|&x| x as usize >= n) {
            return Err(Error::Config(format!("{images:?} is not a permutation")));
        }
        Ok(Permutation(images))
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }
}

/// A finite transitive permutation group acting on `0..degree`, with origin
/// `0` and transporters chosen as the lexicographically least group element
/// carrying `0` to each point.
#[derive(Debug, Clone)]
pub struct PermutationSpace {
    degree: usize,
    elements: Vec<Permutation>,
    transporters: Vec<Permutation>,
    stabiliser: Vec<Permutation>,
}

impl PermutationSpace {
    pub fn from_generators(degree: usize, generators: &[Vec<u32>]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Config("permutation space needs at least one point".into()));
        }
        let gens = generators
            .iter()
            .map(|g| {
                if g.len() != degree {
                    return Err(Error::Config(format!("generator {g:?} does not have degree {degree}")));
                }
                Permutation::new(g.clone())
            })
            .collect::<Result<Vec<_>>>()?;

        let id = Permutation::identity(degree);
        let mut seen = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &gens {
                let q = g.compose(&p);
                if seen.insert(q.clone()) {
                    if seen.len() > MAX_GROUP_ORDER {
                        return Err(Error::Config(format!("group order exceeds {MAX_GROUP_ORDER}")));
                    }
                    queue.push_back(q);
                }
            }
        }
        let elements: Vec<Permutation> = seen.into_iter().collect();

        let mut transporters: Vec<Option<Permutation>> = vec![None; degree];
        for g in &elements {
            let slot = &mut transporters[g.apply(0) as usize];
            if slot.is_none() {
                *slot = Some(g.clone());
            }
        }
        let transporters = transporters
            .into_iter()
            .enumerate()
            .map(|(m, t)| t.ok_or_else(|| Error::Config(format!("action is not transitive: point {m} is unreachable"))))
            .collect::<Result<Vec<_>>>()?;
        let stabiliser = elements.iter().filter(|g| g.apply(0) == 0).cloned().collect();

        Ok(PermutationSpace {
            degree,
            elements,
            transporters,
            stabiliser,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }
}

impl CellSpace for PermutationSpace {
    type Element = Permutation;
    type Cell = u32;

    fn kind(&self) -> SpaceKind {
        SpaceKind::FinitePerm { degree: self.degree }
    }

    fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    fn compose(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.compose(b)
    }

    fn inverse(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }

    fn act(&self, g: &Permutation, m: &u32) -> Result<u32> {
        if *m as usize >= self.degree {
            return Err(Error::RegionOverflow(format!("point {m} of degree {}", self.degree)));
        }
        Ok(g.apply(*m))
    }

    fn origin(&self) -> u32 {
        0
    }

    fn transporter(&self, m: &u32) -> Permutation {
        self.transporters[*m as usize].clone()
    }

    fn stabiliser(&self) -> &[Permutation] {
        &self.stabiliser
    }

    fn contains(&self, m: &u32) -> bool {
        (*m as usize) < self.degree
    }

    fn finite_cells(&self) -> Option<Vec<u32>> {
        Some((0..self.degree as u32).collect())
    }

    fn margin_region(&self, _cells: &CellSet<u32>, _radius: i64) -> Result<CellSet<u32>> {
        Ok((0..self.degree as u32).collect())
    }

    fn coset_radius(&self, _c: &Coset<Permutation>) -> i64 {
        0
    }

    fn folner_box(&self, _i: usize) -> Result<CellSet<u32>> {
        Ok((0..self.degree as u32).collect())
    }

    fn named_cells(&self, name: &str) -> Option<Vec<u32>> {
        (name == "all").then(|| (0..self.degree as u32).collect())
    }

    fn sample_element(&self, rng: &mut dyn RngCore, _radius: i64) -> Permutation {
        self.elements[rng.random_range(0..self.elements.len())].clone()
    }
}
