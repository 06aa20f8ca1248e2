//! Exact image pattern sets `π_F(Δ^k(Q^M))` by enumeration of source patterns.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::automaton::{decode_index, encode_index, for_each_pattern, Pattern, SemiCellularAutomaton};
use crate::error::{ensure_enumerable, Result};
use crate::geometry;
use crate::space::{CellSet, CellSpace, CosetSet};

/// `⋃_{m ∈ F} m ⇀ N`, the least `A` with `F ⊆ interior(A, N)`.
pub fn out_neighborhood<S: CellSpace>(space: &S, f: &CellSet<S::Cell>, n: &CosetSet<S::Element>) -> Result<CellSet<S::Cell>> {
    let mut out = CellSet::new();
    for m in f {
        out.extend(geometry::semi_image(space, m, n)?);
    }
    Ok(out)
}

/// Positions in `source` read by each target cell, one row of `arity`
/// positions per target.
#[derive(Debug, Clone)]
pub(crate) struct Taps<C> {
    pub source: Vec<C>,
    pub target: Vec<C>,
    arity: usize,
    taps: Vec<u32>,
}

impl<C: Ord + Clone> Taps<C> {
    pub fn new<S: CellSpace<Cell = C>>(ca: &SemiCellularAutomaton<S>, target: &CellSet<C>) -> Result<Self> {
        let space = ca.space();
        let source: Vec<C> = out_neighborhood(space, target, ca.neighbourhood())?.into_iter().collect();
        let mut taps = Vec::with_capacity(target.len() * ca.neighbourhood().len());
        for m in target {
            for n in ca.neighbourhood() {
                let cell = space.semi_act(m, n)?;
                taps.push(source.binary_search(&cell).expect("out-neighbourhood covers every tap") as u32);
            }
        }
        Ok(Taps {
            source,
            target: target.iter().cloned().collect(),
            arity: ca.neighbourhood().len(),
            taps,
        })
    }

    #[inline]
    pub fn apply<S: CellSpace>(&self, ca: &SemiCellularAutomaton<S>, states: &[u8], out: &mut [u8]) {
        let q = ca.q() as usize;
        let table = ca.rule().table();
        if self.arity == 0 {
            out.fill(table[0]);
            return;
        }
        for (slot, row) in out.iter_mut().zip(self.taps.chunks_exact(self.arity)) {
            let mut idx = 0usize;
            for &t in row {
                idx = idx * q + states[t as usize] as usize;
            }
            *slot = table[idx];
        }
    }
}

/// A chain of windows computing `Δ^k` restricted to `F`: the first entry maps
/// the outermost source to the next window, the last one produces `F`.
#[derive(Debug, Clone)]
pub(crate) struct Chain<C> {
    stages: Vec<Taps<C>>,
}

impl<C: Ord + Clone> Chain<C> {
    pub fn new<S: CellSpace<Cell = C>>(ca: &SemiCellularAutomaton<S>, f: &CellSet<C>, depth: usize) -> Result<Self> {
        let mut stages = Vec::with_capacity(depth);
        let mut target = f.clone();
        for _ in 0..depth {
            let taps = Taps::new(ca, &target)?;
            target = taps.source.iter().cloned().collect();
            stages.push(taps);
        }
        stages.reverse();
        Ok(Chain { stages })
    }

    pub fn source(&self) -> &[C] {
        &self.stages[0].source
    }

    /// One buffer per stage, for [`Chain::run`].
    pub fn scratch(&self) -> Vec<Vec<u8>> {
        self.stages.iter().map(|s| vec![0u8; s.target.len()]).collect()
    }

    /// `Δ^k` of `states` (on the source) restricted to the target.
    pub fn run<'a, S: CellSpace>(&self, ca: &SemiCellularAutomaton<S>, states: &[u8], scratch: &'a mut [Vec<u8>]) -> &'a [u8] {
        for (k, stage) in self.stages.iter().enumerate() {
            let (done, rest) = scratch.split_at_mut(k);
            let input = if k == 0 { states } else { &done[k - 1][..] };
            stage.apply(ca, input, &mut rest[0]);
        }
        &scratch[self.stages.len() - 1]
    }
}

/// The set of patterns on `F` that occur in an image, as a bitset over
/// base-`q` pattern indices (which are in lexicographic order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageSet<C> {
    pub window: Vec<C>,
    pub source: Vec<C>,
    q: u8,
    words: Vec<u64>,
    total: u64,
}

impl<C: Ord + Clone> ImageSet<C> {
    pub fn q(&self) -> u8 {
        self.q
    }

    /// `|Q|^|F|`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.count() == self.total
    }

    pub fn contains_index(&self, index: u64) -> bool {
        index < self.total && self.words[(index / 64) as usize] >> (index % 64) & 1 == 1
    }

    pub fn contains(&self, p: &Pattern<C>) -> bool {
        p.cells() == self.window.as_slice() && self.contains_index(p.index(self.q))
    }

    /// The lexicographically least pattern on `F` not in the image.
    pub fn first_missing(&self) -> Option<Pattern<C>> {
        let index = (0..self.total).find(|&i| !self.contains_index(i))?;
        Some(self.pattern(index))
    }

    fn pattern(&self, index: u64) -> Pattern<C> {
        let mut states = vec![0u8; self.window.len()];
        decode_index(index, self.q, &mut states);
        Pattern::new(self.window.clone(), states).expect("window is sorted")
    }

    /// Every image pattern in lexicographic order.
    pub fn patterns(&self) -> Vec<Pattern<C>> {
        (0..self.total).filter(|&i| self.contains_index(i)).map(|i| self.pattern(i)).collect()
    }
}

/// `{Δ_A⁻(p)|_F : p ∈ Q^A}` with `A = out_neighborhood(F, N)`.
pub fn image_patterns<S: CellSpace>(ca: &SemiCellularAutomaton<S>, f: &CellSet<S::Cell>, budget: u64) -> Result<ImageSet<S::Cell>> {
    iterated_image_patterns(ca, f, 1, budget)
}

/// `π_F(Δ^depth(Q^M))`; `depth = 0` is the full shift.
pub fn iterated_image_patterns<S: CellSpace>(
    ca: &SemiCellularAutomaton<S>,
    f: &CellSet<S::Cell>,
    depth: usize,
    budget: u64,
) -> Result<ImageSet<S::Cell>> {
    let q = ca.q();
    let total = ensure_enumerable("window patterns", q, f.len(), budget)?;
    let window: Vec<S::Cell> = f.iter().cloned().collect();
    if depth == 0 {
        let mut words = vec![u64::MAX; total.div_ceil(64) as usize];
        if total % 64 != 0 {
            *words.last_mut().expect("non-empty") = (1u64 << (total % 64)) - 1;
        }
        return Ok(ImageSet {
            source: window.clone(),
            window,
            q,
            words,
            total,
        });
    }
    let chain = Chain::new(ca, f, depth)?;
    let words: Vec<AtomicU64> = (0..total.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
    for_each_pattern(
        q,
        chain.source().len(),
        budget,
        "source patterns",
        || chain.scratch(),
        |scratch, _, states| {
            let idx = encode_index(chain.run(ca, states, scratch), q);
            words[(idx / 64) as usize].fetch_or(1 << (idx % 64), Ordering::Relaxed);
        },
    )?;
    Ok(ImageSet {
        source: chain.source().to_vec(),
        window,
        q,
        words: words.into_iter().map(AtomicU64::into_inner).collect(),
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules;
    use crate::spaces::{Lattice, P4m};

    #[test]
    fn out_neighbourhood_of_interval() {
        let ca = rules::eca(Lattice::new(), 90).unwrap();
        let z = ca.space();
        let a = out_neighborhood(z, &z.cube(0, 6), ca.neighbourhood()).unwrap();
        assert_eq!(a, z.cube(-1, 7));
        let g0: CosetSet<_> = [z.stabiliser_coset()].into_iter().collect();
        assert_eq!(out_neighborhood(z, &z.cube(0, 6), &g0).unwrap(), z.cube(0, 6));
    }

    #[test]
    fn out_neighbourhood_of_square_is_bigger_square() {
        let ca = rules::life(P4m::default()).unwrap();
        let z = Lattice::<2>::new();
        let a = out_neighborhood(ca.space(), &z.cube(0, 4), ca.neighbourhood()).unwrap();
        assert_eq!(a, z.cube(-1, 5));
    }

    #[test]
    fn zero_rule_image_is_one_pattern() {
        let ca = rules::eca(Lattice::new(), 0).unwrap();
        let f = ca.space().cube(0, 5);
        let img = image_patterns(&ca, &f, 1 << 20).unwrap();
        assert_eq!(img.count(), 1);
        assert_eq!(img.patterns(), vec![Pattern::constant(&f, 0)]);
        assert_eq!(img.first_missing().unwrap().states(), &[0, 0, 0, 0, 1]);
    }

    #[test]
    fn surjective_rules_hit_everything() {
        for k in [90, 204, 15] {
            let ca = rules::eca(Lattice::new(), k).unwrap();
            let img = image_patterns(&ca, &ca.space().cube(0, 6), 1 << 20).unwrap();
            assert!(img.is_complete(), "rule {k}");
        }
    }

    #[test]
    fn depth_zero_is_full_shift() {
        let ca = rules::eca(Lattice::new(), 0).unwrap();
        for w in [1, 6, 7, 13] {
            let img = iterated_image_patterns(&ca, &ca.space().cube(0, w), 0, 1 << 21).unwrap();
            assert!(img.is_complete());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let ca = rules::eca(Lattice::new(), 110).unwrap();
        let err = image_patterns(&ca, &ca.space().cube(0, 10), 1000).unwrap_err();
        assert!(matches!(err, crate::Error::BudgetExceeded { .. }));
    }
}
