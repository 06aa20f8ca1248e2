//! Finite-index entropy series and the row-wise counting inequalities behind
//! entropy non-increase, closure-net change and the tiling deficit.
//!
//! Logarithms are base 2, so a row of the full shift over two states reads 1.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::image::{iterated_image_patterns, Chain};
use crate::automaton::SemiCellularAutomaton;
use crate::error::{checked_power, Error, Result};
use crate::geometry;
use crate::space::{CellSet, CellSpace, CosetSet};
use crate::tiling::{interior_hits, Tiling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subject {
    FullShift,
    /// `Δ(Q^M)`.
    Image,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum EntropyMode {
    Exact,
    /// Distinct images of `samples` uniformly random sources per row: a lower
    /// bound on the exact count.
    SampledLowerBound { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Exact,
    SampledLowerBound,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub index: usize,
    pub size: usize,
    /// `|π_{F_i}(X)|`, absent when over budget or too large to represent.
    pub count: Option<u128>,
    /// `log₂(count) / |F_i|`.
    pub bits: Option<f64>,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySeries {
    pub subject: Subject,
    #[serde(flatten)]
    pub mode: EntropyMode,
    pub rows: Vec<EntropyRow>,
}

pub fn entropy_series<S: CellSpace>(
    ca: &SemiCellularAutomaton<S>,
    subject: Subject,
    windows: &[(usize, CellSet<S::Cell>)],
    mode: EntropyMode,
    budget: u64,
) -> Result<EntropySeries> {
    let q = ca.q();
    let mut rows = Vec::with_capacity(windows.len());
    for (index, f) in windows {
        let size = f.len();
        let mut row = EntropyRow {
            index: *index,
            size,
            count: None,
            bits: None,
            status: RowStatus::Exact,
        };
        match subject {
            Subject::FullShift => {
                let count = checked_power(q as u64, size);
                row.count = (count != u128::MAX).then_some(count);
                row.bits = Some((q as f64).log2());
            }
            Subject::Image => {
                let counted = match mode {
                    EntropyMode::Exact => iterated_image_patterns(ca, f, 1, budget).map(|img| img.count() as u128),
                    EntropyMode::SampledLowerBound { samples, seed } => {
                        row.status = RowStatus::SampledLowerBound;
                        sampled_count(ca, f, samples, seed.wrapping_add(*index as u64))
                    }
                };
                match counted {
                    Ok(count) => {
                        row.count = Some(count);
                        row.bits = Some(bits(count, size));
                    }
                    Err(Error::BudgetExceeded { .. }) => row.status = RowStatus::BudgetExceeded,
                    Err(e) => return Err(e),
                }
            }
        }
        rows.push(row);
    }
    Ok(EntropySeries { subject, mode, rows })
}

fn bits(count: u128, size: usize) -> f64 {
    if size == 0 {
        0.0
    } else {
        (count as f64).log2() / size as f64
    }
}

fn sampled_count<S: CellSpace>(ca: &SemiCellularAutomaton<S>, f: &CellSet<S::Cell>, samples: u64, seed: u64) -> Result<u128> {
    let chain = Chain::new(ca, f, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scratch = chain.scratch();
    let mut source = vec![0u8; chain.source().len()];
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    for _ in 0..samples {
        for s in source.iter_mut() {
            *s = rng.random_range(0..ca.q());
        }
        seen.insert(chain.run(ca, &source, &mut scratch).to_vec());
    }
    Ok(seen.len() as u128)
}

/// Counts on one Følner window for `X = Δ^depth(Q^M)`, with
/// `E = N ∪ {G₀}`, and the inequalities they must satisfy:
///
/// * `|π_{F^{-E}}(ΔX)| ≤ |π_F(X)|` (the restricted step is onto);
/// * `|π_F(ΔX)| ≤ |π_{F^{-E}}(ΔX)| · |Q|^{|F ∖ F^{-E}|} ≤ |π_F(X)| · |Q|^{|∂_E F|}`;
/// * `|π_{F^{+E}}(X)| ≤ |π_F(X)| · |Q|^{|F^{+E} ∖ F|} ≤ |π_F(X)| · |Q|^{|∂_E F|}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub index: usize,
    pub depth: usize,
    pub size: usize,
    pub interior_size: usize,
    pub closure_size: usize,
    pub boundary_size: usize,
    pub count: u128,
    pub next_interior_count: u128,
    pub next_count: u128,
    pub closure_count: u128,
    pub onto_holds: bool,
    pub non_increase_holds: bool,
    pub closure_net_holds: bool,
}

impl RowCheck {
    pub fn holds(&self) -> bool {
        self.onto_holds && self.non_increase_holds && self.closure_net_holds
    }
}

fn scaled(count: u128, q: u8, exp: usize) -> u128 {
    count.saturating_mul(checked_power(q as u64, exp))
}

pub fn entropy_row_checks<S: CellSpace>(
    ca: &SemiCellularAutomaton<S>,
    windows: &[(usize, CellSet<S::Cell>)],
    depth: usize,
    budget: u64,
) -> Result<Vec<RowCheck>> {
    let space = ca.space();
    let q = ca.q();
    let mut e: CosetSet<S::Element> = ca.neighbourhood().clone();
    e.insert(space.stabiliser_coset());
    let count = |w: &CellSet<S::Cell>, d: usize| -> Result<u128> { Ok(iterated_image_patterns(ca, w, d, budget)?.count() as u128) };
    windows
        .iter()
        .map(|(index, f)| {
            let g = geometry::geometry(space, f, &e)?;
            let x = count(f, depth)?;
            let next_interior = count(&g.interior, depth + 1)?;
            let next = count(f, depth + 1)?;
            let closure = count(&g.closure, depth)?;
            let inner_gap = f.len() - g.interior.len();
            let outer_gap = g.closure.len() - f.len();
            Ok(RowCheck {
                index: *index,
                depth,
                size: f.len(),
                interior_size: g.interior.len(),
                closure_size: g.closure.len(),
                boundary_size: g.boundary.len(),
                count: x,
                next_interior_count: next_interior,
                next_count: next,
                closure_count: closure,
                onto_holds: next_interior <= x,
                non_increase_holds: next <= scaled(next_interior, q, inner_gap)
                    && scaled(next_interior, q, inner_gap) <= scaled(x, q, g.boundary.len()),
                closure_net_holds: closure <= scaled(x, q, outer_gap) && scaled(x, q, outer_gap) <= scaled(x, q, g.boundary.len()),
            })
        })
        .collect()
}

/// One row of the tiling-deficit bound for `X = Δ(Q^M)`:
/// `|π_F(X)| ≤ (|Q|^|E| − 1)^t · |Q|^{|F| − |E|·t}` with `t = |T ∩ F^{-E}|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficitRow {
    pub index: usize,
    pub size: usize,
    pub tiles: usize,
    pub count: u128,
    pub bound: u128,
    pub holds: bool,
}

/// Requires a pattern on `m₀ ⇀ E` missing from the image, which for a
/// •-invariant rule is then missing on every `t ⇀ E`.
pub fn tiling_deficit_rows<S: CellSpace>(
    ca: &SemiCellularAutomaton<S>,
    tiling: &Tiling<S>,
    windows: &[(usize, CellSet<S::Cell>)],
    budget: u64,
) -> Result<Vec<DeficitRow>> {
    let space = ca.space();
    let q = ca.q();
    let base: CellSet<S::Cell> = geometry::semi_image(space, &space.origin(), &tiling.e)?.into_iter().collect();
    if iterated_image_patterns(ca, &base, 1, budget)?.is_complete() {
        return Err(Error::Precondition("every pattern on m₀ ⇀ E occurs in the image".into()));
    }
    let e = tiling.e.len();
    let per_tile = checked_power(q as u64, e) - 1;
    windows
        .iter()
        .map(|(index, f)| {
            let t = interior_hits(space, tiling, f)?;
            let count = iterated_image_patterns(ca, f, 1, budget)?.count() as u128;
            let mut bound = checked_power(q as u64, f.len() - e * t);
            for _ in 0..t {
                bound = bound.saturating_mul(per_tile);
            }
            Ok(DeficitRow {
                index: *index,
                size: f.len(),
                tiles: t,
                count,
                bound,
                holds: count <= bound,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::Schedule;
    use crate::rules;
    use crate::spaces::Lattice;
    use crate::tiling::greedy_tiling;

    #[test]
    fn full_shift_rows_are_one_bit() {
        let ca = rules::eca(Lattice::new(), 0).unwrap();
        let w = Schedule::range(1, 12).windows(ca.space()).unwrap();
        let s = entropy_series(&ca, Subject::FullShift, &w, EntropyMode::Exact, 1 << 20).unwrap();
        assert!(s.rows.iter().all(|r| r.bits == Some(1.0)));
        assert_eq!(s.rows[11].count, Some(4096));
    }

    #[test]
    fn zero_rule_image_rows_are_zero() {
        let ca = rules::eca(Lattice::new(), 0).unwrap();
        let w = Schedule::range(1, 10).windows(ca.space()).unwrap();
        let s = entropy_series(&ca, Subject::Image, &w, EntropyMode::Exact, 1 << 20).unwrap();
        assert!(s.rows.iter().all(|r| r.bits == Some(0.0) && r.count == Some(1)));
    }

    #[test]
    fn sampled_rows_bound_exact_rows() {
        let ca = rules::eca(Lattice::new(), 110).unwrap();
        let w = Schedule::range(1, 8).windows(ca.space()).unwrap();
        let exact = entropy_series(&ca, Subject::Image, &w, EntropyMode::Exact, 1 << 20).unwrap();
        let mode = EntropyMode::SampledLowerBound { samples: 200, seed: 7 };
        let sampled = entropy_series(&ca, Subject::Image, &w, mode, 1 << 20).unwrap();
        for (a, b) in exact.rows.iter().zip(&sampled.rows) {
            assert!(b.count.unwrap() <= a.count.unwrap());
            assert_eq!(b.status, RowStatus::SampledLowerBound);
        }
        assert_eq!(sampled, entropy_series(&ca, Subject::Image, &w, mode, 1 << 20).unwrap());
    }

    #[test]
    fn over_budget_rows_are_marked() {
        let ca = rules::eca(Lattice::new(), 110).unwrap();
        let w = Schedule::range(1, 8).windows(ca.space()).unwrap();
        let s = entropy_series(&ca, Subject::Image, &w, EntropyMode::Exact, 1 << 6).unwrap();
        assert_eq!(s.rows[3].status, RowStatus::Exact);
        assert_eq!(s.rows[4].status, RowStatus::BudgetExceeded);
        assert_eq!(s.rows[4].count, None);
    }

    #[test]
    fn row_inequalities_hold() {
        for k in [0, 90, 110, 30] {
            let ca = rules::eca(Lattice::new(), k).unwrap();
            let w = Schedule::range(1, 8).windows(ca.space()).unwrap();
            for depth in [0, 1] {
                for row in entropy_row_checks(&ca, &w, depth, 1 << 20).unwrap() {
                    assert!(row.holds(), "rule {k}: {row:?}");
                }
            }
        }
    }

    #[test]
    fn zero_rule_deficit() {
        let ca = rules::eca(Lattice::new(), 0).unwrap();
        let z = ca.space().clone();
        let e: CosetSet<_> = [z.stabiliser_coset()].into_iter().collect();
        let t = greedy_tiling(&z, &z.cube(-4, 20), &e).unwrap();
        let w = Schedule::range(1, 10).windows(&z).unwrap();
        let rows = tiling_deficit_rows(&ca, &t, &w, 1 << 20).unwrap();
        assert!(rows.iter().all(|r| r.holds && r.bound == 1 && r.count == 1));
        let id = rules::eca(Lattice::new(), 204).unwrap();
        assert!(tiling_deficit_rows(&id, &t, &w, 1 << 20).is_err());
    }
}
