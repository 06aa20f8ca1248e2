//! Semi-decision searches for Garden-of-Eden patterns and mutually erasable
//! pairs, and from-scratch re-verification of what they return.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::image::{image_patterns, out_neighborhood};
use crate::automaton::{decode_index, derive_n_prime, encode_index, for_each_pattern, Pattern, SemiCellularAutomaton};
use crate::error::{checked_power, ensure_enumerable, Error, Result};
use crate::geometry;
use crate::space::{CellSet, CellSpace};

/// Evidence against surjectivity or pre-injectivity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[serde(bound(deserialize = "C: Ord + Clone + Deserialize<'de>"))]
pub enum GoeWitness<C> {
    /// `pattern` on `window` is not the restriction of any image.
    GoePattern { window: Vec<C>, pattern: Pattern<C> },
    /// Distinct patterns on `closure(core, N′)` that agree outside `core` and
    /// have the same restricted step.
    MutuallyErasable { core: Vec<C>, p: Pattern<C>, p_prime: Pattern<C> },
}

impl<C> GoeWitness<C> {
    /// `|F|` for a Garden-of-Eden pattern, `|A|` for an erasable pair.
    pub fn width(&self) -> usize {
        match self {
            GoeWitness::GoePattern { window, .. } => window.len(),
            GoeWitness::MutuallyErasable { core, .. } => core.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum WindowStatus {
    /// Searched exhaustively; no witness on this window.
    Exhausted,
    Found,
    BudgetExceeded { needed: String },
    /// Not attempted: at least as large as a window that exceeded the budget.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowOutcome {
    pub index: usize,
    pub size: usize,
    #[serde(flatten)]
    pub status: WindowStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome<C> {
    pub witness: Option<GoeWitness<C>>,
    pub windows: Vec<WindowOutcome>,
}

/// Runs `attempt` over the schedule until it finds something. After a
/// window exceeds the budget only strictly smaller windows are attempted.
fn run_schedule<C, T>(
    windows: &[(usize, CellSet<C>)],
    mut attempt: impl FnMut(&CellSet<C>) -> Result<Option<T>>,
) -> Result<(Option<T>, Vec<WindowOutcome>)> {
    let mut outcomes = Vec::with_capacity(windows.len());
    let mut ceiling = usize::MAX;
    for (index, w) in windows {
        let mut outcome = WindowOutcome {
            index: *index,
            size: w.len(),
            status: WindowStatus::Skipped,
        };
        if w.len() >= ceiling {
            outcomes.push(outcome);
            continue;
        }
        match attempt(w) {
            Ok(Some(found)) => {
                outcome.status = WindowStatus::Found;
                outcomes.push(outcome);
                return Ok((Some(found), outcomes));
            }
            Ok(None) => outcome.status = WindowStatus::Exhausted,
            Err(Error::BudgetExceeded { needed, .. }) => {
                outcome.status = WindowStatus::BudgetExceeded {
                    needed: needed.to_string(),
                };
                ceiling = w.len();
            }
            Err(e) => return Err(e),
        }
        outcomes.push(outcome);
    }
    Ok((None, outcomes))
}

/// The lexicographically least missing pattern on the first window of the
/// schedule whose image is incomplete.
pub fn find_goe_pattern<S: CellSpace>(
    ca: &SemiCellularAutomaton<S>,
    windows: &[(usize, CellSet<S::Cell>)],
    budget: u64,
) -> Result<SearchOutcome<S::Cell>> {
    let (witness, windows) = run_schedule(windows, |f| {
        let image = image_patterns(ca, f, budget)?;
        Ok(image.first_missing().map(|pattern| GoeWitness::GoePattern {
            window: f.iter().cloned().collect(),
            pattern,
        }))
    })?;
    Ok(SearchOutcome { witness, windows })
}

/// For each core `A` of the schedule, the lexicographically least pair
/// `(p, p′)`, `p < p′`, of patterns on `closure(A, N′)` equal outside `A` with
/// equal restricted steps.
pub fn find_mutually_erasable<S: CellSpace>(
    ca: &SemiCellularAutomaton<S>,
    cores: &[(usize, CellSet<S::Cell>)],
    budget: u64,
) -> Result<SearchOutcome<S::Cell>> {
    let (witness, windows) = run_schedule(cores, |a| erasable_pair(ca, a, budget))?;
    Ok(SearchOutcome { witness, windows })
}

/// `closure(A, N′)`.
pub fn erasable_domain<S: CellSpace>(ca: &SemiCellularAutomaton<S>, core: &CellSet<S::Cell>) -> Result<CellSet<S::Cell>> {
    let space = ca.space();
    let n_prime = derive_n_prime(space, ca.neighbourhood());
    let region = geometry::margin(space, core, &n_prime)?;
    geometry::closure(space, core, &n_prime, &region)
}

fn erasable_pair<S: CellSpace>(
    ca: &SemiCellularAutomaton<S>,
    core: &CellSet<S::Cell>,
    budget: u64,
) -> Result<Option<GoeWitness<S::Cell>>> {
    if core.is_empty() {
        return Ok(None);
    }
    let q = ca.q();
    let domain = erasable_domain(ca, core)?;
    ensure_enumerable("patterns on closure(A, N′)", q, domain.len(), budget)?;
    let cells: Vec<S::Cell> = domain.iter().cloned().collect();
    let inside: Vec<usize> = (0..cells.len()).filter(|&i| core.contains(&cells[i])).collect();
    let outside: Vec<usize> = (0..cells.len()).filter(|&i| !core.contains(&cells[i])).collect();
    let plan = ca.plan(&domain)?;
    let n_out = plan.outputs.len();
    let inner_total = checked_power(q as u64, inside.len()) as u64;
    let outer_total = checked_power(q as u64, outside.len()) as u64;

    let best = (0..outer_total)
        .into_par_iter()
        .filter_map(|o| {
            let mut states = vec![0u8; cells.len()];
            let mut digits = vec![0u8; outside.len()];
            decode_index(o, q, &mut digits);
            for (&pos, &d) in outside.iter().zip(&digits) {
                states[pos] = d;
            }
            let mut inner = vec![0u8; inside.len()];
            let mut out = vec![0u8; n_out];
            // image key -> (first inner index, second inner index)
            let mut classes: HashMap<u64, (u64, Option<u64>)> = HashMap::new();
            for a in 0..inner_total {
                decode_index(a, q, &mut inner);
                for (&pos, &d) in inside.iter().zip(&inner) {
                    states[pos] = d;
                }
                plan.apply(ca.rule(), &states, &mut out);
                classes
                    .entry(encode_index(&out, q))
                    .and_modify(|e| {
                        e.1.get_or_insert(a);
                    })
                    .or_insert((a, None));
            }
            let (first, second) = classes
                .values()
                .filter_map(|&(f, s)| s.map(|s| (f, s)))
                .min()?;
            let mut full = |a: u64| {
                decode_index(a, q, &mut inner);
                for (&pos, &d) in inside.iter().zip(&inner) {
                    states[pos] = d;
                }
                encode_index(&states, q)
            };
            Some((full(first), full(second)))
        })
        .min();

    Ok(best.map(|(p, p_prime)| GoeWitness::MutuallyErasable {
        core: core.iter().cloned().collect(),
        p: Pattern::from_index(&domain, q, p),
        p_prime: Pattern::from_index(&domain, q, p_prime),
    }))
}

// ---------------------------------------------------------------------------
// Re-verification through the automaton API only.

/// Whether `pattern` differs from `Δ_A⁻(s)|_F` for every source `s` on
/// `A = out_neighborhood(F, N)`.
pub fn verify_goe_pattern<S: CellSpace>(ca: &SemiCellularAutomaton<S>, pattern: &Pattern<S::Cell>, budget: u64) -> Result<bool> {
    let window = pattern.domain();
    if window.is_empty() || pattern.states().iter().any(|&s| s >= ca.q()) {
        return Ok(false);
    }
    let source = out_neighborhood(ca.space(), &window, ca.neighbourhood())?;
    let plan = ca.plan(&source)?;
    let positions = plan
        .positions_of(&window)
        .ok_or_else(|| Error::Precondition("window is not inside the interior of its out-neighbourhood".into()))?;
    let hit = AtomicBool::new(false);
    let target = pattern.states();
    for_each_pattern(
        ca.q(),
        source.len(),
        budget,
        "source patterns",
        || vec![0u8; plan.outputs.len()],
        |out, _, states| {
            plan.apply(ca.rule(), states, out);
            if positions.iter().zip(target).all(|(&i, &t)| out[i] == t) {
                hit.store(true, Ordering::Relaxed);
            }
        },
    )?;
    Ok(!hit.into_inner())
}

/// Checks the erasable-pair conditions from scratch.
pub fn verify_mutually_erasable<S: CellSpace>(
    ca: &SemiCellularAutomaton<S>,
    core: &CellSet<S::Cell>,
    p: &Pattern<S::Cell>,
    p_prime: &Pattern<S::Cell>,
) -> Result<bool> {
    if core.is_empty() || p == p_prime {
        return Ok(false);
    }
    let domain = erasable_domain(ca, core)?;
    if p.domain() != domain || p_prime.domain() != domain {
        return Ok(false);
    }
    let outside: CellSet<S::Cell> = domain.difference(core).cloned().collect();
    if !p.agrees_on(p_prime, &outside) {
        return Ok(false);
    }
    if p.states().iter().chain(p_prime.states()).any(|&s| s >= ca.q()) {
        return Ok(false);
    }
    Ok(ca.restricted_step(p)? == ca.restricted_step(p_prime)?)
}

pub fn verify_witness<S: CellSpace>(ca: &SemiCellularAutomaton<S>, w: &GoeWitness<S::Cell>, budget: u64) -> Result<bool> {
    match w {
        GoeWitness::GoePattern { window, pattern } => {
            Ok(pattern.cells() == window.as_slice() && verify_goe_pattern(ca, pattern, budget)?)
        }
        GoeWitness::MutuallyErasable { core, p, p_prime } => {
            let core: CellSet<S::Cell> = core.iter().cloned().collect();
            verify_mutually_erasable(ca, &core, p, p_prime)
        }
    }
}
