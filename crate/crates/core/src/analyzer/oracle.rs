//! Exact decision procedures for automata over `Z` with an interval
//! neighbourhood, on the de Bruijn graph of the rule.
//!
//! Vertices are words of length `k - 1` over `Q`, where `k` is the
//! neighbourhood width; the edge `w₀…w_{k-1}` runs from `w₀…w_{k-2}` to
//! `w₁…w_{k-1}` and is labelled `δ(w)`. Every bi-infinite path is a
//! configuration and its label sequence is the image.

use std::collections::{BTreeSet, VecDeque};

use crate::automaton::{decode_index, SemiCellularAutomaton};
use crate::error::{Error, Result};
use crate::space::CellSpace;

/// Upper bound on `q^(k-1)` for the oracles.
pub const MAX_DE_BRUIJN_VERTICES: u64 = 1 << 12;

/// The rule as a function of the interval word, leftmost cell first.
#[derive(Debug, Clone)]
pub struct LineRule {
    pub q: usize,
    pub width: usize,
    /// Indexed by the base-`q` word, leftmost letter most significant.
    pub table: Vec<u8>,
}

impl LineRule {
    pub fn from_automaton<S: CellSpace>(ca: &SemiCellularAutomaton<S>) -> Result<Self> {
        let space = ca.space();
        let origin = space.origin();
        let mut coords = Vec::with_capacity(ca.neighbourhood().len());
        for n in ca.neighbourhood() {
            let cell = space.semi_act(&origin, n)?;
            let x = space
                .line_coordinate(&cell)
                .ok_or_else(|| Error::Unsupported("the 1-D oracles need the space Z".into()))?;
            coords.push(x);
        }
        let lo = *coords.iter().min().ok_or_else(|| Error::Unsupported("empty neighbourhood".into()))?;
        let width = coords.len();
        let mut sorted = coords.clone();
        sorted.sort();
        if sorted.iter().enumerate().any(|(i, &x)| x != lo + i as i64) {
            return Err(Error::Unsupported("the 1-D oracles need a contiguous neighbourhood".into()));
        }
        let q = ca.q() as usize;
        let size = (q as u64).checked_pow(width as u32).filter(|&s| s / q as u64 <= MAX_DE_BRUIJN_VERTICES);
        let size = size.ok_or_else(|| Error::budget("de Bruijn vertices", (q as u128).pow(width as u32 - 1), MAX_DE_BRUIJN_VERTICES))?;
        // position of each neighbourhood entry inside the word
        let slot: Vec<usize> = coords.iter().map(|&x| (x - lo) as usize).collect();
        let mut word = vec![0u8; width];
        let mut local = vec![0u8; width];
        let table = (0..size)
            .map(|w| {
                decode_index(w, q as u8, &mut word);
                for (l, &s) in local.iter_mut().zip(&slot) {
                    *l = word[s];
                }
                ca.rule().eval(&local)
            })
            .collect();
        Ok(LineRule { q, width, table })
    }

    fn vertices(&self) -> usize {
        self.q.pow(self.width as u32 - 1)
    }

    /// Edges as `(from, to, label)`; edge index is the word.
    fn edge(&self, word: usize) -> (usize, usize, u8) {
        let v = self.vertices();
        (word / self.q, word % v, self.table[word])
    }
}

/// Whether every word over `Q` labels a path, i.e. the image is the full
/// shift. Subset construction from the set of all vertices; the rule is not
/// surjective exactly when the empty set is reachable.
pub fn surjectivity_oracle_1d<S: CellSpace>(ca: &SemiCellularAutomaton<S>) -> Result<bool> {
    Ok(line_surjective(&LineRule::from_automaton(ca)?))
}

pub fn line_surjective(rule: &LineRule) -> bool {
    let v = rule.vertices();
    let words = rule.q * v;
    let start: Vec<bool> = vec![true; v];
    let mut seen: BTreeSet<Vec<bool>> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(set) = queue.pop_front() {
        for letter in 0..rule.q as u8 {
            let mut next = vec![false; v];
            for w in 0..words {
                let (from, to, label) = rule.edge(w);
                if label == letter && set[from] {
                    next[to] = true;
                }
            }
            if next.iter().all(|&b| !b) {
                return false;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    true
}

/// Whether no two configurations that differ on a non-empty finite set have
/// the same image. On the pair graph (pairs of vertices, pairs of equally
/// labelled edges) that fails exactly when some edge pair with distinct words
/// lies on a path from the diagonal back to the diagonal.
pub fn pre_injectivity_oracle_1d<S: CellSpace>(ca: &SemiCellularAutomaton<S>) -> Result<bool> {
    Ok(line_pre_injective(&LineRule::from_automaton(ca)?))
}

pub fn line_pre_injective(rule: &LineRule) -> bool {
    let v = rule.vertices();
    let words = rule.q * v;
    let mut pair_edges = Vec::new();
    for a in 0..words {
        for b in 0..words {
            let (fa, ta, la) = rule.edge(a);
            let (fb, tb, lb) = rule.edge(b);
            if la == lb {
                pair_edges.push((fa * v + fb, ta * v + tb, a != b));
            }
        }
    }
    let nodes = v * v;
    let diagonal = (0..v).map(|i| i * v + i);
    let reach = |forward: bool| {
        let mut adj = vec![Vec::new(); nodes];
        for &(x, y, _) in &pair_edges {
            if forward {
                adj[x].push(y);
            } else {
                adj[y].push(x);
            }
        }
        let mut seen = vec![false; nodes];
        let mut queue: VecDeque<usize> = diagonal.clone().collect();
        for d in diagonal.clone() {
            seen[d] = true;
        }
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    };
    let from_diagonal = reach(true);
    let to_diagonal = reach(false);
    !pair_edges
        .iter()
        .any(|&(x, y, differ)| differ && from_diagonal[x] && to_diagonal[y])
}
