//! Exhaustive analysis of automata over finite cell spaces.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::automaton::{encode_index, for_each_pattern, Pattern, SemiCellularAutomaton};
use crate::error::{ensure_enumerable, Error, Result};
use crate::space::{CellSet, CellSpace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "C: Serialize"))]
pub struct FiniteVerdict<C> {
    pub surjective: bool,
    pub pre_injective: bool,
    /// `|Δ(Q^M)|`.
    pub image_size: u64,
    pub configurations: u64,
    /// The least configuration outside the image.
    pub missing: Option<Pattern<C>>,
    /// `(a, b)` with `Δ(a) = Δ(b)`, where `b` is the least configuration whose
    /// image has a smaller preimage and `a` is the least such preimage.
    pub collision: Option<(Pattern<C>, Pattern<C>)>,
}

/// Runs `Δ` on all of `Q^M`. Surjectivity is read off the image size;
/// pre-injectivity (injectivity, as every difference is finite) from
/// collisions between preimages, detected independently.
pub fn finite_space_oracle<S: CellSpace>(ca: &SemiCellularAutomaton<S>, budget: u64) -> Result<FiniteVerdict<S::Cell>> {
    let cells = ca
        .space()
        .finite_cells()
        .ok_or_else(|| Error::Unsupported("the finite-space oracle needs a finite space".into()))?;
    let domain: CellSet<S::Cell> = cells.into_iter().collect();
    let q = ca.q();
    let total = ensure_enumerable("configurations", q, domain.len(), budget)?;
    let plan = ca.plan(&domain)?;
    debug_assert_eq!(plan.outputs.len(), domain.len());

    // image index -> least preimage (u64::MAX = none)
    let first: Vec<AtomicU64> = (0..total).map(|_| AtomicU64::new(u64::MAX)).collect();
    for_each_pattern(
        q,
        domain.len(),
        budget,
        "configurations",
        || vec![0u8; domain.len()],
        |out, idx, states| {
            plan.apply(ca.rule(), states, out);
            first[encode_index(out, q) as usize].fetch_min(idx, Ordering::Relaxed);
        },
    )?;
    let first: Vec<u64> = first.into_iter().map(AtomicU64::into_inner).collect();
    let image_size = first.iter().filter(|&&f| f != u64::MAX).count() as u64;
    let missing = first.iter().position(|&f| f == u64::MAX).map(|i| Pattern::from_index(&domain, q, i as u64));

    // A collision is a configuration that is not the least preimage of its
    // image.
    let mut out = vec![0u8; domain.len()];
    let mut collision = None;
    let mut states = vec![0u8; domain.len()];
    for idx in 0..total {
        crate::automaton::decode_index(idx, q, &mut states);
        plan.apply(ca.rule(), &states, &mut out);
        let least = first[encode_index(&out, q) as usize];
        if least != idx {
            collision = Some((Pattern::from_index(&domain, q, least), Pattern::from_index(&domain, q, idx)));
            break;
        }
    }
    Ok(FiniteVerdict {
        surjective: image_size == total,
        pre_injective: collision.is_none(),
        image_size,
        configurations: total,
        missing,
        collision,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules;
    use crate::spaces::{Dihedral, PermutationSpace};

    #[test]
    fn majority_on_pentagon_is_neither() {
        let ca = rules::majority(Dihedral::new(5).unwrap()).unwrap();
        let v = finite_space_oracle(&ca, 1 << 10).unwrap();
        assert!(!v.surjective && !v.pre_injective);
        assert_eq!(v.configurations, 32);
        let (a, b) = v.collision.unwrap();
        assert_eq!(ca.restricted_step(&a).unwrap(), ca.restricted_step(&b).unwrap());
        assert!(a < b);
    }

    #[test]
    fn identity_is_both() {
        let d = Dihedral::new(4).unwrap();
        let v = finite_space_oracle(&rules::identity(d, 3).unwrap(), 1 << 10).unwrap();
        assert!(v.surjective && v.pre_injective);
        assert_eq!(v.image_size, 81);
        let s3 = PermutationSpace::from_generators(3, &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let v = finite_space_oracle(&rules::identity(s3, 2).unwrap(), 1 << 10).unwrap();
        assert!(v.surjective && v.pre_injective);
    }

    #[test]
    fn zero_is_neither() {
        let v = finite_space_oracle(&rules::zero(Dihedral::new(3).unwrap(), 2).unwrap(), 1 << 10).unwrap();
        assert_eq!((v.surjective, v.pre_injective, v.image_size), (false, false, 1));
        assert_eq!(v.missing.unwrap().states(), &[0, 0, 1]);
    }
}
