//! The combined surjectivity / pre-injectivity report.

use serde::{Deserialize, Serialize};

use super::entropy::{entropy_series, EntropyMode, EntropyRow, Subject};
use super::finite::finite_space_oracle;
use super::oracle::{pre_injectivity_oracle_1d, surjectivity_oracle_1d};
use super::search::{find_goe_pattern, find_mutually_erasable, verify_witness, GoeWitness, WindowOutcome};
use super::Schedule;
use crate::automaton::SemiCellularAutomaton;
use crate::error::{Error, Result};
use crate::space::{CellSpace, SpaceKind};

pub const DEFAULT_PATTERN_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Cap on every single enumeration.
    pub patterns: u64,
    /// Følner indices of the Garden-of-Eden windows.
    pub windows: Schedule,
    /// Følner indices of the cores `A` for erasable pairs.
    pub cores: Schedule,
    pub entropy: Schedule,
    pub entropy_mode: EntropyMode,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            patterns: DEFAULT_PATTERN_BUDGET,
            windows: Schedule::range(1, 8),
            cores: Schedule::range(1, 8),
            entropy: Schedule::range(1, 8),
            entropy_mode: EntropyMode::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonSummary {
    pub space: SpaceKind,
    pub rule: String,
    pub q: u8,
    pub neighbourhood: usize,
    /// Cosets added to close the neighbourhood under the stabiliser.
    pub added_cosets: usize,
    /// Result of the •-invariance check; absent when over budget.
    pub cellular: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    /// `line` (de Bruijn graph over Z) or `finite` (all of `Q^M`).
    pub kind: Option<String>,
    pub surjective: Option<bool>,
    pub pre_injective: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(deserialize = "C: Ord + Clone + Deserialize<'de>"))]
pub struct CheckedWitness<C> {
    pub verified: bool,
    pub witness: GoeWitness<C>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Searches {
    pub goe: Vec<WindowOutcome>,
    pub erasable: Vec<WindowOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "C: Ord + Clone + Deserialize<'de>"))]
pub struct AnalysisReport<C> {
    pub ca: AutomatonSummary,
    pub surjective: Verdict,
    pub pre_injective: Verdict,
    pub witness: Vec<CheckedWitness<C>>,
    pub oracles: OracleResult,
    pub searches: Searches,
    /// Image entropy rows over the entropy schedule, in the mode of `budgets`.
    pub entropy: Vec<EntropyRow>,
    pub budgets: Budgets,
    /// The rule is •-invariant, so surjectivity and pre-injectivity must
    /// coincide (every built-in space is amenable).
    pub main_theorem_applies: bool,
    /// Raised when the verdicts contradict each other or an oracle
    /// contradicts a verified witness. Either means a bug.
    pub consistency_flag: bool,
    pub status: String,
    pub notes: Vec<String>,
}

pub const VIOLATION: &str = "MAIN-THEOREM-VIOLATION";

/// Runs the invariance check, both witness searches, the applicable exact
/// oracle and the image entropy series. Over-budget steps become `unknown`
/// and a note; they never turn into verdicts.
pub fn goe_report<S: CellSpace>(ca: &SemiCellularAutomaton<S>, budgets: &Budgets) -> Result<AnalysisReport<S::Cell>> {
    let space = ca.space();
    let budget = budgets.patterns;
    let mut notes = Vec::new();

    let cellular = match ca.check_bullet_invariance(budget) {
        Ok(r) => Some(r.invariant),
        Err(Error::BudgetExceeded { needed, .. }) => {
            notes.push(format!("•-invariance not checked: {needed} local configurations per stabiliser element"));
            None
        }
        Err(e) => return Err(e),
    };

    let goe = find_goe_pattern(ca, &budgets.windows.windows(space)?, budget)?;
    let erasable = find_mutually_erasable(ca, &budgets.cores.windows(space)?, budget)?;
    let mut witness = Vec::new();
    let mut found_goe = false;
    let mut found_erasable = false;
    let mut flag_reasons = Vec::new();
    for w in goe.witness.into_iter().chain(erasable.witness) {
        let verified = verify_witness(ca, &w, budget)?;
        if verified {
            match w {
                GoeWitness::GoePattern { .. } => found_goe = true,
                GoeWitness::MutuallyErasable { .. } => found_erasable = true,
            }
        } else {
            flag_reasons.push("a search witness failed re-verification".to_string());
        }
        witness.push(CheckedWitness { verified, witness: w });
    }

    let mut oracles = OracleResult {
        kind: None,
        surjective: None,
        pre_injective: None,
    };
    if space.kind().is_finite() {
        match finite_space_oracle(ca, budget) {
            Ok(v) => {
                oracles.kind = Some("finite".into());
                oracles.surjective = Some(v.surjective);
                oracles.pre_injective = Some(v.pre_injective);
            }
            Err(Error::BudgetExceeded { needed, .. }) => notes.push(format!("finite oracle skipped: {needed} configurations")),
            Err(e) => return Err(e),
        }
    } else {
        match (surjectivity_oracle_1d(ca), pre_injectivity_oracle_1d(ca)) {
            (Ok(s), Ok(p)) => {
                oracles.kind = Some("line".into());
                oracles.surjective = Some(s);
                oracles.pre_injective = Some(p);
            }
            (Err(Error::Unsupported(_)), _) | (_, Err(Error::Unsupported(_))) => {}
            (Err(Error::BudgetExceeded { needed, .. }), _) => notes.push(format!("line oracles skipped: {needed} de Bruijn vertices")),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }

    let verdict = |refuted: bool, oracle: Option<bool>| match (refuted, oracle) {
        (true, _) | (false, Some(false)) => Verdict::No,
        (false, Some(true)) => Verdict::Yes,
        (false, None) => Verdict::Unknown,
    };
    let surjective = verdict(found_goe, oracles.surjective);
    let pre_injective = verdict(found_erasable, oracles.pre_injective);
    if found_goe && oracles.surjective == Some(true) {
        flag_reasons.push("a verified Garden-of-Eden pattern contradicts the surjectivity oracle".into());
    }
    if found_erasable && oracles.pre_injective == Some(true) {
        flag_reasons.push("a verified erasable pair contradicts the pre-injectivity oracle".into());
    }
    let main_theorem_applies = cellular == Some(true);
    if main_theorem_applies
        && matches!(
            (surjective, pre_injective),
            (Verdict::Yes, Verdict::No) | (Verdict::No, Verdict::Yes)
        )
    {
        flag_reasons.push(format!("surjective: {surjective:?}, pre-injective: {pre_injective:?}"));
    }
    let consistency_flag = !flag_reasons.is_empty();
    notes.extend(flag_reasons);

    let entropy = entropy_series(ca, Subject::Image, &budgets.entropy.windows(space)?, budgets.entropy_mode, budget)?.rows;

    Ok(AnalysisReport {
        ca: AutomatonSummary {
            space: space.kind(),
            rule: ca.rule().name().to_string(),
            q: ca.q(),
            neighbourhood: ca.neighbourhood().len(),
            added_cosets: ca.added_cosets().len(),
            cellular,
        },
        surjective,
        pre_injective,
        witness,
        oracles,
        searches: Searches {
            goe: goe.windows,
            erasable: erasable.windows,
        },
        entropy,
        budgets: budgets.clone(),
        main_theorem_applies,
        consistency_flag,
        status: if consistency_flag { VIOLATION.into() } else { "consistent".into() },
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules;
    use crate::spaces::{Dihedral, Lattice};

    #[test]
    fn zero_rule_is_refuted_twice() {
        let ca = rules::eca(Lattice::new(), 0).unwrap();
        let r = goe_report(&ca, &Budgets::default()).unwrap();
        assert_eq!((r.surjective, r.pre_injective), (Verdict::No, Verdict::No));
        assert!(!r.consistency_flag);
        assert_eq!(r.witness.len(), 2);
        assert!(r.witness.iter().all(|w| w.verified && w.witness.width() <= 3));
    }

    #[test]
    fn rule_90_is_proven_by_oracles() {
        let ca = rules::eca(Lattice::new(), 90).unwrap();
        let r = goe_report(&ca, &Budgets::default()).unwrap();
        assert_eq!((r.surjective, r.pre_injective), (Verdict::Yes, Verdict::Yes));
        assert!(r.witness.is_empty());
        assert_eq!(r.status, "consistent");
        assert!(r.entropy.iter().all(|row| row.bits == Some(1.0)));
    }

    #[test]
    fn finite_spaces_use_the_exhaustive_oracle() {
        let ca = rules::majority(Dihedral::new(5).unwrap()).unwrap();
        let r = goe_report(&ca, &Budgets::default()).unwrap();
        assert_eq!(r.oracles.kind.as_deref(), Some("finite"));
        assert_eq!((r.surjective, r.pre_injective), (Verdict::No, Verdict::No));
        assert_eq!(r.ca.cellular, Some(true));
    }

    #[test]
    fn report_round_trips_through_json() {
        let ca = rules::eca(Lattice::new(), 0).unwrap();
        let r = goe_report(&ca, &Budgets::default()).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: AnalysisReport<[i64; 1]> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
