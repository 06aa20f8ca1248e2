//! Cellular automata over cell spaces: transitive left group sets with finite
//! stabilisers and a chosen coordinate system.
//!
//! The crate covers the quotient-set semi-action and its interior/closure
//! calculus ([`geometry`]), Følner diagnostics ([`amenability`]), tilings
//! ([`tiling`]), semi-cellular automata on finite windows ([`automaton`]) and
//! the Garden-of-Eden analysis built on them ([`analyzer`]).

pub mod amenability;
pub mod analyzer;
pub mod automaton;
pub mod config;
pub mod error;
pub mod geometry;
pub mod rules;
pub mod space;
pub mod spaces;
pub mod tiling;

pub use amenability::{boundary_ratio, folner_boxes, folner_defect, FolnerSequence, Rational};
pub use automaton::{LocalRule, Pattern, SemiCellularAutomaton};
pub use config::{RuleDescriptor, SpaceDescriptor, SpaceVisitor};
pub use error::{Error, Result};
pub use space::{CellSet, CellSpace, Coset, CosetSet, SpaceKind};
pub use spaces::{Dihedral, Isometry, Lattice, P4m, P4mCoordinates, PermutationSpace, PointOp};
pub use tiling::{greedy_tiling, verify_tiling, Tiling};
