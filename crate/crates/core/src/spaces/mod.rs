//! Built-in cell spaces.

pub mod dihedral;
pub mod lattice;
pub mod p4m;
pub mod perm;

pub use dihedral::{Dihedral, DihedralElement};
pub use lattice::Lattice;
pub use p4m::{Isometry, P4m, P4mCoordinates, PointOp};
pub use perm::{Permutation, PermutationSpace};
