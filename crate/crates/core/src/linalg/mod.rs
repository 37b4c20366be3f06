//! Exact linear algebra over the rationals and the integers.

pub mod lattice;
pub mod mat;
pub mod rat;
pub mod sparse;
pub mod subspace;

pub use lattice::{factor_u64, lattice_member, solve_integer, IntLattice};
pub use mat::Mat;
pub use rat::Rat;
pub use sparse::{Echelon, Fp, SparseMatrix};
pub use subspace::{intersect_subspaces, rref_basis, solve_linear, verify_infeasibility, Solution, Subspace};
