//! Exact computations with modular Lie algebras of simple algebraic groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`fflinalg`]: dense linear algebra over `F_p`.
//! * [`rootdata`]: root systems and Chevalley structure constants.
//! * [`liealg`]: Chevalley algebras, root-group conjugation, closures.
//! * [`classical`]: matrix realizations, class representatives, orbit dimensions.
//! * [`genconj`]: generation by conjugates, witness search, product bounds.
//! * [`reps`]: test modules, stabilizers and the fixed-space inequality.

pub mod classical;
pub mod fflinalg;
pub mod genconj;
pub mod liealg;
pub mod reps;
pub mod rootdata;

pub use fflinalg::{closure_under, kernel, rref, subspace_contains, Matrix, PrimeField, PrimeFieldMatrix, Subspace};
pub use liealg::{ChevalleyAlgebra, Isogeny, LieAlgebra};
pub use rootdata::{RootSystem, TypeLabel};
