//! Operator entanglement of quantum evolutions on two-party Hilbert spaces.
//!
//! The crate computes the operator Schmidt decomposition of a bipartite
//! operator, the linear-entropy operator entanglement `E`, the Choi
//! vectorization of operators and completely positive maps, the entangling
//! power `e_p`, and several independent evaluation routes for `E` (reduced
//! density matrix of the vectorized operator, swap expectation value, and a
//! projective measurement protocol on four copies of the local space).
//!
//! # Index convention
//!
//! Matrices are dense and row-major. Composite indices put the FIRST tensor
//! factor as the slow index, so for a bipartite operator on `C^dA ⊗ C^dB`
//!
//! ```text
//! U[(a, b), (c, d)] = ⟨a b| U |c d⟩,   row = a·dB + b,   col = c·dB + d.
//! ```
//!
//! For two qubits the row/column order is `|00⟩, |01⟩, |10⟩, |11⟩`; CNOT
//! (control on the first qubit) therefore swaps rows 2 and 3 of the identity.
//!
//! The crate is `no_std` and only needs `alloc`; IO, file formats, and the
//! command line live in the companion `opent` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bipartite;
pub mod choi;
pub mod epower;
pub mod error;
pub mod gates;
pub mod layout;
pub mod linalg;
pub mod matrix;
pub mod protocol;
pub mod random;
pub mod schmidt;
pub mod state;

pub use bipartite::BipartiteOperator;
pub use error::{Error, Result};
pub use layout::SubsystemLayout;
pub use matrix::{ComplexMatrix, C64};
pub use random::{MonteCarloEstimate, RandomSource};
pub use state::StateVector;

/// Tolerance used by every exactness predicate unless a caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-10;
