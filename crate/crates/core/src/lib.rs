//! Ensemble-VQE core: operator algebra, fermionic models, and optimization.
//!
//! The crate provides the numerical machinery for weighted- and equi-ensemble
//! variational eigensolver studies on a dense statevector simulator:
//!
//! - Pauli words, real-coefficient Pauli operators, and dense conversion
//!   ([`pauli`], [`dense`]);
//! - statevector simulation with Pauli rotations ([`state`]);
//! - electronic-structure integrals, frozen-core reduction, Jordan-Wigner
//!   mapping, and generalized-UCCSD generator enumeration ([`fermion`],
//!   [`fcidump`], [`occupation`]);
//! - binary (qubit-compressed) mapping of one-body matrices ([`qdft`]);
//! - ansatz circuits and initial-state preparation ([`ansatz`]);
//! - ensemble cost/trace evaluation and subspace diagnostics ([`ensemble`]);
//! - an L-BFGS minimizer with adjoint-mode gradients ([`optimizer`]).

pub mod ansatz;
pub mod dense;
pub mod ensemble;
pub mod error;
pub mod fcidump;
pub mod fermion;
pub mod occupation;
pub mod optimizer;
pub mod pauli;
pub mod qdft;
pub mod state;

pub use error::{Error, Result};
