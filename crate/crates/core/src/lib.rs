//! Minimum cut-sets of the power graph `P(C_n)` of the cyclic group of order `n`.
//!
//! Two vertices of `P(C_n)` are adjacent when one is a power of the other,
//! which for a cyclic group means the order of one divides the order of the
//! other. All elements of a given order `d` form a clique `E_d` of size
//! `φ(d)`, and a minimum cut-set either contains `E_d` or misses it entirely.
//! Everything in this crate therefore works on the divisor lattice of `n`,
//! one weighted node per divisor, and never materializes group elements.
//!
//! * [`arith`]: factorization, totients, the divisor lattice and closed-form
//!   totient sums.
//! * [`candidates`]: the two families of candidate cut-sets (`Z` and `X`)
//!   with closed-form sizes audited against class enumeration.
//! * [`graph`]: the compressed graph, a max-flow vertex-connectivity oracle
//!   and an exhaustive small-instance oracle.
//! * [`theorem`]: regime classification, the candidate family, the minimum
//!   cut value and cross-verification against the oracles.
//! * [`inequalities`]: the supporting totient inequalities as checkable
//!   predicates.

pub mod arith;
pub mod candidates;
mod error;
pub mod graph;
pub mod inequalities;
pub mod report;
pub mod theorem;

pub use arith::{Count, DivisorClass, DivisorLattice, Factorization};
pub use candidates::{BoundaryLayers, CandidateKind, CandidateParams, CutCandidate};
pub use error::{Error, Result};
pub use graph::{ConnectivityResult, ConnectivityStatus, DivisorGraph, SeparationWitness};
pub use theorem::{MinCutReport, OracleMode, OracleUsed, Regime, VerificationRecord};
