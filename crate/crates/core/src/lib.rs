//! Geometric quantum mechanics for finite-dimensional systems.
//!
//! Pure and mixed states are handled as points of the Hilbert manifold and of
//! the space of density states. The crate computes pull-back tensor fields on
//! local unitary groups, entanglement predicates and monotone candidates
//! derived from invariant operator-valued tensors, and quantum and classical
//! Fisher information metrics.
//!
//! Conventions used throughout:
//!
//! - brackets are normalized as `[A,B]₊ = (AB + BA)/2` and
//!   `[A,B]₋ = (AB − BA)/(2i)`, so `f_{AB} = f_{[A,B]₊} + i f_{[A,B]₋}`;
//! - generator bases are traceless; single-factor generators satisfy
//!   `Tr(g_j g_k) = 2δ_jk`, bipartite ones are the bare `g_j ⊗ 1`, `1 ⊗ g_j`;
//! - logarithms are natural.

#![forbid(unsafe_code)]

pub mod entangle;
pub mod error;
pub mod fisher;
pub mod geomqm;
pub mod grouppullback;
pub mod iovt;
pub mod linalg;
pub mod qstate;
pub mod suites;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, RMatrix, C64};
pub use qstate::{DensityState, GeneratorBasis, PureState};
