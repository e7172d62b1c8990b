//! Local-unitary equivalence checks for bipartite and tripartite quantum
//! states.
//!
//! A density matrix is expanded in a generalized Gell-Mann basis into its
//! family of real coefficient hypermatrices `T_S`, one per nonempty subset `S`
//! of subsystems. Two states are quasi-LU equivalent when every `T_S` of one is
//! the multilinear image of the other's under one orthogonal matrix per
//! subsystem. The checkers in [`equivalence`] decide this through finite
//! families of trace identities (see [`specht`]) together with norm, sign,
//! rank and hyperdeterminant conditions, and report a verdict per criterion.
//!
//! Trace identities are checked up to a configurable word length. A failing
//! identity proves non-equivalence; passing identities are evidence bounded by
//! that length.

pub mod bloch;
pub mod equivalence;
pub mod error;
pub mod hyperdet;
pub mod hypermatrix;
pub mod io;
pub mod specht;

pub use error::{Error, Result};
pub use hypermatrix::{Hypermatrix, RealMatrix};
