//! Operator toolkit for the tau2 / cyclic XXZ / chiral Potts family of lattice
//! models at a root of unity.
//!
//! The crate builds the finite matrices of these models explicitly (Weyl pairs,
//! quantum group generators, Lax operators, transfer matrices, Boltzmann
//! weights) and checks the algebraic identities that tie them together:
//! Yang-Baxter relations, subspace decompositions of the cyclic chain,
//! rapidity-reversal dualities, and the functional relations coupling the
//! tau2 operator to the chiral Potts transfer matrix.
//!
//! Everything is dense complex linear algebra on small chains, meant for
//! exact verification at desk scale rather than for large-lattice physics.

pub mod cmatrix;
pub mod cpm;
pub mod decomp;
pub mod duality;
pub mod eigen;
pub mod error;
pub mod lax;
pub mod qgroups;
pub mod report;
pub mod transfer;
pub mod weyl;

pub use cmatrix::CMatrix;
pub use error::{Error, Result};
