//! Exact twisted conjugacy for finite groups and finitely generated abelian
//! groups.
//!
//! The crate computes twisted (φ-)conjugacy classes and Reidemeister
//! numbers, compares them with fixed points of the induced action on
//! irreducible characters, and checks the surrounding structural results:
//! the cokernel formula for abelian groups, mapping tori, extension bounds
//! and the Möbius congruences for Reidemeister sequences.

pub mod abelian;
pub mod characters;
pub mod corpus;
pub mod error;
pub mod extensions;
pub mod group;
pub mod linalg;
pub mod suite;
pub mod torus;
pub mod zeta;

pub use error::{Error, Result};
pub use linalg::ExtendedCount;
