//! Finite groups given by explicit tables, and the machinery built on them:
//! coset enumeration, second cohomology with `Z/n` coefficients, Schur and
//! Bogomolov multipliers, exact character tables, and character-level data of
//! the Drinfeld centre `Z(G)` (simples, double characters, the action of a
//! pair `(phi, gamma)`, softness, modular invariants).
//!
//! Commutators follow `[x, y] = x^-1 y^-1 x y` throughout.

pub mod centre;
pub mod characters;
pub mod cohomology;
pub mod constructions;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod linalg;
pub mod spec;

pub use error::{Error, Result};
pub use group::{ConjData, GroupMap, GroupTable, PairClassData};
