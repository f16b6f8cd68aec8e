//! Exact computations with parabolic Bruhat moment graphs.
//!
//! The crate builds finite Weyl groups from Cartan data, the parabolic Hecke
//! module with its Deodhar canonical basis, Bruhat moment graphs, sheaves on
//! them (including Braden–MacPherson sheaves), and modules over structure
//! algebras with translation functors and their characters. All arithmetic is
//! exact; every comparison in the test suites is equality of Laurent
//! polynomials over the integers.

pub mod coxeter;
pub mod error;
pub mod graph;
pub mod hecke;
pub mod linalg;
pub mod polyring;
pub mod rational;
pub mod sheaf;
pub mod verify;
pub mod zmod;

pub use coxeter::{CartanDatum, ElemId, GroupElement, ParabolicDatum, WeylGroup};
pub use error::{MgError, Result};
pub use graph::{EdgeId, MomentGraph};
pub use sheaf::{BmpSheaf, SectionSpace, Sheaf};
pub use zmod::{CharacterClass, EmbeddedModule, GradedRank, Setting};

pub use hecke::{Combination, Hecke, HeckeElement, LaurentPoly, ParabolicElement, ParabolicModule};
pub use polyring::{GradedPoly, LinearForm};
pub use rational::Rat;
