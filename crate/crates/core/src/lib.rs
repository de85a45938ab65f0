//! Cells of the totally non-negative flag variety, the full Kostant-Toda and
//! full symmetric Toda hierarchies evolved by matrix factorization, and the
//! Bruhat interval polytopes their moment maps trace out.

pub mod error;
pub mod fktflow;
pub mod linalg;
pub mod lp;
pub mod momentpoly;
pub mod symgroup;
pub mod symtoda;
pub mod tnncell;

pub use error::{Error, Result};
pub use fktflow::{KtFlow, LaxMatrix, MultiTime};
pub use linalg::{Matrix, Rational, Scalar};
pub use momentpoly::{BruhatPolytope, Embedding, MomentMap, Polytope};
pub use symgroup::{Permutation, ReducedWord, Subexpression};
pub use symtoda::{SymFlow, SymLaxMatrix};
pub use tnncell::{CellPoint, Spectrum};
