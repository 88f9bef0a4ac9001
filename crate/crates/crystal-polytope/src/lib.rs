//! Exact computations with polyhedral realizations of crystal bases.
//!
//! The crate models `B(∞)` and Demazure crystals inside the integer
//! sequence crystal attached to an index sequence, computes the affine
//! inequalities that cut out their polyhedral realizations, enumerates
//! lattice points of rational polytopes, and evaluates highest-term
//! valuations on polynomial rings.
//!
//! Reduced words are always stored in application order: `j_1` is the
//! first lowering operator applied to the highest-weight element, and the
//! variable `t_1` multiplies the rightmost factor of the unipotent product.

pub mod binfinity;
pub mod demazure;
pub mod inequalities;
pub mod polytope;
pub mod rootdata;
pub mod valuation;
pub mod zcrystal;

/// One-line description of the word-order convention, echoed by front ends.
pub const CONVENTION: &str = "word is application-ordered, j_1 first";
