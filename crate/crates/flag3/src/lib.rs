//! Exact optimization over flag f-vectors of 3-colored simplicial
//! complexes: given per-color vertex budgets and per-color-pair edge
//! budgets, compute the maximum achievable facet count, produce a witness
//! complex, and decide feasibility of a proposed full flag f-vector.
//!
//! All decision arithmetic is exact (big integers and rationals); no
//! floating point feeds a comparison anywhere.

pub mod arith;
pub mod cli;
pub mod complex;
pub mod construct;
pub mod experiments;
pub mod flagvec;
pub mod maximize;
pub mod oracle;

pub use complex::{StaircaseGraph, TriComplex};
pub use construct::{BConstants, CandidateParams, Leftovers};
pub use flagvec::{Color, ColorPair, ColorPermutation, FlagVector, HVector};
pub use maximize::{is_feasible, maximize, MaxResult, Shortcut};
