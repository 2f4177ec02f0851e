//! Preservation monoids of finite metric and ultrametric spaces.
//!
//! Distances live in a finite exact [`DistanceAlphabet`]; functions are
//! endofunctions of that alphabet ([`GridFunction`]); spaces are labeled
//! symmetric matrices ([`DistanceMatrix`]). The [`preservation`] module
//! computes the set `P_X` of functions mapping a family `X` into itself, and
//! the [`verifier`] module checks the structural results about these sets by
//! exhaustive enumeration.

pub mod alphabet;
pub mod cli;
pub mod error;
pub mod functions;
pub mod json;
pub mod monoid;
pub mod preservation;
pub mod spaces;
pub mod verifier;

pub use alphabet::{DistanceAlphabet, Rational};
pub use error::{Error, Result};
pub use functions::GridFunction;
pub use monoid::{compose, intersect, is_submonoid, monoid_closure, FunctionSet};
pub use preservation::{
    compute_am, compute_f0, compute_p_universe, compute_p_x, compute_si, is_in_p_x,
    mainth_construction, PreservationUniverse, PreservedKind,
};
pub use spaces::{delhomme_space, discrete_space, enumerate_spaces, DistanceMatrix, SpaceFamily, SpaceKind};
pub use verifier::{Status, VerificationReport};
