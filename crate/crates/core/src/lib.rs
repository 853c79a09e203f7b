//! Exact-arithmetic Milnor invariants of string links.
//!
//! The crate computes, with no floating point anywhere:
//!
//! - free-group words and their Magnus expansions, plain and square-free
//!   ([`words`], [`magnus`]);
//! - the reduced free group: equality, strand deletion, Brunnian
//!   detection, and the commutator normal form by degree peeling
//!   ([`rfree`]);
//! - Milnor invariants `mu(I; n)` of closures of string links with one
//!   nontrivial strand, the permutation-indexed invariant vector of
//!   Brunnian links, and the stacking product formula ([`links`]);
//! - free Lie algebras in the Lyndon basis, tensor (universal
//!   enveloping) expansions as a PBW independence oracle, and rewriting
//!   of multilinear elements into left-normed brackets ([`freelie`]);
//! - the Drinfeld-Kohno algebra of the configuration space with its
//!   relation certificate, plus the graded torus model with its
//!   deletion maps and Brunnian kernel ([`dk`]);
//! - the equality of the normal-form coefficient vector with the
//!   invariant vector, machine-checked on randomized inputs ([`kappa`],
//!   [`verify`]).
//!
//! ```
//! use linkhom::links::{closure_mu, StringLink};
//! use num_bigint::BigInt;
//!
//! // The closure of [t1, t2] in three components has triple linking
//! // number mu(1,2;3) = 1 and vanishing pairwise linking numbers.
//! let link = StringLink::parse("[t1,t2]", 3)?;
//! assert_eq!(closure_mu(&link, &[1, 2])?, BigInt::from(1));
//! assert_eq!(closure_mu(&link, &[1])?, BigInt::from(0));
//! # Ok::<(), linkhom::Error>(())
//! ```

pub mod combinat;
pub mod dk;
pub mod error;
pub mod freelie;
pub mod kappa;
mod linalg;
pub mod links;
pub mod magnus;
pub mod rfree;
pub mod verify;
pub mod words;

pub use combinat::Perm;
pub use error::{Error, Result};
pub use freelie::{BracketTree, LieElt, LyndonWord, TensorPoly};
pub use kappa::KappaCoeffs;
pub use links::{MuVector, StringLink};
pub use magnus::{Monomial, NcPoly};
pub use rfree::{NormalForm, RFWord};
pub use words::{Letter, Sign, Word};
