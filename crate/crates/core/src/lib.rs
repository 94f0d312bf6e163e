//! Exact computer algebra for the generalized Block Lie algebras ℬ(Γ, J).
//!
//! The crate covers lattice arithmetic for Γ ⊂ ℚ², the bracket on ℬ(Γ, J),
//! the named derivations and local-finiteness probes, the explicit
//! isomorphisms between members of the family together with an exact
//! isomorphism test, and seeded verification suites.

pub mod algebra;
pub mod derivations;
pub mod isomorphism;
pub mod harness;
pub mod lattice;
pub mod rat;
pub mod syntax;

pub use algebra::{AlgebraSpec, BasisIdx, Element, JKind, JSpec, MultiIndex};
pub use derivations::Derivation;
pub use isomorphism::{IsoParams, IsoVerdict};
pub use lattice::{CanonicalDescriptor, GroupHom, GroupTag, Lattice, ShearMap, ShearScale, Vec2};
pub use rat::Rat;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not in the lattice")]
    NotInLattice(Vec2),
    #[error("homomorphism has {got} values but the lattice has rank {expected}")]
    HomArity { expected: usize, got: usize },
    #[error("map is singular (a = 0)")]
    Singular,
    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),
    #[error("π_{0}(Γ) = {{0}} while J_{0} = {{0}}")]
    Condition11Violated(u8),
    #[error("degree {0} is outside Γ")]
    IndexOutsideGamma(Vec2),
    #[error("multi-index ({0},{1}) is outside J")]
    IndexOutsideJ(u64, u64),
    #[error("operands belong to different algebras: {0}")]
    SpecMismatch(String),
    #[error("{name} is undefined in this algebra: {reason}")]
    UndefinedInThisAlgebra { name: &'static str, reason: String },
    #[error("{0} is not in Γ")]
    AlphaNotInGamma(Vec2),
    #[error("parameters do not define a group isomorphism between the lattices")]
    PhiCheckFailed,
    #[error("invalid algebra specification: {0}")]
    SpecInvalid(String),
    #[error("π₂(Γ) = J₂ = {{0}}: generalized Witt case, outside the classification")]
    WittDegenerate,
    #[error("seed element is zero")]
    ZeroSeed,
    #[error("parse error: {0}")]
    Parse(String),
}
