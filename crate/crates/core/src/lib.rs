//! Reachability structure of finite quivers.
//!
//! Starting from a quiver (a directed multigraph with loops), the crate
//! computes its reachability preorder and the quotient poset R(Q), the
//! condensation and path reduction, quasi-bigons, dimensions of the commuting
//! and incidence algebras, Hochschild invariants, order-complex homology, and
//! Betti curves of filtered quivers.
//!
//! Linear algebra is generic over [`Field`]; [`Rational`] and [`Gf2`] are
//! the usual choices, and [`FieldSpec`] selects one at run time.

pub mod algebra;
pub mod bitmatrix;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod gen;
pub mod homology;
pub mod isomorphism;
pub mod linalg;
pub mod persistence;
pub mod quiver;
pub mod reach;
pub mod reduction;
pub mod selftest;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, Gf};
pub use quiver::{parse_morphism, parse_quiver, Path, Quiver, QuiverMorphism};
pub use reach::{Poset, Preorder};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
/// The two-element field.
pub type Gf2 = Gf<2>;
/// Exact path counts.
pub type PathCount = num_bigint::BigUint;
