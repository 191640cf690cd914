//! Finite models of pseudo effect algebras and pseudo D-posets, the functors
//! and natural transformations relating them, and transfer of structure
//! along split coequalizers.

pub mod catalog;
pub mod cli;
pub mod functors;
pub mod io;
pub mod limits;
pub mod morphism;
pub mod pdp;
pub mod pea;
pub mod pl;
pub mod poset;
pub mod table;
pub mod transfer;

pub use morphism::{BoundedMorphism, PosetMorphism};
pub use pdp::{PdpMorphism, PseudoDPoset};
pub use pea::PseudoEffectAlgebra;
pub use poset::{Bounded, BoundedPoset, OrderedSet, Poset};

/// Exact rationals used by the piecewise-linear example.
pub type Rational = num_rational::BigRational;

/// Piecewise-linear map with exact rational coordinates.
pub type RationalPlMap = pl::PlMap<Rational>;
