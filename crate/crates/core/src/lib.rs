//! Box spaces of finitely generated nilpotent groups.
//!
//! The crate builds Cayley graphs of congruence quotients of free abelian and
//! unitriangular groups, glues them into finite truncations of box spaces, and
//! runs the covering machinery behind the asymptotic-dimension bounds: doubling
//! radii, maximal packings, multiplicity-bounded covers, exact and heuristic
//! `(R,S)`-dimension solvers, and dimension profiles across scales.
//!
//! All group arithmetic is generic over the coordinate integer type (see
//! [`group::Coord`]); the aliases below fix it to checked `i64`.

pub mod boxspace;
pub mod cache;
pub mod cayley;
pub mod cover;
pub mod dimension;
pub mod doubling;
pub mod error;
pub mod families;
pub mod group;
pub mod growth;
pub mod lattice;
pub mod metric;
pub mod profile;
pub mod transfer;

pub use error::{Error, ErrorKind, Result};
pub use metric::{Dist, ExplicitMetric, MetricSpace};

/// Exact rationals for growth constants and cover parameters.
pub type Rational = num_rational::BigRational;

pub type Group = group::GroupSpec<i64>;
pub type Element = group::GroupElement<i64>;
pub type Quotient = group::CongruenceQuotient<i64>;
pub type Filtration = group::Filtration<i64>;
pub type CayleyGraph = cayley::CayleyGraph<i64>;
pub type BoxSpace = boxspace::BoxSpace<i64>;

/// Wide-coordinate variants for radii where `i64` corner entries would overflow.
pub type WideGroup = group::GroupSpec<i128>;
pub type WideElement = group::GroupElement<i128>;
