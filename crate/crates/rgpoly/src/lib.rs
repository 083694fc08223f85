//! Exact computation of the Poincaré polynomials `F_{g,n}` of the orbifold
//! cell decomposition of the moduli space of curves, via the topological
//! recursion on the boundary variables, together with the integer recursion
//! for the dessin/lattice-point counts `N_{g,n}(p)` and a brute-force
//! ribbon-graph enumerator that cross-validates both.
//!
//! All arithmetic is exact rational arithmetic; every comparison in the
//! test suites is zero-tolerance.

pub mod analysis;

#[cfg(doctest)]
mod book;

pub mod cache;
pub mod error;
pub mod lattice;
pub mod monomial;
pub mod poly;
pub mod rat;
pub mod recursion;
pub mod ribbon;
pub mod series;

pub use error::{Error, Result};
pub use monomial::{ExpVec, MAX_VARS};
pub use poly::LaurentPoly;
pub use rat::Rat;
pub use series::{series_from_rational_subst, TruncatedSeries};
