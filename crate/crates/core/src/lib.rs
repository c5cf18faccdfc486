//! Exact calculus of symmetric and bisymmetric functions.
//!
//! All series are stored in the power-sum basis with exact rational
//! coefficients and a formal variable `t = −ℏ` tracking cohomological
//! degree. On top of the ring arithmetic the crate provides plethysm
//! (with its ℏ-extension), relative and Koike plethysm, plethystic
//! exponential and logarithm, saturation, the box and connected box
//! products of bisymmetric functions, Schur-pair decompositions, and the
//! pipelines computing characters of stable cohomology of `Aut(F_n)` and
//! Albanese cohomology of `IA_n`.

pub mod applications;
pub mod bases;
pub mod characters;
pub mod error;
pub mod exprlang;
pub mod oracle;
pub mod partitions;
pub mod plethysm;
pub mod propcalc;
pub mod series;

pub use error::{Error, Result};
pub use partitions::{Bipartition, Partition};
pub use series::{Alphabet, BiSymSeries, Monomial, Rational, SymSeries, TCoeff, Truncation};
