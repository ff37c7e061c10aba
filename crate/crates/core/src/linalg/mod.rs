//! Exact linear algebra over the rationals and over polynomial rings.

pub mod integer;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod univariate;

pub use matrix::{RationalMatrix, RowReduction};
pub use poly::{symbolic_determinant, PolyMatrix, SparsePolynomial, DEFAULT_SYMBOLIC_LIMIT};
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use univariate::{char_poly, char_poly_rational_split, Factorization, UniPoly};
