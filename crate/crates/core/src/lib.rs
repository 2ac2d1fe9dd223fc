//! Exact construction and rank computation for the partial-derivative
//! (catalecticant), shifted-partial and Koszul flattening maps of explicit
//! polynomial families.
//!
//! Everything is exact: polynomial coefficients are arbitrary-precision
//! rationals (or Gaussian rationals where a specialization needs `i`), and
//! ranks come either from fraction-free elimination over the integers or from
//! elimination modulo random 62-bit primes, which always yields a valid lower
//! bound and certifies full rank outright.

pub mod combinatorics;
pub mod error;
pub mod families;
pub mod flattening;
pub mod koszul;
pub mod lgv;
pub mod poly;
pub mod rank;

pub use error::{Error, Result};
pub use poly::{Coeff, Gaussian, MonomialBasis, MultiIndex, Poly, Rational, SparsePolynomial};
pub use rank::{Certainty, ExactMatrix, RankEngine, RankReport};
