//! Exact sparse multivariate polynomial arithmetic.

mod basis;
mod coeff;
mod json;
mod multi_index;
mod polynomial;

pub use basis::{grevlex_cmp, MonomialBasis, DEFAULT_BASIS_CAP};
pub use coeff::{Coeff, Gaussian, Rational};
pub use json::{PolyJson, TermJson};
pub use multi_index::MultiIndex;
pub use polynomial::Poly;

/// Polynomial over the rationals; the carrier of every family and map.
pub type SparsePolynomial = Poly<Rational>;
