//! Exact arithmetic kernel: rationals, multivariate polynomials and
//! rational matrices.

pub mod linear;
mod matrix;
mod poly;

pub use linear::{kernel_basis, primitive_integer, primitive_rational, rank, solve_linear};
pub use matrix::RationalMatrix;
pub use poly::{monomials_of_degree, weighted_exponents, Exponents, MultiPoly};

pub use num_bigint::BigInt;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
