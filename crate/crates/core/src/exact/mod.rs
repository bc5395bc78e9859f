//! Exact arithmetic: rationals, Laurent scalars in the spacing symbol `a`,
//! coordinate polynomials, Stirling numbers and factorial-basis conversions.

pub mod json;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod stirling;

pub use poly::LaurentPoly;
pub use rational::{int, parse_rational, rat, to_f64, Rational};
pub use scalar::SpacingScalar;
pub use stirling::{
    factorial_to_monomial, factorial_to_monomial_with, falling_factorial, falling_factorial_with,
    monomial_to_factorial, monomial_to_factorial_with, stirling1, stirling2, StirlingKind, StirlingTable,
};
