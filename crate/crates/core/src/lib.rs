//! Exact umbral calculus on polynomial spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: rationals, Laurent scalars in the spacing symbol `a`, lattice
//!   coordinate polynomials, Stirling numbers and factorial-basis conversions.
//! * [`operator`]: shift-invariant operators as lazily generated series in the
//!   derivative `D`, normal-ordered operators and the finite-field CCR
//!   representation.
//! * [`umbral`]: basic and Sheffer sequences, the umbral transform, the star
//!   product, Newton series and the forward-difference oscillator.
//! * [`symmetry`]: multi-dimensional lattice operators, angular momentum,
//!   lattice spheres, the Poincaré representation and boson doubling.

pub mod error;
pub mod exact;
pub mod operator;
pub mod symmetry;
pub mod umbral;

pub use error::{Error, Result};
