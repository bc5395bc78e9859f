//! Basic and Sheffer sequences, the umbral transform and star product,
//! umbral images of continuum operators, Newton series, the forward-difference
//! oscillator and discrete Hermite polynomials.

pub mod hermite;
pub mod ho;
pub mod newton;
pub mod sequence;
pub mod transform;

pub use hermite::{discrete_hermite, hermite, hermite_generating_oracle};
pub use ho::{divergence_demo, extend_negative, ho_forward_solution, ho_psi0, ho_residual, HoForwardReport};
pub use newton::{
    eval_newton, exp_coeffs, gaussian_coeffs, newton_map, DivergenceRule, NewtonEval, NewtonRow,
    NewtonSeries, Verdict,
};
pub use sequence::{basic_sequence, sheffer_expand, sheffer_sequence, value_at_origin, Flavor, PolySequence};
pub use transform::{
    commuted_central_oscillator, harmonic_oscillator, map_equation, map_equation_nd, star_product,
    umbral_transform, umbral_transform_nd,
};
