//! Floating-point lattice realizations of the umbral CCR pair.
//!
//! Periodic lattices carry the circulant matrices `X`, `Qc`, `Qp`, `Qp^-1`
//! and `Xhat`; truncated lattices stand in for the infinite lattice where
//! eigenfunctions decay. On top of these sit the dispersion check, the
//! quadrature eigenfunctions of the `xhat` extensions, the oscillator
//! doubling analysis, the p-space ground state and time evolution.

pub mod dispersion;
pub mod error;
pub mod evolution;
pub mod ground;
pub mod lattice;
pub mod matrix;
pub mod oscillator;
pub mod qp;
pub mod quadrature;
pub mod wave;
pub mod xhat;

pub use dispersion::{dispersion_check, momentum_eigenfunction, DispersionReport, MomentumEigenfunction};
pub use error::{Result, SpectralError};
pub use evolution::{
    commuted_oscillator_matrix, compare_operator_string, evolve, gaussian_packet, time_grid,
    OperatorStringComparison, Trajectory,
};
pub use ground::{creation_domain_violation, ground_state_pspace, GroundState, GroundStateParams};
pub use lattice::{Lattice, PeriodicLattice, TruncatedLattice};
pub use matrix::{build_matrices, local_operators, LatticeMatrix, LatticeOperators, C64};
pub use oscillator::{
    oscillator_hamiltonian, oscillator_spectrum, pair_levels, pspace_oscillator_levels, LevelPair,
    OscillatorSpectrum,
};
pub use qp::{
    closed_form_is_exact_inverse, qp_determinant_abs, qp_inverse_closed_form, qp_inverse_coefficients,
    qp_invertible, twice_qp_determinant,
};
pub use quadrature::{Branch, BranchQuadrature, QuadratureSpec};
pub use wave::WaveState;
pub use xhat::{
    periodic_xhat_spectrum, xhat_eigenfunctions, ExtensionParams, PeriodicXhatSpectrum, XhatEigenpair,
    XhatSpectrum, XhatTolerances,
};
