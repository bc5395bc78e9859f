//! Lattice representations of Lie algebras: per-axis delta operators,
//! angular momentum, lattice spheres, the Poincare generators, the Dirac
//! factorization and species counting.

pub mod angular;
pub mod check;
pub mod dirac;
pub mod doubling;
pub mod nd;
pub mod poincare;
pub mod sphere;

pub use angular::{angular_momentum, so3_check};
pub use check::{check_relation, levi_civita, test_monomials, RelationCheck, Status};
pub use dirac::{dirac_factorization_check, rational_unitary, GammaSet, GaussRational, Mat4};
pub use doubling::{doubling_count, zone_zeros, DoublingReport};
pub use nd::{
    build_nd_ops, ccr_matrix, central_sphere_polynomial, forward_sphere_polynomial, literal_central_xhat,
    radial_invariant, LatticeSpecND, NdOps, NdVariant,
};
pub use poincare::{poincare_rep, PoincareRep, PoincareReport};
pub use sphere::{lattice_sphere, sphere_symmetries_check, sphere_value, LatticePoint, SphereReport};
