use std::collections::BTreeSet;

use proptest::prelude::*;
use umbral_core::exact::{int, rat, Rational};
use umbral_core::symmetry::{
    angular_momentum, build_nd_ops, ccr_matrix, dirac_factorization_check, doubling_count, lattice_sphere,
    poincare_rep, rational_unitary, so3_check, sphere_symmetries_check, sphere_value, GammaSet,
    LatticeSpecND, NdVariant,
};

const VARIANTS: [NdVariant; 2] = [NdVariant::ForwardBasic, NdVariant::CentralSymmetric];

#[test]
fn ccr_matrix_up_to_three_dimensions() {
    let spacings = [int(1), rat(2, 3), rat(5, 2)];
    for n in 1..=3 {
        let spec = LatticeSpecND::new(spacings[..n].to_vec()).unwrap();
        for v in VARIANTS {
            let report = ccr_matrix(&build_nd_ops(&spec, v).unwrap(), 8, 4).unwrap();
            assert!(report.iter().all(|c| c.passed()), "n = {n}, {v}");
        }
    }
}

#[test]
fn so3_closes_on_degree_five() {
    let spec = LatticeSpecND::new(vec![int(1), rat(1, 2), int(2)]).unwrap();
    for v in VARIANTS {
        let l = angular_momentum(&spec, v).unwrap();
        let report = so3_check(&l, 5).unwrap();
        assert!(
            report.iter().all(|c| c.passed() && c.max_residual_degree == 5),
            "{v}"
        );
    }
}

#[test]
fn poincare_family_on_degree_four() {
    let spec = LatticeSpecND::uniform(3).unwrap();
    let euclid = poincare_rep(&spec, NdVariant::CentralSymmetric, int(1), false)
        .unwrap()
        .verify(4)
        .unwrap();
    assert_eq!(euclid.rotation_convention, Some(1));
    assert!(euclid.closure_holds());
    assert!(euclid.kappa_casimir_central());
    let lorentz = poincare_rep(&spec, NdVariant::CentralSymmetric, int(-1), false)
        .unwrap()
        .verify(4)
        .unwrap();
    assert!(lorentz.closure_holds());
    assert!(lorentz.lorentzian_casimir_central());
}

#[test]
fn dirac_factorization_in_two_representations() {
    let spec = LatticeSpecND::uniform(3).unwrap();
    let dirac = GammaSet::dirac_basis();
    let rotated = dirac.conjugated(&rational_unitary());
    assert_ne!(dirac, rotated);
    for g in [&dirac, &rotated] {
        for m in [int(0), int(1), rat(-3, 4)] {
            assert!(dirac_factorization_check(g, &spec, &m).unwrap());
        }
    }
}

#[test]
fn doubling_is_two_to_the_n() {
    for n in 1..=4 {
        let spec = LatticeSpecND::uniform(n).unwrap();
        assert_eq!(doubling_count(&spec, false).species, 1 << n);
        assert_eq!(doubling_count(&spec, true).species, 1 << (n + 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spheres_are_closed_under_the_symmetry_maps(c2 in -3i64..=40, central in any::<bool>()) {
        let spec = LatticeSpecND::uniform(3).unwrap();
        let (variant, c) = if central {
            (NdVariant::CentralSymmetric, rat(c2, 2))
        } else {
            (NdVariant::ForwardBasic, int(c2))
        };
        let pts = lattice_sphere(&spec, &c, variant, 7).unwrap();
        for p in &pts {
            prop_assert_eq!(sphere_value(&spec, variant, p), c.clone());
        }
        let report = sphere_symmetries_check(&pts, &spec, variant).unwrap();
        prop_assert!(report.closed());
        let covered: BTreeSet<_> = report.orbits.iter().flatten().cloned().collect();
        prop_assert_eq!(covered.len(), pts.len());
    }

    #[test]
    fn unequal_spacing_spheres_hold_their_value(
        s in prop::collection::vec(1i64..=3, 3),
        c in 0i64..=30,
    ) {
        let spec = LatticeSpecND::new(s.iter().map(|&k| Rational::from_integer(k.into())).collect()).unwrap();
        let pts = lattice_sphere(&spec, &int(c), NdVariant::ForwardBasic, 5).unwrap();
        for p in &pts {
            prop_assert_eq!(sphere_value(&spec, NdVariant::ForwardBasic, p), int(c));
        }
    }
}
