mod common;

use common::{a, delta, kind, normal_op, small_rational, upoly};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use umbral_core::exact::rational::binomial;
use umbral_core::exact::{int, rat, LaurentPoly, Rational, SpacingScalar};
use umbral_core::operator::{basic_xhat, DeltaKind, NormalOrderedOp};
use umbral_core::umbral::{
    eval_newton, exp_coeffs, ho_forward_solution, map_equation, sheffer_expand, star_product, DivergenceRule,
    NewtonSeries, PolySequence, Verdict,
};

fn c(s: SpacingScalar) -> LaurentPoly {
    LaurentPoly::constant(1, s)
}

fn basic(k: DeltaKind) -> PolySequence {
    PolySequence::basic(&delta(k)).unwrap()
}

#[test]
fn binomial_type_for_all_basic_sequences() {
    let y_sum = &LaurentPoly::var(2, 0) + &LaurentPoly::var(2, 1);
    for kd in DeltaKind::ALL {
        let seq = basic(kd);
        for k in 0..=8usize {
            let lhs = seq.get(k).embed(2, &[0]).unwrap().substitute(0, &y_sum);
            let mut rhs = LaurentPoly::zero(2);
            for l in 0..=k {
                let b = Rational::from_integer(binomial(k as u32, l as u32));
                let t = &seq.get(l).embed(2, &[0]).unwrap() * &seq.get(k - l).embed(2, &[1]).unwrap();
                rhs = &rhs + &t.scale_rational(&b);
            }
            assert_eq!(lhs, rhs, "{kd}, k = {k}");
        }
    }
}

#[test]
fn lowering_relations_to_twelve() {
    for kd in DeltaKind::ALL {
        basic(kd).verify(12).unwrap();
        PolySequence::sheffer(&delta(kd)).unwrap().verify(12).unwrap();
    }
}

#[test]
fn sheffer_expansions_to_eight() {
    for kd in DeltaKind::ALL {
        let q = basic(kd);
        let s = PolySequence::sheffer(&delta(kd)).unwrap();
        for n in 0..=8 {
            sheffer_expand(&s, &q, n).unwrap();
        }
    }
}

#[test]
fn forward_sheffer_is_not_binomial() {
    let s = PolySequence::sheffer(&delta(DeltaKind::Forward)).unwrap();
    let y_sum = &LaurentPoly::var(2, 0) + &LaurentPoly::var(2, 1);
    let lhs = s.get(1).embed(2, &[0]).unwrap().substitute(0, &y_sum);
    let rhs = &s.get(1).embed(2, &[0]).unwrap() + &s.get(1).embed(2, &[1]).unwrap();
    assert_ne!(lhs, rhs);
}

#[test]
fn central_closed_forms() {
    let x = LaurentPoly::x();
    let seq = basic(DeltaKind::Central);
    let inv = delta(DeltaKind::Central).pincherle().inverse().unwrap();
    for k in 2..=8i64 {
        // x prod_{n=1}^{k-1} (x + k a - 2 n a)
        let closed = (1..k).fold(x.clone(), |acc, n| &acc * &(&x + &c(a().scale(&int(k - 2 * n)))));
        assert_eq!(seq.get(k as usize), closed, "k = {k}");
    }
    for k in 1..=8i64 {
        // prod_{n=1}^{k} [x + (k + 1) a - 2 n a]
        let closed = (1..=k).fold(LaurentPoly::one(1), |acc, n| {
            &acc * &(&x + &c(a().scale(&int(k + 1 - 2 * n))))
        });
        assert_eq!(inv.apply(&seq.get(k as usize)).unwrap(), closed, "k = {k}");
    }
}

#[test]
fn laguerre_rodrigues_form() {
    // [-x (D - 1)^2]^k 1 computed with plain polynomial calculus.
    let step = |p: &LaurentPoly| {
        let d2 = p.derivative_n(0, 2);
        let d1 = p.derivative(0).scale_rational(&int(2));
        let inner = &(&d2 - &d1) + p;
        -(&LaurentPoly::x() * &inner)
    };
    let seq = basic(DeltaKind::Laguerre);
    let mut p = LaurentPoly::one(1);
    for k in 0..=8 {
        assert_eq!(seq.get(k), p, "k = {k}");
        p = step(&p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn star_is_a_commutative_monoid(kd in kind(), p in upoly(5), q in upoly(5), r in upoly(5)) {
        let s = basic(kd);
        let pq = star_product(&p, &q, &s).unwrap();
        prop_assert_eq!(&pq, &star_product(&q, &p, &s).unwrap());
        let left = star_product(&pq, &r, &s).unwrap();
        let right = star_product(&p, &star_product(&q, &r, &s).unwrap(), &s).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(star_product(&p, &LaurentPoly::one(1), &s).unwrap(), p);
    }

    #[test]
    fn star_multiplies_basis(kd in kind(), k in 0usize..5, l in 0usize..5) {
        let s = basic(kd);
        prop_assert_eq!(star_product(&s.get(k), &s.get(l), &s).unwrap(), s.get(k + l));
    }

    #[test]
    fn delta_is_a_star_derivation(kd in kind(), p in upoly(6), q in upoly(6)) {
        let s = basic(kd);
        let qop = delta(kd);
        let lhs = qop.apply(&star_product(&p, &q, &s).unwrap()).unwrap();
        let rhs = &star_product(&qop.apply(&p).unwrap(), &q, &s).unwrap()
            + &star_product(&p, &qop.apply(&q).unwrap(), &s).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn map_equation_is_a_homomorphism(kd in kind(), x in normal_op(), y in normal_op()) {
        let q = delta(kd);
        let xh = basic_xhat(&q).unwrap();
        let bracket = map_equation(&x.commutator(&y), &q, &xh).unwrap();
        let images = map_equation(&x, &q, &xh)
            .unwrap()
            .commutator(&map_equation(&y, &q, &xh).unwrap());
        prop_assert!(bracket.agrees_to(&images, 8));
        prop_assert!(bracket.agrees_on_monomials(&images, 5).unwrap());
    }

    #[test]
    fn exp_image_on_lattice_sites(k in small_rational(), den in 1i64..=8, n in 0u64..=20) {
        let spacing = rat(1, den);
        prop_assume!((&k * &spacing).abs() < Rational::one());
        let s = NewtonSeries::umbral_image(&exp_coeffs(&k, 60), &spacing, "exp");
        let x = &spacing * Rational::from_integer(n.into());
        let e = eval_newton(&s, &x, n as usize, DivergenceRule::default()).unwrap();
        let expected = (Rational::one() + &k * &spacing).pow(n as i32);
        prop_assert_eq!(e.partial_sum, expected);
        prop_assert_eq!(e.verdict, Verdict::Terminating { n });
    }

    #[test]
    fn oscillator_series_solves_the_difference_equation(den in 1i64..=6) {
        let r = ho_forward_solution(30, &rat(1, den), DivergenceRule::default()).unwrap();
        prop_assert!(r.max_residual.is_zero() && r.extension_max_residual.is_zero());
    }
}

#[test]
fn exp_image_diverges_between_sites_when_ka_exceeds_one() {
    for (k, a) in [(int(3), int(1)), (int(5), rat(1, 2))] {
        let s = NewtonSeries::umbral_image(&exp_coeffs(&k, 60), &a, "exp");
        let x = &a * rat(1, 2);
        let e = eval_newton(&s, &x, 30, DivergenceRule::default()).unwrap();
        assert!(
            matches!(e.verdict, Verdict::Diverging { at_term, .. } if at_term <= 50),
            "{k} {a}"
        );
    }
}

#[test]
fn generator_image_commutes_as_expected() {
    // D -> Q and y -> xhat keep [D, y] = 1.
    let q = delta(DeltaKind::Central);
    let xh = basic_xhat(&q).unwrap();
    let d = NormalOrderedOp::from_series(umbral_core::operator::ShiftInvariantOp::d(1, 0));
    let y = NormalOrderedOp::coordinate(1, 0);
    let img = map_equation(&d.commutator(&y), &q, &xh).unwrap();
    assert!(img.agrees_to(&NormalOrderedOp::identity(1), 10));
}
