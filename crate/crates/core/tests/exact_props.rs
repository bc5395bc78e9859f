mod common;

use common::{poly, scalar, small_rational};
use num_traits::{One, Zero};
use proptest::prelude::*;
use umbral_core::exact::{
    factorial_to_monomial, falling_factorial, monomial_to_factorial, stirling1, stirling2, LaurentPoly,
    Rational, SpacingScalar,
};

#[test]
fn stirling_expansion_of_monomials() {
    for n in 0..=12u32 {
        let mut sum = LaurentPoly::zero(1);
        for k in 0..=n {
            let c = SpacingScalar::monomial(stirling2(n as usize, k as usize).unwrap(), (n - k) as i32);
            sum = &sum + &falling_factorial(k).scale(&c);
        }
        assert_eq!(sum, LaurentPoly::x().pow(n), "n = {n}");
    }
}

#[test]
fn stirling_matrices_are_inverse() {
    for n in 0..=12 {
        for m in 0..=12 {
            let mut acc = Rational::zero();
            // Both tables are lower triangular.
            for k in m..=n {
                acc += stirling2(n, k).unwrap() * stirling1(k, m).unwrap();
            }
            let expected = if n == m { Rational::one() } else { Rational::zero() };
            assert_eq!(acc, expected, "({n}, {m})");
        }
    }
}

/// Direct product expansion of `x (x - a) ... (x - (k-1) a)`.
fn falling_by_product(k: u32) -> LaurentPoly {
    let x = LaurentPoly::x();
    (0..k).fold(LaurentPoly::one(1), |acc, j| {
        let shift = LaurentPoly::constant(1, SpacingScalar::a().scale(&Rational::from_integer(j.into())));
        &acc * &(&x - &shift)
    })
}

#[test]
fn falling_factorial_oracle() {
    for k in 0..=10 {
        assert_eq!(falling_factorial(k), falling_by_product(k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorial_round_trip(coeffs in prop::collection::vec(scalar(), 1..=12)) {
        let p = factorial_to_monomial(&coeffs);
        let back = monomial_to_factorial(&p, None).unwrap();
        let mut trimmed = coeffs.clone();
        while trimmed.len() > 1 && trimmed.last().is_some_and(SpacingScalar::is_zero) {
            trimmed.pop();
        }
        let mut got = back;
        while got.len() > 1 && got.last().is_some_and(SpacingScalar::is_zero) {
            got.pop();
        }
        if trimmed.iter().all(SpacingScalar::is_zero) {
            prop_assert!(got.iter().all(SpacingScalar::is_zero));
        } else {
            prop_assert_eq!(got, trimmed);
        }
    }

    #[test]
    fn rational_field_axioms(x in small_rational(), y in small_rational(), z in small_rational()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }

    #[test]
    fn scalar_ring_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn poly_ring_axioms(p in poly(2, 3), q in poly(2, 3), r in poly(2, 3)) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &LaurentPoly::one(2), p.clone());
    }

    #[test]
    fn json_round_trip(p in poly(3, 4)) {
        let s = p.to_canonical_json();
        prop_assert_eq!(LaurentPoly::from_json_str(&s).unwrap(), p);
    }
}
