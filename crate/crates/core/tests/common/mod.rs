#![allow(dead_code)]

use proptest::prelude::*;
use umbral_core::exact::{rat, LaurentPoly, Rational, SpacingScalar};
use umbral_core::operator::{DeltaKind, NormalOrderedOp, ShiftInvariantOp};

pub fn a() -> SpacingScalar {
    SpacingScalar::a()
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// A few terms `c a^k` with `k` in `-1..=2`.
pub fn scalar() -> impl Strategy<Value = SpacingScalar> {
    prop::collection::vec((-1i32..=2, small_rational()), 0..3).prop_map(SpacingScalar::from_terms)
}

/// Coefficients free of negative powers of `a`.
pub fn regular_scalar() -> impl Strategy<Value = SpacingScalar> {
    prop::collection::vec((0i32..=2, small_rational()), 0..3).prop_map(SpacingScalar::from_terms)
}

pub fn poly(dim: usize, degree: u32) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(0..=degree, dim), scalar()), 0..5).prop_map(move |terms| {
        let terms = terms.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= degree);
        LaurentPoly::from_terms(dim, terms).expect("dimensions agree")
    })
}

pub fn upoly(degree: u32) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(regular_scalar(), 0..=degree as usize + 1).prop_map(LaurentPoly::from_coeffs)
}

pub fn kind() -> impl Strategy<Value = DeltaKind> {
    prop::sample::select(DeltaKind::ALL.to_vec())
}

pub fn delta(kind: DeltaKind) -> ShiftInvariantOp {
    ShiftInvariantOp::make_delta(kind, a()).expect("valid delta")
}

/// Finite polynomial in `D` with `order <= max_order`.
pub fn finite_series(max_order: u32) -> impl Strategy<Value = ShiftInvariantOp> {
    prop::collection::vec(regular_scalar(), 0..=max_order as usize + 1).prop_map(|cs| {
        ShiftInvariantOp::finite(
            1,
            cs.into_iter().enumerate().map(|(k, c)| (vec![k as u32], c)),
            "f",
        )
    })
}

/// Finite series, delta operators, shifts and their sums and products.
pub fn series() -> impl Strategy<Value = ShiftInvariantOp> {
    let leaf = prop_oneof![
        finite_series(3),
        kind().prop_map(delta),
        (-2i64..=2).prop_map(|c| ShiftInvariantOp::shift_op(SpacingScalar::monomial(rat(c, 1), 1))),
    ];
    (leaf.clone(), leaf, 0u8..3).prop_map(|(f, g, how)| match how {
        0 => f,
        1 => f.add(&g),
        _ => f.mul(&g),
    })
}

/// `sum x^k f_k(D)` with `k <= 3` and finite `f_k` of order `<= 4`.
pub fn normal_op() -> impl Strategy<Value = NormalOrderedOp> {
    prop::collection::vec((0u32..=3, finite_series(4)), 1..4).prop_map(|terms| {
        terms.into_iter().fold(NormalOrderedOp::zero(1), |acc, (k, f)| {
            acc.add(&NormalOrderedOp::term(vec![k], f))
        })
    })
}
