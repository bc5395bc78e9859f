use num_traits::Zero;

use super::sequence::PolySequence;
use super::transform::umbral_transform;
use crate::exact::rational::factorial;
use crate::exact::{falling_factorial_with, LaurentPoly, Rational, SpacingScalar};
use crate::Result;

/// Physicists' Hermite polynomial `H_n(y)`, generating function `exp(2ys - s^2)`.
pub fn hermite(n: usize) -> LaurentPoly {
    let y = LaurentPoly::x();
    let two_y = y.scale_rational(&Rational::from_integer(2.into()));
    let mut prev = LaurentPoly::one(1);
    if n == 0 {
        return prev;
    }
    let mut cur = two_y.clone();
    for k in 1..n {
        let next = &(&two_y * &cur) - &prev.scale_rational(&Rational::from_integer((2 * k).into()));
        prev = cur;
        cur = next;
    }
    cur
}

/// The umbral image of `H_n` under `seq`.
pub fn discrete_hermite(n: usize, seq: &PolySequence) -> Result<LaurentPoly> {
    umbral_transform(&hermite(n), seq)
}

/// `n!` times the `s^(n)` coefficient of the double-sum generating function,
/// in the forward falling factorials `x^(j)` with spacing `h`. With
/// `from_k = 1` the inner sum starts at `k = 1`; `from_k = 0`
/// keeps the `k = 0` term.
pub fn hermite_generating_oracle(n: usize, from_k: usize, h: &SpacingScalar) -> LaurentPoly {
    let mut out = LaurentPoly::zero(1);
    let nf = Rational::from_integer(factorial(n as u32));
    // l + k = n with 0 <= l - k, i.e. k <= n / 2.
    for k in from_k..=n / 2 {
        let l = n - k;
        let j = l - k;
        let mut c = Rational::from_integer(2.into()).pow(j as i32)
            / (Rational::from_integer(factorial(k as u32)) * Rational::from_integer(factorial(j as u32)));
        if k % 2 == 1 {
            c = -c;
        }
        c *= &nf;
        if !c.is_zero() {
            out = &out + &falling_factorial_with(1, 0, h, j as u32).scale_rational(&c);
        }
    }
    out
}
