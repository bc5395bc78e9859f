use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::poly::LaurentPoly;
use super::rational::Rational;
use super::scalar::SpacingScalar;
use crate::{Error, Result};

pub const DEFAULT_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StirlingKind {
    /// Signed numbers of the first kind, `x^(n) = sum_k s(n,k) a^(n-k) x^k`.
    FirstSigned,
    /// Numbers of the second kind, `x^n = sum_k S(n,k) a^(n-k) x^(k)`.
    Second,
}

/// Dense lower-triangular table `values[n][k]`, `0 <= k <= n <= cap`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    kind: StirlingKind,
    values: Vec<Vec<Rational>>,
}

impl StirlingTable {
    pub fn new(kind: StirlingKind, cap: usize) -> Self {
        let mut values: Vec<Vec<Rational>> = Vec::with_capacity(cap + 1);
        values.push(vec![Rational::one()]);
        for n in 1..=cap {
            let prev = &values[n - 1];
            let at = |k: usize| prev.get(k).cloned().unwrap_or_else(Rational::zero);
            let mut row = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let below = if k == 0 { Rational::zero() } else { at(k - 1) };
                let v = match kind {
                    StirlingKind::Second => at(k) * Rational::from_integer(k.into()) + below,
                    StirlingKind::FirstSigned => below - at(k) * Rational::from_integer((n - 1).into()),
                };
                row.push(v);
            }
            values.push(row);
        }
        Self { kind, values }
    }

    pub fn kind(&self) -> StirlingKind {
        self.kind
    }

    pub fn cap(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Result<Rational> {
        if k > n {
            return Err(Error::Domain(format!("Stirling index k = {k} exceeds n = {n}")));
        }
        if n > self.cap() {
            return Err(Error::Domain(format!(
                "Stirling index n = {n} exceeds table cap {}",
                self.cap()
            )));
        }
        Ok(self.values[n][k].clone())
    }

    pub fn row(&self, n: usize) -> Option<&[Rational]> {
        self.values.get(n).map(Vec::as_slice)
    }
}

fn shared(kind: StirlingKind) -> &'static StirlingTable {
    static FIRST: OnceLock<StirlingTable> = OnceLock::new();
    static SECOND: OnceLock<StirlingTable> = OnceLock::new();
    let cell = match kind {
        StirlingKind::FirstSigned => &FIRST,
        StirlingKind::Second => &SECOND,
    };
    cell.get_or_init(|| StirlingTable::new(kind, DEFAULT_CAP))
}

fn lookup(kind: StirlingKind, n: usize, k: usize) -> Result<Rational> {
    if k > n {
        return Err(Error::Domain(format!("Stirling index k = {k} exceeds n = {n}")));
    }
    if n <= DEFAULT_CAP {
        shared(kind).get(n, k)
    } else {
        StirlingTable::new(kind, n).get(n, k)
    }
}

/// Stirling number of the second kind `S(n, k)`.
pub fn stirling2(n: usize, k: usize) -> Result<Rational> {
    lookup(StirlingKind::Second, n, k)
}

/// Signed Stirling number of the first kind `s(n, k)`.
pub fn stirling1(n: usize, k: usize) -> Result<Rational> {
    lookup(StirlingKind::FirstSigned, n, k)
}

/// `x (x - a) ... (x - (k-1) a)` in the symbol `a`.
pub fn falling_factorial(k: u32) -> LaurentPoly {
    falling_factorial_with(1, 0, &SpacingScalar::a(), k)
}

/// `x_i (x_i - h) ... (x_i - (k-1) h)` in dimension `dim`.
pub fn falling_factorial_with(dim: usize, i: usize, h: &SpacingScalar, k: u32) -> LaurentPoly {
    let x = LaurentPoly::var(dim, i);
    let mut acc = LaurentPoly::one(dim);
    for j in 0..k {
        let shift = LaurentPoly::constant(dim, h.scale(&Rational::from_integer(j.into())));
        acc = &acc * &(&x - &shift);
    }
    acc
}

/// Coefficients `F` with `p = sum_k F_k x^(k)`.
///
/// A multivariate `p` needs `coord`, and must depend on that coordinate only.
pub fn monomial_to_factorial(p: &LaurentPoly, coord: Option<usize>) -> Result<Vec<SpacingScalar>> {
    monomial_to_factorial_with(p, coord, &SpacingScalar::a())
}

pub fn monomial_to_factorial_with(
    p: &LaurentPoly,
    coord: Option<usize>,
    h: &SpacingScalar,
) -> Result<Vec<SpacingScalar>> {
    let i = match (coord, p.dim()) {
        (Some(i), _) => i,
        (None, 1) => 0,
        (None, d) => {
            return Err(Error::Domain(format!(
                "dimension {d} input needs a designated coordinate"
            )))
        }
    };
    let coeffs = p.univariate_coeffs(i)?;
    let mut out = vec![SpacingScalar::zero(); coeffs.len()];
    for (n, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (k, slot) in out.iter_mut().enumerate().take(n + 1) {
            let s = stirling2(n, k)?;
            *slot += &(c * &h.pow((n - k) as u32)).scale(&s);
        }
    }
    trim(&mut out);
    Ok(out)
}

/// Inverse of [`monomial_to_factorial`], univariate.
pub fn factorial_to_monomial(f: &[SpacingScalar]) -> LaurentPoly {
    factorial_to_monomial_with(f, &SpacingScalar::a())
}

pub fn factorial_to_monomial_with(f: &[SpacingScalar], h: &SpacingScalar) -> LaurentPoly {
    let mut coeffs = vec![SpacingScalar::zero(); f.len()];
    for (n, c) in f.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (k, slot) in coeffs.iter_mut().enumerate().take(n + 1) {
            let s = stirling1(n, k).expect("k <= n");
            *slot += &(c * &h.pow((n - k) as u32)).scale(&s);
        }
    }
    LaurentPoly::from_coeffs(coeffs)
}

fn trim(v: &mut Vec<SpacingScalar>) {
    while v.len() > 1 && v.last().is_some_and(SpacingScalar::is_zero) {
        v.pop();
    }
    if v.is_empty() {
        v.push(SpacingScalar::zero());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn a() -> SpacingScalar {
        SpacingScalar::a()
    }

    #[test]
    fn second_kind_values() {
        for n in 0..10 {
            assert_eq!(stirling2(n, n).unwrap(), int(1));
        }
        assert_eq!(stirling2(3, 0).unwrap(), int(0));
        assert_eq!(stirling2(4, 2).unwrap(), int(7));
        assert!(stirling2(2, 3).is_err());
    }

    #[test]
    fn first_kind_values() {
        assert_eq!(stirling1(2, 1).unwrap(), int(-1));
        assert_eq!(stirling1(3, 2).unwrap(), int(-3));
        assert_eq!(stirling1(3, 1).unwrap(), int(2));
        assert!(stirling1(1, 2).is_err());
    }

    #[test]
    fn beyond_cap_still_answers() {
        let big = stirling2(70, 69).unwrap();
        // S(n, n-1) = C(n, 2)
        assert_eq!(big, int(70 * 69 / 2));
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(0), LaurentPoly::one(1));
        let x = LaurentPoly::x();
        let two = &x.pow(2) - &x.scale(&a());
        assert_eq!(falling_factorial(2), two);
        let three =
            &(&x.pow(3) - &x.pow(2).scale(&a().scale(&int(3)))) + &x.scale(&a().pow(2).scale(&int(2)));
        assert_eq!(falling_factorial(3), three);
    }

    #[test]
    fn conversions() {
        let x = LaurentPoly::x();
        assert_eq!(
            monomial_to_factorial(&x.pow(2), None).unwrap(),
            vec![SpacingScalar::zero(), a(), SpacingScalar::one()]
        );
        assert_eq!(
            monomial_to_factorial(&x.pow(3), None).unwrap(),
            vec![
                SpacingScalar::zero(),
                a().pow(2),
                a().scale(&int(3)),
                SpacingScalar::one()
            ]
        );
        assert_eq!(
            monomial_to_factorial(&LaurentPoly::one(1), None).unwrap(),
            vec![SpacingScalar::one()]
        );
        let f = [
            SpacingScalar::zero(),
            SpacingScalar::one(),
            SpacingScalar::zero(),
            SpacingScalar::one(),
        ];
        let expected = &(&x.pow(3) - &x.pow(2).scale(&a().scale(&int(3))))
            + &x.scale(&(&SpacingScalar::one() + &a().pow(2).scale(&int(2))));
        assert_eq!(factorial_to_monomial(&f), expected);
        assert_eq!(
            factorial_to_monomial(&[SpacingScalar::one()]),
            LaurentPoly::one(1)
        );
    }

    #[test]
    fn multivariate_needs_coordinate() {
        let p = LaurentPoly::var(2, 1).pow(2);
        assert!(matches!(monomial_to_factorial(&p, None), Err(Error::Domain(_))));
        assert_eq!(monomial_to_factorial(&p, Some(1)).unwrap().len(), 3);
        assert!(monomial_to_factorial(&p, Some(0)).is_err());
    }
}
