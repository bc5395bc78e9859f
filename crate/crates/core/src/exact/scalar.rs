use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use crate::{Error, Result};

/// Laurent polynomial in the spacing symbol `a` with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// Laurent polynomials.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SpacingScalar {
    terms: BTreeMap<i32, Rational>,
}

impl SpacingScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(int(n))
    }

    /// The spacing symbol `a` itself.
    pub fn a() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, power: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(power, c);
        }
        Self { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (i32, Rational)>) -> Self {
        let mut s = Self::zero();
        for (p, c) in iter {
            s.add_term(p, c);
        }
        s
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> + '_ {
        self.terms.iter().map(|(p, c)| (*p, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(One::is_one)
    }

    /// Coefficient of `a^power`.
    pub fn coeff(&self, power: i32) -> Rational {
        self.terms.get(&power).cloned().unwrap_or_else(Rational::zero)
    }

    /// The `a^0` part, i.e. the `a -> 0` limit when no negative powers occur.
    pub fn constant_part(&self) -> Rational {
        self.coeff(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&p| p == 0)
    }

    /// Returns `(c, p)` when the scalar is the single term `c a^p`.
    pub fn as_monomial(&self) -> Option<(&Rational, i32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(p, c)| (c, *p))
        } else {
            None
        }
    }

    fn add_term(&mut self, power: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(power).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(p, v)| (*p, v * c)).collect(),
        }
    }

    pub fn shift_power(&self, by: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(p, v)| (p + by, v.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse; only monomials `c a^p` are units of the ring.
    pub fn inverse(&self) -> Result<Self> {
        match self.as_monomial() {
            Some((c, p)) => Ok(Self::monomial(c.recip(), -p)),
            None if self.is_zero() => Err(Error::NotInvertible("zero scalar".into())),
            None => Err(Error::NotInvertible(format!("{self} is not a monomial in a"))),
        }
    }

    /// Substitutes a numeric value for `a`.
    pub fn eval(&self, a: &Rational) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (&p, c) in &self.terms {
            if p < 0 && a.is_zero() {
                return Err(Error::Domain(format!("{self} is singular at a = 0")));
            }
            acc += c * pow_i(a, p);
        }
        Ok(acc)
    }
}

fn pow_i(a: &Rational, p: i32) -> Rational {
    let base = if p < 0 { a.recip() } else { a.clone() };
    let mut acc = Rational::one();
    for _ in 0..p.unsigned_abs() {
        acc *= &base;
    }
    acc
}

impl From<Rational> for SpacingScalar {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for SpacingScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a SpacingScalar> for &'a SpacingScalar {
    type Output = SpacingScalar;
    fn add(self, rhs: &SpacingScalar) -> SpacingScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for SpacingScalar {
    type Output = SpacingScalar;
    fn add(mut self, rhs: SpacingScalar) -> SpacingScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&SpacingScalar> for SpacingScalar {
    fn add_assign(&mut self, rhs: &SpacingScalar) {
        for (p, c) in &rhs.terms {
            self.add_term(*p, c.clone());
        }
    }
}

impl SubAssign<&SpacingScalar> for SpacingScalar {
    fn sub_assign(&mut self, rhs: &SpacingScalar) {
        for (p, c) in &rhs.terms {
            self.add_term(*p, -c.clone());
        }
    }
}

impl<'a> Sub<&'a SpacingScalar> for &'a SpacingScalar {
    type Output = SpacingScalar;
    fn sub(self, rhs: &SpacingScalar) -> SpacingScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for SpacingScalar {
    type Output = SpacingScalar;
    fn sub(mut self, rhs: SpacingScalar) -> SpacingScalar {
        self -= &rhs;
        self
    }
}

impl<'a> Mul<&'a SpacingScalar> for &'a SpacingScalar {
    type Output = SpacingScalar;
    fn mul(self, rhs: &SpacingScalar) -> SpacingScalar {
        let mut out = SpacingScalar::zero();
        for (p, c) in &self.terms {
            for (q, d) in &rhs.terms {
                out.add_term(p + q, c * d);
            }
        }
        out
    }
}

impl Mul for SpacingScalar {
    type Output = SpacingScalar;
    fn mul(self, rhs: SpacingScalar) -> SpacingScalar {
        &self * &rhs
    }
}

impl Neg for SpacingScalar {
    type Output = SpacingScalar;
    fn neg(self) -> SpacingScalar {
        Self {
            terms: self.terms.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl Neg for &SpacingScalar {
    type Output = SpacingScalar;
    fn neg(self) -> SpacingScalar {
        -self.clone()
    }
}

impl fmt::Display for SpacingScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest power first.
        for (i, (p, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let unit = mag.is_one();
            match p {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if *p == 1 {
                        write!(f, "a")?;
                    } else {
                        write!(f, "a^{p}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SpacingScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpacingScalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn laurent_arithmetic() {
        let half_over_a = SpacingScalar::monomial(rat(1, 2), -1);
        let two_a = SpacingScalar::monomial(int(2), 1);
        assert!((&half_over_a * &two_a).is_one());
        let s = &SpacingScalar::one() + &SpacingScalar::a();
        let d = &s - &s;
        assert!(d.is_zero());
        assert_eq!(s.pow(2).coeff(1), int(2));
    }

    #[test]
    fn inverse_only_for_monomials() {
        assert!(SpacingScalar::monomial(rat(3, 2), 2).inverse().is_ok());
        let s = &SpacingScalar::one() + &SpacingScalar::a();
        assert!(matches!(s.inverse(), Err(Error::NotInvertible(_))));
        assert!(SpacingScalar::zero().inverse().is_err());
    }

    #[test]
    fn evaluation() {
        let s = SpacingScalar::from_terms([(2, rat(1, 6)), (-1, int(1))]);
        assert_eq!(s.eval(&int(2)).unwrap(), rat(2, 3) + rat(1, 2));
        assert!(s.eval(&int(0)).is_err());
    }

    #[test]
    fn display() {
        let s = SpacingScalar::from_terms([(2, rat(-1, 2)), (0, int(1))]);
        assert_eq!(s.to_string(), "-1/2*a^2 + 1");
    }
}
