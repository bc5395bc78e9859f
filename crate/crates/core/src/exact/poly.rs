use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{binomial, Rational};
use super::scalar::SpacingScalar;
use crate::{Error, Result};

/// Polynomial in the lattice coordinates `x_1..x_n` with [`SpacingScalar`]
/// coefficients.
///
/// Terms are keyed by exponent vectors in lexicographic order and zero
/// coefficients are dropped, so `==` is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, SpacingScalar>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, SpacingScalar::one())
    }

    pub fn constant(dim: usize, c: SpacingScalar) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    /// The coordinate `x_i` (zero-based).
    pub fn var(dim: usize, i: usize) -> Self {
        assert!(i < dim, "coordinate {i} out of range for dimension {dim}");
        let mut exp = vec![0; dim];
        exp[i] = 1;
        Self::monomial(exp, SpacingScalar::one())
    }

    /// The univariate polynomial `x`.
    pub fn x() -> Self {
        Self::var(1, 0)
    }

    pub fn monomial(exp: Vec<u32>, c: SpacingScalar) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(dim: usize, iter: impl IntoIterator<Item = (Vec<u32>, SpacingScalar)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (exp, c) in iter {
            if exp.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: exp.len(),
                });
            }
            p.add_term(exp, c);
        }
        Ok(p)
    }

    /// Univariate polynomial from coefficients of `x^0, x^1, ...`.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = SpacingScalar>) -> Self {
        let mut p = Self::zero(1);
        for (k, c) in coeffs.into_iter().enumerate() {
            p.add_term(vec![k as u32], c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &SpacingScalar)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> SpacingScalar {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub(crate) fn add_term(&mut self, exp: Vec<u32>, c: SpacingScalar) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exp.len(), self.dim);
        match self.terms.get_mut(&exp) {
            Some(slot) => {
                *slot += &c;
                if slot.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "polynomial dimension mismatch ({} vs {})",
            self.dim, other.dim
        );
    }

    pub fn scale(&self, c: &SpacingScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = Self::zero(self.dim);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&SpacingScalar::constant(c.clone()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplies by the coordinate monomial `x^exp`.
    pub fn mul_monomial(&self, exp: &[u32]) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let sum: Vec<u32> = e.iter().zip(exp).map(|(a, b)| a + b).collect();
            out.add_term(sum, c.clone());
        }
        out
    }

    /// `d/dx_i`.
    pub fn derivative(&self, i: usize) -> Self {
        self.derivative_n(i, 1)
    }

    /// `(d/dx_i)^n`.
    pub fn derivative_n(&self, i: usize, n: u32) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] < n {
                continue;
            }
            let mut f = Rational::one();
            for j in 0..n {
                f *= Rational::from_integer((e[i] - j).into());
            }
            let mut ne = e.clone();
            ne[i] -= n;
            out.add_term(ne, c.scale(&f));
        }
        out
    }

    /// Replaces `x_i` by `x_i + c`.
    pub fn translate(&self, i: usize, c: &SpacingScalar) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, v) in &self.terms {
            let n = e[i];
            let mut cpow = SpacingScalar::one();
            for j in 0..=n {
                let mut ne = e.clone();
                ne[i] = n - j;
                let b = Rational::from_integer(binomial(n, j));
                out.add_term(ne, (v * &cpow).scale(&b));
                cpow = &cpow * c;
            }
        }
        out
    }

    /// Replaces `x_i` by the polynomial `q` (same dimension).
    pub fn substitute(&self, i: usize, q: &LaurentPoly) -> Self {
        self.check_dim(q);
        let mut out = Self::zero(self.dim);
        let mut powers: Vec<LaurentPoly> = vec![Self::one(self.dim)];
        for (e, v) in &self.terms {
            while powers.len() <= e[i] as usize {
                let next = powers.last().expect("non-empty") * q;
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[i] = 0;
            let part = powers[e[i] as usize].mul_monomial(&rest).scale(v);
            out = &out + &part;
        }
        out
    }

    /// Sets `x_i = value`, keeping the dimension.
    pub fn set_coordinate(&self, i: usize, value: &SpacingScalar) -> Self {
        self.substitute(i, &Self::constant(self.dim, value.clone()))
    }

    /// Substitutes a numeric spacing for the symbol `a` in every coefficient.
    pub fn eval_spacing(&self, a: &Rational) -> Result<Self> {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), SpacingScalar::constant(c.eval(a)?));
        }
        Ok(out)
    }

    /// Evaluates at a point, with coordinates given as spacing scalars.
    pub fn eval_symbolic(&self, point: &[SpacingScalar]) -> Result<SpacingScalar> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: point.len(),
            });
        }
        let mut acc = SpacingScalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t = &t * &x.pow(k);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Evaluates at a numeric point with numeric spacing `a`.
    pub fn eval(&self, point: &[Rational], a: &Rational) -> Result<Rational> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.eval(a)?;
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Re-embeds into dimension `dim`, sending coordinate `j` to `map[j]`.
    pub fn embed(&self, dim: usize, map: &[usize]) -> Result<Self> {
        if map.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: map.len(),
            });
        }
        if map.iter().any(|&t| t >= dim) {
            return Err(Error::Domain(format!(
                "embedding target out of range for dimension {dim}"
            )));
        }
        let mut out = Self::zero(dim);
        for (e, c) in &self.terms {
            let mut ne = vec![0; dim];
            for (j, &k) in e.iter().enumerate() {
                ne[map[j]] += k;
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Coefficients of `x_i^0, x_i^1, ...` when the polynomial depends on `x_i` only.
    pub fn univariate_coeffs(&self, i: usize) -> Result<Vec<SpacingScalar>> {
        if i >= self.dim {
            return Err(Error::Domain(format!(
                "coordinate {i} out of range for dimension {}",
                self.dim
            )));
        }
        let deg = self.degree_in(i).unwrap_or(0) as usize;
        let mut out = vec![SpacingScalar::zero(); deg + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k != 0) {
                return Err(Error::Domain(format!(
                    "polynomial depends on coordinates other than x{}",
                    i + 1
                )));
            }
            out[e[i] as usize] = c.clone();
        }
        Ok(out)
    }

    /// True when every coefficient is free of the symbol `a`.
    pub fn is_spacing_free(&self) -> bool {
        self.terms.values().all(SpacingScalar::is_constant)
    }

    /// The `a -> 0` limit; errors when a coefficient has negative powers of `a`.
    pub fn continuum_limit(&self) -> Result<Self> {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if c.terms().any(|(p, _)| p < 0) {
                return Err(Error::Domain(format!("coefficient {c} is singular at a = 0")));
            }
            out.add_term(e.clone(), SpacingScalar::constant(c.constant_part()));
        }
        Ok(out)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_dim(rhs);
        let mut out = LaurentPoly::zero(self.dim);
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                let sum: Vec<u32> = e.iter().zip(f).map(|(x, y)| x + y).collect();
                out.add_term(sum, c * d);
            }
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

pub(crate) fn var_name(dim: usize, i: usize) -> String {
    if dim == 1 {
        "x".to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Descending total degree, then descending lexicographic exponent.
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    let v = var_name(self.dim, j);
                    if k == 1 {
                        v
                    } else {
                        format!("{v}^{k}")
                    }
                })
                .collect();
            let mono = mono.join("*");
            let (negative, body) = match c.as_monomial() {
                Some((r, _)) if r < &Rational::zero() => (true, (-c).to_string()),
                Some(_) => (false, c.to_string()),
                None => (false, format!("({c})")),
            };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            if mono.is_empty() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{body}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]({self})", self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn a() -> SpacingScalar {
        SpacingScalar::a()
    }

    #[test]
    fn ring_operations() {
        let x = LaurentPoly::x();
        let p = &x + &LaurentPoly::constant(1, a());
        let sq = p.pow(2);
        assert_eq!(sq.coeff(&[1]), a().scale(&int(2)));
        assert_eq!(sq.coeff(&[0]), a().pow(2));
        assert!((&sq - &sq).is_zero());
        assert_eq!(sq.degree(), Some(2));
        assert_eq!(LaurentPoly::zero(1).degree(), None);
    }

    #[test]
    fn translate_matches_substitute() {
        let x = LaurentPoly::x();
        let p = x.pow(3);
        let shifted = p.translate(0, &a());
        let sub = p.substitute(0, &(&x + &LaurentPoly::constant(1, a())));
        assert_eq!(shifted, sub);
    }

    #[test]
    fn derivatives() {
        let p = LaurentPoly::x().pow(4);
        assert_eq!(
            p.derivative_n(0, 2),
            LaurentPoly::x().pow(2).scale_rational(&int(12))
        );
        assert!(p.derivative_n(0, 5).is_zero());
    }

    #[test]
    fn evaluation_and_embedding() {
        let p = &LaurentPoly::x().pow(2) - &LaurentPoly::x().scale(&a());
        assert_eq!(p.eval(&[int(3)], &int(1)).unwrap(), int(6));
        let q = p.embed(3, &[2]).unwrap();
        assert_eq!(q.coeff(&[0, 0, 2]), SpacingScalar::one());
        assert!(q.univariate_coeffs(0).is_err());
        assert_eq!(q.univariate_coeffs(2).unwrap().len(), 3);
        let half = p.eval_spacing(&rat(1, 2)).unwrap();
        assert!(half.is_spacing_free());
    }

    #[test]
    fn display_orders_by_degree() {
        let p = &LaurentPoly::x().pow(3) - &LaurentPoly::x().scale(&a().pow(2));
        assert_eq!(p.to_string(), "x^3 - a^2*x");
        let q = LaurentPoly::x().scale(&(&SpacingScalar::one() + &a().pow(2).scale(&int(2))));
        assert_eq!(q.to_string(), "(2*a^2 + 1)*x");
    }
}
