use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::series::{indices_up_to, sub_indices, ShiftInvariantOp};
use crate::exact::poly::var_name;
use crate::exact::rational::{binomial, rat, Rational};
use crate::exact::{LaurentPoly, SpacingScalar};
use crate::{Error, Result};

/// `sum_m x^m f_m(D)`: coordinate monomials always stand left of the
/// shift-invariant parts.
#[derive(Clone)]
pub struct NormalOrderedOp {
    dim: usize,
    terms: BTreeMap<Vec<u32>, ShiftInvariantOp>,
}

/// A factor in an operator word, see [`NormalOrderedOp::from_word`].
#[derive(Clone, Debug)]
pub enum Letter {
    /// Multiplication by the coordinate `x_i`.
    X(usize),
    Series(ShiftInvariantOp),
}

impl NormalOrderedOp {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_series(ShiftInvariantOp::identity(dim))
    }

    pub fn from_series(f: ShiftInvariantOp) -> Self {
        let dim = f.dim();
        Self::term(vec![0; dim], f)
    }

    pub fn scalar(dim: usize, c: SpacingScalar) -> Self {
        Self::from_series(ShiftInvariantOp::constant(dim, c))
    }

    /// Multiplication by `x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::term(e, ShiftInvariantOp::identity(dim))
    }

    pub fn term(exp: Vec<u32>, f: ShiftInvariantOp) -> Self {
        assert_eq!(exp.len(), f.dim(), "term dimension mismatch");
        let mut out = Self::zero(f.dim());
        out.add_term(exp, f);
        out
    }

    /// Product of a word of letters, normal ordered.
    pub fn from_word(dim: usize, word: &[Letter]) -> Self {
        let mut acc = Self::identity(dim);
        for l in word {
            let factor = match l {
                Letter::X(i) => Self::coordinate(dim, *i),
                Letter::Series(f) => Self::from_series(f.clone()),
            };
            acc = acc.mul(&factor);
        }
        acc
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &ShiftInvariantOp)> + '_ {
        self.terms.iter().map(|(e, f)| (e.as_slice(), f))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn series_at(&self, exp: &[u32]) -> Option<&ShiftInvariantOp> {
        self.terms.get(exp)
    }

    /// Highest total coordinate degree among the terms.
    pub fn coordinate_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, exp: Vec<u32>, f: ShiftInvariantOp) {
        if f.is_structurally_zero() {
            return;
        }
        let merged = match self.terms.remove(&exp) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !merged.is_structurally_zero() {
            self.terms.insert(exp, merged);
        }
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "operator dimension mismatch ({} vs {})",
            self.dim, other.dim
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_dim(other);
        let mut out = self.clone();
        for (e, f) in &other.terms {
            out.add_term(e.clone(), f.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &SpacingScalar) -> Self {
        let mut out = Self::zero(self.dim);
        if c.is_zero() {
            return out;
        }
        for (e, f) in &self.terms {
            out.add_term(e.clone(), f.scale(c));
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&SpacingScalar::constant(c.clone()))
    }

    pub fn neg(&self) -> Self {
        self.scale(&SpacingScalar::from_int(-1))
    }

    /// Normal-ordered product, using `f(D) x^n = sum_j C(n, j) x^(n-j) f^(j)(D)`
    /// where `f^(j)` is the iterated Pincherle derivative.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_dim(other);
        let mut out = Self::zero(self.dim);
        for (m, f) in &self.terms {
            for (n, g) in &other.terms {
                let bounds: Vec<u32> = n
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| if f.support().contains(&i) { k } else { 0 })
                    .collect();
                for j in sub_indices(&bounds) {
                    let mut fj = f.clone();
                    let mut weight = Rational::one();
                    for (i, &ji) in j.iter().enumerate() {
                        for _ in 0..ji {
                            fj = fj.pincherle_axis(i);
                        }
                        weight *= Rational::from_integer(binomial(n[i], ji));
                    }
                    if fj.is_structurally_zero() {
                        continue;
                    }
                    let exp: Vec<u32> = (0..self.dim).map(|i| m[i] + n[i] - j[i]).collect();
                    let series = fj.mul(g).scale(&SpacingScalar::constant(weight));
                    out.add_term(exp, series);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Re-multiplies every term `x^m * f` from its factors.
    pub fn renormalize(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, f) in &self.terms {
            let mut word = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                word.extend(std::iter::repeat_n(Letter::X(i), k as usize));
            }
            word.push(Letter::Series(f.clone()));
            out = out.add(&Self::from_word(self.dim, &word));
        }
        out
    }

    pub fn apply(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        let mut out = LaurentPoly::zero(self.dim);
        for (e, f) in &self.terms {
            let q = f.apply(p)?;
            out = &out + &q.mul_monomial(e);
        }
        Ok(out)
    }

    /// Term-wise series agreement up to the given `D` order.
    pub fn agrees_to(&self, other: &Self, order: u32) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let zero = ShiftInvariantOp::zero(self.dim);
        let keys: std::collections::BTreeSet<&Vec<u32>> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| {
            let a = self.terms.get(k).unwrap_or(&zero);
            let b = other.terms.get(k).unwrap_or(&zero);
            a.agrees_to(b, order)
        })
    }

    pub fn is_zero_to(&self, order: u32) -> bool {
        self.terms.values().all(|f| f.is_zero_to(order))
    }

    /// Drops terms whose series vanish up to `order`.
    pub fn prune(&self, order: u32) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(_, f)| !f.is_zero_to(order))
                .map(|(e, f)| (e.clone(), f.clone()))
                .collect(),
        }
    }

    /// Compares the actions on every monomial of total degree `<= degree`.
    pub fn agrees_on_monomials(&self, other: &Self, degree: u32) -> Result<bool> {
        for e in indices_up_to(self.dim, degree) {
            let p = LaurentPoly::monomial(e, SpacingScalar::one());
            if self.apply(&p)? != other.apply(&p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn annihilates_monomials(&self, degree: u32) -> Result<bool> {
        for e in indices_up_to(self.dim, degree) {
            let p = LaurentPoly::monomial(e, SpacingScalar::one());
            if !self.apply(&p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rewrites a continuum-form operator (in `y` and `D`) by sending
    /// `y_i -> xhat[i]` and `D_i -> q[i]`.
    ///
    /// Each series must be a polynomial in `D`; there is no meaning for a
    /// formal series of `Q` here.
    pub fn substitute(&self, q: &[ShiftInvariantOp], xhat: &[NormalOrderedOp]) -> Result<Self> {
        if q.len() != self.dim || xhat.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: q.len().min(xhat.len()),
            });
        }
        let target = q[0].dim();
        let q_ops: Vec<NormalOrderedOp> = q.iter().map(|s| Self::from_series(s.clone())).collect();
        let mut out = Self::zero(target);
        for (e, f) in &self.terms {
            let finite = f.as_finite().ok_or_else(|| {
                Error::Domain(format!(
                    "series `{}` is not a polynomial in D; cannot substitute",
                    f.label()
                ))
            })?;
            let mut left = Self::identity(target);
            for (i, &k) in e.iter().enumerate() {
                left = left.mul(&xhat[i].pow(k));
            }
            let mut right = Self::zero(target);
            for (d, c) in finite {
                let mut mono = Self::scalar(target, c.clone());
                for (i, &k) in d.iter().enumerate() {
                    mono = mono.mul(&q_ops[i].pow(k));
                }
                right = right.add(&mono);
            }
            out = out.add(&left.mul(&right));
        }
        Ok(out)
    }

    /// Renders as `x^m*[series] + ...`, truncating each series at `order`.
    pub fn render(&self, order: u32) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(e, f)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        let v = var_name(self.dim, i);
                        if k == 1 {
                            v
                        } else {
                            format!("{v}^{k}")
                        }
                    })
                    .collect();
                let series = f.render_series(order);
                if mono.is_empty() {
                    format!("[{series}]")
                } else {
                    format!("{}*[{series}]", mono.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for NormalOrderedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormalOrderedOp({})", self.render(4))
    }
}

/// `x Q'^{-1}` for a delta operator `Q` (acting on its own axis).
pub fn basic_xhat(q: &ShiftInvariantOp) -> Result<NormalOrderedOp> {
    let axis = q.delta_axis()?;
    let inv = q.pincherle_inverse()?;
    let mut e = vec![0; q.dim()];
    e[axis] = 1;
    Ok(NormalOrderedOp::term(e, inv))
}

/// `(x Q'^{-1} + Q'^{-1} x) / 2`, i.e. `x Q'^{-1} + (Q'^{-1})' / 2`.
pub fn symmetric_xhat(q: &ShiftInvariantOp) -> Result<NormalOrderedOp> {
    let axis = q.delta_axis()?;
    let inv = q.pincherle_inverse()?;
    let mut e = vec![0; q.dim()];
    e[axis] = 1;
    let half = SpacingScalar::constant(rat(1, 2));
    let corr = inv.pincherle_axis(axis).scale(&half);
    Ok(NormalOrderedOp::term(e, inv).add(&NormalOrderedOp::from_series(corr)))
}

/// Checks `[Q, xhat] = 1` structurally up to `order` and on all monomials
/// of degree `<= degree`.
pub fn check_ccr(q: &ShiftInvariantOp, xhat: &NormalOrderedOp, order: u32, degree: u32) -> Result<bool> {
    let c = NormalOrderedOp::from_series(q.clone()).commutator(xhat);
    let id = NormalOrderedOp::identity(q.dim());
    Ok(c.agrees_to(&id, order) && c.agrees_on_monomials(&id, degree)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::series::DeltaKind;

    fn a() -> SpacingScalar {
        SpacingScalar::a()
    }

    fn delta(kind: DeltaKind) -> ShiftInvariantOp {
        ShiftInvariantOp::make_delta(kind, a()).unwrap()
    }

    #[test]
    fn operators_are_shareable() {
        fn check<T: Send + Sync>() {}
        check::<NormalOrderedOp>();
        check::<ShiftInvariantOp>();
    }

    #[test]
    fn canonical_pair() {
        let d = NormalOrderedOp::from_series(ShiftInvariantOp::d(1, 0));
        let x = NormalOrderedOp::coordinate(1, 0);
        assert!(d.commutator(&x).agrees_to(&NormalOrderedOp::identity(1), 10));
        assert!(d.commutator(&d).is_zero_to(10));
    }

    #[test]
    fn ccr_for_all_kinds() {
        for k in DeltaKind::ALL {
            let q = delta(k);
            assert!(
                check_ccr(&q, &basic_xhat(&q).unwrap(), 10, 10).unwrap(),
                "basic {k}"
            );
            assert!(
                check_ccr(&q, &symmetric_xhat(&q).unwrap(), 10, 10).unwrap(),
                "symmetric {k}"
            );
        }
    }

    #[test]
    fn symmetric_xhat_examples() {
        let d = delta(DeltaKind::Derivative);
        assert!(symmetric_xhat(&d)
            .unwrap()
            .agrees_to(&NormalOrderedOp::coordinate(1, 0), 10));
        let fwd = symmetric_xhat(&delta(DeltaKind::Forward)).unwrap();
        let back = ShiftInvariantOp::shift_op(-a());
        let expected = NormalOrderedOp::term(vec![1], back.clone())
            .add(&NormalOrderedOp::from_series(back.scale(&a().scale(&rat(-1, 2)))));
        assert!(fwd.agrees_to(&expected, 10));
        let cen = symmetric_xhat(&delta(DeltaKind::Central)).unwrap();
        let s2 = cen.pow(2).apply(&LaurentPoly::one(1)).unwrap();
        let expected = &LaurentPoly::x().pow(2) - &LaurentPoly::constant(1, a().pow(2).scale(&rat(1, 2)));
        assert_eq!(s2, expected);
        assert!(symmetric_xhat(&ShiftInvariantOp::shift_op(a())).is_err());
    }

    #[test]
    fn renormalize_is_idempotent() {
        let q = delta(DeltaKind::Central);
        let op = symmetric_xhat(&q).unwrap().mul(&NormalOrderedOp::from_series(q));
        let once = op.renormalize();
        assert!(once.agrees_to(&op, 8));
        assert!(once.renormalize().agrees_to(&once, 8));
    }

    #[test]
    fn substitution() {
        let q = delta(DeltaKind::Forward);
        let xh = basic_xhat(&q).unwrap();
        let y_d = NormalOrderedOp::term(vec![1], ShiftInvariantOp::d(1, 0));
        let image = y_d
            .substitute(std::slice::from_ref(&q), std::slice::from_ref(&xh))
            .unwrap();
        let qop = NormalOrderedOp::from_series(q.clone());
        assert!(image.agrees_to(&xh.mul(&qop), 10));
        assert!(qop.commutator(&image).agrees_to(&qop, 10));
        let bad = NormalOrderedOp::from_series(q.clone());
        assert!(bad.substitute(&[q], &[xh]).is_err());
    }
}
