use super::normal::NormalOrderedOp;
use crate::exact::{LaurentPoly, SpacingScalar};
use crate::Result;

/// `re + i*im` with real normal-ordered parts.
#[derive(Clone, Debug)]
pub struct ComplexOp {
    pub re: NormalOrderedOp,
    pub im: NormalOrderedOp,
}

/// Polynomial with Gaussian coefficients, stored as real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexPoly {
    pub re: LaurentPoly,
    pub im: LaurentPoly,
}

impl ComplexPoly {
    pub fn real(p: LaurentPoly) -> Self {
        let dim = p.dim();
        Self {
            re: p,
            im: LaurentPoly::zero(dim),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl ComplexOp {
    pub fn real(re: NormalOrderedOp) -> Self {
        let dim = re.dim();
        Self {
            re,
            im: NormalOrderedOp::zero(dim),
        }
    }

    pub fn imaginary(im: NormalOrderedOp) -> Self {
        let dim = im.dim();
        Self {
            re: NormalOrderedOp::zero(dim),
            im,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::real(NormalOrderedOp::zero(dim))
    }

    pub fn dim(&self) -> usize {
        self.re.dim()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn scale(&self, c: &SpacingScalar) -> Self {
        Self {
            re: self.re.scale(c),
            im: self.im.scale(c),
        }
    }

    /// Multiplication by `i`.
    pub fn times_i(&self) -> Self {
        Self {
            re: self.im.neg(),
            im: self.re.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn apply(&self, p: &ComplexPoly) -> Result<ComplexPoly> {
        let rr = self.re.apply(&p.re)?;
        let ii = self.im.apply(&p.im)?;
        let ri = self.re.apply(&p.im)?;
        let ir = self.im.apply(&p.re)?;
        Ok(ComplexPoly {
            re: &rr - &ii,
            im: &ri + &ir,
        })
    }

    pub fn apply_real(&self, p: &LaurentPoly) -> Result<ComplexPoly> {
        self.apply(&ComplexPoly::real(p.clone()))
    }

    pub fn agrees_to(&self, o: &Self, order: u32) -> bool {
        self.re.agrees_to(&o.re, order) && self.im.agrees_to(&o.im, order)
    }

    /// True when `self - o` annihilates every real monomial of degree `<= degree`.
    pub fn agrees_on_monomials(&self, o: &Self, degree: u32) -> Result<bool> {
        Ok(self.re.agrees_on_monomials(&o.re, degree)? && self.im.agrees_on_monomials(&o.im, degree)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::ShiftInvariantOp;

    #[test]
    fn i_squared_is_minus_one() {
        let one = ComplexOp::real(NormalOrderedOp::identity(1));
        let i = one.times_i();
        let sq = i.mul(&i);
        assert!(sq.agrees_to(&ComplexOp::real(NormalOrderedOp::identity(1).neg()), 4));
    }

    #[test]
    fn momentum_commutator() {
        // [x, -iD] = i
        let x = ComplexOp::real(NormalOrderedOp::coordinate(1, 0));
        let p = ComplexOp::imaginary(NormalOrderedOp::from_series(ShiftInvariantOp::d(1, 0)).neg());
        let c = x.commutator(&p);
        assert!(c.agrees_to(&ComplexOp::imaginary(NormalOrderedOp::identity(1)), 6));
        let out = c.apply_real(&LaurentPoly::x()).unwrap();
        assert_eq!(out.im, LaurentPoly::x());
        assert!(out.re.is_zero());
    }
}
