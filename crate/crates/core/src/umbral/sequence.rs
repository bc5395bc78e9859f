use std::sync::Mutex;

use crate::exact::rational::binomial;
use crate::exact::{LaurentPoly, Rational, SpacingScalar};
use crate::operator::{basic_xhat, symmetric_xhat, NormalOrderedOp, ShiftInvariantOp};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// `q_k = (x Q'^{-1})^k 1`.
    Basic,
    /// `s_k = xhat^k 1` with the symmetric `xhat`.
    Sheffer,
}

/// The polynomials `xhat^k 1`, generated lazily and cached.
pub struct PolySequence {
    delta: ShiftInvariantOp,
    xhat: NormalOrderedOp,
    flavor: Flavor,
    axis: usize,
    cache: Mutex<Vec<LaurentPoly>>,
}

impl Clone for PolySequence {
    fn clone(&self) -> Self {
        Self {
            delta: self.delta.clone(),
            xhat: self.xhat.clone(),
            flavor: self.flavor,
            axis: self.axis,
            cache: Mutex::new(self.cache.lock().expect("sequence cache").clone()),
        }
    }
}

impl std::fmt::Debug for PolySequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PolySequence")
            .field("delta", &self.delta.label())
            .field("flavor", &self.flavor)
            .field("cached", &self.cache.lock().expect("sequence cache").len())
            .finish()
    }
}

impl PolySequence {
    pub fn new(delta: ShiftInvariantOp, xhat: NormalOrderedOp, flavor: Flavor) -> Result<Self> {
        let axis = delta.delta_axis()?;
        if xhat.dim() != delta.dim() {
            return Err(Error::DimensionMismatch {
                expected: delta.dim(),
                got: xhat.dim(),
            });
        }
        let dim = delta.dim();
        Ok(Self {
            delta,
            xhat,
            flavor,
            axis,
            cache: Mutex::new(vec![LaurentPoly::one(dim)]),
        })
    }

    pub fn basic(delta: &ShiftInvariantOp) -> Result<Self> {
        Self::new(delta.clone(), basic_xhat(delta)?, Flavor::Basic)
    }

    pub fn sheffer(delta: &ShiftInvariantOp) -> Result<Self> {
        Self::new(delta.clone(), symmetric_xhat(delta)?, Flavor::Sheffer)
    }

    pub fn delta(&self) -> &ShiftInvariantOp {
        &self.delta
    }

    pub fn xhat(&self) -> &NormalOrderedOp {
        &self.xhat
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn dim(&self) -> usize {
        self.delta.dim()
    }

    /// The `k`-th polynomial.
    pub fn get(&self, k: usize) -> LaurentPoly {
        let mut last = {
            let cache = self.cache.lock().expect("sequence cache");
            if let Some(p) = cache.get(k) {
                return p.clone();
            }
            (cache.len() - 1, cache.last().expect("q_0 present").clone())
        };
        let mut fresh = Vec::new();
        while last.0 < k {
            let next = self
                .xhat
                .apply(&last.1)
                .expect("sequence and xhat share a dimension");
            last = (last.0 + 1, next.clone());
            fresh.push(next);
        }
        let mut cache = self.cache.lock().expect("sequence cache");
        let start = k + 1 - fresh.len();
        for (i, p) in fresh.into_iter().enumerate() {
            if cache.len() == start + i {
                cache.push(p);
            }
        }
        cache[k].clone()
    }

    pub fn polys(&self, k_max: usize) -> Vec<LaurentPoly> {
        (0..=k_max).map(|k| self.get(k)).collect()
    }

    /// Checks `p_0 = 1`, `Q p_k = k p_(k-1)` and, for basic sequences,
    /// `p_k(0) = 0` for `k > 0`.
    pub fn verify(&self, k_max: usize) -> Result<()> {
        let dim = self.dim();
        if self.get(0) != LaurentPoly::one(dim) {
            return Err(Error::IdentityFailed("p_0 != 1".into()));
        }
        for k in 1..=k_max {
            let pk = self.get(k);
            let lhs = self.delta.apply(&pk)?;
            let rhs = self.get(k - 1).scale_rational(&Rational::from_integer(k.into()));
            if lhs != rhs {
                return Err(Error::IdentityFailed(format!("Q p_{k} != {k} p_{}", k - 1)));
            }
            if self.flavor == Flavor::Basic && !value_at_origin(&pk).is_zero() {
                return Err(Error::IdentityFailed(format!("q_{k}(0) != 0")));
            }
        }
        Ok(())
    }

    /// Coefficients `c` with `p = sum_k c_k p_k`, for `p` depending on the
    /// sequence coordinate only.
    pub fn coordinates(&self, p: &LaurentPoly) -> Result<Vec<SpacingScalar>> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        let coeffs = p.univariate_coeffs(self.axis)?;
        let deg = coeffs.len() - 1;
        let mut rest = p.clone();
        let mut out = vec![SpacingScalar::zero(); deg + 1];
        for k in (0..=deg).rev() {
            let mut e = vec![0; self.dim()];
            e[self.axis] = k as u32;
            let c = rest.coeff(&e);
            if c.is_zero() {
                continue;
            }
            let qk = self.get(k);
            let lead = qk.coeff(&e).inverse()?;
            let ck = &c * &lead;
            rest = &rest - &qk.scale(&ck);
            out[k] = ck;
        }
        debug_assert!(rest.is_zero());
        Ok(out)
    }

    /// `sum_k c_k p_k`.
    pub fn combine(&self, coeffs: &[SpacingScalar]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.dim());
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.get(k).scale(c);
            }
        }
        out
    }
}

/// Value at the origin, i.e. the constant coefficient.
pub fn value_at_origin(p: &LaurentPoly) -> SpacingScalar {
    p.coeff(&vec![0; p.dim()])
}

pub fn basic_sequence(q: &ShiftInvariantOp, k_max: usize) -> Result<PolySequence> {
    let seq = PolySequence::basic(q)?;
    seq.verify(k_max)?;
    Ok(seq)
}

pub fn sheffer_sequence(q: &ShiftInvariantOp, k_max: usize) -> Result<PolySequence> {
    let seq = PolySequence::sheffer(q)?;
    seq.verify(k_max)?;
    Ok(seq)
}

/// Coefficients `C(n, k) s_k(0)` of `s_n = sum_k C(n, k) s_k(0) q_(n-k)`,
/// after checking the identity exactly.
pub fn sheffer_expand(s: &PolySequence, q: &PolySequence, n: usize) -> Result<Vec<SpacingScalar>> {
    if s.dim() != q.dim() || !s.delta().agrees_to(q.delta(), n as u32 + 4) {
        return Err(Error::Domain(
            "sequences belong to different delta operators".into(),
        ));
    }
    let coeffs: Vec<SpacingScalar> = (0..=n)
        .map(|k| {
            let b = Rational::from_integer(binomial(n as u32, k as u32));
            value_at_origin(&s.get(k)).scale(&b)
        })
        .collect();
    let mut sum = LaurentPoly::zero(s.dim());
    for (k, c) in coeffs.iter().enumerate() {
        sum = &sum + &q.get(n - k).scale(c);
    }
    if sum != s.get(n) {
        return Err(Error::IdentityFailed(format!(
            "Sheffer expansion fails at n = {n}"
        )));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::falling_factorial;
    use crate::exact::rational::{int, rat};
    use crate::operator::DeltaKind;

    fn a() -> SpacingScalar {
        SpacingScalar::a()
    }

    fn delta(kind: DeltaKind) -> ShiftInvariantOp {
        ShiftInvariantOp::make_delta(kind, a()).unwrap()
    }

    fn x() -> LaurentPoly {
        LaurentPoly::x()
    }

    fn c(s: SpacingScalar) -> LaurentPoly {
        LaurentPoly::constant(1, s)
    }

    #[test]
    fn basic_examples() {
        let d = basic_sequence(&delta(DeltaKind::Derivative), 6).unwrap();
        for k in 0..=6 {
            assert_eq!(d.get(k), x().pow(k as u32));
        }
        let f = basic_sequence(&delta(DeltaKind::Forward), 6).unwrap();
        for k in 0..=6 {
            assert_eq!(f.get(k), falling_factorial(k as u32));
        }
        let cen = basic_sequence(&delta(DeltaKind::Central), 3).unwrap();
        let q3 = &(&x() * &(&x() + &c(a()))) * &(&x() - &c(a()));
        assert_eq!(cen.get(3), q3);
        let lag = basic_sequence(&delta(DeltaKind::Laguerre), 3).unwrap();
        assert_eq!(lag.get(1), -x());
    }

    #[test]
    fn sheffer_examples() {
        let f = sheffer_sequence(&delta(DeltaKind::Forward), 6).unwrap();
        let s2 = &(&x() - &c(a().scale(&rat(1, 2)))) * &(&x() - &c(a().scale(&rat(3, 2))));
        assert_eq!(f.get(2), s2);
        let cen = sheffer_sequence(&delta(DeltaKind::Central), 6).unwrap();
        assert_eq!(cen.get(2), &x().pow(2) - &c(a().pow(2).scale(&rat(1, 2))));
        let half = a().scale(&rat(1, 2));
        let firsts = [
            (DeltaKind::Derivative, x()),
            (DeltaKind::Central, x()),
            (DeltaKind::Forward, &x() - &c(half.clone())),
            (DeltaKind::Backward, &x() + &c(half)),
            (DeltaKind::Laguerre, &LaurentPoly::one(1) - &x()),
        ];
        for (k, s1) in firsts {
            let s = sheffer_sequence(&delta(k), 2).unwrap();
            assert_eq!(s.get(0), LaurentPoly::one(1));
            assert_eq!(s.get(1), s1, "{k}");
        }
    }

    #[test]
    fn expansions() {
        let q = PolySequence::basic(&delta(DeltaKind::Central)).unwrap();
        let s = PolySequence::sheffer(&delta(DeltaKind::Central)).unwrap();
        let coeffs = sheffer_expand(&s, &q, 2).unwrap();
        assert_eq!(
            coeffs,
            vec![
                SpacingScalar::one(),
                SpacingScalar::zero(),
                a().pow(2).scale(&rat(-1, 2))
            ]
        );
        assert_eq!(sheffer_expand(&s, &q, 0).unwrap(), vec![SpacingScalar::one()]);
        let qf = PolySequence::basic(&delta(DeltaKind::Forward)).unwrap();
        let sf = PolySequence::sheffer(&delta(DeltaKind::Forward)).unwrap();
        let coeffs = sheffer_expand(&sf, &qf, 2).unwrap();
        // s_1(0) = -a/2, s_2(0) = 3a^2/4.
        assert_eq!(coeffs[1], a().scale(&int(-1)));
        assert_eq!(coeffs[2], a().pow(2).scale(&rat(3, 4)));
        assert!(sheffer_expand(&sf, &q, 2).is_err());
    }

    #[test]
    fn coordinates_round_trip() {
        let q = PolySequence::basic(&delta(DeltaKind::Laguerre)).unwrap();
        let p = &x().pow(3) + &c(a());
        let co = q.coordinates(&p).unwrap();
        assert_eq!(q.combine(&co), p);
    }
}
