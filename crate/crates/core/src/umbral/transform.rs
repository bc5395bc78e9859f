use super::sequence::PolySequence;
use crate::exact::{LaurentPoly, SpacingScalar};
use crate::operator::{NormalOrderedOp, ShiftInvariantOp};
use crate::{Error, Result};

/// `f(xhat) 1`: each `y^k` of the univariate `f` becomes the `k`-th
/// polynomial of `seq`.
pub fn umbral_transform(f: &LaurentPoly, seq: &PolySequence) -> Result<LaurentPoly> {
    if f.dim() != 1 {
        return Err(Error::Domain(format!(
            "umbral_transform expects a univariate input, got dimension {}",
            f.dim()
        )));
    }
    let coeffs = f.univariate_coeffs(0)?;
    Ok(seq.combine(&coeffs))
}

/// Multivariate transform with one sequence per coordinate; the `i`-th
/// sequence must act on axis `i` of the same dimension.
pub fn umbral_transform_nd(f: &LaurentPoly, seqs: &[PolySequence]) -> Result<LaurentPoly> {
    let n = f.dim();
    if seqs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: seqs.len(),
        });
    }
    for (i, s) in seqs.iter().enumerate() {
        if s.dim() != n || s.axis() != i {
            return Err(Error::Domain(format!(
                "sequence {i} must act on axis {i} of dimension {n}"
            )));
        }
    }
    let mut out = LaurentPoly::zero(n);
    for (e, c) in f.terms() {
        let mut t = LaurentPoly::constant(n, c.clone());
        for (i, &k) in e.iter().enumerate() {
            t = &t * &seqs[i].get(k as usize);
        }
        out = &out + &t;
    }
    Ok(out)
}

/// The product with `p_k * p_l = p_(k+l)` in the basis of `seq`.
pub fn star_product(f: &LaurentPoly, h: &LaurentPoly, seq: &PolySequence) -> Result<LaurentPoly> {
    let fc = seq.coordinates(f)?;
    let hc = seq.coordinates(h)?;
    let mut conv = vec![SpacingScalar::zero(); fc.len() + hc.len() - 1];
    for (k, x) in fc.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (l, y) in hc.iter().enumerate() {
            if !y.is_zero() {
                conv[k + l] += &(x * y);
            }
        }
    }
    Ok(seq.combine(&conv))
}

/// Substitutes `y -> xhat`, `d/dy -> Q` into a continuum operator written
/// in normal form over `(y, D)`.
pub fn map_equation(
    a: &NormalOrderedOp,
    q: &ShiftInvariantOp,
    xhat: &NormalOrderedOp,
) -> Result<NormalOrderedOp> {
    a.substitute(std::slice::from_ref(q), std::slice::from_ref(xhat))
}

pub fn map_equation_nd(
    a: &NormalOrderedOp,
    q: &[ShiftInvariantOp],
    xhat: &[NormalOrderedOp],
) -> Result<NormalOrderedOp> {
    a.substitute(q, xhat)
}

/// `-1/2 D^2 + 1/2 y^2` in continuum form.
pub fn harmonic_oscillator() -> NormalOrderedOp {
    let half = SpacingScalar::constant(crate::exact::rat(1, 2));
    let d2 = ShiftInvariantOp::d(1, 0).pow(2).scale(&-&half);
    NormalOrderedOp::from_series(d2).add(&NormalOrderedOp::term(
        vec![2],
        ShiftInvariantOp::constant(1, half),
    ))
}

/// `1/2 [-Q^2 + Q'^-2 (x^2 - a^2/2) + 2 a^2 Q'^-3 Q x + 5/4 a^4 Q'^-4 Q^2]`
/// for the central difference `Q` with spacing `h`, with every `Q'^-1`
/// standing to the left of the coordinates.
pub fn commuted_central_oscillator(h: &SpacingScalar) -> Result<NormalOrderedOp> {
    use crate::exact::rat;
    use crate::operator::DeltaKind;
    let q = ShiftInvariantOp::make_delta(DeltaKind::Central, h.clone())?;
    let p = q.pincherle().inverse()?;
    let x = NormalOrderedOp::coordinate(1, 0);
    let series = |s: ShiftInvariantOp| NormalOrderedOp::from_series(s);
    let h2 = h.pow(2);
    let x2 = x.pow(2).sub(&NormalOrderedOp::scalar(1, h2.scale(&rat(1, 2))));
    let body = series(q.pow(2).neg())
        .add(&series(p.pow(2)).mul(&x2))
        .add(&series(p.pow(3).mul(&q)).mul(&x).scale(&h2.scale(&rat(2, 1))))
        .add(&series(p.pow(4).mul(&q.pow(2))).scale(&h.pow(4).scale(&rat(5, 4))));
    Ok(body.scale(&SpacingScalar::constant(rat(1, 2))))
}
