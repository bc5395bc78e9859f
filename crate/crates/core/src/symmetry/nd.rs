use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::Serialize;

use super::check::{check_relation, RelationCheck};
use crate::exact::{rat, LaurentPoly, Rational, SpacingScalar};
use crate::operator::{basic_xhat, symmetric_xhat, ComplexOp, DeltaKind, NormalOrderedOp, ShiftInvariantOp};
use crate::{Error, Result};

/// Hypercubic lattice with spacing `a_i = c_i a` along axis `i`.
///
/// Symbolic work keeps `a` as the Laurent symbol; enumeration and numerics
/// read the spacings as the numbers `c_i` (that is, `a = 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpecND {
    spacings: Vec<Rational>,
}

impl LatticeSpecND {
    pub fn new(spacings: Vec<Rational>) -> Result<Self> {
        if spacings.is_empty() {
            return Err(Error::Domain("lattice dimension must be at least 1".into()));
        }
        if let Some(c) = spacings.iter().find(|c| !c.is_positive()) {
            return Err(Error::Domain(format!("spacing {c} is not positive")));
        }
        Ok(Self { spacings })
    }

    /// `n` axes with spacing `a` each.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![Rational::from_integer(1.into()); n])
    }

    pub fn dim(&self) -> usize {
        self.spacings.len()
    }

    pub fn spacings(&self) -> &[Rational] {
        &self.spacings
    }

    /// Symbolic spacing `c_i a`.
    pub fn spacing(&self, i: usize) -> SpacingScalar {
        SpacingScalar::monomial(self.spacings[i].clone(), 1)
    }

    pub fn is_uniform(&self) -> bool {
        self.spacings.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NdVariant {
    /// Forward differences with `xhat_i = x_i S_i^{-1}`.
    ForwardBasic,
    /// Central differences with `xhat_i = x_i (S_i + S_i^{-1})^{-1} + (S_i + S_i^{-1})^{-1} x_i`.
    CentralSymmetric,
}

impl NdVariant {
    pub fn name(self) -> &'static str {
        match self {
            NdVariant::ForwardBasic => "forward-basic",
            NdVariant::CentralSymmetric => "central-symmetric",
        }
    }
}

impl fmt::Display for NdVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NdVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward-basic" | "forward" => Ok(NdVariant::ForwardBasic),
            "central-symmetric" | "central" => Ok(NdVariant::CentralSymmetric),
            _ => Err(Error::UnknownKind(s.into())),
        }
    }
}

/// Per-axis delta operators, shifts and coordinate operators.
#[derive(Debug, Clone)]
pub struct NdOps {
    pub variant: NdVariant,
    pub q: Vec<ShiftInvariantOp>,
    pub s: Vec<ShiftInvariantOp>,
    pub xhat: Vec<NormalOrderedOp>,
}

impl NdOps {
    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn q_op(&self, i: usize) -> NormalOrderedOp {
        NormalOrderedOp::from_series(self.q[i].clone())
    }
}

pub fn build_nd_ops(spec: &LatticeSpecND, variant: NdVariant) -> Result<NdOps> {
    let n = spec.dim();
    let mut q = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut xhat = Vec::with_capacity(n);
    for i in 0..n {
        let h = spec.spacing(i);
        s.push(ShiftInvariantOp::shift_axis(n, i, h.clone()).with_label(&format!("S{}", i + 1)));
        let (qi, xi) = match variant {
            NdVariant::ForwardBasic => {
                let qi = ShiftInvariantOp::make_delta_axis(DeltaKind::Forward, h, n, i)?;
                let xi = basic_xhat(&qi)?;
                (qi, xi)
            }
            NdVariant::CentralSymmetric => {
                let qi = ShiftInvariantOp::make_delta_axis(DeltaKind::Central, h, n, i)?;
                let xi = symmetric_xhat(&qi)?;
                (qi, xi)
            }
        };
        q.push(qi.with_label(&format!("Q{}", i + 1)));
        xhat.push(xi);
    }
    Ok(NdOps { variant, q, s, xhat })
}

/// `x_i (S_i + S_i^{-1})^{-1} + (S_i + S_i^{-1})^{-1} x_i`, assembled as written.
pub fn literal_central_xhat(spec: &LatticeSpecND, i: usize) -> Result<NormalOrderedOp> {
    let n = spec.dim();
    let h = spec.spacing(i);
    let sum = ShiftInvariantOp::shift_axis(n, i, h.clone()).add(&ShiftInvariantOp::shift_axis(n, i, -&h));
    let inv = NormalOrderedOp::from_series(sum.inverse()?);
    let x = NormalOrderedOp::coordinate(n, i);
    Ok(x.mul(&inv).add(&inv.mul(&x)))
}

/// `sum_i xhat_i^2 1`.
pub fn radial_invariant(ops: &NdOps) -> Result<LaurentPoly> {
    let n = ops.dim();
    let mut out = LaurentPoly::zero(n);
    for x in &ops.xhat {
        out = &out + &x.apply(&x.apply(&LaurentPoly::one(n))?)?;
    }
    Ok(out)
}

/// Exact check of `[Q_i, xhat_j] = delta_ij`, `[Q_i, Q_j] = 0` and
/// `[xhat_i, xhat_j] = 0` on monomials of degree `<= degree`, plus the
/// structural series check of `[Q_i, xhat_j]` up to `order`.
pub fn ccr_matrix(ops: &NdOps, order: u32, degree: u32) -> Result<Vec<RelationCheck>> {
    let n = ops.dim();
    let mut out = Vec::new();
    let real = |op: NormalOrderedOp| ComplexOp::real(op);
    for i in 0..n {
        for j in 0..n {
            let c = ops.q_op(i).commutator(&ops.xhat[j]);
            let target = if i == j {
                NormalOrderedOp::identity(n)
            } else {
                NormalOrderedOp::zero(n)
            };
            let mut check = check_relation(
                &format!("[Q{}, xhat{}] = {}", i + 1, j + 1, u8::from(i == j)),
                &real(c.sub(&target)),
                degree,
            )?;
            if !c.agrees_to(&target, order) {
                check.status = super::check::Status::Fail;
            }
            out.push(check);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let qq = ops.q_op(i).commutator(&ops.q_op(j));
            out.push(check_relation(
                &format!("[Q{}, Q{}] = 0", i + 1, j + 1),
                &real(qq),
                degree,
            )?);
            let xx = ops.xhat[i].commutator(&ops.xhat[j]);
            out.push(check_relation(
                &format!("[xhat{}, xhat{}] = 0", i + 1, j + 1),
                &real(xx),
                degree,
            )?);
        }
    }
    Ok(out)
}

/// `sum_i (x_i^2 - a_i^2 / 2)`, the symmetric-variant sphere polynomial.
pub fn central_sphere_polynomial(spec: &LatticeSpecND) -> LaurentPoly {
    let n = spec.dim();
    let mut out = LaurentPoly::zero(n);
    for i in 0..n {
        let x = LaurentPoly::var(n, i);
        let c = spec.spacing(i).pow(2).scale(&rat(-1, 2));
        out = &(&out + &x.pow(2)) + &LaurentPoly::constant(n, c);
    }
    out
}

/// `sum_i x_i (x_i - a_i)`, the forward-variant sphere polynomial.
pub fn forward_sphere_polynomial(spec: &LatticeSpecND) -> LaurentPoly {
    let n = spec.dim();
    let mut out = LaurentPoly::zero(n);
    for i in 0..n {
        let x = LaurentPoly::var(n, i);
        let shifted = &x - &LaurentPoly::constant(n, spec.spacing(i));
        out = &out + &(&x * &shifted);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    #[test]
    fn one_dimensional_forward_xhat_is_x_times_inverse_shift() {
        let spec = LatticeSpecND::uniform(1).unwrap();
        let ops = build_nd_ops(&spec, NdVariant::ForwardBasic).unwrap();
        let expected =
            NormalOrderedOp::term(vec![1], ShiftInvariantOp::shift_axis(1, 0, -SpacingScalar::a()));
        assert!(ops.xhat[0].agrees_to(&expected, 12));
        assert!(ops.xhat[0].agrees_on_monomials(&expected, 6).unwrap());
    }

    #[test]
    fn ccr_both_variants() {
        let spec = LatticeSpecND::new(vec![int(1), rat(1, 2), int(3)]).unwrap();
        for v in [NdVariant::ForwardBasic, NdVariant::CentralSymmetric] {
            let ops = build_nd_ops(&spec, v).unwrap();
            let report = ccr_matrix(&ops, 6, 4).unwrap();
            assert_eq!(report.len(), 9 + 6);
            assert!(report.iter().all(|c| c.passed()), "{v}: {report:?}");
        }
    }

    #[test]
    fn literal_central_form_matches() {
        let spec = LatticeSpecND::new(vec![int(1), int(2)]).unwrap();
        let ops = build_nd_ops(&spec, NdVariant::CentralSymmetric).unwrap();
        for i in 0..2 {
            let lit = literal_central_xhat(&spec, i).unwrap();
            assert!(lit.agrees_to(&ops.xhat[i], 10));
            assert!(lit.agrees_on_monomials(&ops.xhat[i], 5).unwrap());
        }
    }

    #[test]
    fn symmetric_spheres_in_three_dimensions() {
        let spec = LatticeSpecND::new(vec![int(1), int(2), rat(1, 3)]).unwrap();
        let ops = build_nd_ops(&spec, NdVariant::CentralSymmetric).unwrap();
        assert_eq!(radial_invariant(&ops).unwrap(), central_sphere_polynomial(&spec));
        let fwd = build_nd_ops(&spec, NdVariant::ForwardBasic).unwrap();
        assert_eq!(radial_invariant(&fwd).unwrap(), forward_sphere_polynomial(&spec));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(LatticeSpecND::new(vec![]).is_err());
        assert!(LatticeSpecND::new(vec![int(1), int(0)]).is_err());
        assert_eq!(
            "central".parse::<NdVariant>().unwrap(),
            NdVariant::CentralSymmetric
        );
        assert!("sideways".parse::<NdVariant>().is_err());
    }
}
