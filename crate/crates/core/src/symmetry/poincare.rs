use serde::Serialize;

use super::check::{check_relation, levi_civita, RelationCheck};
use super::nd::{build_nd_ops, LatticeSpecND, NdVariant};
use crate::exact::{Rational, SpacingScalar};
use crate::operator::{ComplexOp, NormalOrderedOp, ShiftInvariantOp};
use crate::{Error, Result};

/// Generators on functions of `(x_0, x_1, x_2, x_3)` with axis 0 the time
/// direction. With continuous time `y_0` is the coordinate `x_0` and
/// `d/dy_0` the derivative `D_0`.
#[derive(Debug, Clone)]
pub struct PoincareRep {
    pub kappa: Rational,
    pub variant: NdVariant,
    pub discrete_time: bool,
    /// `P_mu = -i d_mu`.
    pub p: [ComplexOp; 4],
    /// `M_i = sum_jk eps_ijk y_j P_k`.
    pub m: [ComplexOp; 3],
    /// `L_i = y_0 P_i - kappa y_i P_0`.
    pub l: [ComplexOp; 3],
    /// The real operators standing in for `d/dy_mu`, used to build Casimirs.
    pub d: [NormalOrderedOp; 4],
}

/// `spatial` must describe three axes; with `discrete_time` the time axis
/// uses the first spatial spacing and the same variant.
pub fn poincare_rep(
    spatial: &LatticeSpecND,
    variant: NdVariant,
    kappa: Rational,
    discrete_time: bool,
) -> Result<PoincareRep> {
    if spatial.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: spatial.dim(),
        });
    }
    let mut spacings = vec![spatial.spacings()[0].clone()];
    spacings.extend(spatial.spacings().iter().cloned());
    let full = LatticeSpecND::new(spacings)?;
    let ops = build_nd_ops(&full, variant)?;
    let (d0, y0) = if discrete_time {
        (ops.q_op(0), ops.xhat[0].clone())
    } else {
        (
            NormalOrderedOp::from_series(ShiftInvariantOp::d(4, 0)),
            NormalOrderedOp::coordinate(4, 0),
        )
    };
    let d: [NormalOrderedOp; 4] = std::array::from_fn(|mu| if mu == 0 { d0.clone() } else { ops.q_op(mu) });
    let y: [NormalOrderedOp; 4] =
        std::array::from_fn(|mu| if mu == 0 { y0.clone() } else { ops.xhat[mu].clone() });
    let p: [ComplexOp; 4] = std::array::from_fn(|mu| ComplexOp::imaginary(d[mu].neg()));
    let m: [ComplexOp; 3] = std::array::from_fn(|i| {
        let mut acc = ComplexOp::zero(4);
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e != 0 {
                    let t = ComplexOp::real(y[j + 1].clone()).mul(&p[k + 1]);
                    acc = acc.add(&t.scale(&SpacingScalar::from_int(e)));
                }
            }
        }
        acc
    });
    let kap = SpacingScalar::constant(kappa.clone());
    let l: [ComplexOp; 3] = std::array::from_fn(|i| {
        let boost = ComplexOp::real(y[0].clone()).mul(&p[i + 1]);
        let back = ComplexOp::real(y[i + 1].clone()).mul(&p[0]).scale(&kap);
        boost.sub(&back)
    });
    Ok(PoincareRep {
        kappa,
        variant,
        discrete_time,
        p,
        m,
        l,
        d,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PoincareReport {
    pub kappa: String,
    pub discrete_time: bool,
    /// `s` in `[M_i, M_j] = s i eps_ijk M_k`, or `None` if neither sign holds.
    pub rotation_convention: Option<i64>,
    pub relations: Vec<RelationCheck>,
    /// `-kappa d_0^2 - sum_k d_k^2` against every generator.
    pub casimir_kappa: Vec<RelationCheck>,
    /// `-d_0^2 + sum_k d_k^2` against every generator.
    pub casimir_lorentzian: Vec<RelationCheck>,
}

impl PoincareReport {
    pub fn closure_holds(&self) -> bool {
        self.rotation_convention.is_some() && self.relations.iter().all(RelationCheck::passed)
    }

    pub fn kappa_casimir_central(&self) -> bool {
        self.casimir_kappa.iter().all(RelationCheck::passed)
    }

    pub fn lorentzian_casimir_central(&self) -> bool {
        self.casimir_lorentzian.iter().all(RelationCheck::passed)
    }
}

impl PoincareRep {
    pub fn generators(&self) -> Vec<(String, &ComplexOp)> {
        let mut out = Vec::with_capacity(10);
        for (mu, g) in self.p.iter().enumerate() {
            out.push((format!("P{mu}"), g));
        }
        for (i, g) in self.m.iter().enumerate() {
            out.push((format!("M{}", i + 1), g));
        }
        for (i, g) in self.l.iter().enumerate() {
            out.push((format!("L{}", i + 1), g));
        }
        out
    }

    /// `-d_0^2 + sum_k d_k^2`.
    pub fn casimir_lorentzian(&self) -> ComplexOp {
        let mut c = self.d[0].pow(2).neg();
        for k in 1..4 {
            c = c.add(&self.d[k].pow(2));
        }
        ComplexOp::real(c)
    }

    /// `-kappa d_0^2 - sum_k d_k^2`, central for every `kappa`.
    pub fn casimir_kappa(&self) -> ComplexOp {
        let mut c = self.d[0]
            .pow(2)
            .scale(&SpacingScalar::constant(-self.kappa.clone()));
        for k in 1..4 {
            c = c.sub(&self.d[k].pow(2));
        }
        ComplexOp::real(c)
    }

    /// Checks the bracket relations of the family on the test space:
    /// `[P_mu, P_nu] = 0`, `[M_i, M_j] = s i eps M_k`, `[M_i, P_j] = s i eps P_k`,
    /// `[M_i, P_0] = 0`, `[M_i, L_j] = s i eps L_k`, `[L_i, P_0] = i P_i`,
    /// `[L_i, P_j] = -i kappa delta_ij P_0`, `[L_i, L_j] = i kappa eps M_k`.
    pub fn verify(&self, degree: u32) -> Result<PoincareReport> {
        let eps_sum = |i: usize, j: usize, ops: &[ComplexOp; 3]| {
            let mut acc = ComplexOp::zero(4);
            for (k, op) in ops.iter().enumerate() {
                let e = levi_civita(i, j, k);
                if e != 0 {
                    acc = acc.add(&op.scale(&SpacingScalar::from_int(e)));
                }
            }
            acc.times_i()
        };
        let mm = self.m[0].commutator(&self.m[1]);
        let plus = check_relation("[M1, M2] = i M3", &mm.sub(&self.m[2].times_i()), degree)?;
        let minus = check_relation("[M1, M2] = -i M3", &mm.add(&self.m[2].times_i()), degree)?;
        let conv = match (plus.passed(), minus.passed()) {
            (true, _) => Some(1),
            (_, true) => Some(-1),
            _ => None,
        };
        let s = SpacingScalar::from_int(conv.unwrap_or(1));
        let kap = SpacingScalar::constant(self.kappa.clone());
        let mut rel = Vec::new();
        for mu in 0..4 {
            for nu in mu + 1..4 {
                rel.push(check_relation(
                    &format!("[P{mu}, P{nu}] = 0"),
                    &self.p[mu].commutator(&self.p[nu]),
                    degree,
                )?);
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let (ni, nj) = (i + 1, j + 1);
                if i < j {
                    let r = self.m[i]
                        .commutator(&self.m[j])
                        .sub(&eps_sum(i, j, &self.m).scale(&s));
                    rel.push(check_relation(
                        &format!("[M{ni}, M{nj}] = s i eps M"),
                        &r,
                        degree,
                    )?);
                    let r = self.l[i]
                        .commutator(&self.l[j])
                        .sub(&eps_sum(i, j, &self.m).scale(&kap));
                    rel.push(check_relation(
                        &format!("[L{ni}, L{nj}] = i kappa eps M"),
                        &r,
                        degree,
                    )?);
                }
                let spatial_p = [self.p[1].clone(), self.p[2].clone(), self.p[3].clone()];
                let r = self.m[i]
                    .commutator(&self.p[nj])
                    .sub(&eps_sum(i, j, &spatial_p).scale(&s));
                rel.push(check_relation(
                    &format!("[M{ni}, P{nj}] = s i eps P"),
                    &r,
                    degree,
                )?);
                let r = self.m[i]
                    .commutator(&self.l[j])
                    .sub(&eps_sum(i, j, &self.l).scale(&s));
                rel.push(check_relation(
                    &format!("[M{ni}, L{nj}] = s i eps L"),
                    &r,
                    degree,
                )?);
                let target = if i == j {
                    self.p[0].times_i().scale(&-&kap)
                } else {
                    ComplexOp::zero(4)
                };
                let r = self.l[i].commutator(&self.p[nj]).sub(&target);
                rel.push(check_relation(
                    &format!("[L{ni}, P{nj}] = -i kappa delta P0"),
                    &r,
                    degree,
                )?);
            }
            let ni = i + 1;
            rel.push(check_relation(
                &format!("[M{ni}, P0] = 0"),
                &self.m[i].commutator(&self.p[0]),
                degree,
            )?);
            let r = self.l[i].commutator(&self.p[0]).sub(&self.p[ni].times_i());
            rel.push(check_relation(&format!("[L{ni}, P0] = i P{ni}"), &r, degree)?);
        }
        let centrality = |c: &ComplexOp, name: &str| -> Result<Vec<RelationCheck>> {
            self.generators()
                .into_iter()
                .map(|(g, op)| check_relation(&format!("[{name}, {g}] = 0"), &c.commutator(op), degree))
                .collect()
        };
        Ok(PoincareReport {
            kappa: self.kappa.to_string(),
            discrete_time: self.discrete_time,
            rotation_convention: conv,
            relations: rel,
            casimir_kappa: centrality(&self.casimir_kappa(), "C_kappa")?,
            casimir_lorentzian: centrality(&self.casimir_lorentzian(), "C")?,
        })
    }
}
