use super::check::{check_relation, levi_civita, RelationCheck};
use super::nd::{build_nd_ops, LatticeSpecND, NdOps, NdVariant};
use crate::exact::SpacingScalar;
use crate::operator::{ComplexOp, NormalOrderedOp};
use crate::{Error, Result};

/// `L_i = -i sum_jk eps_ijk xhat_j Q_k` on a three-dimensional lattice.
pub fn angular_momentum(spec: &LatticeSpecND, variant: NdVariant) -> Result<[ComplexOp; 3]> {
    if spec.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: spec.dim(),
        });
    }
    let ops = build_nd_ops(spec, variant)?;
    Ok(angular_from_ops(&ops))
}

pub(crate) fn angular_from_ops(ops: &NdOps) -> [ComplexOp; 3] {
    std::array::from_fn(|i| {
        let mut sum = NormalOrderedOp::zero(ops.dim());
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e != 0 {
                    let t = ops.xhat[j].mul(&ops.q_op(k));
                    sum = sum.add(&t.scale(&SpacingScalar::from_int(e)));
                }
            }
        }
        ComplexOp::imaginary(sum.neg())
    })
}

/// `[L_i, L_j] - i eps_ijk L_k` on the degree-`degree` test space.
pub fn so3_check(l: &[ComplexOp; 3], degree: u32) -> Result<Vec<RelationCheck>> {
    let mut out = Vec::with_capacity(3);
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let residual = l[i].commutator(&l[j]).sub(&l[k].times_i());
        out.push(check_relation(
            &format!("[L{}, L{}] = i L{}", i + 1, j + 1, k + 1),
            &residual,
            degree,
        )?);
    }
    Ok(out)
}
