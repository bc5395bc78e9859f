use serde::Serialize;

use crate::exact::{LaurentPoly, SpacingScalar};
use crate::operator::{indices_up_to, ComplexOp};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of checking an operator relation `lhs - rhs = 0` on the monomial
/// test space.
#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub status: Status,
    /// Test-space degree for a pass; degree of the first monomial with a
    /// nonzero residual for a failure.
    pub max_residual_degree: u32,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Monomials of total degree `<= degree`, lowest degree first.
pub fn test_monomials(dim: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut all = indices_up_to(dim, degree);
    all.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
    all
}

/// Applies `residual` to every test monomial; monomials are split across
/// threads since the operators are immutable.
pub fn check_relation(name: &str, residual: &ComplexOp, degree: u32) -> Result<RelationCheck> {
    let monomials = test_monomials(residual.dim(), degree);
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(monomials.len().max(1));
    let chunk = monomials.len().div_ceil(workers).max(1);
    let failures: Vec<Result<Option<u32>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = monomials
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || -> Result<Option<u32>> {
                    for e in part {
                        let p = LaurentPoly::monomial(e.clone(), SpacingScalar::one());
                        if !residual.apply_real(&p)?.is_zero() {
                            return Ok(Some(e.iter().sum()));
                        }
                    }
                    Ok(None)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("relation worker panicked"))
            .collect()
    });
    let mut first: Option<u32> = None;
    for f in failures {
        if let Some(d) = f? {
            first = Some(first.map_or(d, |m| m.min(d)));
        }
    }
    Ok(RelationCheck {
        relation: name.into(),
        status: if first.is_some() {
            Status::Fail
        } else {
            Status::Pass
        },
        max_residual_degree: first.unwrap_or(degree),
    })
}

/// Levi-Civita symbol on `{0, 1, 2}`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::NormalOrderedOp;

    #[test]
    fn monomials_sorted_by_degree() {
        let m = test_monomials(2, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], vec![0, 0]);
        assert!(m
            .windows(2)
            .all(|w| w[0].iter().sum::<u32>() <= w[1].iter().sum::<u32>()));
    }

    #[test]
    fn failure_degree_is_lowest() {
        // x_1 annihilates nothing, so the first failure is the constant.
        let op = ComplexOp::real(NormalOrderedOp::coordinate(2, 0));
        let c = check_relation("x1 = 0", &op, 3).unwrap();
        assert!(!c.passed());
        assert_eq!(c.max_residual_degree, 0);
        let z = check_relation("0 = 0", &ComplexOp::zero(2), 3).unwrap();
        assert!(z.passed());
        assert_eq!(z.max_residual_degree, 3);
    }

    #[test]
    fn epsilon() {
        assert_eq!(levi_civita(0, 1, 2), 1);
        assert_eq!(levi_civita(1, 0, 2), -1);
        assert_eq!(levi_civita(0, 0, 2), 0);
    }
}
