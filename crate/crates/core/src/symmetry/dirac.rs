use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use super::nd::{build_nd_ops, LatticeSpecND, NdVariant};
use crate::exact::{rat, Rational};
use crate::{Error, Result};

/// Gaussian rational `p + i q`.
pub type GaussRational = Complex<Rational>;

pub type Mat4 = [[GaussRational; 4]; 4];

fn g(re: Rational, im: Rational) -> GaussRational {
    Complex::new(re, im)
}

fn gi(re: i64, im: i64) -> GaussRational {
    g(
        Rational::from_integer(re.into()),
        Rational::from_integer(im.into()),
    )
}

pub fn mat_zero() -> Mat4 {
    std::array::from_fn(|_| std::array::from_fn(|_| GaussRational::zero()))
}

pub fn mat_identity() -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { gi(1, 0) } else { gi(0, 0) }))
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(GaussRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
    })
}

pub fn mat_add(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] + &b[i][j]))
}

pub fn mat_scale(a: &Mat4, c: &GaussRational) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] * c))
}

/// Conjugate transpose.
pub fn mat_adjoint(a: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

/// Minkowski metric with signature `(+, -, -, -)`.
pub fn eta(mu: usize, nu: usize) -> i64 {
    match (mu, nu) {
        (0, 0) => 1,
        (m, n) if m == n => -1,
        _ => 0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    pub gamma: [Mat4; 4],
}

impl GammaSet {
    /// Dirac representation: `gamma^0 = diag(1, 1, -1, -1)`,
    /// `gamma^k = [[0, sigma_k], [-sigma_k, 0]]`.
    pub fn dirac_basis() -> Self {
        let sigma: [[[GaussRational; 2]; 2]; 3] = [
            [[gi(0, 0), gi(1, 0)], [gi(1, 0), gi(0, 0)]],
            [[gi(0, 0), gi(0, -1)], [gi(0, 1), gi(0, 0)]],
            [[gi(1, 0), gi(0, 0)], [gi(0, 0), gi(-1, 0)]],
        ];
        let mut gamma = [mat_zero(), mat_zero(), mat_zero(), mat_zero()];
        for i in 0..4 {
            gamma[0][i][i] = gi(if i < 2 { 1 } else { -1 }, 0);
        }
        for k in 0..3 {
            for r in 0..2 {
                for c in 0..2 {
                    gamma[k + 1][r][c + 2] = sigma[k][r][c].clone();
                    gamma[k + 1][r + 2][c] = -sigma[k][r][c].clone();
                }
            }
        }
        Self { gamma }
    }

    /// `U^dagger gamma^mu U`.
    pub fn conjugated(&self, u: &Mat4) -> Self {
        let ud = mat_adjoint(u);
        Self {
            gamma: std::array::from_fn(|mu| mat_mul(&mat_mul(&ud, &self.gamma[mu]), u)),
        }
    }

    /// `{gamma^mu, gamma^nu} = 2 eta^{mu nu} I` exactly.
    pub fn is_valid(&self) -> bool {
        let id = mat_identity();
        (0..4).all(|mu| {
            (0..4).all(|nu| {
                let ac = mat_add(
                    &mat_mul(&self.gamma[mu], &self.gamma[nu]),
                    &mat_mul(&self.gamma[nu], &self.gamma[mu]),
                );
                ac == mat_scale(&id, &gi(2 * eta(mu, nu), 0))
            })
        })
    }
}

/// A rational unitary: a rotation by the 3-4-5 angle in the (0, 2) plane
/// followed by the phases `(3 + 4i)/5` and `(5 + 12i)/13`.
pub fn rational_unitary() -> Mat4 {
    let mut rot = mat_identity();
    rot[0][0] = g(rat(3, 5), Rational::zero());
    rot[0][2] = g(rat(-4, 5), Rational::zero());
    rot[2][0] = g(rat(4, 5), Rational::zero());
    rot[2][2] = g(rat(3, 5), Rational::zero());
    let mut phase = mat_identity();
    phase[1][1] = g(rat(3, 5), rat(4, 5));
    phase[3][3] = g(rat(5, 13), rat(12, 13));
    mat_mul(&rot, &phase)
}

/// Polynomial in the commuting symbols `(d_t, Q_1, Q_2, Q_3)`.
pub type SymbolPoly = BTreeMap<[u32; 4], GaussRational>;

fn poly_add(a: &SymbolPoly, b: &SymbolPoly) -> SymbolPoly {
    let mut out = a.clone();
    for (e, c) in b {
        let v = out.entry(*e).or_insert_with(GaussRational::zero);
        *v = &*v + c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_mul(a: &SymbolPoly, b: &SymbolPoly) -> SymbolPoly {
    let mut out = SymbolPoly::new();
    for (e, c) in a {
        for (f, d) in b {
            let s = std::array::from_fn(|i| e[i] + f[i]);
            let v = out.entry(s).or_insert_with(GaussRational::zero);
            *v = &*v + c * d;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn symbol(mu: usize) -> SymbolPoly {
    let mut e = [0; 4];
    e[mu] = 1;
    SymbolPoly::from([(e, gi(1, 0))])
}

fn constant(c: GaussRational) -> SymbolPoly {
    let mut p = SymbolPoly::new();
    if !c.is_zero() {
        p.insert([0; 4], c);
    }
    p
}

type PolyMat = [[SymbolPoly; 4]; 4];

fn polymat_mul(a: &PolyMat, b: &PolyMat) -> PolyMat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..4).fold(SymbolPoly::new(), |acc, k| {
                poly_add(&acc, &poly_mul(&a[i][k], &b[k][j]))
            })
        })
    })
}

/// `i gamma^0 d_t + i gamma^k Q_k + sign * m` as a matrix of symbol polynomials.
fn dirac_operator(gammas: &GammaSet, m: &Rational, sign: i64) -> PolyMat {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let mut p = SymbolPoly::new();
            for mu in 0..4 {
                let coef = &gammas.gamma[mu][r][c] * gi(0, 1);
                p = poly_add(&p, &poly_mul(&constant(coef), &symbol(mu)));
            }
            if r == c {
                p = poly_add(
                    &p,
                    &constant(g(m * Rational::from_integer(sign.into()), Rational::zero())),
                );
            }
            p
        })
    })
}

/// Checks `(i g^0 d_t + i g^k Q_k - m)(i g^0 d_t + i g^k Q_k + m) = -d_t^2 + sum_k Q_k^2 - m^2`.
///
/// The `Q_k` of the central lattice `spec` are first confirmed to commute
/// pairwise, which is what lets the product be expanded in commuting symbols.
pub fn dirac_factorization_check(gammas: &GammaSet, spec: &LatticeSpecND, m: &Rational) -> Result<bool> {
    if !gammas.is_valid() {
        return Err(Error::Domain(
            "gamma matrices violate the Clifford relations".into(),
        ));
    }
    if spec.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: spec.dim(),
        });
    }
    let ops = build_nd_ops(spec, NdVariant::CentralSymmetric)?;
    for i in 0..3 {
        for j in i + 1..3 {
            if !ops.q[i].mul(&ops.q[j]).agrees_to(&ops.q[j].mul(&ops.q[i]), 8) {
                return Ok(false);
            }
        }
    }
    let lhs = polymat_mul(&dirac_operator(gammas, m, -1), &dirac_operator(gammas, m, 1));
    let mut diag = constant(g(-(m * m), Rational::zero()));
    for mu in 0..4 {
        let sq = poly_mul(&symbol(mu), &symbol(mu));
        let c = if mu == 0 { gi(-1, 0) } else { gi(1, 0) };
        diag = poly_add(&diag, &poly_mul(&constant(c), &sq));
    }
    Ok((0..4).all(|r| {
        (0..4).all(|c| {
            let expected = if r == c { diag.clone() } else { SymbolPoly::new() };
            lhs[r][c] == expected
        })
    }))
}

impl Default for GammaSet {
    fn default() -> Self {
        Self::dirac_basis()
    }
}
