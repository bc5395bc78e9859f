use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, SpectralError};
use crate::lattice::{Lattice, PeriodicLattice};
use crate::matrix::LatticeMatrix;

/// `Q' = (S + S^-1)/2` on `N` periodic sites has eigenvalues
/// `cos(2 pi n / N)`, one of which vanishes exactly when `4 | N`.
pub fn qp_invertible(n: usize) -> bool {
    !n.is_multiple_of(4)
}

/// Coefficients `c_s` of `Q'^-1 = sum_s c_s S^s`, `0 <= s < N`.
pub fn qp_inverse_coefficients(n: usize) -> Result<Vec<i64>> {
    let mut c = vec![0i64; n];
    let sign = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
    if n % 2 == 1 {
        let h = (n - 1) / 2;
        for k in 0..=h {
            c[2 * k] += sign(k + h);
        }
        for k in 0..h {
            c[2 * k + 1] += sign(k);
        }
    } else if (n / 2) % 2 == 1 {
        for k in 0..n / 2 {
            c[2 * k + 1] += sign(k);
        }
    } else {
        return Err(SpectralError::singular(n));
    }
    Ok(c)
}

/// Circulant `C[j, j+s mod N] = c_s`.
pub fn circulant(c: &[f64]) -> DMatrix<f64> {
    let n = c.len();
    DMatrix::from_fn(n, n, |j, k| c[(k + n - j) % n])
}

pub fn qp_inverse_closed_form(lat: &PeriodicLattice) -> Result<LatticeMatrix> {
    let c: Vec<f64> = qp_inverse_coefficients(lat.n)?
        .into_iter()
        .map(|v| v as f64)
        .collect();
    LatticeMatrix::from_real(&circulant(&c), Lattice::Periodic(*lat), true)
}

/// Checks `(S + S^-1) * sum_s c_s S^s = 2` in the integer group ring of
/// `Z/N`, which is `Q' Q'^-1 = 1` without rounding.
pub fn closed_form_is_exact_inverse(n: usize) -> Result<bool> {
    let c = qp_inverse_coefficients(n)?;
    let mut prod = vec![0i64; n];
    for (s, &v) in c.iter().enumerate() {
        prod[(s + 1) % n] += v;
        prod[(s + n - 1) % n] += v;
    }
    Ok(prod[0] == 2 && prod[1..].iter().all(|&v| v == 0))
}

/// Exact `det(S + S^-1) = 2^N det(Q')` by fraction-free elimination.
pub fn twice_qp_determinant(n: usize) -> BigInt {
    let lat = Lattice::Periodic(PeriodicLattice { n, a: 1.0 });
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for (j, row) in m.iter_mut().enumerate() {
        for step in [1, -1] {
            let k = lat.neighbour(j, step).expect("periodic");
            row[k] += 1;
        }
    }
    bareiss_determinant(m)
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `|det Q'|` as a float, via `2^-N |det(S + S^-1)|`.
pub fn qp_determinant_abs(n: usize) -> f64 {
    let d = twice_qp_determinant(n).abs().to_f64().unwrap_or(f64::INFINITY);
    d * 2f64.powi(-(n as i32))
}
