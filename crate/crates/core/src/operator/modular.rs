use serde::Serialize;

use crate::{Error, Result};

/// Matrices over the prime field `Z_p` realizing `[Q, xhat] = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularMatrixRep {
    pub p: u64,
    pub x: Vec<Vec<u64>>,
    pub q: Vec<Vec<u64>>,
    /// `Q' = [Q, x]`, which equals `Q` for the cyclic shift.
    pub q_prime: Vec<Vec<u64>>,
    pub xhat: Vec<Vec<u64>>,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

type Mat = Vec<Vec<u64>>;

fn mat_mul(a: &Mat, b: &Mat, p: u64) -> Mat {
    let n = a.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % p;
            }
        }
    }
    out
}

fn mat_sub(a: &Mat, b: &Mat, p: u64) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x + p - y) % p).collect())
        .collect()
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Gauss-Jordan inverse over `Z_p`.
pub fn inverse_mod(a: &Mat, p: u64) -> Result<Mat> {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| m[r][col] != 0)
            .ok_or_else(|| Error::NotInvertible(format!("matrix is singular mod {p}")))?;
        m.swap(col, pivot);
        let inv = pow_mod(m[col][col], p - 2, p);
        for v in m[col].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..2 * n {
                    m[r][c] = (m[r][c] + p * p - f * m[col][c] % p) % p;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn commutator_mod(a: &Mat, b: &Mat, p: u64) -> Mat {
    mat_sub(&mat_mul(a, b, p), &mat_mul(b, a, p), p)
}

pub fn identity_mod(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

/// `x = diag(0..p-1)`, `Q` the cyclic one-step shift, `xhat = x Q'^{-1}`.
pub fn finite_field_rep(p: u64) -> Result<ModularMatrixRep> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = p as usize;
    let x: Mat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { i as u64 } else { 0 }).collect())
        .collect();
    let q: Mat = (0..n)
        .map(|i| (0..n).map(|j| u64::from(j == (i + 1) % n)).collect())
        .collect();
    let q_prime = commutator_mod(&q, &x, p);
    let xhat = mat_mul(&x, &inverse_mod(&q_prime, p)?, p);
    let rep = ModularMatrixRep {
        p,
        x,
        q,
        q_prime,
        xhat,
    };
    if !rep.verify() {
        return Err(Error::IdentityFailed(format!("[Q, xhat] != 1 mod {p}")));
    }
    Ok(rep)
}

impl ModularMatrixRep {
    pub fn commutator(&self) -> Mat {
        commutator_mod(&self.q, &self.xhat, self.p)
    }

    pub fn verify(&self) -> bool {
        self.commutator() == identity_mod(self.p as usize)
    }
}
