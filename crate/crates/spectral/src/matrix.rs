use nalgebra::{Complex, DMatrix};
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::lattice::{Lattice, PeriodicLattice};
use crate::qp::qp_invertible;

pub type C64 = Complex<f64>;

pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex matrix acting on the sites of `lattice`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeMatrix {
    pub entries: DMatrix<C64>,
    pub lattice: Lattice,
    hermitian: bool,
}

impl LatticeMatrix {
    /// With `hermitian` set the entries are checked to within [`HERMITIAN_TOL`].
    pub fn new(entries: DMatrix<C64>, lattice: Lattice, hermitian: bool) -> Result<Self> {
        let m = Self {
            entries,
            lattice,
            hermitian: false,
        };
        if hermitian {
            m.into_hermitian(HERMITIAN_TOL)
        } else {
            Ok(m)
        }
    }

    pub fn from_real(entries: &DMatrix<f64>, lattice: Lattice, hermitian: bool) -> Result<Self> {
        Self::new(entries.map(|x| C64::new(x, 0.0)), lattice, hermitian)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Sets the flag after verifying the entries against `tol`.
    pub fn into_hermitian(mut self, tol: f64) -> Result<Self> {
        let defect = hermiticity_defect(&self.entries);
        if defect > tol {
            return Err(SpectralError::NotHermitian { defect, tol });
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Real part, for matrices known to be real.
    pub fn re(&self) -> DMatrix<f64> {
        self.entries.map(|z| z.re)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let out = &self.entries * nalgebra::DVector::from_column_slice(v);
        out.iter().copied().collect()
    }
}

/// `max |A_ij - conj(A_ji)|`.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(S f)(x) = f(x + a)`, i.e. `S[j, j+1] = 1`; zero past open ends.
pub fn shift_matrix(lat: &Lattice, power: i64) -> DMatrix<f64> {
    let n = lat.n();
    let mut s = DMatrix::zeros(n, n);
    for j in 0..n {
        if let Some(k) = lat.neighbour(j, power) {
            s[(j, k)] = 1.0;
        }
    }
    s
}

/// The stencil-local operators, available on every lattice.
#[derive(Debug, Clone)]
pub struct LocalOperators {
    pub x: DMatrix<f64>,
    /// `(S - S^-1) / (2a)`.
    pub qc: DMatrix<f64>,
    /// `(S + S^-1) / 2`.
    pub qp: DMatrix<f64>,
}

pub fn local_operators(lat: &Lattice) -> LocalOperators {
    let a = lat.a();
    let s = shift_matrix(lat, 1);
    let si = shift_matrix(lat, -1);
    LocalOperators {
        x: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lat.positions())),
        qc: (&s - &si) / (2.0 * a),
        qp: (&s + &si) / 2.0,
    }
}

#[derive(Debug, Clone)]
pub struct LatticeOperators {
    pub x: LatticeMatrix,
    pub qc: LatticeMatrix,
    pub qp: LatticeMatrix,
    pub qp_inv: LatticeMatrix,
    pub xhat: LatticeMatrix,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HermiticityReport {
    pub x: f64,
    /// Defect of `-i Qc`.
    pub momentum: f64,
    pub qp: f64,
    pub xhat: f64,
    /// Frobenius norm of `[Qc, Xhat] - I`, which is never zero on a finite lattice.
    pub ccr_deviation: f64,
}

impl LatticeOperators {
    pub fn momentum(&self) -> DMatrix<C64> {
        self.qc.entries.map(|z| z * C64::new(0.0, -1.0))
    }

    pub fn hermiticity(&self) -> HermiticityReport {
        let n = self.x.dim();
        let qc = self.qc.re();
        let xh = self.xhat.re();
        let ccr = &qc * &xh - &xh * &qc - DMatrix::<f64>::identity(n, n);
        HermiticityReport {
            x: self.x.hermiticity_defect(),
            momentum: hermiticity_defect(&self.momentum()),
            qp: self.qp.hermiticity_defect(),
            xhat: self.xhat.hermiticity_defect(),
            ccr_deviation: ccr.norm(),
        }
    }
}

/// `X`, `Qc`, `Qp`, `Qp^-1` (dense inverse) and `Xhat = (X Qp^-1 + Qp^-1 X)/2`.
///
/// Only periodic lattices with `4 ∤ N` have an invertible `Qp`; truncated
/// lattices always fail here (use [`local_operators`]).
pub fn build_matrices(lat: &Lattice) -> Result<LatticeOperators> {
    let n = lat.n();
    match lat {
        Lattice::Periodic(_) if qp_invertible(n) => {}
        _ => return Err(SpectralError::singular(n)),
    }
    let LocalOperators { x, qc, qp } = local_operators(lat);
    let qp_inv = qp
        .clone()
        .try_inverse()
        .ok_or_else(|| SpectralError::singular(n))?;
    let mut xhat = (&x * &qp_inv + &qp_inv * &x) / 2.0;
    // Remove round-off asymmetry from the inversion before flagging.
    xhat = (&xhat + xhat.transpose()) / 2.0;
    let lat = *lat;
    Ok(LatticeOperators {
        x: LatticeMatrix::from_real(&x, lat, true)?,
        qc: LatticeMatrix::from_real(&qc, lat, false)?,
        qp: LatticeMatrix::from_real(&qp, lat, true)?,
        qp_inv: LatticeMatrix::from_real(&qp_inv, lat, true)?,
        xhat: LatticeMatrix::from_real(&xhat, lat, true)?,
    })
}

/// Convenience for the periodic case.
pub fn periodic_matrices(n: usize, a: f64) -> Result<LatticeOperators> {
    build_matrices(&PeriodicLattice::new(n, a)?.into())
}
