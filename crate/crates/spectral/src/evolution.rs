use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::lattice::{Lattice, PeriodicLattice};
use crate::matrix::{build_matrices, LatticeMatrix, C64};
use crate::oscillator::oscillator_hamiltonian;
use crate::wave::WaveState;

/// Hermiticity required of a generator before it is exponentiated.
pub const EVOLVE_HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub states: Vec<WaveState>,
    pub norms: Vec<f64>,
    pub energies: Vec<f64>,
    pub max_norm_drift: f64,
    pub max_energy_drift: f64,
}

/// `psi(t) = exp(-i H t) psi_0` on each time of `t_grid`.
///
/// The eigenbasis coefficients are advanced step by step, so round-off
/// accumulates along the grid; norm and energy are measured back in the
/// site basis.
pub fn evolve(h: &LatticeMatrix, psi0: &WaveState, t_grid: &[f64]) -> Result<Trajectory> {
    let defect = h.hermiticity_defect();
    if defect > EVOLVE_HERMITIAN_TOL {
        return Err(SpectralError::NotHermitian {
            defect,
            tol: EVOLVE_HERMITIAN_TOL,
        });
    }
    if psi0.len() != h.dim() || !psi0.is_finite() {
        return Err(SpectralError::Domain(format!(
            "initial state must be finite with {} sites",
            h.dim()
        )));
    }
    let eig = h.entries.clone().symmetric_eigen();
    let v = eig.eigenvectors;
    let e = eig.eigenvalues;
    let mut coeffs = v.adjoint() * DVector::from_column_slice(&psi0.amplitudes);
    let mut now = psi0.time;
    let mut states = Vec::with_capacity(t_grid.len());
    let mut norms = Vec::with_capacity(t_grid.len());
    let mut energies = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let dt = t - now;
        for (c, ek) in coeffs.iter_mut().zip(e.iter()) {
            *c *= C64::from_polar(1.0, -ek * dt);
        }
        now = t;
        let psi = &v * &coeffs;
        norms.push(psi.norm());
        energies.push((psi.adjoint() * &h.entries * &psi)[(0, 0)].re);
        states.push(WaveState {
            amplitudes: psi.iter().copied().collect(),
            time: t,
        });
    }
    let n0 = psi0.norm();
    let e0 = {
        let p = DVector::from_column_slice(&psi0.amplitudes);
        (p.adjoint() * &h.entries * &p)[(0, 0)].re
    };
    Ok(Trajectory {
        max_norm_drift: norms.iter().map(|n| (n - n0).abs()).fold(0.0, f64::max),
        max_energy_drift: energies.iter().map(|x| (x - e0).abs()).fold(0.0, f64::max),
        states,
        norms,
        energies,
    })
}

/// `exp(-(x - x0)^2 / (2 w^2) + i k0 x)` sampled on the lattice, unit norm.
pub fn gaussian_packet(lat: &Lattice, x0: f64, width: f64, k0: f64) -> WaveState {
    let amps: Vec<C64> = lat
        .positions()
        .iter()
        .map(|x| C64::from_polar((-(x - x0).powi(2) / (2.0 * width * width)).exp(), k0 * x))
        .collect();
    WaveState::new(amps).normalized()
}

/// Uniform grid `dt, 2 dt, .., steps dt`.
pub fn time_grid(dt: f64, steps: usize) -> Vec<f64> {
    (1..=steps).map(|k| k as f64 * dt).collect()
}

/// The commuted operator string
/// `1/2 [-Q^2 + P^2 (X^2 - a^2/2) + 2 a^2 P^3 Q X + 5/4 a^4 P^4 Q^2]`
/// with `P = Qp^-1`, as a matrix.
pub fn commuted_oscillator_matrix(lat: &PeriodicLattice) -> Result<DMatrix<f64>> {
    let ops = build_matrices(&(*lat).into())?;
    let a = lat.a;
    let (x, q, p) = (ops.x.re(), ops.qc.re(), ops.qp_inv.re());
    let n = lat.n;
    let q2 = &q * &q;
    let p2 = &p * &p;
    let p3 = &p2 * &p;
    let p4 = &p2 * &p2;
    let x2 = &x * &x - DMatrix::<f64>::identity(n, n) * (a * a / 2.0);
    let body = -&q2 + &p2 * x2 + (&p3 * &q * &x) * (2.0 * a * a) + (&p4 * &q2) * (1.25 * a.powi(4));
    Ok(body / 2.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorStringComparison {
    pub lattice: PeriodicLattice,
    pub max_abs_diff: f64,
    pub relative_diff: f64,
}

/// Compares [`commuted_oscillator_matrix`] with `(-Qc^2 + Xhat^2)/2`.
pub fn compare_operator_string(lat: &PeriodicLattice) -> Result<OperatorStringComparison> {
    let h = oscillator_hamiltonian(lat)?.re();
    let s = commuted_oscillator_matrix(lat)?;
    let diff = &h - &s;
    Ok(OperatorStringComparison {
        lattice: *lat,
        max_abs_diff: diff.amax(),
        relative_diff: diff.norm() / h.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PeriodicLattice {
        PeriodicLattice::new(102, 0.25).unwrap()
    }

    #[test]
    fn eigenstate_only_picks_up_a_phase() {
        let lat = ring();
        let h = oscillator_hamiltonian(&lat).unwrap();
        let eig = h.re().symmetric_eigen();
        let k = eig.eigenvalues.imin();
        let vec = eig.eigenvectors.column(k);
        let psi0 = WaveState::from_real(vec.as_slice());
        let tr = evolve(&h, &psi0, &[0.7, 1.3]).unwrap();
        let e = eig.eigenvalues[k];
        for st in &tr.states {
            let phase = C64::from_polar(1.0, -e * st.time);
            for (z, v) in st.amplitudes.iter().zip(vec.iter()) {
                assert!((z - phase * *v).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn packet_norm_and_energy_conserved() {
        let lat = ring();
        let h = oscillator_hamiltonian(&lat).unwrap();
        let psi0 = gaussian_packet(&lat.into(), 1.0, 1.0, 0.5);
        let tr = evolve(&h, &psi0, &time_grid(0.01, 1000)).unwrap();
        assert_eq!(tr.states.len(), 1000);
        assert!(tr.max_norm_drift < 1e-10, "{}", tr.max_norm_drift);
        assert!(tr.max_energy_drift < 1e-8, "{}", tr.max_energy_drift);
    }

    #[test]
    fn non_hermitian_generator_rejected() {
        let lat: Lattice = PeriodicLattice::new(6, 1.0).unwrap().into();
        let qc = crate::matrix::local_operators(&lat).qc;
        let h = LatticeMatrix::from_real(&qc, lat, false).unwrap();
        let psi = gaussian_packet(&lat, 0.0, 1.0, 0.0);
        assert!(matches!(
            evolve(&h, &psi, &[1.0]),
            Err(SpectralError::NotHermitian { .. })
        ));
    }

    #[test]
    fn operator_string_differs_on_a_finite_ring() {
        // The string relies on [Qp, x] = a^2 Q, which no finite matrix pair satisfies.
        let c = compare_operator_string(&PeriodicLattice::new(6, 1.0).unwrap()).unwrap();
        assert!(c.max_abs_diff > 1.0);
    }
}
