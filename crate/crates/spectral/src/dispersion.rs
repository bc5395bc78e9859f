use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::lattice::{Lattice, PeriodicLattice};
use crate::matrix::{local_operators, C64};
use crate::wave::{max_diff, WaveState};

#[derive(Debug, Clone, Serialize)]
pub struct DispersionReport {
    pub lattice: PeriodicLattice,
    /// Eigenvalues of `-i Qc`, ascending.
    pub eigenvalues: Vec<f64>,
    /// `sin(a k_n)/a` with `k_n = 2 pi n/(N a)`, ascending.
    pub predicted: Vec<f64>,
    pub max_deviation: f64,
    pub spectral_radius: f64,
    pub bound: f64,
}

impl DispersionReport {
    pub fn within(&self, tol: f64) -> bool {
        self.max_deviation < tol && self.spectral_radius <= self.bound + tol
    }
}

pub fn sine_grid(lat: &PeriodicLattice) -> Vec<f64> {
    let mut out: Vec<f64> = (0..lat.n)
        .map(|n| (2.0 * PI * n as f64 / lat.n as f64).sin() / lat.a)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Diagonalizes the Hermitian `-i Qc` and compares with the sine grid.
pub fn dispersion_check(lat: &PeriodicLattice) -> DispersionReport {
    let qc = local_operators(&Lattice::Periodic(*lat)).qc;
    let p = qc.map(|x| C64::new(0.0, -x));
    let mut eigenvalues: Vec<f64> = p.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let predicted = sine_grid(lat);
    let max_deviation = eigenvalues
        .iter()
        .zip(&predicted)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let spectral_radius = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    DispersionReport {
        lattice: *lat,
        eigenvalues,
        predicted,
        max_deviation,
        spectral_radius,
        bound: 1.0 / lat.a,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentumEigenfunction {
    pub lambda: f64,
    pub state: WaveState,
    /// `sup |(-i Qc f - lambda f)_j|` over rows with true neighbours.
    pub residual: f64,
    /// The same over every row, seam or boundary included.
    pub full_residual: f64,
}

/// Samples `exp(i (x/a) arcsin(lambda a))` and applies `-i Qc`.
pub fn momentum_eigenfunction(lambda: f64, lat: &Lattice) -> Result<MomentumEigenfunction> {
    let a = lat.a();
    if !(lambda * a).is_finite() || (lambda * a).abs() >= 1.0 {
        return Err(SpectralError::Domain(format!(
            "momentum eigenvalue needs |lambda a| < 1, got {}",
            lambda * a
        )));
    }
    let theta = (lambda * a).asin();
    let f: Vec<C64> = lat
        .positions()
        .iter()
        .map(|x| C64::from_polar(1.0, theta * x / a))
        .collect();
    let applied: Vec<C64> = (0..lat.n())
        .map(|j| {
            let up = lat.neighbour(j, 1).map_or(C64::new(0.0, 0.0), |k| f[k]);
            let down = lat.neighbour(j, -1).map_or(C64::new(0.0, 0.0), |k| f[k]);
            (up - down) / (2.0 * a) * C64::new(0.0, -1.0)
        })
        .collect();
    let target: Vec<C64> = f.iter().map(|z| z * lambda).collect();
    let residual = lat
        .regular_rows()
        .into_iter()
        .map(|j| (applied[j] - target[j]).norm())
        .fold(0.0, f64::max);
    Ok(MomentumEigenfunction {
        lambda,
        full_residual: max_diff(&applied, &target),
        residual,
        state: WaveState::new(f),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::TruncatedLattice;

    #[test]
    fn small_rings() {
        let r = dispersion_check(&PeriodicLattice::new(4, 1.0).unwrap());
        assert!(r.max_deviation < 1e-12);
        assert!((r.eigenvalues[0] + 1.0).abs() < 1e-12 && (r.eigenvalues[3] - 1.0).abs() < 1e-12);
        let big = dispersion_check(&PeriodicLattice::new(101, 0.5).unwrap());
        assert!(big.within(1e-12));
        assert!(big.spectral_radius <= 2.0);
    }

    #[test]
    fn radius_grows_as_spacing_shrinks() {
        let coarse = dispersion_check(&PeriodicLattice::new(40, 0.5).unwrap());
        let fine = dispersion_check(&PeriodicLattice::new(80, 0.25).unwrap());
        assert!(fine.spectral_radius > coarse.spectral_radius);
        assert!((fine.spectral_radius - 4.0).abs() < 1e-12);
    }

    #[test]
    fn eigenfunction_samples() {
        let lat: Lattice = TruncatedLattice::symmetric(20, 1.0).unwrap().into();
        let f = momentum_eigenfunction(std::f64::consts::FRAC_1_SQRT_2, &lat).unwrap();
        let pos = lat.positions();
        for (z, x) in f.state.amplitudes.iter().zip(&pos) {
            assert!((z - C64::from_polar(1.0, x * PI / 4.0)).norm() < 1e-14);
        }
        assert!(f.residual < 1e-12);
        assert!(f.full_residual > 0.1);
        let zero = momentum_eigenfunction(0.0, &lat).unwrap();
        assert!(zero.state.amplitudes.iter().all(|z| *z == C64::new(1.0, 0.0)));
        assert!(momentum_eigenfunction(1.0, &lat).is_err());
    }

    #[test]
    fn periodic_eigenvalue_matches_fourier_vector() {
        let ring = PeriodicLattice::new(12, 0.5).unwrap();
        let lambda = (2.0 * PI / 12.0).sin() / 0.5;
        let f = momentum_eigenfunction(lambda, &ring.into()).unwrap();
        assert!(f.full_residual < 1e-12);
        // Fourier vector e^{2 pi i j / N} in site order.
        let fourier: Vec<C64> = (0..12)
            .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / 12.0))
            .collect();
        let phase = fourier[0] / f.state.amplitudes[0];
        let diff = f
            .state
            .amplitudes
            .iter()
            .zip(&fourier)
            .map(|(u, v)| (u * phase - v).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }
}
