use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::lattice::TruncatedLattice;
use crate::matrix::C64;
use crate::quadrature::{Branch, BranchQuadrature, QuadratureSpec};
use crate::wave::{norm, WaveState};
use crate::xhat::check_alpha;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundStateParams {
    pub alpha: f64,
    /// The constant `C` in `chi_0 = C exp(kappa p - p^2/2)`.
    pub amplitude: f64,
    /// Extension eigenmodes `|m| <= modes` used to apply `xhat_alpha`.
    pub modes: i64,
    pub quadrature: QuadratureSpec,
}

impl GroundStateParams {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha,
            amplitude: 1.0,
            modes: 64,
            quadrature: QuadratureSpec::default(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundState {
    pub params: GroundStateParams,
    pub lattice: TruncatedLattice,
    /// `kappa = i pi a alpha`.
    pub kappa: C64,
    /// `|(Q + xhat_alpha) psi - kappa psi| / |psi|` on interior sites.
    pub residual: f64,
    /// The same with `i kappa` on the right, the eigenvalue the Fourier
    /// dictionary `Q <-> ip`, `xhat <-> i d/dp` actually produces.
    pub residual_i_kappa: f64,
    /// `|chi(1/a) - e^{2 pi i alpha} chi(-1/a)| / |chi|`.
    pub boundary_defect: f64,
    /// `sup |xhat_alpha chi - i chi'|` over the p nodes.
    pub expansion_error: f64,
    /// `|psi(end)| / max |psi|`.
    pub tail_ratio: f64,
    /// `(int |chi|^2 dp)^(1/2)` over `[-1/a, 1/a]`.
    pub chi_norm: f64,
    #[serde(skip)]
    pub state: WaveState,
}

struct Chi {
    kappa: C64,
    c: f64,
}

impl Chi {
    fn at(&self, p: f64) -> C64 {
        (self.kappa * p - p * p / 2.0).exp() * self.c
    }
}

/// Builds `psi_0` from `chi_0` on both branches and tests it against
/// `(Q + xhat_alpha) psi = kappa psi`.
///
/// `xhat_alpha` acts in p-space through its eigenbasis
/// `sqrt(a/2) e^{i nu_m p}`, `nu_m = (alpha + m) pi a`, eigenvalue
/// `-nu_m`, which spans the domain `chi(1/a) = e^{2 pi i alpha} chi(-1/a)`;
/// the result is pulled back to the lattice with the same quadrature as
/// `psi_0`.
pub fn ground_state_pspace(params: GroundStateParams, lat: &TruncatedLattice) -> Result<GroundState> {
    check_alpha(params.alpha)?;
    if params.amplitude == 0.0 || !params.amplitude.is_finite() {
        return Err(SpectralError::Domain(
            "ground state amplitude C must be finite and nonzero".into(),
        ));
    }
    let a = lat.a;
    let edge = 1.0 / a;
    let kappa = C64::new(0.0, PI * a * params.alpha);
    let chi = Chi {
        kappa,
        c: params.amplitude,
    };

    // Eigen-coefficients of chi_0 in the extension basis.
    let (pn, pw) = params.quadrature.rule(-edge, edge)?;
    let basis = |m: i64, p: f64| C64::from_polar((a / 2.0).sqrt(), (params.alpha + m as f64) * PI * a * p);
    let coeffs: Vec<(f64, C64)> = (-params.modes..=params.modes)
        .map(|m| {
            let c = pn
                .iter()
                .zip(&pw)
                .map(|(&p, &w)| basis(m, p).conj() * chi.at(p) * w)
                .sum::<C64>();
            (-(params.alpha + m as f64) * PI * a, c)
        })
        .collect();
    let xhat_chi = |p: f64| -> C64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, (ev, c))| basis(i as i64 - params.modes, p) * c * *ev)
            .sum()
    };
    let expansion_error = pn
        .iter()
        .map(|&p| (xhat_chi(p) - C64::i() * (kappa - p) * chi.at(p)).norm())
        .fold(0.0, f64::max);

    let sites = lat.positions();
    let mut psi = vec![C64::new(0.0, 0.0); sites.len()];
    let mut xpsi = psi.clone();
    for branch in Branch::BOTH {
        let q = BranchQuadrature::new(branch, a, params.quadrature)?;
        let p = q.p();
        let root: Vec<f64> = q.cos().iter().map(|c| c.abs().sqrt()).collect();
        let amp: Vec<C64> = p.iter().zip(&root).map(|(&p, r)| chi.at(p) * *r).collect();
        let xamp: Vec<C64> = p.iter().zip(&root).map(|(&p, r)| xhat_chi(p) * *r).collect();
        for (acc, v) in psi.iter_mut().zip(q.synthesize(&sites, &amp)) {
            *acc += v;
        }
        for (acc, v) in xpsi.iter_mut().zip(q.synthesize(&sites, &xamp)) {
            *acc += v;
        }
    }

    let len = psi.len();
    let interior = &psi[1..len - 1];
    let lhs: Vec<C64> = (1..len - 1)
        .map(|j| (psi[j + 1] - psi[j - 1]) / (2.0 * a) + xpsi[j])
        .collect();
    let residual_for = |ev: C64| {
        let r: Vec<C64> = lhs.iter().zip(interior).map(|(l, s)| l - s * ev).collect();
        norm(&r) / norm(interior)
    };
    let chi_norm = pn
        .iter()
        .zip(&pw)
        .map(|(&p, &w)| chi.at(p).norm_sqr() * w)
        .sum::<f64>()
        .sqrt();
    let twist = C64::from_polar(1.0, 2.0 * PI * params.alpha);
    let peak = psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(GroundState {
        params,
        lattice: *lat,
        kappa,
        residual: residual_for(kappa),
        residual_i_kappa: residual_for(C64::i() * kappa),
        boundary_defect: (chi.at(edge) - twist * chi.at(-edge)).norm() / chi_norm,
        expansion_error,
        tail_ratio: psi[0].norm().max(psi[len - 1].norm()) / peak,
        chi_norm,
        state: WaveState::new(psi),
    })
}

/// `|(p chi_0)(1/a) - e^{2 pi i alpha} (p chi_0)(-1/a)| / |chi_0|`: how far
/// the creation-operator image leaves the extension domain.
pub fn creation_domain_violation(gs: &GroundState) -> f64 {
    let a = gs.lattice.a;
    let edge = 1.0 / a;
    let chi = Chi {
        kappa: gs.kappa,
        c: gs.params.amplitude,
    };
    let twist = C64::from_polar(1.0, 2.0 * PI * gs.params.alpha);
    (chi.at(edge) * edge - twist * chi.at(-edge) * (-edge)).norm() / gs.chi_norm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(alpha: f64, a: f64, half: usize) -> GroundState {
        ground_state_pspace(
            GroundStateParams::new(alpha).unwrap(),
            &TruncatedLattice::symmetric(half, a).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_angle_is_gaussian() {
        let gs = state(0.0, 0.1, 200);
        assert_eq!(gs.kappa, C64::new(0.0, 0.0));
        assert!(gs.residual < 1e-8);
        assert!(gs.boundary_defect < 1e-10);
    }

    #[test]
    fn quarter_angle_eigenvalue_is_i_kappa() {
        let gs = state(0.25, 0.1, 300);
        assert!(gs.boundary_defect < 1e-10);
        assert!(gs.expansion_error < 1e-8, "{}", gs.expansion_error);
        assert!(gs.residual_i_kappa < 1e-8, "{}", gs.residual_i_kappa);
        // The relation with kappa itself fails by |kappa - i kappa| |psi|.
        let expected = (gs.kappa - C64::i() * gs.kappa).norm();
        assert!(
            (gs.residual - expected).abs() < 1e-6,
            "{} vs {expected}",
            gs.residual
        );
    }

    #[test]
    fn creation_image_leaves_domain() {
        let a = 0.5;
        let gs = state(0.0, a, 60);
        // Closed form: 2 (1/a) e^{-1/(2a^2)} / |chi|, with |chi|^2 = int e^{-p^2}.
        let h = 4.0 / 20000.0;
        let simpson: f64 = (0..=20000)
            .map(|i| {
                let p = -2.0 + i as f64 * h;
                let w = if i == 0 || i == 20000 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * (-p * p).exp()
            })
            .sum::<f64>()
            * h
            / 3.0;
        let expected = 2.0 / a * (-1.0 / (2.0 * a * a)).exp() / simpson.sqrt();
        assert!((creation_domain_violation(&gs) - expected).abs() < 1e-10);
        let half = state(0.5, a, 60);
        assert!(creation_domain_violation(&half) > 1e-3);
    }

    #[test]
    fn zero_amplitude_rejected() {
        let mut p = GroundStateParams::new(0.3).unwrap();
        p.amplitude = 0.0;
        assert!(ground_state_pspace(p, &TruncatedLattice::symmetric(10, 0.5).unwrap()).is_err());
        assert!(GroundStateParams::new(1.0).is_err());
    }
}
