use std::f64::consts::PI;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::lattice::{PeriodicLattice, TruncatedLattice};
use crate::matrix::{build_matrices, C64};
use crate::quadrature::{Branch, BranchQuadrature, QuadratureSpec};
use crate::wave::{inner, norm, WaveState};

/// Boundary-phase angles of the two branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionParams {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl ExtensionParams {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        for al in [alpha1, alpha2] {
            check_alpha(al)?;
        }
        Ok(Self { alpha1, alpha2 })
    }

    pub fn uniform(alpha: f64) -> Result<Self> {
        Self::new(alpha, alpha)
    }

    pub fn alpha(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Inner => self.alpha1,
            Branch::Outer => self.alpha2,
        }
    }
}

impl Default for ExtensionParams {
    fn default() -> Self {
        Self {
            alpha1: 0.0,
            alpha2: 0.0,
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(SpectralError::Domain(format!(
            "extension angle must lie in [0, 1), got {alpha}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XhatTolerances {
    /// Bound on `|r| / |f|` for the eigen-equation residual.
    pub residual: f64,
    /// Largest admissible `|f(end)| / max |f|`.
    pub tail: f64,
}

impl Default for XhatTolerances {
    fn default() -> Self {
        Self {
            residual: 1e-6,
            tail: 1e-2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct XhatEigenpair {
    pub branch: Branch,
    pub n: i64,
    pub alpha: f64,
    /// `(alpha + n) pi a`.
    pub eigenvalue: f64,
    /// Generalized Rayleigh quotient of the sampled eigenfunction.
    pub measured: f64,
    pub residual: f64,
    pub tail_ratio: f64,
    /// `a sum_j |f_j|^2`, which is 1 for the exact eigenfunction.
    pub weighted_norm: f64,
    #[serde(skip)]
    pub state: WaveState,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchSpacing {
    pub branch: Branch,
    pub from_n: i64,
    pub spacing: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct XhatSpectrum {
    pub lattice: TruncatedLattice,
    pub params: ExtensionParams,
    pub quadrature: QuadratureSpec,
    pub pairs: Vec<XhatEigenpair>,
    pub spacings: Vec<BranchSpacing>,
    pub max_residual: f64,
    pub max_spacing_error: f64,
}

impl XhatSpectrum {
    pub fn within(&self, tol: f64) -> bool {
        self.max_residual < tol && self.max_spacing_error < tol
    }
}

/// Samples the branch eigenfunctions `f_{n,l}` by quadrature and checks
/// `xhat f = (alpha_l + n) pi a f` on the interior of `lat`.
///
/// `Qp^-1 f` is not square summable, so the equation is tested in the
/// equivalent local form `(Qp X + X Qp) g / 2 = lambda Qp f` with
/// `g = Qp^-1 f` synthesized from the amplitude divided by `cos(ak)`.
pub fn xhat_eigenfunctions(
    params: ExtensionParams,
    lat: &TruncatedLattice,
    n_range: RangeInclusive<i64>,
    quad: QuadratureSpec,
    tol: XhatTolerances,
) -> Result<XhatSpectrum> {
    let a = lat.a;
    let sites = lat.positions();
    let mut pairs = Vec::new();
    for branch in Branch::BOTH {
        let q = BranchQuadrature::new(branch, a, quad)?;
        let p = q.p();
        let cos = q.cos();
        let alpha = params.alpha(branch);
        for n in n_range.clone() {
            let lambda = (alpha + n as f64) * PI * a;
            let chi: Vec<C64> = p
                .iter()
                .map(|p| C64::from_polar((a / 2.0).sqrt(), -lambda * p))
                .collect();
            let f_amp: Vec<C64> = chi.iter().zip(&cos).map(|(z, c)| z * c.abs().sqrt()).collect();
            let g_amp: Vec<C64> = chi
                .iter()
                .zip(&cos)
                .map(|(z, c)| z / (c.abs().sqrt() * c.signum()))
                .collect();
            let f = q.synthesize(&sites, &f_amp);
            let g = q.synthesize(&sites, &g_amp);
            let pair = check_pair(branch, n, alpha, lambda, &sites, f, &g, a);
            if pair.tail_ratio > tol.tail {
                return Err(SpectralError::Resolution(format!(
                    "branch {} n = {n}: tail ratio {:.3e} exceeds {:.1e}; enlarge the lattice",
                    branch.label(),
                    pair.tail_ratio,
                    tol.tail
                )));
            }
            pairs.push(pair);
        }
    }
    let spacings: Vec<BranchSpacing> = pairs
        .windows(2)
        .filter(|w| w[0].branch == w[1].branch && w[1].n == w[0].n + 1)
        .map(|w| {
            let spacing = w[1].measured - w[0].measured;
            BranchSpacing {
                branch: w[0].branch,
                from_n: w[0].n,
                spacing,
                error: (spacing - PI * a).abs(),
            }
        })
        .collect();
    Ok(XhatSpectrum {
        lattice: *lat,
        params,
        quadrature: quad,
        max_residual: pairs.iter().map(|p| p.residual).fold(0.0, f64::max),
        max_spacing_error: spacings.iter().map(|s| s.error).fold(0.0, f64::max),
        pairs,
        spacings,
    })
}

#[allow(clippy::too_many_arguments)]
fn check_pair(
    branch: Branch,
    n: i64,
    alpha: f64,
    lambda: f64,
    x: &[f64],
    f: Vec<C64>,
    g: &[C64],
    a: f64,
) -> XhatEigenpair {
    let len = f.len();
    let mut lhs = Vec::with_capacity(len - 2);
    let mut qpf = Vec::with_capacity(len - 2);
    for j in 1..len - 1 {
        let qp_xg = (g[j + 1] * x[j + 1] + g[j - 1] * x[j - 1]) / 2.0;
        let x_qpg = (g[j + 1] + g[j - 1]) / 2.0 * x[j];
        lhs.push((qp_xg + x_qpg) / 2.0);
        qpf.push((f[j + 1] + f[j - 1]) / 2.0);
    }
    let r: Vec<C64> = lhs.iter().zip(&qpf).map(|(l, q)| l - q * lambda).collect();
    let interior = &f[1..len - 1];
    let gi = &g[1..len - 1];
    let measured = (inner(gi, &lhs) / inner(gi, &qpf)).re;
    let peak = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    XhatEigenpair {
        branch,
        n,
        alpha,
        eigenvalue: lambda,
        measured,
        residual: norm(&r) / norm(interior),
        tail_ratio: f[0].norm().max(f[len - 1].norm()) / peak,
        weighted_norm: a * f.iter().map(|z| z.norm_sqr()).sum::<f64>(),
        state: WaveState::new(f),
    }
}

/// Spectrum of the dense `Xhat` on a periodic lattice near the origin.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodicXhatSpectrum {
    pub lattice: PeriodicLattice,
    /// Eigenvalues with `|lambda| < window pi a`, ascending.
    pub eigenvalues: Vec<f64>,
    /// `(lambda_{i+2} - lambda_i) / (pi a)`: the two branches interleave.
    pub same_branch_spacings: Vec<f64>,
    pub max_relative_deviation: f64,
}

pub fn periodic_xhat_spectrum(lat: &PeriodicLattice, window: f64) -> Result<PeriodicXhatSpectrum> {
    let ops = build_matrices(&(*lat).into())?;
    let unit = PI * lat.a;
    let mut eigenvalues: Vec<f64> = ops
        .xhat
        .re()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .filter(|e| e.abs() < window * unit)
        .collect();
    eigenvalues.sort_by(f64::total_cmp);
    let same_branch_spacings: Vec<f64> = eigenvalues.windows(3).map(|w| (w[2] - w[0]) / unit).collect();
    let max_relative_deviation = same_branch_spacings
        .iter()
        .map(|s| (s - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(PeriodicXhatSpectrum {
        lattice: *lat,
        eigenvalues,
        same_branch_spacings,
        max_relative_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(alpha: f64, a: f64, half: usize, range: RangeInclusive<i64>) -> Result<XhatSpectrum> {
        xhat_eigenfunctions(
            ExtensionParams::uniform(alpha)?,
            &TruncatedLattice::symmetric(half, a)?,
            range,
            QuadratureSpec::default(),
            XhatTolerances::default(),
        )
    }

    #[test]
    fn ground_label_has_zero_eigenvalue() {
        let s = run(0.0, 1.0, 80, 0..=0).unwrap();
        for p in &s.pairs {
            assert_eq!(p.eigenvalue, 0.0);
            assert!(p.measured.abs() < 1e-6);
            assert!(p.residual < 1e-6);
        }
    }

    #[test]
    fn half_angle_eigenvalue() {
        let s = run(0.5, 1.0, 120, 2..=2).unwrap();
        assert!((s.pairs[0].eigenvalue - 2.5 * PI).abs() < 1e-15);
        assert!((s.pairs[0].measured - 2.5 * PI).abs() < 1e-6);
    }

    #[test]
    fn spacing_is_pi_a_on_both_branches() {
        let s = run(0.25, 0.5, 150, -1..=2).unwrap();
        assert_eq!(s.spacings.len(), 6);
        assert!(s.within(1e-6), "{:?} {}", s.spacings, s.max_residual);
        for p in &s.pairs {
            assert!((p.weighted_norm - 1.0).abs() < 1e-2, "{}", p.weighted_norm);
        }
    }

    #[test]
    fn small_lattice_is_a_resolution_error() {
        let err = run(0.0, 1.0, 3, 0..=0).unwrap_err();
        assert!(matches!(err, SpectralError::Resolution(_)));
    }

    #[test]
    fn periodic_spacing_approaches_pi_a() {
        let lat = PeriodicLattice::new(202, 0.2).unwrap();
        let s = periodic_xhat_spectrum(&lat, 4.0).unwrap();
        assert!(s.eigenvalues.len() >= 10);
        assert!(
            s.max_relative_deviation < 2.0 / 202.0,
            "{}",
            s.max_relative_deviation
        );
    }

    #[test]
    fn alpha_range() {
        assert!(ExtensionParams::new(0.0, 0.99).is_ok());
        assert!(ExtensionParams::new(1.0, 0.0).is_err());
        assert!(ExtensionParams::uniform(-0.1).is_err());
    }
}
