use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::lattice::PeriodicLattice;
use crate::matrix::{build_matrices, LatticeMatrix};

/// Relative gap below which two adjacent levels count as one doubled level.
pub const PAIR_GAP: f64 = 1e-3;

/// `(-Qc^2 + Xhat^2) / 2` on a periodic lattice with `N = 2m`, `m` odd.
pub fn oscillator_hamiltonian(lat: &PeriodicLattice) -> Result<LatticeMatrix> {
    if lat.n % 2 == 1 {
        return Err(SpectralError::Domain(format!(
            "oscillator needs N = 2m with m odd, got N = {}",
            lat.n
        )));
    }
    let ops = build_matrices(&(*lat).into())?;
    let qc = ops.qc.re();
    let xh = ops.xhat.re();
    let h = (&xh * &xh - &qc * &qc) / 2.0;
    let h = (&h + h.transpose()) / 2.0;
    LatticeMatrix::from_real(&h, (*lat).into(), true)
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelPair {
    pub lower: usize,
    pub mean: f64,
    pub splitting: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OscillatorSpectrum {
    pub lattice: PeriodicLattice,
    /// The `n_low` lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Pair index of each eigenvalue, `None` for an unpaired level.
    pub pair_id: Vec<Option<usize>>,
    pub pairs: Vec<LevelPair>,
}

impl OscillatorSpectrum {
    /// Number of eigenvalues in `[lo, hi]`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.eigenvalues.iter().filter(|e| (lo..=hi).contains(*e)).count()
    }

    /// `true` when the lowest `k` eigenvalue slots form `k/2` pairs.
    pub fn leading_levels_paired(&self, levels: usize) -> bool {
        self.pairs.len() >= levels
            && self.pairs[..levels]
                .iter()
                .enumerate()
                .all(|(i, p)| p.lower == 2 * i)
    }
}

pub fn oscillator_spectrum(lat: &PeriodicLattice, n_low: usize) -> Result<OscillatorSpectrum> {
    let h = oscillator_hamiltonian(lat)?;
    let mut e: Vec<f64> = h.re().symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e.truncate(n_low);
    let pair_id = pair_levels(&e, PAIR_GAP);
    let mut pairs = Vec::new();
    for (i, id) in pair_id.iter().enumerate() {
        if let Some(id) = id {
            if *id == pairs.len() {
                pairs.push(LevelPair {
                    lower: i,
                    mean: (e[i] + e[i + 1]) / 2.0,
                    splitting: e[i + 1] - e[i],
                });
            }
        }
    }
    Ok(OscillatorSpectrum {
        lattice: *lat,
        eigenvalues: e,
        pair_id,
        pairs,
    })
}

/// Greedy pairing of ascending `levels`: `i` and `i + 1` pair when their gap
/// is below `rel_gap` times the gap to the neighbouring level.
pub fn pair_levels(levels: &[f64], rel_gap: f64) -> Vec<Option<usize>> {
    let mut out = vec![None; levels.len()];
    let mut next_id = 0;
    let mut i = 0;
    while i + 1 < levels.len() {
        let gap = levels[i + 1] - levels[i];
        let local = if i + 2 < levels.len() {
            levels[i + 2] - levels[i + 1]
        } else if i > 0 {
            levels[i] - levels[i - 1]
        } else {
            f64::INFINITY
        };
        if gap < rel_gap * local {
            out[i] = Some(next_id);
            out[i + 1] = Some(next_id);
            next_id += 1;
            i += 2;
        } else {
            i += 1;
        }
    }
    out
}

/// Lowest `count` eigenvalues of `(p^2 - d^2/dp^2)/2` on `[-L, L]` with
/// clamped ends: second-order finite differences on `intervals` cells,
/// solved by Sturm-sequence bisection, then Richardson-extrapolated
/// against the grid with twice as many cells.
pub fn pspace_oscillator_levels(half_width: f64, intervals: usize, count: usize) -> Vec<f64> {
    let coarse = fd_levels(half_width, intervals, count);
    let fine = fd_levels(half_width, 2 * intervals, count);
    coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect()
}

fn fd_levels(half_width: f64, intervals: usize, count: usize) -> Vec<f64> {
    let h = 2.0 * half_width / intervals as f64;
    let diag: Vec<f64> = (1..intervals)
        .map(|i| {
            let p = -half_width + i as f64 * h;
            1.0 / (h * h) + p * p / 2.0
        })
        .collect();
    let off = -1.0 / (2.0 * h * h);
    let hi = diag.iter().fold(0.0f64, |m, d| m.max(*d)) + 2.0 * off.abs();
    (0..count)
        .map(|k| {
            let (mut lo, mut up) = (0.0, hi);
            for _ in 0..200 {
                let mid = (lo + up) / 2.0;
                if sturm_count(&diag, off, mid) > k {
                    up = mid;
                } else {
                    lo = mid;
                }
                if up - lo < 1e-14 * up.max(1.0) {
                    break;
                }
            }
            (lo + up) / 2.0
        })
        .collect()
}

/// Number of eigenvalues below `x` of the tridiagonal matrix with constant
/// off-diagonal `off`.
fn sturm_count(diag: &[f64], off: f64, x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, d) in diag.iter().enumerate() {
        q = if i == 0 { d - x } else { d - x - off * off / q };
        if q == 0.0 {
            q = f64::EPSILON * off.abs();
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Dense reference for small grids, used to cross-check the bisection.
pub fn fd_dense(half_width: f64, intervals: usize) -> Vec<f64> {
    let h = 2.0 * half_width / intervals as f64;
    let m = intervals - 1;
    let mat = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            let p = -half_width + (i + 1) as f64 * h;
            1.0 / (h * h) + p * p / 2.0
        } else if i.abs_diff(j) == 1 {
            -1.0 / (2.0 * h * h)
        } else {
            0.0
        }
    });
    let mut e: Vec<f64> = mat.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}
