use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::matrix::C64;

/// Composite Gauss-Legendre layout: `panels` equal panels of `order` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadratureSpec {
    pub panels: usize,
    pub order: usize,
}

impl Default for QuadratureSpec {
    /// 2048 nodes.
    fn default() -> Self {
        Self {
            panels: 64,
            order: 32,
        }
    }
}

impl QuadratureSpec {
    pub fn nodes(&self) -> usize {
        self.panels * self.order
    }

    /// Nodes and weights on `[lo, hi]`.
    pub fn rule(&self, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let order = NonZeroUsize::new(self.order)
            .filter(|_| self.panels > 0)
            .ok_or_else(|| SpectralError::Resolution("quadrature needs panels and order > 0".into()))?;
        let base = GaussLegendre::new(order);
        let h = (hi - lo) / self.panels as f64;
        let mut t = Vec::with_capacity(self.nodes());
        let mut w = Vec::with_capacity(self.nodes());
        for p in 0..self.panels {
            let left = lo + p as f64 * h;
            for &(x, wx) in base.as_node_weight_pairs() {
                t.push(left + (x + 1.0) * h / 2.0);
                w.push(wx * h / 2.0);
            }
        }
        Ok((t, w))
    }
}

/// The two halves of the Brillouin zone separated by the zeros of `cos(ak)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `|k| <= pi/(2a)`, where `cos(ak) >= 0`.
    Inner,
    /// `pi/(2a) <= |k| <= pi/a`, represented as `[pi/(2a), 3pi/(2a)]`.
    Outer,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Inner, Branch::Outer];

    /// Sign of `cos(ak)` on the branch.
    pub fn cos_sign(self) -> f64 {
        match self {
            Branch::Inner => 1.0,
            Branch::Outer => -1.0,
        }
    }

    pub fn label(self) -> u8 {
        match self {
            Branch::Inner => 1,
            Branch::Outer => 2,
        }
    }
}

/// Quadrature over one branch in the variable `t` with
/// `k = k_0 + pi/(2a) * t (3 - t^2)/2`, which flattens the square-root
/// behaviour at the zeros of `cos(ak)`.
#[derive(Debug, Clone)]
pub struct BranchQuadrature {
    pub branch: Branch,
    pub a: f64,
    pub k: Vec<f64>,
    /// Weights including the Jacobian `dk/dt`.
    pub w: Vec<f64>,
}

impl BranchQuadrature {
    pub fn new(branch: Branch, a: f64, spec: QuadratureSpec) -> Result<Self> {
        let (t, wt) = spec.rule(-1.0, 1.0)?;
        let centre = match branch {
            Branch::Inner => 0.0,
            Branch::Outer => PI / a,
        };
        let half = PI / (2.0 * a);
        let k = t
            .iter()
            .map(|&t| centre + half * t * (3.0 - t * t) / 2.0)
            .collect();
        let w = t
            .iter()
            .zip(&wt)
            .map(|(&t, &w)| w * 1.5 * (1.0 - t * t) * half)
            .collect();
        Ok(Self { branch, a, k, w })
    }

    /// `p = sin(ak)/a` at the nodes.
    pub fn p(&self) -> Vec<f64> {
        self.k.iter().map(|k| (self.a * k).sin() / self.a).collect()
    }

    /// `cos(ak)` at the nodes.
    pub fn cos(&self) -> Vec<f64> {
        self.k.iter().map(|k| (self.a * k).cos()).collect()
    }

    /// `f(x) = (2 pi)^(-1/2) sum_nodes e^{ikx} amp(k) w` at each site.
    pub fn synthesize(&self, sites: &[f64], amp: &[C64]) -> Vec<C64> {
        let norm = (2.0 * PI).sqrt();
        let weighted: Vec<C64> = amp.iter().zip(&self.w).map(|(z, w)| z * *w / norm).collect();
        par_map(sites, |&x| {
            self.k
                .iter()
                .zip(&weighted)
                .map(|(k, z)| C64::from_polar(1.0, k * x) * z)
                .sum()
        })
    }
}

/// Order-preserving map split across the available cores.
pub(crate) fn par_map<T: Sync, U: Send, F: Fn(&T) -> U + Sync>(items: &[T], f: F) -> Vec<U> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(f).collect::<Vec<U>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("quadrature worker panicked"))
            .collect()
    })
}
