use serde::Serialize;

use crate::matrix::C64;

/// Complex amplitudes on the lattice sites at time `time`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveState {
    pub amplitudes: Vec<C64>,
    pub time: f64,
}

impl WaveState {
    pub fn new(amplitudes: Vec<C64>) -> Self {
        Self {
            amplitudes,
            time: 0.0,
        }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Plain `l2` norm over the sites.
    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn normalized(&self) -> Self {
        let s = self.norm();
        Self {
            amplitudes: self.amplitudes.iter().map(|z| z / s).collect(),
            time: self.time,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `<self, other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `sup_j |u_j - v_j|`.
pub(crate) fn max_diff(u: &[C64], v: &[C64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}
