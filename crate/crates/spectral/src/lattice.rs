use serde::Serialize;

use crate::error::{Result, SpectralError};

fn check_spacing(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(SpectralError::Lattice(format!(
            "spacing must be positive, got {a}"
        )))
    }
}

/// `N` sites on a ring with spacing `a`.
///
/// Site `j` carries the coordinate of the representative of `j mod N`
/// closest to the origin, so the seam of the position operator lies
/// opposite the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodicLattice {
    pub n: usize,
    pub a: f64,
}

impl PeriodicLattice {
    pub fn new(n: usize, a: f64) -> Result<Self> {
        if n < 2 {
            return Err(SpectralError::Lattice(format!(
                "periodic lattice needs N >= 2, got {n}"
            )));
        }
        check_spacing(a)?;
        Ok(Self { n, a })
    }

    pub fn site_index(&self, j: usize) -> i64 {
        let j = j as i64;
        let n = self.n as i64;
        if j <= (n - 1) / 2 {
            j
        } else {
            j - n
        }
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.site_index(j) as f64 * self.a).collect()
    }

    /// Rows whose two neighbours are the adjacent lattice points, i.e. not
    /// touching the seam.
    pub fn regular_rows(&self) -> Vec<usize> {
        let seam = (self.n - 1) / 2;
        (0..self.n)
            .filter(|&j| j != seam && j != (seam + 1) % self.n)
            .collect()
    }
}

/// `N` (odd) sites `j a`, `|j| <= (N-1)/2`, with zero padding outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncatedLattice {
    pub n: usize,
    pub a: f64,
}

impl TruncatedLattice {
    pub fn new(n: usize, a: f64) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(SpectralError::Lattice(format!(
                "truncated lattice needs odd N >= 3, got {n}"
            )));
        }
        check_spacing(a)?;
        Ok(Self { n, a })
    }

    /// Lattice with sites `-half..=half`.
    pub fn symmetric(half: usize, a: f64) -> Result<Self> {
        Self::new(2 * half + 1, a)
    }

    pub fn half(&self) -> usize {
        (self.n - 1) / 2
    }

    pub fn site_index(&self, j: usize) -> i64 {
        j as i64 - self.half() as i64
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.site_index(j) as f64 * self.a).collect()
    }

    pub fn interior_rows(&self) -> Vec<usize> {
        (1..self.n - 1).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Lattice {
    Periodic(PeriodicLattice),
    Truncated(TruncatedLattice),
}

impl Lattice {
    pub fn n(&self) -> usize {
        match self {
            Lattice::Periodic(l) => l.n,
            Lattice::Truncated(l) => l.n,
        }
    }

    pub fn a(&self) -> f64 {
        match self {
            Lattice::Periodic(l) => l.a,
            Lattice::Truncated(l) => l.a,
        }
    }

    pub fn positions(&self) -> Vec<f64> {
        match self {
            Lattice::Periodic(l) => l.positions(),
            Lattice::Truncated(l) => l.positions(),
        }
    }

    /// Rows on which a nearest-neighbour stencil sees true neighbours.
    pub fn regular_rows(&self) -> Vec<usize> {
        match self {
            Lattice::Periodic(l) => l.regular_rows(),
            Lattice::Truncated(l) => l.interior_rows(),
        }
    }

    /// Index of the neighbour `j + step`, or `None` past an open end.
    pub fn neighbour(&self, j: usize, step: i64) -> Option<usize> {
        let n = self.n() as i64;
        let k = j as i64 + step;
        match self {
            Lattice::Periodic(_) => Some(k.rem_euclid(n) as usize),
            Lattice::Truncated(_) => (0..n).contains(&k).then_some(k as usize),
        }
    }
}

impl From<PeriodicLattice> for Lattice {
    fn from(l: PeriodicLattice) -> Self {
        Lattice::Periodic(l)
    }
}

impl From<TruncatedLattice> for Lattice {
    fn from(l: TruncatedLattice) -> Self {
        Lattice::Truncated(l)
    }
}
