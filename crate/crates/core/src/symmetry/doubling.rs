use std::f64::consts::PI;

use serde::Serialize;

use super::nd::LatticeSpecND;
use crate::exact::to_f64;

#[derive(Debug, Clone, Serialize)]
pub struct DoublingReport {
    pub dimension: usize,
    pub include_time: bool,
    pub species: usize,
    /// Zeros of `sin(a_k kappa_k)` in `(-pi/a_k, pi/a_k]`, per lattice axis
    /// (time first when it is discretized).
    pub zeros: Vec<Vec<f64>>,
}

/// Zeros `m pi / a` of `sin(a kappa)` with `-pi/a < m pi/a <= pi/a`.
pub fn zone_zeros(a: f64) -> Vec<f64> {
    // -1 < m <= 1 leaves m = 0 and m = 1.
    (0..=1).map(|m| m as f64 * PI / a).collect()
}

/// Species count of the lattice Klein-Gordon operator: the product of the
/// per-axis zero counts. A discretized time axis uses the first spacing.
pub fn doubling_count(spec: &LatticeSpecND, include_time: bool) -> DoublingReport {
    let mut spacings: Vec<f64> = spec.spacings().iter().map(to_f64).collect();
    if include_time {
        spacings.insert(0, spacings[0]);
    }
    let zeros: Vec<Vec<f64>> = spacings.iter().map(|&a| zone_zeros(a)).collect();
    DoublingReport {
        dimension: spec.dim(),
        include_time,
        species: zeros.iter().map(Vec::len).product(),
        zeros,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    /// Independent count: sign changes and exact zeros of `sin(a k)` on a
    /// fine grid over the half-open zone.
    fn grid_zero_count(a: f64) -> usize {
        let n = 100_000;
        let h = 2.0 * PI / a / n as f64;
        let mut count = 0;
        let mut prev = (a * (-PI / a + h)).sin();
        // k = -pi/a is excluded; k = pi/a is included.
        for i in 2..=n {
            let k = -PI / a + i as f64 * h;
            let s = (a * k).sin();
            if i == n {
                count += 1;
                break;
            }
            if prev.signum() != s.signum() {
                count += 1;
            }
            prev = s;
        }
        count
    }

    #[test]
    fn species_counts() {
        let three = LatticeSpecND::uniform(3).unwrap();
        assert_eq!(doubling_count(&three, false).species, 8);
        assert_eq!(doubling_count(&three, true).species, 16);
        for n in 1..=4 {
            assert_eq!(
                doubling_count(&LatticeSpecND::uniform(n).unwrap(), false).species,
                1 << n
            );
        }
        let one = doubling_count(&LatticeSpecND::new(vec![rat(1, 2)]).unwrap(), false);
        assert_eq!(one.zeros, vec![vec![0.0, 2.0 * PI]]);
    }

    #[test]
    fn grid_oracle_agrees() {
        for a in [int(1), rat(1, 2), rat(3, 7)] {
            let a = to_f64(&a);
            assert_eq!(grid_zero_count(a), zone_zeros(a).len());
        }
    }
}
