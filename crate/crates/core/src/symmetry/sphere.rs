use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;
use serde::Serialize;

use super::nd::{LatticeSpecND, NdVariant};
use crate::exact::Rational;
use crate::{Error, Result};

/// A lattice point `x_k = n_k a_k`, stored as the integers `n_k`.
pub type LatticePoint = Vec<i64>;

/// Value of the sphere polynomial at `x_k = n_k a_k` with numeric spacings.
pub fn sphere_value(spec: &LatticeSpecND, variant: NdVariant, n: &[i64]) -> Rational {
    let half = Rational::new(1.into(), 2.into());
    let mut acc = Rational::zero();
    for (a, &k) in spec.spacings().iter().zip(n) {
        let k = Rational::from_integer(k.into());
        let a2 = a * a;
        acc += match variant {
            NdVariant::ForwardBasic => a2 * &k * (&k - Rational::from_integer(1.into())),
            NdVariant::CentralSymmetric => a2 * (&k * &k - &half),
        };
    }
    acc
}

/// Every point of the box `|n_k| <= radius` on which the sphere polynomial
/// equals `c`, in lexicographic order.
pub fn lattice_sphere(
    spec: &LatticeSpecND,
    c: &Rational,
    variant: NdVariant,
    radius: i64,
) -> Result<Vec<LatticePoint>> {
    if radius < 0 {
        return Err(Error::Domain("search radius must be non-negative".into()));
    }
    let dim = spec.dim();
    let mut out = Vec::new();
    let mut n = vec![-radius; dim];
    loop {
        if &sphere_value(spec, variant, &n) == c {
            out.push(n.clone());
        }
        // Odometer step, last axis fastest.
        let mut axis = dim;
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            if n[axis] < radius {
                n[axis] += 1;
                break;
            }
            n[axis] = -radius;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SphereReport {
    pub variant: NdVariant,
    pub points: usize,
    pub closed_under_swaps: bool,
    pub closed_under_reflections: bool,
    pub orbits: Vec<Vec<LatticePoint>>,
}

impl SphereReport {
    pub fn closed(&self) -> bool {
        self.closed_under_swaps && self.closed_under_reflections
    }
}

/// Reflection that leaves the sphere polynomial invariant: `x -> a - x`
/// for forward differences, `x -> -x` for the symmetric variant.
fn reflect(variant: NdVariant, k: i64) -> i64 {
    match variant {
        NdVariant::ForwardBasic => 1 - k,
        NdVariant::CentralSymmetric => -k,
    }
}

fn images(variant: NdVariant, p: &[i64]) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let mut q = p.to_vec();
            q.swap(i, j);
            out.push(q);
        }
        let mut q = p.to_vec();
        q[i] = reflect(variant, q[i]);
        out.push(q);
    }
    out
}

/// Closure of a point set under coordinate swaps and per-axis reflections,
/// with its orbit decomposition. Requires equal spacings.
pub fn sphere_symmetries_check(
    points: &[LatticePoint],
    spec: &LatticeSpecND,
    variant: NdVariant,
) -> Result<SphereReport> {
    if !spec.is_uniform() {
        return Err(Error::Domain("symmetry check needs equal spacings".into()));
    }
    let set: BTreeSet<&[i64]> = points.iter().map(Vec::as_slice).collect();
    let mut swaps = true;
    let mut reflections = true;
    for p in points {
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                let mut q = p.clone();
                q.swap(i, j);
                swaps &= set.contains(q.as_slice());
            }
            let mut q = p.clone();
            q[i] = reflect(variant, q[i]);
            reflections &= set.contains(q.as_slice());
        }
    }
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for p in points {
        if seen.contains(p) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        let mut queue = VecDeque::from([p.clone()]);
        while let Some(q) = queue.pop_front() {
            if !orbit.insert(q.clone()) {
                continue;
            }
            queue.extend(images(variant, &q).into_iter().filter(|r| !orbit.contains(r)));
        }
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit.into_iter().collect());
    }
    Ok(SphereReport {
        variant,
        points: points.len(),
        closed_under_swaps: swaps,
        closed_under_reflections: reflections,
        orbits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn unit() -> LatticeSpecND {
        LatticeSpecND::uniform(3).unwrap()
    }

    /// Independent enumeration: nested loops over the box.
    fn brute(c: i64, r: i64) -> BTreeSet<LatticePoint> {
        let f = |k: i64| k * (k - 1);
        let mut out = BTreeSet::new();
        for x in -r..=r {
            for y in -r..=r {
                for z in -r..=r {
                    if f(x) + f(y) + f(z) == c {
                        out.insert(vec![x, y, z]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn forward_spheres_match_brute_force() {
        for c in 0..=12 {
            let pts = lattice_sphere(&unit(), &int(c), NdVariant::ForwardBasic, 4).unwrap();
            let set: BTreeSet<_> = pts.iter().cloned().collect();
            assert_eq!(set, brute(c, 4), "c = {c}");
        }
    }

    #[test]
    fn small_spheres() {
        let s = unit();
        let c0 = lattice_sphere(&s, &int(0), NdVariant::ForwardBasic, 3).unwrap();
        assert_eq!(c0.len(), 8);
        assert!(c0.iter().all(|p| p.iter().all(|&k| k == 0 || k == 1)));
        let c2 = lattice_sphere(&s, &int(2), NdVariant::ForwardBasic, 3).unwrap();
        assert_eq!(c2.len(), 24);
        assert!(lattice_sphere(&s, &int(1), NdVariant::ForwardBasic, 3)
            .unwrap()
            .is_empty());
        // Symmetric variant with a = 1: sum n_k^2 - 3/2.
        let cs = lattice_sphere(&s, &rat(-1, 2), NdVariant::CentralSymmetric, 2).unwrap();
        assert_eq!(cs.len(), 6);
    }

    #[test]
    fn symmetry_closure_and_orbits() {
        let s = unit();
        let c0 = lattice_sphere(&s, &int(0), NdVariant::ForwardBasic, 3).unwrap();
        let r = sphere_symmetries_check(&c0, &s, NdVariant::ForwardBasic).unwrap();
        assert!(r.closed());
        assert_eq!(r.orbits.len(), 1);
        let c2 = lattice_sphere(&s, &int(2), NdVariant::ForwardBasic, 3).unwrap();
        let r = sphere_symmetries_check(&c2, &s, NdVariant::ForwardBasic).unwrap();
        assert!(r.closed());
        assert_eq!(r.orbits.iter().map(Vec::len).sum::<usize>(), 24);
        let empty = sphere_symmetries_check(&[], &s, NdVariant::ForwardBasic).unwrap();
        assert!(empty.closed() && empty.orbits.is_empty());
        let broken = sphere_symmetries_check(&c0[..7], &s, NdVariant::ForwardBasic).unwrap();
        assert!(!broken.closed());
    }

    #[test]
    fn unequal_spacings_rejected() {
        let s = LatticeSpecND::new(vec![int(1), int(2), int(1)]).unwrap();
        assert!(sphere_symmetries_check(&[], &s, NdVariant::ForwardBasic).is_err());
    }
}
