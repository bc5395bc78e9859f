use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::newton::DivergenceRule;
use crate::exact::rational::{factorial, to_f64};
use crate::exact::Rational;
use crate::{Error, Result};

/// Forward-difference oscillator ground state `sum_l (-1)^l x^(2l) / (2^l l!)`
/// at `x = n a`; the series terminates after `2l > n`.
pub fn ho_psi0(n: u64, a: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut l = 0u64;
    while 2 * l <= n {
        let mut ff = Rational::one();
        for j in 0..2 * l {
            ff *= a * Rational::from_integer((n - j).into());
        }
        let den =
            Rational::from_integer(factorial(l as u32)) * Rational::from_integer(2.into()).pow(l as i32);
        let sign = if l.is_multiple_of(2) {
            Rational::one()
        } else {
            -Rational::one()
        };
        acc += sign * ff / den;
        l += 1;
    }
    acc
}

/// `x (x-a) psi(x-2a) - [psi(x) - 2 psi(x+a) + psi(x+2a)] / a^2 - psi(x)` at `x = n a`.
pub fn ho_residual(psi: &BTreeMap<i64, Rational>, n: i64, a: &Rational) -> Option<Rational> {
    let x = a * Rational::from_integer(n.into());
    let lhs_coef = &x * (&x - a);
    let back = if lhs_coef.is_zero() {
        Rational::zero()
    } else {
        lhs_coef * psi.get(&(n - 2))?
    };
    let p0 = psi.get(&n)?;
    let p1 = psi.get(&(n + 1))?;
    let p2 = psi.get(&(n + 2))?;
    let second = (p0 - p1 * Rational::from_integer(2.into()) + p2) / (a * a);
    Some(back - second - p0)
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceDemo {
    pub x_over_a: f64,
    /// `|t_(l+1) / t_l|` from the closed-form quotient.
    pub ratios: Vec<f64>,
    /// First `l` with `|t_l / t_0|` above the threshold.
    pub blowup_term: Option<usize>,
    pub threshold: f64,
}

#[derive(Debug, Clone)]
pub struct HoForwardReport {
    pub spacing: Rational,
    pub values: BTreeMap<i64, Rational>,
    /// Largest `|residual|` over `0 <= n <= n_max`; exactly zero when the
    /// difference equation holds.
    pub max_residual: Rational,
    pub divergence: DivergenceDemo,
    pub free_parameters: usize,
    pub extensions: Vec<(Rational, Rational, BTreeMap<i64, Rational>)>,
    pub extension_max_residual: Rational,
}

/// Quotient `t_(l+1)/t_l = -(x - 2la)(x - 2la - a) / (2(l+1))` at `x`.
pub fn ho_term_ratio(x: f64, a: f64, l: usize) -> f64 {
    let lf = l as f64;
    -(x - 2.0 * lf * a) * (x - 2.0 * lf * a - a) / (2.0 * (lf + 1.0))
}

pub fn divergence_demo(x_over_a: f64, a: f64, rule: DivergenceRule) -> DivergenceDemo {
    let x = x_over_a * a;
    let mut growth = 1.0f64;
    let mut ratios = Vec::with_capacity(rule.by_term);
    let mut blowup_term = None;
    for l in 0..rule.by_term {
        let r = ho_term_ratio(x, a, l);
        ratios.push(r.abs());
        growth *= r.abs();
        if blowup_term.is_none() && growth > rule.threshold {
            blowup_term = Some(l + 1);
        }
    }
    DivergenceDemo {
        x_over_a,
        ratios,
        blowup_term,
        threshold: rule.threshold,
    }
}

/// Continues a solution to `n = -depth..-1` from free values at `-a`, `-2a`.
pub fn extend_negative(
    nonneg: &BTreeMap<i64, Rational>,
    psi_m1: Rational,
    psi_m2: Rational,
    depth: i64,
    a: &Rational,
) -> Result<BTreeMap<i64, Rational>> {
    let mut psi = nonneg.clone();
    psi.insert(-1, psi_m1);
    psi.insert(-2, psi_m2);
    // The equation at n < 0 fixes psi at n - 2.
    for n in (-(depth - 2)..=-1).rev() {
        let x = a * Rational::from_integer(n.into());
        let coef = &x * (&x - a);
        let (p0, p1, p2) = match (psi.get(&n), psi.get(&(n + 1)), psi.get(&(n + 2))) {
            (Some(p0), Some(p1), Some(p2)) => (p0.clone(), p1.clone(), p2.clone()),
            _ => return Err(Error::Domain("missing values for extension".into())),
        };
        let rhs = (&p0 - &p1 * Rational::from_integer(2.into()) + &p2) / (a * a) + &p0;
        psi.insert(n - 2, rhs / coef);
    }
    Ok(psi)
}

/// Evaluates the ground-state series on `0..=n_max`, checks the difference
/// equation exactly, demonstrates divergence at `x = a/2` and constructs two
/// full-lattice extensions that agree for `n >= 0`.
pub fn ho_forward_solution(n_max: i64, a: &Rational, rule: DivergenceRule) -> Result<HoForwardReport> {
    if n_max < 2 {
        return Err(Error::Domain("need n_max >= 2".into()));
    }
    if a <= &Rational::zero() {
        return Err(Error::Domain("spacing must be positive".into()));
    }
    let top = n_max + 2;
    let values: BTreeMap<i64, Rational> = (0..=top).map(|n| (n, ho_psi0(n as u64, a))).collect();
    let mut max_residual = Rational::zero();
    for n in 0..=n_max {
        let r = ho_residual(&values, n, a).expect("values cover n..n+2").abs();
        if r > max_residual {
            max_residual = r;
        }
    }
    let depth = 8;
    let choices = [
        (Rational::zero(), Rational::zero()),
        (Rational::one(), Rational::new((-1).into(), 2.into())),
    ];
    let mut extensions = Vec::new();
    let mut extension_max_residual = Rational::zero();
    for (m1, m2) in choices {
        let full = extend_negative(&values, m1.clone(), m2.clone(), depth, a)?;
        let lowest = *full.keys().next().expect("non-empty");
        for n in (lowest + 2)..=n_max {
            let r = ho_residual(&full, n, a).expect("range covered").abs();
            if r > extension_max_residual {
                extension_max_residual = r;
            }
        }
        extensions.push((m1, m2, full));
    }
    Ok(HoForwardReport {
        spacing: a.clone(),
        values,
        max_residual,
        divergence: divergence_demo(0.5, to_f64(a), rule),
        free_parameters: 2,
        extensions,
        extension_max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn origin_value() {
        assert_eq!(ho_psi0(0, &int(1)), int(1));
        // x = 2a: 1 - (2a)(a)/2
        assert_eq!(ho_psi0(2, &int(1)), int(0));
        assert_eq!(ho_psi0(2, &rat(1, 2)), rat(3, 4));
    }

    #[test]
    fn difference_equation_holds_exactly() {
        for a in [int(1), rat(1, 3)] {
            let r = ho_forward_solution(30, &a, DivergenceRule::default()).unwrap();
            assert!(r.max_residual.is_zero());
            assert!(r.extension_max_residual.is_zero());
        }
    }

    #[test]
    fn extension_is_not_unique() {
        let r = ho_forward_solution(10, &int(1), DivergenceRule::default()).unwrap();
        assert_eq!(r.free_parameters, 2);
        let (_, _, s1) = &r.extensions[0];
        let (_, _, s2) = &r.extensions[1];
        for n in 0..=10 {
            assert_eq!(s1[&n], s2[&n]);
        }
        assert_ne!(s1[&-1], s2[&-1]);
        assert_ne!(s1[&-5], s2[&-5]);
    }

    #[test]
    fn diverges_between_sites() {
        let d = divergence_demo(0.5, 1.0, DivergenceRule::default());
        assert!(d.blowup_term.is_some_and(|l| l <= 50));
        // The ratio grows without bound.
        assert!(d.ratios[49] > d.ratios[10]);
    }
}
