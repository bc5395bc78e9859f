use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exact::rational::{factorial, to_f64};
use crate::exact::{stirling2, Rational, SpacingScalar};
use crate::{Error, Result};

/// `sum_k F_k x^(k)` with `F_k` possibly depending on the spacing symbol.
#[derive(Debug, Clone)]
pub struct NewtonSeries {
    pub coeffs: Vec<SpacingScalar>,
    /// Numeric spacing used for evaluation.
    pub spacing: Rational,
    pub source: String,
}

/// Blow-up rule for the divergence verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceRule {
    pub threshold: f64,
    pub by_term: usize,
}

impl Default for DivergenceRule {
    fn default() -> Self {
        Self {
            threshold: 1e6,
            by_term: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// `x = n a` with `n >= 0`: every term beyond `n` vanishes.
    Terminating {
        n: u64,
    },
    Converging {
        ratio_estimate: f64,
    },
    /// Term magnitudes exceeded the threshold at index `at_term`.
    Diverging {
        at_term: usize,
        growth: f64,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Terminating { .. } => "terminating",
            Verdict::Converging { .. } => "converging",
            Verdict::Diverging { .. } => "diverging",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NewtonRow {
    pub k: usize,
    pub term: f64,
    pub partial_sum: f64,
    /// `|t_k / t_(k-1)|` when both are nonzero.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct NewtonEval {
    pub x: Rational,
    pub partial_sum: Rational,
    pub verdict: Verdict,
    pub rows: Vec<NewtonRow>,
}

/// Gregory-Newton re-expansion `F_k = sum_m f_(k+m) S(k+m, k) a^m`, kept
/// symbolic in `a`; the sum over `m` runs over all supplied coefficients.
pub fn newton_map(
    f_coeffs: &[Rational],
    spacing: &Rational,
    k_max: usize,
    guard: usize,
) -> Result<NewtonSeries> {
    let needed = k_max + 1 + guard;
    if f_coeffs.len() < needed {
        return Err(Error::InsufficientOrder {
            needed,
            have: f_coeffs.len(),
        });
    }
    let mut coeffs = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut fk = SpacingScalar::zero();
        for (n, f) in f_coeffs.iter().enumerate().skip(k) {
            if f.is_zero() {
                continue;
            }
            let s = stirling2(n, k)?;
            fk += &SpacingScalar::monomial(f * s, (n - k) as i32);
        }
        coeffs.push(fk);
    }
    Ok(NewtonSeries {
        coeffs,
        spacing: spacing.clone(),
        source: "gregory-newton".into(),
    })
}

impl NewtonSeries {
    /// Umbral image `sum_k f_k x^(k)` of `sum_k f_k y^k`.
    pub fn umbral_image(f_coeffs: &[Rational], spacing: &Rational, source: &str) -> Self {
        Self {
            coeffs: f_coeffs.iter().cloned().map(SpacingScalar::constant).collect(),
            spacing: spacing.clone(),
            source: source.into(),
        }
    }

    /// Numeric coefficients at the stored spacing.
    pub fn numeric_coeffs(&self) -> Result<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.eval(&self.spacing)).collect()
    }
}

/// Taylor coefficients `k^l / l!` of `exp(k y)`.
pub fn exp_coeffs(k: &Rational, n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut pow = Rational::one();
    for l in 0..=n {
        out.push(&pow / Rational::from_integer(factorial(l as u32)));
        pow *= k;
    }
    out
}

/// Taylor coefficients of `exp(-y^2 / 2)`.
pub fn gaussian_coeffs(n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|j| {
            if j % 2 == 1 {
                return Rational::zero();
            }
            let l = (j / 2) as u32;
            let den = Rational::from_integer(factorial(l)) * Rational::from_integer(2.into()).pow(l as i32);
            let sign = if l.is_multiple_of(2) {
                Rational::one()
            } else {
                -Rational::one()
            };
            sign / den
        })
        .collect()
}

/// Returns `n` when `x = n a` for an integer `n >= 0`.
pub fn lattice_index(x: &Rational, a: &Rational) -> Option<u64> {
    if a.is_zero() {
        return None;
    }
    let q = x / a;
    if q.is_integer() && !q.is_negative() {
        q.to_integer().try_into().ok()
    } else {
        None
    }
}

/// Partial sum through `k_cut` with a convergence verdict. Terms up to
/// `max(k_cut, rule.by_term)` are inspected for the verdict.
pub fn eval_newton(
    series: &NewtonSeries,
    x: &Rational,
    k_cut: usize,
    rule: DivergenceRule,
) -> Result<NewtonEval> {
    let a = &series.spacing;
    let coeffs = series.numeric_coeffs()?;
    let horizon = k_cut.max(rule.by_term).min(coeffs.len().saturating_sub(1));
    let mut falling = Rational::one();
    let mut partial = Rational::zero();
    let mut partial_cut = Rational::zero();
    let mut rows = Vec::with_capacity(horizon + 1);
    let mut first: Option<f64> = None;
    let mut prev: Option<f64> = None;
    let mut diverged: Option<(usize, f64)> = None;
    for (k, c) in coeffs.iter().enumerate().take(horizon + 1) {
        let term = c * &falling;
        partial += &term;
        if k <= k_cut {
            partial_cut = partial.clone();
        }
        let t = to_f64(&term).abs();
        let ratio = match prev {
            Some(p) if p > 0.0 && t > 0.0 => Some(t / p),
            _ => None,
        };
        if t > 0.0 && first.is_none() {
            first = Some(t);
        }
        if let Some(f0) = first {
            let growth = t / f0;
            if diverged.is_none() && k <= rule.by_term && growth > rule.threshold {
                diverged = Some((k, growth));
            }
        }
        rows.push(NewtonRow {
            k,
            term: to_f64(&term),
            partial_sum: to_f64(&partial),
            ratio,
        });
        prev = Some(t);
        falling *= x - a * Rational::from_integer(k.into());
    }
    let verdict = if let Some(n) = lattice_index(x, a) {
        Verdict::Terminating { n }
    } else if let Some((at_term, growth)) = diverged {
        Verdict::Diverging { at_term, growth }
    } else {
        let ratio_estimate = rows.iter().rev().find_map(|r| r.ratio).unwrap_or(0.0);
        Verdict::Converging { ratio_estimate }
    };
    rows.truncate(k_cut + 1);
    Ok(NewtonEval {
        x: x.clone(),
        partial_sum: partial_cut,
        verdict,
        rows,
    })
}
