use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::exact::json::scalar_to_json;
use crate::exact::rational::{factorial, Rational};
use crate::exact::{LaurentPoly, SpacingScalar};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeltaKind {
    Derivative,
    Forward,
    Backward,
    Central,
    Laguerre,
}

impl DeltaKind {
    pub const ALL: [DeltaKind; 5] = [
        DeltaKind::Derivative,
        DeltaKind::Forward,
        DeltaKind::Backward,
        DeltaKind::Central,
        DeltaKind::Laguerre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DeltaKind::Derivative => "derivative",
            DeltaKind::Forward => "forward",
            DeltaKind::Backward => "backward",
            DeltaKind::Central => "central",
            DeltaKind::Laguerre => "laguerre",
        }
    }

    fn label(self) -> &'static str {
        match self {
            DeltaKind::Derivative => "derivative",
            DeltaKind::Forward => "forward-difference",
            DeltaKind::Backward => "backward-difference",
            DeltaKind::Central => "central-difference",
            DeltaKind::Laguerre => "laguerre",
        }
    }

    /// Whether the kind uses the lattice spacing.
    pub fn uses_spacing(self) -> bool {
        matches!(
            self,
            DeltaKind::Forward | DeltaKind::Backward | DeltaKind::Central
        )
    }
}

impl fmt::Display for DeltaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DeltaKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DeltaKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.label() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Shift-stencil form `sum_s w_s S_{s a}`, with shifts in units of `a`.
pub type Stencil = BTreeMap<Vec<Rational>, SpacingScalar>;

enum Rule {
    Finite(BTreeMap<Vec<u32>, SpacingScalar>),
    Exp {
        axis: usize,
        c: SpacingScalar,
    },
    Delta {
        axis: usize,
        kind: DeltaKind,
        h: SpacingScalar,
    },
    Linear(Vec<(SpacingScalar, ShiftInvariantOp)>),
    Product(ShiftInvariantOp, ShiftInvariantOp),
    Inverse {
        op: ShiftInvariantOp,
        c0_inv: SpacingScalar,
    },
    Derivative(ShiftInvariantOp, usize),
    Embed(ShiftInvariantOp, Vec<usize>),
}

struct Node {
    dim: usize,
    rule: Rule,
    support: BTreeSet<usize>,
    cache: Mutex<HashMap<Vec<u32>, SpacingScalar>>,
}

/// Formal power series `sum_m c_m D^m` in the partial-derivative symbols
/// `D_1..D_n`, with coefficients generated on demand and memoized.
#[derive(Clone)]
pub struct ShiftInvariantOp {
    node: Arc<Node>,
    label: Arc<str>,
    stencil: Option<Arc<Stencil>>,
}

fn unit(dim: usize, axis: usize) -> Vec<u32> {
    let mut e = vec![0; dim];
    e[axis] = 1;
    e
}

fn rat_u(n: u32) -> Rational {
    Rational::from_integer(n.into())
}

/// All multi-indices `j` with `j <= m` componentwise.
pub(crate) fn sub_indices(m: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(m.len())];
    for &mi in m {
        let mut next = Vec::with_capacity(out.len() * (mi as usize + 1));
        for prefix in &out {
            for j in 0..=mi {
                let mut p = prefix.clone();
                p.push(j);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// All multi-indices of dimension `dim` with total degree `<= order`.
pub fn indices_up_to(dim: usize, order: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == dim {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(dim, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, order, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// Composite labels are kept readable; deep expressions get a generic name.
fn short_label(label: Arc<str>) -> Arc<str> {
    if label.len() > 48 {
        Arc::from("series")
    } else {
        label
    }
}

fn shift_units(c: &SpacingScalar) -> Option<Rational> {
    if c.is_zero() {
        return Some(Rational::zero());
    }
    match c.as_monomial() {
        Some((r, 1)) => Some(r.clone()),
        _ => None,
    }
}

impl ShiftInvariantOp {
    fn from_rule(dim: usize, rule: Rule, label: impl Into<Arc<str>>) -> Self {
        let support = match &rule {
            Rule::Finite(t) => t
                .keys()
                .flat_map(|e| e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| i))
                .collect(),
            Rule::Exp { axis, c } => {
                if c.is_zero() {
                    BTreeSet::new()
                } else {
                    BTreeSet::from([*axis])
                }
            }
            Rule::Delta { axis, .. } => BTreeSet::from([*axis]),
            Rule::Linear(parts) => parts
                .iter()
                .flat_map(|(_, op)| op.node.support.iter().copied())
                .collect(),
            Rule::Product(a, b) => a.node.support.union(&b.node.support).copied().collect(),
            Rule::Inverse { op, .. } => op.node.support.clone(),
            Rule::Derivative(op, _) => op.node.support.clone(),
            Rule::Embed(op, map) => op.node.support.iter().map(|&i| map[i]).collect(),
        };
        Self {
            node: Arc::new(Node {
                dim,
                rule,
                support,
                cache: Mutex::new(HashMap::new()),
            }),
            label: short_label(label.into()),
            stencil: None,
        }
    }

    fn with_stencil(mut self, stencil: Option<Stencil>) -> Self {
        self.stencil = stencil.map(|mut s| {
            s.retain(|_, w| !w.is_zero());
            Arc::new(s)
        });
        self
    }

    /// Polynomial in `D` with the given coefficients.
    pub fn finite(
        dim: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, SpacingScalar)>,
        label: &str,
    ) -> Self {
        let mut map: BTreeMap<Vec<u32>, SpacingScalar> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "multi-index length must equal dimension");
            let slot = map.entry(e.clone()).or_default();
            *slot += &c;
            if slot.is_zero() {
                map.remove(&e);
            }
        }
        let stencil = if map.keys().all(|e| e.iter().all(|&k| k == 0)) {
            let mut s = Stencil::new();
            if let Some(c) = map.get(&vec![0; dim]) {
                s.insert(vec![Rational::zero(); dim], c.clone());
            }
            Some(s)
        } else {
            None
        };
        Self::from_rule(dim, Rule::Finite(map), label).with_stencil(stencil)
    }

    pub fn identity(dim: usize) -> Self {
        Self::finite(dim, [(vec![0; dim], SpacingScalar::one())], "1")
    }

    pub fn zero(dim: usize) -> Self {
        Self::finite(dim, [], "0")
    }

    pub fn constant(dim: usize, c: SpacingScalar) -> Self {
        let label = c.to_string();
        Self::finite(dim, [(vec![0; dim], c)], &label)
    }

    /// `D_axis`.
    pub fn d(dim: usize, axis: usize) -> Self {
        Self::finite(dim, [(unit(dim, axis), SpacingScalar::one())], "D")
    }

    /// `e^{c D}` in one dimension.
    pub fn shift_op(c: SpacingScalar) -> Self {
        Self::shift_axis(1, 0, c)
    }

    /// `e^{c D_axis}`, i.e. `f(x) -> f(x + c e_axis)`.
    pub fn shift_axis(dim: usize, axis: usize, c: SpacingScalar) -> Self {
        let stencil = shift_units(&c).map(|r| {
            let mut v = vec![Rational::zero(); dim];
            v[axis] = r;
            Stencil::from([(v, SpacingScalar::one())])
        });
        let label = format!("S[{c}]");
        Self::from_rule(dim, Rule::Exp { axis, c }, label).with_stencil(stencil)
    }

    /// One-dimensional delta operator of the given kind.
    pub fn make_delta(kind: DeltaKind, spacing: SpacingScalar) -> Result<Self> {
        Self::make_delta_axis(kind, spacing, 1, 0)
    }

    /// Delta operator acting on coordinate `axis` of a `dim`-dimensional lattice.
    pub fn make_delta_axis(kind: DeltaKind, spacing: SpacingScalar, dim: usize, axis: usize) -> Result<Self> {
        if axis >= dim {
            return Err(Error::Domain(format!(
                "axis {axis} out of range for dimension {dim}"
            )));
        }
        match kind {
            DeltaKind::Derivative => {
                return Ok(Self::d(dim, axis).with_label(kind.label()));
            }
            DeltaKind::Laguerre => {
                return Ok(Self::from_rule(
                    dim,
                    Rule::Delta {
                        axis,
                        kind,
                        h: SpacingScalar::zero(),
                    },
                    kind.label(),
                ));
            }
            _ => {}
        }
        let r = match spacing.as_monomial() {
            Some((r, 1)) if r.is_positive() => r.clone(),
            _ => {
                return Err(Error::Domain(format!(
                    "spacing must be c*a with c > 0, got {spacing}"
                )))
            }
        };
        let inv = spacing.inverse()?;
        let at = |s: Rational| {
            let mut v = vec![Rational::zero(); dim];
            v[axis] = s;
            v
        };
        let stencil = match kind {
            DeltaKind::Forward => {
                Stencil::from([(at(r.clone()), inv.clone()), (at(Rational::zero()), -&inv)])
            }
            DeltaKind::Backward => {
                Stencil::from([(at(Rational::zero()), inv.clone()), (at(-r.clone()), -&inv)])
            }
            _ => {
                let half = inv.scale(&Rational::new(1.into(), 2.into()));
                Stencil::from([(at(r.clone()), half.clone()), (at(-r.clone()), -&half)])
            }
        };
        Ok(Self::from_rule(
            dim,
            Rule::Delta {
                axis,
                kind,
                h: spacing,
            },
            kind.label(),
        )
        .with_stencil(Some(stencil)))
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.node.dim
    }

    /// Axes whose `D` symbol may occur (a structural superset).
    pub fn support(&self) -> &BTreeSet<usize> {
        &self.node.support
    }

    pub fn stencil(&self) -> Option<&Stencil> {
        self.stencil.as_deref()
    }

    /// Finite polynomial in `D`, if the operator is stored as one.
    pub fn as_finite(&self) -> Option<&BTreeMap<Vec<u32>, SpacingScalar>> {
        match &self.node.rule {
            Rule::Finite(t) => Some(t),
            _ => None,
        }
    }

    /// Degree in `D` when the operator is a known polynomial in `D`.
    pub fn poly_degree(&self) -> Option<u32> {
        self.as_finite()
            .map(|t| t.keys().map(|e| e.iter().sum()).max().unwrap_or(0))
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.as_finite().is_some_and(BTreeMap::is_empty)
    }

    /// Coefficient of `D^m`.
    pub fn coeff(&self, m: &[u32]) -> SpacingScalar {
        assert_eq!(m.len(), self.dim(), "multi-index length must equal dimension");
        if m.iter()
            .enumerate()
            .any(|(i, &k)| k > 0 && !self.node.support.contains(&i))
        {
            return SpacingScalar::zero();
        }
        if let Rule::Finite(t) = &self.node.rule {
            return t.get(m).cloned().unwrap_or_default();
        }
        if let Some(v) = self.node.cache.lock().expect("coefficient cache").get(m) {
            return v.clone();
        }
        let v = self.compute(m);
        self.node
            .cache
            .lock()
            .expect("coefficient cache")
            .insert(m.to_vec(), v.clone());
        v
    }

    /// Coefficient of `D^m` for a one-dimensional operator.
    pub fn coeff1(&self, m: u32) -> SpacingScalar {
        self.coeff(&[m])
    }

    /// `c_0..c_order` of a one-dimensional operator.
    pub fn coefficients(&self, order: u32) -> Vec<SpacingScalar> {
        (0..=order).map(|m| self.coeff1(m)).collect()
    }

    fn compute(&self, m: &[u32]) -> SpacingScalar {
        match &self.node.rule {
            Rule::Finite(t) => t.get(m).cloned().unwrap_or_default(),
            Rule::Exp { axis, c } => {
                let k = m[*axis];
                c.pow(k).scale(&Rational::from_integer(factorial(k)).recip())
            }
            Rule::Delta { axis, kind, h } => {
                let k = m[*axis];
                if k == 0 {
                    return SpacingScalar::zero();
                }
                let base = || h.pow(k - 1).scale(&Rational::from_integer(factorial(k)).recip());
                match kind {
                    DeltaKind::Derivative => {
                        if k == 1 {
                            SpacingScalar::one()
                        } else {
                            SpacingScalar::zero()
                        }
                    }
                    DeltaKind::Forward => base(),
                    DeltaKind::Backward => {
                        if k % 2 == 1 {
                            base()
                        } else {
                            -base()
                        }
                    }
                    DeltaKind::Central => {
                        if k % 2 == 1 {
                            base()
                        } else {
                            SpacingScalar::zero()
                        }
                    }
                    DeltaKind::Laguerre => SpacingScalar::from_int(-1),
                }
            }
            Rule::Linear(parts) => {
                let mut acc = SpacingScalar::zero();
                for (w, op) in parts {
                    let c = op.coeff(m);
                    if !c.is_zero() {
                        acc += &(w * &c);
                    }
                }
                acc
            }
            Rule::Product(a, b) => {
                let mut acc = SpacingScalar::zero();
                for j in sub_indices(m) {
                    let x = a.coeff(&j);
                    if x.is_zero() {
                        continue;
                    }
                    let rest: Vec<u32> = m.iter().zip(&j).map(|(p, q)| p - q).collect();
                    let y = b.coeff(&rest);
                    if !y.is_zero() {
                        acc += &(&x * &y);
                    }
                }
                acc
            }
            Rule::Inverse { op, c0_inv } => {
                if m.iter().all(|&k| k == 0) {
                    return c0_inv.clone();
                }
                let mut acc = SpacingScalar::zero();
                for j in sub_indices(m) {
                    if j.iter().all(|&k| k == 0) {
                        continue;
                    }
                    let x = op.coeff(&j);
                    if x.is_zero() {
                        continue;
                    }
                    let rest: Vec<u32> = m.iter().zip(&j).map(|(p, q)| p - q).collect();
                    let y = self.coeff(&rest);
                    if !y.is_zero() {
                        acc += &(&x * &y);
                    }
                }
                -(&acc * c0_inv)
            }
            Rule::Derivative(op, axis) => {
                let mut up = m.to_vec();
                up[*axis] += 1;
                op.coeff(&up).scale(&rat_u(up[*axis]))
            }
            Rule::Embed(op, map) => {
                let inner: Vec<u32> = map.iter().map(|&t| m[t]).collect();
                let covered: u32 = inner.iter().sum();
                let total: u32 = m.iter().sum();
                if covered != total {
                    return SpacingScalar::zero();
                }
                op.coeff(&inner)
            }
        }
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "operator dimension mismatch ({} vs {})",
            self.dim(),
            other.dim()
        );
    }

    /// `sum_i w_i op_i`.
    pub fn linear(dim: usize, parts: Vec<(SpacingScalar, ShiftInvariantOp)>, label: &str) -> Self {
        for (_, op) in &parts {
            assert_eq!(op.dim(), dim, "operator dimension mismatch");
        }
        let parts: Vec<_> = parts
            .into_iter()
            .filter(|(w, op)| !w.is_zero() && !op.is_structurally_zero())
            .collect();
        if parts.is_empty() {
            return Self::zero(dim);
        }
        if parts.iter().all(|(_, op)| op.as_finite().is_some()) {
            let mut terms = Vec::new();
            for (w, op) in &parts {
                for (e, c) in op.as_finite().expect("checked finite") {
                    terms.push((e.clone(), w * c));
                }
            }
            return Self::finite(dim, terms, label);
        }
        let stencil = parts
            .iter()
            .map(|(w, op)| op.stencil().map(|s| (w.clone(), s)))
            .collect::<Option<Vec<_>>>()
            .map(|items| {
                let mut out = Stencil::new();
                for (w, s) in items {
                    for (shift, v) in s {
                        *out.entry(shift.clone()).or_default() += &(&w * v);
                    }
                }
                out
            });
        Self::from_rule(dim, Rule::Linear(parts), label).with_stencil(stencil)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_dim(other);
        let label = format!("({} + {})", self.label, other.label);
        Self::linear(
            self.dim(),
            vec![
                (SpacingScalar::one(), self.clone()),
                (SpacingScalar::one(), other.clone()),
            ],
            &label,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_dim(other);
        let label = format!("({} - {})", self.label, other.label);
        Self::linear(
            self.dim(),
            vec![
                (SpacingScalar::one(), self.clone()),
                (SpacingScalar::from_int(-1), other.clone()),
            ],
            &label,
        )
    }

    pub fn scale(&self, c: &SpacingScalar) -> Self {
        if c.is_one() {
            return self.clone();
        }
        let label = format!("({c})*{}", self.label);
        Self::linear(self.dim(), vec![(c.clone(), self.clone())], &label)
    }

    pub fn neg(&self) -> Self {
        self.scale(&SpacingScalar::from_int(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_dim(other);
        let dim = self.dim();
        if self.is_structurally_zero() || other.is_structurally_zero() {
            return Self::zero(dim);
        }
        if self
            .as_finite()
            .is_some_and(|t| t.len() == 1 && t.contains_key(&vec![0; dim]))
        {
            let c = self.coeff(&vec![0; dim]);
            return other.scale(&c);
        }
        if other
            .as_finite()
            .is_some_and(|t| t.len() == 1 && t.contains_key(&vec![0; dim]))
        {
            let c = other.coeff(&vec![0; dim]);
            return self.scale(&c);
        }
        let label = format!("{}*{}", self.label, other.label);
        if let (Some(a), Some(b)) = (self.as_finite(), other.as_finite()) {
            let mut terms = Vec::new();
            for (e, c) in a {
                for (f, d) in b {
                    let s: Vec<u32> = e.iter().zip(f).map(|(x, y)| x + y).collect();
                    terms.push((s, c * d));
                }
            }
            return Self::finite(dim, terms, &label);
        }
        let stencil = match (self.stencil(), other.stencil()) {
            (Some(a), Some(b)) => {
                let mut out = Stencil::new();
                for (s, v) in a {
                    for (t, w) in b {
                        let sum: Vec<Rational> = s.iter().zip(t).map(|(x, y)| x + y).collect();
                        *out.entry(sum).or_default() += &(v * w);
                    }
                }
                Some(out)
            }
            _ => None,
        };
        Self::from_rule(dim, Rule::Product(self.clone(), other.clone()), label).with_stencil(stencil)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity(self.dim());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Pincherle derivative `[O, x]` of a one-dimensional operator.
    pub fn pincherle(&self) -> Self {
        self.pincherle_axis(0)
    }

    /// `[O, x_axis]`, the term-wise `D_axis` derivative.
    pub fn pincherle_axis(&self, axis: usize) -> Self {
        let dim = self.dim();
        assert!(axis < dim, "axis out of range");
        let label = format!("{}'", self.label);
        if !self.node.support.contains(&axis) {
            return Self::zero(dim);
        }
        if let Some(t) = self.as_finite() {
            let terms = t.iter().filter(|(e, _)| e[axis] > 0).map(|(e, c)| {
                let mut ne = e.clone();
                ne[axis] -= 1;
                (ne, c.scale(&rat_u(e[axis])))
            });
            return Self::finite(dim, terms.collect::<Vec<_>>(), &label);
        }
        let stencil = self.stencil().map(|s| {
            s.iter()
                .map(|(shift, w)| {
                    let h = SpacingScalar::monomial(shift[axis].clone(), 1);
                    (shift.clone(), w * &h)
                })
                .collect::<Stencil>()
        });
        Self::from_rule(dim, Rule::Derivative(self.clone(), axis), label).with_stencil(stencil)
    }

    /// Reciprocal formal series; needs an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let dim = self.dim();
        let c0 = self.coeff(&vec![0; dim]);
        if c0.is_zero() {
            return Err(Error::NotInvertible(format!(
                "{} has zero constant term",
                self.label
            )));
        }
        let c0_inv = c0.inverse()?;
        let label = format!("{}^-1", self.label);
        if let Some(t) = self.as_finite() {
            if t.len() == 1 {
                return Ok(Self::constant(dim, c0_inv).with_label(&label));
            }
        }
        // Inverse of a single shift is again a shift.
        let stencil = self.stencil().and_then(|s| {
            if s.len() == 1 {
                let (shift, w) = s.iter().next().expect("one entry");
                let neg: Vec<Rational> = shift.iter().map(|x| -x.clone()).collect();
                w.inverse().ok().map(|wi| Stencil::from([(neg, wi)]))
            } else {
                None
            }
        });
        Ok(Self::from_rule(
            dim,
            Rule::Inverse {
                op: self.clone(),
                c0_inv,
            },
            label,
        )
        .with_stencil(stencil))
    }

    /// Moves the operator into dimension `dim`, axis `j` going to `map[j]`.
    pub fn embed(&self, dim: usize, map: &[usize]) -> Result<Self> {
        if map.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: map.len(),
            });
        }
        let distinct: BTreeSet<_> = map.iter().collect();
        if distinct.len() != map.len() || map.iter().any(|&t| t >= dim) {
            return Err(Error::Domain(
                "embedding map must be injective and in range".into(),
            ));
        }
        if let Some(t) = self.as_finite() {
            let terms = t.iter().map(|(e, c)| {
                let mut ne = vec![0; dim];
                for (j, &k) in e.iter().enumerate() {
                    ne[map[j]] = k;
                }
                (ne, c.clone())
            });
            return Ok(Self::finite(dim, terms.collect::<Vec<_>>(), &self.label));
        }
        let stencil = self.stencil().map(|s| {
            s.iter()
                .map(|(shift, w)| {
                    let mut v = vec![Rational::zero(); dim];
                    for (j, x) in shift.iter().enumerate() {
                        v[map[j]] = x.clone();
                    }
                    (v, w.clone())
                })
                .collect::<Stencil>()
        });
        Ok(Self::from_rule(
            dim,
            Rule::Embed(self.clone(), map.to_vec()),
            self.label.to_string(),
        )
        .with_stencil(stencil))
    }

    /// Exact action on a polynomial; uses orders up to the polynomial degree.
    pub fn apply(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        let dim = self.dim();
        let mut out = LaurentPoly::zero(dim);
        if p.is_zero() {
            return Ok(out);
        }
        let bounds: Vec<u32> = (0..dim)
            .map(|i| {
                if self.node.support.contains(&i) {
                    p.degree_in(i).unwrap_or(0)
                } else {
                    0
                }
            })
            .collect();
        for m in sub_indices(&bounds) {
            let c = self.coeff(&m);
            if c.is_zero() {
                continue;
            }
            let mut q = p.clone();
            for (i, &k) in m.iter().enumerate() {
                if k > 0 {
                    q = q.derivative_n(i, k);
                }
            }
            out = &out + &q.scale(&c);
        }
        Ok(out)
    }

    /// Coefficient-wise agreement for all total orders `<= order`.
    pub fn agrees_to(&self, other: &Self, order: u32) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let axes: BTreeSet<usize> = self.node.support.union(&other.node.support).copied().collect();
        indices_up_to(self.dim(), order)
            .into_iter()
            .filter(|m| m.iter().enumerate().all(|(i, &k)| k == 0 || axes.contains(&i)))
            .all(|m| self.coeff(&m) == other.coeff(&m))
    }

    pub fn is_zero_to(&self, order: u32) -> bool {
        if self.is_structurally_zero() {
            return true;
        }
        self.agrees_to(&Self::zero(self.dim()), order)
    }

    /// The coordinate a delta operator acts on, after checking it is one:
    /// depends on a single `D_i`, no constant term, invertible linear term.
    pub fn delta_axis(&self) -> Result<usize> {
        let dim = self.dim();
        let support = &self.node.support;
        if support.len() != 1 {
            return Err(Error::NotDelta(format!(
                "{} depends on {} derivative symbols",
                self.label,
                support.len()
            )));
        }
        let axis = *support.iter().next().expect("one axis");
        if !self.coeff(&vec![0; dim]).is_zero() {
            return Err(Error::NotDelta(format!("{} has a constant term", self.label)));
        }
        let lin = self.coeff(&unit(dim, axis));
        if lin.inverse().is_err() {
            return Err(Error::NotDelta(format!(
                "{} has non-invertible linear coefficient {lin}",
                self.label
            )));
        }
        Ok(axis)
    }

    pub fn is_delta(&self) -> bool {
        self.delta_axis().is_ok()
    }

    /// `Q'^{-1}` for a delta operator `Q`.
    pub fn pincherle_inverse(&self) -> Result<Self> {
        let axis = self.delta_axis()?;
        self.pincherle_axis(axis).inverse()
    }

    /// Human-readable truncated series, e.g. `D + 1/2*a*D^2 + O(D^4)`.
    pub fn render_series(&self, order: u32) -> String {
        let dim = self.dim();
        let mut parts = Vec::new();
        for m in indices_up_to(dim, order) {
            let c = self.coeff(&m);
            if c.is_zero() {
                continue;
            }
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let v = if dim == 1 {
                        "D".to_string()
                    } else {
                        format!("D{}", i + 1)
                    };
                    if k == 1 {
                        v
                    } else {
                        format!("{v}^{k}")
                    }
                })
                .collect();
            let mono = mono.join("*");
            let coef = if c.as_monomial().is_some() {
                c.to_string()
            } else {
                format!("({c})")
            };
            parts.push(match (mono.is_empty(), coef.as_str()) {
                (true, _) => coef,
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                _ => format!("{coef}*{mono}"),
            });
        }
        let body = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        };
        if self.as_finite().is_some() {
            body
        } else {
            format!("{body} + O(D^{})", order + 1)
        }
    }

    /// Shift-stencil form such as `1/a*S[a] - 1/a*S[0]`, when known.
    pub fn render_stencil(&self) -> Option<String> {
        let s = self.stencil()?;
        if s.is_empty() {
            return Some("0".into());
        }
        let parts: Vec<String> = s
            .iter()
            .map(|(shift, w)| {
                let sh: Vec<String> = shift
                    .iter()
                    .map(|r| {
                        if r.is_zero() {
                            "0".to_string()
                        } else if r.is_one() {
                            "a".to_string()
                        } else if *r == -Rational::one() {
                            "-a".to_string()
                        } else {
                            format!("{r}*a")
                        }
                    })
                    .collect();
                let coef = if w.as_monomial().is_some() {
                    w.to_string()
                } else {
                    format!("({w})")
                };
                match coef.as_str() {
                    "1" => format!("S[{}]", sh.join(",")),
                    "-1" => format!("-S[{}]", sh.join(",")),
                    _ => format!("{coef}*S[{}]", sh.join(",")),
                }
            })
            .collect();
        Some(parts.join(" + ").replace("+ -", "- "))
    }

    /// JSON with label, truncation order and coefficient list.
    pub fn to_json(&self, order: u32) -> serde_json::Value {
        let coefficients: Vec<serde_json::Value> = indices_up_to(self.dim(), order)
            .into_iter()
            .filter_map(|m| {
                let c = self.coeff(&m);
                (!c.is_zero()).then(|| json!({"dexp": m, "coef": scalar_to_json(&c)}))
            })
            .collect();
        json!({
            "label": self.label(),
            "dim": self.dim(),
            "order": order,
            "coefficients": coefficients,
            "stencil": self.render_stencil(),
        })
    }
}

impl fmt::Debug for ShiftInvariantOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShiftInvariantOp({}: {})", self.label, self.render_series(4))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn a() -> SpacingScalar {
        SpacingScalar::a()
    }

    fn x() -> LaurentPoly {
        LaurentPoly::x()
    }

    fn delta(kind: DeltaKind) -> ShiftInvariantOp {
        ShiftInvariantOp::make_delta(kind, a()).unwrap()
    }

    #[test]
    fn forward_and_central_series() {
        let f = delta(DeltaKind::Forward);
        assert_eq!(f.coeff1(0), SpacingScalar::zero());
        assert_eq!(f.coeff1(1), SpacingScalar::one());
        assert_eq!(f.coeff1(2), a().scale(&rat(1, 2)));
        assert_eq!(f.coeff1(3), a().pow(2).scale(&rat(1, 6)));
        let c = delta(DeltaKind::Central);
        assert_eq!(c.coeff1(2), SpacingScalar::zero());
        assert_eq!(c.coeff1(3), a().pow(2).scale(&rat(1, 6)));
        let d = delta(DeltaKind::Derivative);
        assert_eq!(
            d.coefficients(4),
            vec![
                SpacingScalar::zero(),
                SpacingScalar::one(),
                SpacingScalar::zero(),
                SpacingScalar::zero(),
                SpacingScalar::zero()
            ]
        );
        for k in DeltaKind::ALL {
            assert!(delta(k).is_delta(), "{k}");
        }
    }

    #[test]
    fn bad_delta_inputs() {
        assert!(matches!("nope".parse::<DeltaKind>(), Err(Error::UnknownKind(_))));
        assert!(ShiftInvariantOp::make_delta(DeltaKind::Forward, SpacingScalar::from_int(1)).is_err());
        assert!(ShiftInvariantOp::make_delta(DeltaKind::Forward, a().scale(&int(-1))).is_err());
        assert!(ShiftInvariantOp::make_delta(DeltaKind::Laguerre, SpacingScalar::zero()).is_ok());
        assert!(!ShiftInvariantOp::shift_op(a()).is_delta());
    }

    #[test]
    fn shifts() {
        let s = ShiftInvariantOp::shift_op(a());
        let expected =
            &(&x().pow(2) + &x().scale(&a().scale(&int(2)))) + &LaurentPoly::constant(1, a().pow(2));
        assert_eq!(s.apply(&x().pow(2)).unwrap(), expected);
        let back = ShiftInvariantOp::shift_op(-a());
        assert!(s.mul(&back).agrees_to(&ShiftInvariantOp::identity(1), 12));
        assert!(
            ShiftInvariantOp::shift_op(SpacingScalar::zero()).agrees_to(&ShiftInvariantOp::identity(1), 8)
        );
    }

    #[test]
    fn pincherle_examples() {
        let fwd = delta(DeltaKind::Forward).pincherle();
        assert!(fwd.agrees_to(&ShiftInvariantOp::shift_op(a()), 12));
        let cen = delta(DeltaKind::Central).pincherle();
        let avg = ShiftInvariantOp::shift_op(a())
            .add(&ShiftInvariantOp::shift_op(-a()))
            .scale(&SpacingScalar::constant(rat(1, 2)));
        assert!(cen.agrees_to(&avg, 12));
        // Q'' = a^2 Q for the central difference.
        assert!(cen
            .pincherle()
            .agrees_to(&delta(DeltaKind::Central).scale(&a().pow(2)), 12));
        let lag = delta(DeltaKind::Laguerre).pincherle();
        let dm1 = ShiftInvariantOp::finite(
            1,
            [
                (vec![1], SpacingScalar::one()),
                (vec![0], SpacingScalar::from_int(-1)),
            ],
            "D-1",
        );
        let expected = dm1.pow(2).inverse().unwrap().neg();
        assert!(lag.agrees_to(&expected, 12));
    }

    #[test]
    fn inversion() {
        let id = ShiftInvariantOp::identity(1);
        assert!(id.inverse().unwrap().agrees_to(&id, 8));
        let s = delta(DeltaKind::Forward).pincherle();
        let inv = s.inverse().unwrap();
        assert!(inv.agrees_to(&ShiftInvariantOp::shift_op(-a()), 12));
        assert!(inv.mul(&s).agrees_to(&id, 12));
        let c = delta(DeltaKind::Central).pincherle_inverse().unwrap();
        assert_eq!(c.apply(&LaurentPoly::one(1)).unwrap(), LaurentPoly::one(1));
        assert!(matches!(
            delta(DeltaKind::Forward).inverse(),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn application() {
        let expected = &x().scale(&SpacingScalar::from_int(2)) + &LaurentPoly::constant(1, a());
        assert_eq!(delta(DeltaKind::Forward).apply(&x().pow(2)).unwrap(), expected);
        let expected = &x().pow(2).scale_rational(&int(3)) + &LaurentPoly::constant(1, a().pow(2));
        assert_eq!(delta(DeltaKind::Central).apply(&x().pow(3)).unwrap(), expected);
        assert!(delta(DeltaKind::Laguerre)
            .apply(&LaurentPoly::zero(1))
            .unwrap()
            .is_zero());
        assert!(delta(DeltaKind::Forward).apply(&LaurentPoly::zero(2)).is_err());
    }

    #[test]
    fn stencils_render() {
        assert_eq!(
            delta(DeltaKind::Forward).render_stencil().unwrap(),
            "-a^-1*S[0] + a^-1*S[a]"
        );
        let inv = delta(DeltaKind::Forward).pincherle_inverse().unwrap();
        assert_eq!(inv.render_stencil().unwrap(), "S[-a]");
        assert!(delta(DeltaKind::Central)
            .pincherle_inverse()
            .unwrap()
            .render_stencil()
            .is_none());
        assert_eq!(delta(DeltaKind::Derivative).render_series(3), "D");
        assert_eq!(
            delta(DeltaKind::Forward).render_series(2),
            "D + 1/2*a*D^2 + O(D^3)"
        );
    }

    #[test]
    fn embedding() {
        let q = delta(DeltaKind::Forward).embed(3, &[1]).unwrap();
        assert_eq!(q.delta_axis().unwrap(), 1);
        assert_eq!(q.coeff(&[0, 2, 0]), a().scale(&rat(1, 2)));
        assert_eq!(q.coeff(&[1, 1, 0]), SpacingScalar::zero());
        let p = LaurentPoly::var(3, 1).pow(2);
        let expected =
            &LaurentPoly::var(3, 1).scale(&SpacingScalar::from_int(2)) + &LaurentPoly::constant(3, a());
        assert_eq!(q.apply(&p).unwrap(), expected);
    }
}
