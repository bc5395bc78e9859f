//! Subcommands over the exact umbral engine.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use umbral_core::exact::json::scalar_to_json;
use umbral_core::exact::{
    monomial_to_factorial, monomial_to_factorial_with, LaurentPoly, Rational, SpacingScalar,
};
use umbral_core::operator::{
    basic_xhat, make_delta, symmetric_xhat, DeltaKind, NormalOrderedOp, ShiftInvariantOp,
};
use umbral_core::umbral::{
    basic_sequence, commuted_central_oscillator, discrete_hermite, eval_newton, exp_coeffs, gaussian_coeffs,
    harmonic_oscillator, hermite, ho_forward_solution, map_equation, newton_map, sheffer_expand,
    sheffer_sequence, star_product, umbral_transform, DivergenceRule, NewtonSeries, PolySequence, Verdict,
};

use crate::args::{
    Equation, Function, HermiteArgs, HoArgs, MapArgs, NewtonArgs, NewtonMap, SequenceArgs, Spacing, StarArgs,
    XhatRecipe,
};
use crate::error::{require, Result};
use crate::report::{num, Report, Table};

fn delta(kind: DeltaKind) -> Result<ShiftInvariantOp> {
    Ok(make_delta(kind, SpacingScalar::a())?)
}

fn specialize(p: &LaurentPoly, s: &Spacing) -> Result<LaurentPoly> {
    Ok(match s {
        Spacing::Symbolic => p.clone(),
        Spacing::Value(r) => p.eval_spacing(r)?,
    })
}

/// Coefficients over the falling factorials `x^(k)` with the run's spacing.
fn factorial_coeffs(p: &LaurentPoly, s: &Spacing) -> Result<Vec<SpacingScalar>> {
    Ok(match s {
        Spacing::Symbolic => monomial_to_factorial(p, None)?,
        Spacing::Value(r) => {
            monomial_to_factorial_with(&p.eval_spacing(r)?, None, &SpacingScalar::constant(r.clone()))?
        }
    })
}

/// `3*x^(2) - a*x^(1) + 1` style rendering.
pub fn render_factorial(coeffs: &[SpacingScalar]) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let (negative, body) = match c.as_monomial() {
            Some((r, _)) if r.is_negative() => (true, (-c).to_string()),
            Some(_) => (false, c.to_string()),
            None => (false, format!("({c})")),
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        match (k, body.as_str()) {
            (0, _) => out.push_str(&body),
            (_, "1") => out.push_str(&format!("x^({k})")),
            _ => out.push_str(&format!("{body}*x^({k})")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn scalars_json(c: &[SpacingScalar]) -> Value {
    Value::Array(c.iter().map(|s| json!(scalar_to_json(s))).collect())
}

/// Row and JSON entry for one polynomial.
fn poly_entry(p_symbolic: &LaurentPoly, s: &Spacing) -> Result<(String, String, Value)> {
    let p = specialize(p_symbolic, s)?;
    let f = factorial_coeffs(p_symbolic, s)?;
    let mono = p.to_string();
    let fact = render_factorial(&f);
    let v = json!({
        "monomial": mono,
        "factorial": fact,
        "poly": p.to_json_value(),
        "factorial_coeffs": scalars_json(&f),
    });
    Ok((mono, fact, v))
}

fn sequence_table(name: &'static str, seq: &[LaurentPoly], s: &Spacing) -> Result<(Table, Vec<Value>)> {
    let mut t = Table::new(name, &["k", "monomial", "factorial", "json"]);
    let mut js = Vec::new();
    for (k, p) in seq.iter().enumerate() {
        let (mono, fact, mut v) = poly_entry(p, s)?;
        t.push(vec![k.to_string(), mono, fact, v["poly"].to_string()]);
        v["k"] = json!(k);
        js.push(v);
    }
    Ok((t, js))
}

pub fn basic_seq(args: &SequenceArgs) -> Result<Report> {
    let kind = args.delta.kind();
    let seq = basic_sequence(&delta(kind)?, args.kmax)?;
    seq.verify(args.kmax)?;
    let polys = seq.polys(args.kmax);
    let (table, js) = sequence_table("", &polys, &args.spacing)?;
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    for row in &table.rows {
        r.line(format!("q{} = {}    [{}]", row[0], row[1], row[2]));
    }
    r.data = json!({"delta": kind.name(), "spacing": args.spacing.to_string(), "sequence": js});
    r.results = json!({"lowering_relation": "exact", "kmax": args.kmax});
    r.tables.push(table);
    Ok(r)
}

pub fn sheffer_seq(args: &SequenceArgs) -> Result<Report> {
    let kind = args.delta.kind();
    let q = delta(kind)?;
    let s = sheffer_sequence(&q, args.kmax)?;
    s.verify(args.kmax)?;
    let basic = basic_sequence(&q, args.kmax)?;
    let polys = s.polys(args.kmax);
    let (mut table, mut js) = sequence_table("", &polys, &args.spacing)?;
    table.headers.push("basic_expansion");
    for (k, row) in table.rows.iter_mut().enumerate() {
        let c = sheffer_expand(&s, &basic, k)?;
        let c = match &args.spacing {
            Spacing::Symbolic => c,
            Spacing::Value(v) => c
                .iter()
                .map(|x| x.eval(v).map(SpacingScalar::constant))
                .collect::<umbral_core::Result<_>>()?,
        };
        let text = c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| format!("({x})*q{j}"))
            .collect::<Vec<_>>()
            .join(" + ");
        js[k]["basic_expansion"] = scalars_json(&c);
        row.push(text);
    }
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    for row in &table.rows {
        r.line(format!("s{} = {}    [{}]", row[0], row[1], row[2]));
    }
    r.data = json!({"delta": kind.name(), "spacing": args.spacing.to_string(), "sequence": js});
    r.results = json!({"lowering_relation": "exact", "expansion": "exact", "kmax": args.kmax});
    r.tables.push(table);
    Ok(r)
}

fn univariate(c: &[crate::args::Q]) -> LaurentPoly {
    LaurentPoly::from_coeffs(c.iter().map(|q| SpacingScalar::constant(q.0.clone())))
}

pub fn star(args: &StarArgs) -> Result<Report> {
    let kind = args.delta.kind();
    let f = univariate(&args.f);
    let g = univariate(&args.g);
    let deg = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
    let seq = basic_sequence(&delta(kind)?, deg as usize)?;
    let prod = star_product(&f, &g, &seq)?;
    let tf = umbral_transform(&f, &seq)?;
    let tg = umbral_transform(&g, &seq)?;
    // Star product of umbral images is the image of the ordinary product.
    let images = star_product(&tf, &tg, &seq)? == umbral_transform(&(&f * &g), &seq)?;

    let mut t = Table::new("", &["name", "monomial", "factorial", "json"]);
    let mut data = serde_json::Map::new();
    for (name, p) in [("f", &f), ("g", &g), ("f*g", &prod), ("T(f)", &tf), ("T(g)", &tg)] {
        let (mono, fact, v) = poly_entry(p, &args.spacing)?;
        t.push(vec![name.into(), mono, fact, v["poly"].to_string()]);
        data.insert(name.into(), v);
    }
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    for row in &t.rows {
        r.line(format!("{} = {}    [{}]", row[0], row[1], row[2]));
    }
    r.line(format!("T(f) * T(g) = T(fg): {images}"));
    r.data = json!({"delta": kind.name(), "spacing": args.spacing.to_string(), "polys": data});
    r.results = json!({"transform_homomorphism": images});
    r.tables.push(t);
    Ok(r)
}

fn normal_json(op: &NormalOrderedOp, order: u32) -> Value {
    Value::Array(
        op.terms()
            .map(|(e, f)| json!({"xexp": e, "series": f.to_json(order)}))
            .collect(),
    )
}

pub fn map_equation_cmd(args: &MapArgs) -> Result<Report> {
    let kind = args.delta.kind();
    let q = delta(kind)?;
    let xh = match args.xhat {
        XhatRecipe::Basic => basic_xhat(&q)?,
        XhatRecipe::Symmetric => symmetric_xhat(&q)?,
    };
    let d = NormalOrderedOp::from_series(ShiftInvariantOp::d(1, 0));
    let y = NormalOrderedOp::coordinate(1, 0);
    let continuum = match args.equation {
        Equation::Oscillator => harmonic_oscillator(),
        Equation::Free => d.pow(2).scale_rational(&Rational::new((-1).into(), 2.into())),
        Equation::Ccr => d.commutator(&y),
    };
    let image = map_equation(&continuum, &q, &xh)?;
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    r.line(format!("continuum: {}", continuum.render(args.order)));
    r.line(format!("image:     {}", image.render(args.order)));
    let mut results = json!({});
    if args.equation == Equation::Ccr {
        let id = image.agrees_to(&NormalOrderedOp::identity(1), args.order);
        r.line(format!("image equals the identity to order {}: {id}", args.order));
        results["identity"] = json!(id);
    }
    if args.equation == Equation::Oscillator
        && kind == DeltaKind::Central
        && args.xhat == XhatRecipe::Symmetric
    {
        let string = commuted_central_oscillator(&SpacingScalar::a())?;
        let agree = image.agrees_to(&string, args.order) && image.agrees_on_monomials(&string, 6)?;
        r.line(format!("agrees with the commuted operator string: {agree}"));
        results["commuted_string"] = json!(agree);
    }
    let mut t = Table::new("", &["xexp", "series", "stencil"]);
    for (e, f) in image.terms() {
        t.push(vec![
            format!("{e:?}"),
            f.render_series(args.order),
            f.render_stencil().unwrap_or_default(),
        ]);
    }
    r.data = json!({
        "delta": kind.name(),
        "continuum": continuum.render(args.order),
        "image": image.render(args.order),
        "terms": normal_json(&image, args.order),
    });
    r.results = results;
    r.tables.push(t);
    Ok(r)
}

pub fn newton(args: &NewtonArgs) -> Result<Report> {
    require(args.terms > args.kcut, || {
        format!("--terms ({}) must exceed --kcut ({})", args.terms, args.kcut)
    })?;
    require(args.threshold > 1.0, || "--threshold must exceed 1".into())?;
    let a = &args.spacing.0;
    let f = match args.function {
        Function::Exp => exp_coeffs(&args.k.0, args.terms),
        Function::Gaussian => gaussian_coeffs(args.terms),
    };
    let series = match args.map {
        NewtonMap::Umbral => NewtonSeries::umbral_image(&f, a, "umbral"),
        NewtonMap::GregoryNewton => newton_map(&f, a, args.kcut, args.terms - args.kcut - 1)?,
    };
    let rule = DivergenceRule {
        threshold: args.threshold,
        by_term: 50,
    };
    let e = eval_newton(&series, &args.x.0, args.kcut, rule)?;
    let verdict = e.verdict.name();
    let mut t = Table::new("", &["n", "x", "partial_sum", "ratio", "verdict"]);
    for row in &e.rows {
        t.push(vec![
            row.k.to_string(),
            args.x.to_string(),
            num(row.partial_sum),
            row.ratio.map(num).unwrap_or_default(),
            verdict.into(),
        ]);
    }
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    r.line(format!(
        "partial sum through k = {}: {}",
        args.kcut, e.partial_sum
    ));
    r.line(format!("verdict: {verdict}"));
    let mut results = json!({
        "partial_sum": e.partial_sum.to_string(),
        "verdict": e.verdict,
        "ka": (&args.k.0 * a).to_string(),
    });
    if let (Function::Exp, Verdict::Terminating { n }) = (args.function, &e.verdict) {
        let closed = (Rational::from_integer(1.into()) + &args.k.0 * a).pow(*n as i32);
        let matches = args.map == NewtonMap::Umbral && closed == e.partial_sum;
        r.line(format!("(1 + ka)^{n} = {closed}; equal: {matches}"));
        results["closed_form"] = json!(closed.to_string());
        results["closed_form_equal"] = json!(matches);
    }
    r.data = json!({"rows": e.rows, "results": results.clone()});
    r.results = results;
    r.tolerances = json!({"divergence_threshold": args.threshold, "by_term": rule.by_term});
    r.tables.push(t);
    Ok(r)
}

pub fn ho_forward(args: &HoArgs) -> Result<Report> {
    require(args.nmax >= 2, || "--nmax must be at least 2".into())?;
    let a = &args.spacing.0;
    let rep = ho_forward_solution(args.nmax, a, DivergenceRule::default())?;
    let mut sites: BTreeSet<i64> = rep.values.keys().copied().collect();
    for (_, _, m) in &rep.extensions {
        sites.extend(m.keys().copied());
    }
    let headers: Vec<&'static str> = match rep.extensions.len() {
        0 => vec!["n", "x", "psi"],
        1 => vec!["n", "x", "psi", "extension_1"],
        _ => vec!["n", "x", "psi", "extension_1", "extension_2"],
    };
    let mut t = Table::new("", &headers);
    for n in sites {
        let x = a * Rational::from_integer(n.into());
        let mut row = vec![n.to_string(), x.to_string()];
        row.push(rep.values.get(&n).map(|v| v.to_string()).unwrap_or_default());
        for (_, _, m) in rep.extensions.iter().take(2) {
            row.push(m.get(&n).map(|v| v.to_string()).unwrap_or_default());
        }
        t.push(row);
    }
    let residual_zero = rep.max_residual.is_zero();
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    r.line(format!(
        "difference equation residual on 0..={}: {}",
        args.nmax, rep.max_residual
    ));
    r.line(format!("free parameters: {}", rep.free_parameters));
    r.line(format!("extension residual: {}", rep.extension_max_residual));
    if let Some(l) = rep.divergence.blowup_term {
        r.line(format!(
            "series at x = a/2 exceeds {} by term {l}",
            rep.divergence.threshold
        ));
    }
    let ext: Vec<Value> = rep
        .extensions
        .iter()
        .map(|(p1, p2, _)| json!({"psi_minus_1": p1.to_string(), "psi_minus_2": p2.to_string()}))
        .collect();
    r.results = json!({
        "max_residual": rep.max_residual.to_string(),
        "residual_zero": residual_zero,
        "extension_max_residual": rep.extension_max_residual.to_string(),
        "free_parameters": rep.free_parameters,
        "extensions": ext,
        "divergence": rep.divergence,
    });
    r.data = json!({
        "spacing": a.to_string(),
        "values": rep.values.iter().map(|(n, v)| json!({"n": n, "psi": v.to_string()})).collect::<Vec<_>>(),
        "results": r.results.clone(),
    });
    r.tables.push(t);
    Ok(r)
}

pub fn hermite_cmd(args: &HermiteArgs) -> Result<Report> {
    let kind = args.delta.kind();
    let seq = PolySequence::basic(&delta(kind)?)?;
    let h = hermite(args.degree);
    let dh = discrete_hermite(args.degree, &seq)?;
    let mut t = Table::new("", &["name", "monomial", "factorial", "json"]);
    let mut data = serde_json::Map::new();
    for (name, p) in [("H", &h), ("discrete_H", &dh)] {
        let (mono, fact, v) = poly_entry(p, &args.spacing)?;
        t.push(vec![name.into(), mono, fact, v["poly"].to_string()]);
        data.insert(name.into(), v);
    }
    let limit = dh.continuum_limit()? == h;
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    for row in &t.rows {
        r.line(format!("{}_{} = {}    [{}]", row[0], args.degree, row[1], row[2]));
    }
    r.line(format!("continuum limit recovers H_{}: {limit}", args.degree));
    r.data = json!({"delta": kind.name(), "degree": args.degree, "spacing": args.spacing.to_string(), "polys": data});
    r.results = json!({"continuum_limit": limit});
    r.tables.push(t);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use umbral_core::exact::rat;

    #[test]
    fn factorial_rendering() {
        let c = vec![
            SpacingScalar::from_int(1),
            SpacingScalar::a().scale(&rat(-1, 1)),
            SpacingScalar::from_int(3),
        ];
        assert_eq!(render_factorial(&c), "3*x^(2) - a*x^(1) + 1");
        assert_eq!(render_factorial(&[]), "0");
    }

    #[test]
    fn numeric_spacing_factorial_round_trip() {
        let p = &LaurentPoly::x().pow(3) - &LaurentPoly::x().scale(&SpacingScalar::a().pow(2));
        let s = Spacing::Value(rat(1, 2));
        let f = factorial_coeffs(&p, &s).unwrap();
        let back = umbral_core::exact::factorial_to_monomial_with(&f, &SpacingScalar::constant(rat(1, 2)));
        assert_eq!(back, specialize(&p, &s).unwrap());
    }
}
