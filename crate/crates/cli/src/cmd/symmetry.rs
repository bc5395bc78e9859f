//! Subcommands over lattice symmetry checks and the finite-field representation.

use serde_json::json;
use umbral_core::exact::Rational;
use umbral_core::operator::finite_field_rep;
use umbral_core::operator::modular::is_prime;
use umbral_core::symmetry::{
    angular_momentum, build_nd_ops, ccr_matrix, dirac_factorization_check, doubling_count, lattice_sphere,
    poincare_rep, rational_unitary, so3_check, sphere_symmetries_check, GammaSet, LatticeSpecND,
    RelationCheck, Status,
};

use crate::args::{DoublingArgs, FfArgs, LieArgs, PoincareArgs, SphereArgs, Q};
use crate::error::{require, Result};
use crate::report::{num, Report, Table};

fn spec(spacing: &[Q], dim: usize) -> Result<LatticeSpecND> {
    require((1..=4).contains(&dim), || {
        format!("--dim must be in 1..=4, got {dim}")
    })?;
    let s: Vec<Rational> = match spacing.len() {
        1 => vec![spacing[0].0.clone(); dim],
        n if n == dim => spacing.iter().map(|q| q.0.clone()).collect(),
        n => {
            return Err(crate::error::CliError::Usage(format!(
                "--spacing lists {n} values for {dim} axes"
            )))
        }
    };
    Ok(LatticeSpecND::new(s)?)
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
    }
}

fn push_checks(t: &mut Table, group: &str, checks: &[RelationCheck]) {
    for c in checks {
        t.push(vec![
            group.into(),
            c.relation.clone(),
            status(c.status).into(),
            c.max_residual_degree.to_string(),
        ]);
    }
}

fn passed(checks: &[RelationCheck]) -> usize {
    checks.iter().filter(|c| c.passed()).count()
}

pub fn lie_check(args: &LieArgs) -> Result<Report> {
    let spec = spec(&args.spacing, args.dim)?;
    let variant = args.variant.variant();
    let ops = build_nd_ops(&spec, variant)?;
    let ccr = ccr_matrix(&ops, args.order, args.degree)?;
    let mut t = Table::new("", &["group", "relation", "status", "degree"]);
    push_checks(&mut t, "ccr", &ccr);
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    r.line(format!("ccr: {}/{} relations hold", passed(&ccr), ccr.len()));
    let mut results = json!({"ccr": ccr});
    if args.dim == 3 {
        let so3 = so3_check(&angular_momentum(&spec, variant)?, args.degree)?;
        push_checks(&mut t, "so3", &so3);
        r.line(format!("so(3): {}/{} relations hold", passed(&so3), so3.len()));
        let mut dirac = Vec::new();
        let dirac_basis = GammaSet::dirac_basis();
        let rotated = dirac_basis.conjugated(&rational_unitary());
        for (name, g) in [("dirac-basis", dirac_basis), ("rotated", rotated)] {
            let ok = dirac_factorization_check(&g, &spec, &args.mass.0)?;
            t.push(vec![
                "dirac".into(),
                format!("{name}, m = {}", args.mass),
                if ok { "pass" } else { "fail" }.into(),
                String::new(),
            ]);
            r.line(format!("Dirac factorization ({name}, m = {}): {ok}", args.mass));
            dirac.push(json!({"gammas": name, "holds": ok}));
        }
        results["so3"] = json!(so3);
        results["dirac"] = json!(dirac);
    }
    r.data = json!({"variant": variant.name(), "results": results.clone()});
    r.results = results;
    r.tolerances = json!({"test_degree": args.degree, "series_order": args.order});
    r.tables.push(t);
    Ok(r)
}

pub fn sphere(args: &SphereArgs) -> Result<Report> {
    require(args.radius >= 0 && args.radius <= 40, || {
        "--radius must be in 0..=40".into()
    })?;
    let spec = spec(&args.spacing, args.dim)?;
    let variant = args.variant.variant();
    let pts = lattice_sphere(&spec, &args.c.0, variant, args.radius)?;
    let headers: Vec<&'static str> = ["n1", "n2", "n3", "n4"][..args.dim].to_vec();
    let mut t = Table::new("", &headers);
    for p in &pts {
        t.push(p.iter().map(|v| v.to_string()).collect());
    }
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    r.line(format!(
        "{} points with value {} in |n_k| <= {}",
        pts.len(),
        args.c,
        args.radius
    ));
    let mut results = json!({"points": pts.len()});
    if spec.is_uniform() {
        let rep = sphere_symmetries_check(&pts, &spec, variant)?;
        r.line(format!(
            "closed under swaps: {}, under reflections: {}, orbits: {}",
            rep.closed_under_swaps,
            rep.closed_under_reflections,
            rep.orbits.len()
        ));
        results["closed_under_swaps"] = json!(rep.closed_under_swaps);
        results["closed_under_reflections"] = json!(rep.closed_under_reflections);
        results["orbits"] = json!(rep.orbits.len());
    }
    r.data = json!({"variant": variant.name(), "c": args.c, "points": pts, "results": results.clone()});
    r.results = results;
    r.tables.push(t);
    Ok(r)
}

pub fn poincare(args: &PoincareArgs) -> Result<Report> {
    let spec = spec(&args.spacing, 3)?;
    let rep = poincare_rep(
        &spec,
        args.variant.variant(),
        args.kappa.0.clone(),
        args.discrete_time,
    )?
    .verify(args.degree)?;
    let mut t = Table::new("", &["group", "relation", "status", "degree"]);
    push_checks(&mut t, "algebra", &rep.relations);
    push_checks(&mut t, "casimir-kappa", &rep.casimir_kappa);
    push_checks(&mut t, "casimir-lorentzian", &rep.casimir_lorentzian);
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    r.line(format!("kappa = {}", rep.kappa));
    r.line(format!("closure: {}", rep.closure_holds()));
    r.line(format!(
        "-kappa d0^2 - sum dk^2 central: {}",
        rep.kappa_casimir_central()
    ));
    r.line(format!(
        "-d0^2 + sum dk^2 central: {}",
        rep.lorentzian_casimir_central()
    ));
    r.results = json!({
        "closure": rep.closure_holds(),
        "kappa_casimir_central": rep.kappa_casimir_central(),
        "lorentzian_casimir_central": rep.lorentzian_casimir_central(),
        "rotation_convention": rep.rotation_convention,
    });
    r.data = json!({"report": rep, "results": r.results.clone()});
    r.tolerances = json!({"test_degree": args.degree});
    r.tables.push(t);
    Ok(r)
}

pub fn doubling(args: &DoublingArgs) -> Result<Report> {
    let spec = spec(&args.spacing, args.dim)?;
    let rep = doubling_count(&spec, args.include_time);
    let mut t = Table::new("", &["axis", "zeros"]);
    for (i, z) in rep.zeros.iter().enumerate() {
        let label = if args.include_time {
            i.to_string()
        } else {
            (i + 1).to_string()
        };
        t.push(vec![
            label,
            z.iter().map(|v| num(*v)).collect::<Vec<_>>().join(" "),
        ]);
    }
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    r.line(rep.species.to_string());
    r.results = json!({"species": rep.species});
    r.data = json!(rep);
    r.tables.push(t);
    Ok(r)
}

pub fn ff_rep(args: &FfArgs) -> Result<Report> {
    require(is_prime(args.p), || format!("--p must be prime, got {}", args.p))?;
    require(args.p <= 101, || "--p is limited to 101".into())?;
    let rep = finite_field_rep(args.p)?;
    let ok = rep.verify();
    let mut t = Table::new("", &["matrix", "row", "col", "value"]);
    for (name, m) in [
        ("x", &rep.x),
        ("q", &rep.q),
        ("q_prime", &rep.q_prime),
        ("xhat", &rep.xhat),
    ] {
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.push(vec![name.into(), i.to_string(), j.to_string(), v.to_string()]);
            }
        }
    }
    let mut r = Report {
        exact: true,
        ..Default::default()
    };
    let show = |name: &str, m: &Vec<Vec<u64>>, r: &mut Report| {
        r.line(format!("{name}:"));
        for row in m {
            r.line(format!(
                "  {}",
                row.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
            ));
        }
    };
    show("Q", &rep.q, &mut r);
    show("xhat", &rep.xhat, &mut r);
    r.line(format!("[Q, xhat] = I mod {}: {ok}", args.p));
    r.results = json!({"commutator_is_identity": ok});
    r.data = json!({"rep": rep, "commutator_is_identity": ok});
    r.tables.push(t);
    Ok(r)
}
