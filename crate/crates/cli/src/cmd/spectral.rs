//! Subcommands over the floating-point lattice lab.

use serde_json::json;
use umbral_spectral::{
    closed_form_is_exact_inverse, compare_operator_string, creation_domain_violation, dispersion_check,
    evolve, gaussian_packet, ground_state_pspace, local_operators, momentum_eigenfunction,
    oscillator_spectrum, pspace_oscillator_levels, qp_inverse_closed_form, qp_inverse_coefficients,
    time_grid, twice_qp_determinant, xhat_eigenfunctions, ExtensionParams, GroundStateParams, Lattice,
    PeriodicLattice, QuadratureSpec, TruncatedLattice, WaveState, XhatTolerances,
};

use crate::args::{DispersionArgs, EvolveArgs, GroundArgs, OscillatorArgs, QpArgs, XhatArgs};
use crate::error::{require, Result};
use crate::report::{num, Report, Table};

const MAX_SITES: usize = 4001;

fn site_count(n: usize, min: usize) -> Result<()> {
    require(n >= min && n <= MAX_SITES, || {
        format!("--N must be in {min}..={MAX_SITES}, got {n}")
    })
}

fn alpha_ok(name: &str, alpha: f64) -> Result<()> {
    require((0.0..1.0).contains(&alpha), || {
        format!("{name} must lie in [0, 1), got {alpha}")
    })
}

fn state_table(name: &'static str, lat: &Lattice, psi: &WaveState) -> Table {
    let mut t = Table::new(name, &["site", "x", "re", "im"]);
    let idx: Vec<i64> = match lat {
        Lattice::Periodic(p) => (0..p.n).map(|j| p.site_index(j)).collect(),
        Lattice::Truncated(p) => (0..p.n).map(|j| p.site_index(j)).collect(),
    };
    for ((j, x), z) in idx.iter().zip(lat.positions()).zip(&psi.amplitudes) {
        t.push(vec![j.to_string(), num(x), num(z.re), num(z.im)]);
    }
    t
}

pub fn qp_inverse(args: &QpArgs) -> Result<Report> {
    site_count(args.n, 2)?;
    let lat = PeriodicLattice::new(args.n, args.spacing.f64())?;
    let coeffs = qp_inverse_coefficients(args.n)?;
    let closed = qp_inverse_closed_form(&lat)?.re();
    let dense = local_operators(&lat.into())
        .qp
        .try_inverse()
        .ok_or_else(|| crate::error::CliError::Domain("dense inverse failed".into()))?;
    let deviation = (&dense - &closed).amax();
    let exact = closed_form_is_exact_inverse(args.n)?;
    let det2 = twice_qp_determinant(args.n);
    let mut t = Table::new("", &["offset", "coeff"]);
    for (s, c) in coeffs.iter().enumerate() {
        t.push(vec![s.to_string(), c.to_string()]);
    }
    let mut r = Report::default();
    r.line(format!("Q'^-1 = sum_s c_s S^s with c = {coeffs:?}"));
    r.line(format!("exact product with Q' is the identity: {exact}"));
    r.line(format!(
        "max |dense - closed| = {deviation:e} (tol {:e})",
        args.tol
    ));
    r.line(format!("2 det Q' = {det2}"));
    r.results = json!({
        "coefficients": coeffs,
        "exact_inverse": exact,
        "max_deviation": deviation,
        "within_tol": deviation < args.tol,
        "twice_determinant": det2.to_string(),
    });
    r.tolerances = json!({"dense_deviation": args.tol});
    r.data = json!({"lattice": lat, "results": r.results.clone()});
    r.tables.push(t);
    Ok(r)
}

pub fn dispersion(args: &DispersionArgs) -> Result<Report> {
    site_count(args.n, 2)?;
    let a = args.spacing.f64();
    if let Some(l) = args.lambda {
        require((l * a).abs() < 1.0, || {
            format!("--lambda needs |lambda a| < 1, got {}", l * a)
        })?;
    }
    let lat = PeriodicLattice::new(args.n, a)?;
    let rep = dispersion_check(&lat);
    let mut t = Table::new("", &["index", "eigenvalue", "predicted"]);
    for (i, (e, p)) in rep.eigenvalues.iter().zip(&rep.predicted).enumerate() {
        t.push(vec![i.to_string(), num(*e), num(*p)]);
    }
    let mut r = Report::default();
    r.line(format!("max |eig - sin(ak)/a| = {:e}", rep.max_deviation));
    r.line(format!(
        "spectral radius {} <= 1/a = {}",
        rep.spectral_radius, rep.bound
    ));
    let mut results = json!({
        "max_deviation": rep.max_deviation,
        "spectral_radius": rep.spectral_radius,
        "bound": rep.bound,
        "within_tol": rep.within(args.tol),
    });
    r.tables.push(t);
    if let Some(l) = args.lambda {
        let f = momentum_eigenfunction(l, &lat.into())?;
        r.line(format!(
            "eigenfunction residual (regular rows) = {:e}",
            f.residual
        ));
        results["eigenfunction_residual"] = json!(f.residual);
        results["eigenfunction_full_residual"] = json!(f.full_residual);
        r.tables.push(state_table("eigenfunction", &lat.into(), &f.state));
    }
    r.tolerances = json!({"dispersion": args.tol});
    r.data = json!({"report": rep, "results": results.clone()});
    r.results = results;
    Ok(r)
}

pub fn xhat_spectrum(args: &XhatArgs) -> Result<Report> {
    site_count(args.n, 3)?;
    require(args.n % 2 == 1, || {
        format!("--N must be odd for a truncated lattice, got {}", args.n)
    })?;
    require(args.nmin <= args.nmax, || "--nmin must not exceed --nmax".into())?;
    require(args.nmax - args.nmin <= 40, || {
        "at most 41 eigenvalues per branch".into()
    })?;
    alpha_ok("--alpha", args.alpha)?;
    let alpha2 = args.alpha2.unwrap_or(args.alpha);
    alpha_ok("--alpha2", alpha2)?;
    let lat = TruncatedLattice::new(args.n, args.spacing.f64())?;
    let params = ExtensionParams::new(args.alpha, alpha2)?;
    let tol = XhatTolerances {
        residual: args.tol,
        tail: args.tail_tol,
    };
    let spec = xhat_eigenfunctions(
        params,
        &lat,
        args.nmin..=args.nmax,
        QuadratureSpec::default(),
        tol,
    )?;
    let mut t = Table::new(
        "",
        &[
            "index",
            "eigenvalue",
            "branch",
            "n",
            "measured",
            "residual",
            "tail_ratio",
        ],
    );
    for (i, p) in spec.pairs.iter().enumerate() {
        t.push(vec![
            i.to_string(),
            num(p.eigenvalue),
            p.branch.label().to_string(),
            p.n.to_string(),
            num(p.measured),
            num(p.residual),
            num(p.tail_ratio),
        ]);
    }
    let mut r = Report::default();
    r.line(format!(
        "{} eigenpairs, max residual {:e}",
        spec.pairs.len(),
        spec.max_residual
    ));
    r.line(format!(
        "same-branch spacing pi a = {}, max error {:e}",
        std::f64::consts::PI * lat.a,
        spec.max_spacing_error
    ));
    r.results = json!({
        "max_residual": spec.max_residual,
        "max_spacing_error": spec.max_spacing_error,
        "spacings": spec.spacings,
        "within_tol": spec.within(args.tol),
    });
    r.tolerances = json!(tol);
    r.data = json!({"spectrum": spec, "results": r.results.clone()});
    r.tables.push(t);
    Ok(r)
}

pub fn oscillator(args: &OscillatorArgs) -> Result<Report> {
    site_count(args.n, 2)?;
    require(args.n % 4 == 2, || {
        format!("--N must be 2m with m odd, got {}", args.n)
    })?;
    require(args.nlow >= 1 && args.nlow <= args.n, || {
        "--nlow must be in 1..=N".into()
    })?;
    let a = args.spacing.f64();
    let lat = PeriodicLattice::new(args.n, a)?;
    let s = oscillator_spectrum(&lat, args.nlow)?;
    let mut t = Table::new("", &["index", "eigenvalue", "pair_id"]);
    for (i, (e, id)) in s.eigenvalues.iter().zip(&s.pair_id).enumerate() {
        t.push(vec![
            i.to_string(),
            num(*e),
            id.map(|v| v.to_string()).unwrap_or_default(),
        ]);
    }
    let k = s.pairs.len().min(5);
    let oracle = pspace_oscillator_levels(1.0 / a, 4000, k);
    let oracle_error = s
        .pairs
        .iter()
        .zip(&oracle)
        .map(|(p, o)| (p.mean - o).abs())
        .fold(0.0, f64::max);
    let mut r = Report::default();
    r.line(format!(
        "{} pairs among the {} lowest levels",
        s.pairs.len(),
        s.eigenvalues.len()
    ));
    for (p, o) in s.pairs.iter().zip(&oracle) {
        r.line(format!(
            "  mean {:.9}  splitting {:.3e}  p-space {:.9}",
            p.mean, p.splitting, o
        ));
    }
    r.results = json!({
        "pairs": s.pairs,
        "leading_five_paired": s.leading_levels_paired(5),
        "oracle": oracle,
        "max_oracle_error": oracle_error,
        "within_tol": k > 0 && oracle_error < args.tol,
    });
    r.tolerances = json!({"oracle": args.tol, "pair_gap": umbral_spectral::oscillator::PAIR_GAP});
    r.data = json!({"spectrum": s, "results": r.results.clone()});
    r.tables.push(t);
    Ok(r)
}

pub fn ground_state(args: &GroundArgs) -> Result<Report> {
    site_count(args.n, 3)?;
    require(args.n % 2 == 1, || {
        format!("--N must be odd for a truncated lattice, got {}", args.n)
    })?;
    require(args.modes >= 1 && args.modes <= 1000, || {
        "--modes must be in 1..=1000".into()
    })?;
    alpha_ok("--alpha", args.alpha)?;
    let lat = TruncatedLattice::new(args.n, args.spacing.f64())?;
    let mut params = GroundStateParams::new(args.alpha)?;
    params.modes = args.modes;
    let gs = ground_state_pspace(params, &lat)?;
    let violation = creation_domain_violation(&gs);
    let mut r = Report::default();
    r.line(format!("kappa = {}i", gs.kappa.im));
    r.line(format!(
        "|(Q + xhat) psi - kappa psi| / |psi| = {:e}",
        gs.residual
    ));
    r.line(format!(
        "|(Q + xhat) psi - i kappa psi| / |psi| = {:e}",
        gs.residual_i_kappa
    ));
    r.line(format!("creation image boundary violation = {violation:e}"));
    r.results = json!({
        "kappa_im": gs.kappa.im,
        "residual": gs.residual,
        "residual_i_kappa": gs.residual_i_kappa,
        "boundary_defect": gs.boundary_defect,
        "expansion_error": gs.expansion_error,
        "tail_ratio": gs.tail_ratio,
        "creation_violation": violation,
        "within_tol": gs.residual < args.tol,
    });
    r.tolerances = json!({"residual": args.tol});
    r.data = json!({"ground_state": gs, "results": r.results.clone()});
    r.tables.push(state_table("", &lat.into(), &gs.state));
    Ok(r)
}

pub fn evolve_cmd(args: &EvolveArgs) -> Result<Report> {
    site_count(args.n, 2)?;
    require(args.n % 4 == 2, || {
        format!("--N must be 2m with m odd, got {}", args.n)
    })?;
    require(args.dt > 0.0 && args.dt.is_finite(), || {
        "--dt must be positive".into()
    })?;
    require(args.steps >= 1 && args.steps <= 100_000, || {
        "--steps must be in 1..=100000".into()
    })?;
    require(args.stride >= 1, || "--stride must be positive".into())?;
    require(args.width > 0.0, || "--width must be positive".into())?;
    let lat = PeriodicLattice::new(args.n, args.spacing.f64())?;
    let h = umbral_spectral::oscillator_hamiltonian(&lat)?;
    let psi0 = gaussian_packet(&lat.into(), args.x0, args.width, args.k0);
    let grid = time_grid(args.dt, args.steps);
    let tr = evolve(&h, &psi0, &grid)?;
    let string = compare_operator_string(&lat)?;

    let mut blocks = Table::new("", &["step", "time", "site", "re", "im"]);
    let lattice: Lattice = lat.into();
    let mut push_state = |step: usize, st: &WaveState| {
        for row in state_table("", &lattice, st).rows {
            blocks.push(vec![
                step.to_string(),
                num(st.time),
                row[0].clone(),
                row[2].clone(),
                row[3].clone(),
            ]);
        }
    };
    push_state(0, &psi0);
    for (i, st) in tr.states.iter().enumerate() {
        if (i + 1) % args.stride == 0 {
            push_state(i + 1, st);
        }
    }
    let mut obs = Table::new("observables", &["step", "time", "norm", "energy"]);
    for (i, ((t, n), e)) in grid.iter().zip(&tr.norms).zip(&tr.energies).enumerate() {
        obs.push(vec![(i + 1).to_string(), num(*t), num(*n), num(*e)]);
    }
    let energy_tol = args.tol * 100.0;
    let mut r = Report::default();
    r.line(format!("{} steps of dt = {}", args.steps, args.dt));
    r.line(format!(
        "max norm drift {:e}, max energy drift {:e}",
        tr.max_norm_drift, tr.max_energy_drift
    ));
    r.line(format!(
        "max |(-Q^2 + xhat^2)/2 - commuted string| = {:e}",
        string.max_abs_diff
    ));
    r.results = json!({
        "max_norm_drift": tr.max_norm_drift,
        "max_energy_drift": tr.max_energy_drift,
        "within_tol": tr.max_norm_drift < args.tol && tr.max_energy_drift < energy_tol,
        "operator_string": string,
    });
    r.tolerances = json!({"norm": args.tol, "energy": energy_tol});
    r.data = json!({
        "lattice": lat,
        "times": grid,
        "norms": tr.norms,
        "energies": tr.energies,
        "results": r.results.clone(),
    });
    r.tables.push(blocks);
    r.tables.push(obs);
    Ok(r)
}
