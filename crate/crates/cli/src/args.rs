use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::{Serialize, Serializer};
use umbral_core::exact::{parse_rational, to_f64, Rational};
use umbral_core::operator::DeltaKind;
use umbral_core::symmetry::NdVariant;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "UMBRAL_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "umbral",
    version,
    about = "Exact umbral calculus on lattices and floating-point lattice spectra",
    long_about = "Each subcommand runs one computation, writes its data files (CSV or JSON) \
                  and a JSON run manifest into the output directory, and prints a short summary."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output directory for data files and the run manifest.
    #[arg(long, global = true, env = OUT_ENV, default_value = "umbral-out")]
    pub out: PathBuf,

    /// Data file format; the manifest is always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Basic polynomial sequence q_0..q_kmax of a delta operator.
    BasicSeq(SequenceArgs),
    /// Sheffer sequence s_0..s_kmax with its expansion in the basic sequence.
    ShefferSeq(SequenceArgs),
    /// Star product of two lattice polynomials.
    Star(StarArgs),
    /// Umbral image of a continuum operator (y -> xhat, d/dy -> Q).
    MapEquation(MapArgs),
    /// Newton series of exp(ky) or exp(-y^2) evaluated at a point.
    Newton(NewtonArgs),
    /// Forward-difference oscillator ground state on the lattice.
    HoForward(HoArgs),
    /// Discrete Hermite polynomial, the umbral image of H_n.
    Hermite(HermiteArgs),
    /// Exact commutation checks: CCR matrix, so(3) and the Dirac factorization.
    LieCheck(LieArgs),
    /// Points of a lattice sphere and its symmetry orbits.
    Sphere(SphereArgs),
    /// Poincare closure and Casimir centrality on lattice generators.
    Poincare(PoincareArgs),
    /// Species count of the lattice Klein-Gordon operator.
    Doubling(DoublingArgs),
    /// Closed-form inverse of Q' on a periodic lattice.
    QpInverse(QpArgs),
    /// Spectrum of the central momentum against sin(ak)/a.
    Dispersion(DispersionArgs),
    /// Eigenfunctions and spacing of the xhat self-adjoint extensions.
    XhatSpectrum(XhatArgs),
    /// Low spectrum of (-Q^2 + xhat^2)/2 and its level pairs.
    Oscillator(OscillatorArgs),
    /// Ground state of Q + xhat_alpha built from p-space.
    GroundState(GroundArgs),
    /// Time evolution of a Gaussian packet under the lattice oscillator.
    Evolve(EvolveArgs),
    /// Matrices over Z_p realizing [Q, xhat] = 1.
    FfRep(FfArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BasicSeq(_) => "basic-seq",
            Command::ShefferSeq(_) => "sheffer-seq",
            Command::Star(_) => "star",
            Command::MapEquation(_) => "map-equation",
            Command::Newton(_) => "newton",
            Command::HoForward(_) => "ho-forward",
            Command::Hermite(_) => "hermite",
            Command::LieCheck(_) => "lie-check",
            Command::Sphere(_) => "sphere",
            Command::Poincare(_) => "poincare",
            Command::Doubling(_) => "doubling",
            Command::QpInverse(_) => "qp-inverse",
            Command::Dispersion(_) => "dispersion",
            Command::XhatSpectrum(_) => "xhat-spectrum",
            Command::Oscillator(_) => "oscillator",
            Command::GroundState(_) => "ground-state",
            Command::Evolve(_) => "evolve",
            Command::FfRep(_) => "ff-rep",
            Command::Replay(_) => "replay",
        }
    }
}

/// A rational flag value such as `3`, `-1/2` or `0.25`.
#[derive(Debug, Clone, PartialEq)]
pub struct Q(pub Rational);

impl Q {
    pub fn f64(&self) -> f64 {
        to_f64(&self.0)
    }
}

impl FromStr for Q {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s).map(Q).map_err(|e| e.to_string())
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn positive_q(s: &str) -> Result<Q, String> {
    let q: Q = s.parse()?;
    if q.0 <= Rational::zero() {
        return Err(format!("spacing must be positive, got {q}"));
    }
    Ok(q)
}

/// Spacing of an exact computation: the symbol `a`, or a positive rational.
#[derive(Debug, Clone, PartialEq)]
pub enum Spacing {
    Symbolic,
    Value(Rational),
}

impl FromStr for Spacing {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim() == "a" {
            return Ok(Spacing::Symbolic);
        }
        positive_q(s).map(|q| Spacing::Value(q.0))
    }
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spacing::Symbolic => f.write_str("a"),
            Spacing::Value(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for Spacing {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaArg {
    Derivative,
    Forward,
    Backward,
    Central,
    Laguerre,
}

impl DeltaArg {
    pub fn kind(self) -> DeltaKind {
        match self {
            DeltaArg::Derivative => DeltaKind::Derivative,
            DeltaArg::Forward => DeltaKind::Forward,
            DeltaArg::Backward => DeltaKind::Backward,
            DeltaArg::Central => DeltaKind::Central,
            DeltaArg::Laguerre => DeltaKind::Laguerre,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    ForwardBasic,
    CentralSymmetric,
}

impl VariantArg {
    pub fn variant(self) -> NdVariant {
        match self {
            VariantArg::ForwardBasic => NdVariant::ForwardBasic,
            VariantArg::CentralSymmetric => NdVariant::CentralSymmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum XhatRecipe {
    /// xhat = x Q'^-1
    Basic,
    /// xhat = (x Q'^-1 + Q'^-1 x) / 2
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    /// -1/2 d^2/dy^2 + 1/2 y^2
    Oscillator,
    /// -1/2 d^2/dy^2
    Free,
    /// [d/dy, y]
    Ccr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Function {
    /// exp(k y)
    Exp,
    /// exp(-y^2)
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NewtonMap {
    /// F_k = f_k, the umbral image of the power series.
    Umbral,
    /// Gregory-Newton re-expansion through Stirling numbers.
    GregoryNewton,
}

#[derive(Debug, Args, Serialize)]
pub struct SequenceArgs {
    /// Delta operator.
    #[arg(long, value_enum)]
    pub delta: DeltaArg,
    /// Highest index k.
    #[arg(long, default_value_t = 5)]
    pub kmax: usize,
    /// Lattice spacing: the symbol `a` or a positive rational.
    #[arg(long, default_value = "a")]
    pub spacing: Spacing,
}

#[derive(Debug, Args, Serialize)]
pub struct StarArgs {
    #[arg(long, value_enum, default_value = "forward")]
    pub delta: DeltaArg,
    /// Coefficients of the first polynomial in x, constant term first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub f: Vec<Q>,
    /// Coefficients of the second polynomial in x, constant term first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub g: Vec<Q>,
    #[arg(long, default_value = "a")]
    pub spacing: Spacing,
}

#[derive(Debug, Args, Serialize)]
pub struct MapArgs {
    #[arg(long, value_enum, default_value = "central")]
    pub delta: DeltaArg,
    #[arg(long, value_enum, default_value = "symmetric")]
    pub xhat: XhatRecipe,
    #[arg(long, value_enum, default_value = "oscillator")]
    pub equation: Equation,
    /// Truncation order of the rendered D-series.
    #[arg(long, default_value_t = 6)]
    pub order: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct NewtonArgs {
    #[arg(long, value_enum, default_value = "exp")]
    pub function: Function,
    /// Rate k in exp(k y).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub k: Q,
    /// Numeric lattice spacing.
    #[arg(long, default_value = "1/2", value_parser = positive_q)]
    pub spacing: Q,
    /// Evaluation point.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Q,
    /// Partial sums run through this term.
    #[arg(long, default_value_t = 30)]
    pub kcut: usize,
    /// Number of power-series coefficients.
    #[arg(long, default_value_t = 60)]
    pub terms: usize,
    #[arg(long, value_enum, default_value = "umbral")]
    pub map: NewtonMap,
    /// Term-growth threshold for the divergence verdict.
    #[arg(long, default_value_t = 1e6)]
    pub threshold: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct HoArgs {
    #[arg(long, default_value = "1", value_parser = positive_q)]
    pub spacing: Q,
    /// Largest site index n for the exact residual check.
    #[arg(long, default_value_t = 30)]
    pub nmax: i64,
}

#[derive(Debug, Args, Serialize)]
pub struct HermiteArgs {
    #[arg(long, value_enum, default_value = "forward")]
    pub delta: DeltaArg,
    /// Degree n of H_n.
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    #[arg(long, default_value = "a")]
    pub spacing: Spacing,
}

#[derive(Debug, Args, Serialize)]
pub struct LieArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, value_enum, default_value = "central-symmetric")]
    pub variant: VariantArg,
    /// Per-axis spacing multiples of `a`; one value applies to every axis.
    #[arg(long, value_delimiter = ',', value_parser = positive_q, default_value = "1")]
    pub spacing: Vec<Q>,
    /// Degree of the monomial test space.
    #[arg(long, default_value_t = 5)]
    pub degree: u32,
    /// Series order for the structural comparison.
    #[arg(long, default_value_t = 8)]
    pub order: u32,
    /// Mass in the Dirac factorization (three dimensions only).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub mass: Q,
}

#[derive(Debug, Args, Serialize)]
pub struct SphereArgs {
    /// Sphere value c.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Q,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, value_enum, default_value = "forward-basic")]
    pub variant: VariantArg,
    /// Numeric per-axis spacings; one value applies to every axis.
    #[arg(long, value_delimiter = ',', value_parser = positive_q, default_value = "1")]
    pub spacing: Vec<Q>,
    /// Search box half-width in lattice units.
    #[arg(long, default_value_t = 4)]
    pub radius: i64,
}

#[derive(Debug, Args, Serialize)]
pub struct PoincareArgs {
    /// Boost parameter in L_i = y_0 P_i - kappa y_i P_0.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub kappa: Q,
    #[arg(long, value_enum, default_value = "central-symmetric")]
    pub variant: VariantArg,
    #[arg(long, value_delimiter = ',', value_parser = positive_q, default_value = "1")]
    pub spacing: Vec<Q>,
    #[arg(long, default_value_t = 4)]
    pub degree: u32,
    /// Discretize the time axis as well.
    #[arg(long)]
    pub discrete_time: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct DoublingArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, value_delimiter = ',', value_parser = positive_q, default_value = "1")]
    pub spacing: Vec<Q>,
    /// Count the discretized time axis too.
    #[arg(long)]
    pub include_time: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct QpArgs {
    /// Number of lattice sites.
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long, default_value = "1", value_parser = positive_q)]
    pub spacing: Q,
    /// Allowed deviation from the dense inverse.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DispersionArgs {
    #[arg(long = "N", default_value_t = 101)]
    pub n: usize,
    #[arg(long, default_value = "1", value_parser = positive_q)]
    pub spacing: Q,
    /// Also sample the eigenfunction with this eigenvalue (|lambda a| < 1).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct XhatArgs {
    /// Odd number of sites of the truncated lattice.
    #[arg(long = "N", default_value_t = 401)]
    pub n: usize,
    #[arg(long, default_value = "1/10", value_parser = positive_q)]
    pub spacing: Q,
    /// Extension angle of the inner branch, in [0, 1).
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    /// Extension angle of the outer branch; defaults to --alpha.
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
    pub nmin: i64,
    #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
    pub nmax: i64,
    /// Residual and spacing tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Largest allowed edge-to-peak amplitude ratio.
    #[arg(long, default_value_t = 1e-2)]
    pub tail_tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct OscillatorArgs {
    /// Number of sites, N = 2m with m odd.
    #[arg(long = "N", default_value_t = 302)]
    pub n: usize,
    #[arg(long, default_value = "1/15", value_parser = positive_q)]
    pub spacing: Q,
    /// Number of lowest levels to report.
    #[arg(long, default_value_t = 20)]
    pub nlow: usize,
    /// Tolerance on pair means against the p-space oracle.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct GroundArgs {
    /// Extension angle in [0, 1).
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    #[arg(long, default_value = "1/10", value_parser = positive_q)]
    pub spacing: Q,
    /// Odd number of sites of the truncated lattice.
    #[arg(long = "N", default_value_t = 601)]
    pub n: usize,
    /// Extension eigenmodes |m| <= modes used to apply xhat_alpha.
    #[arg(long, default_value_t = 64)]
    pub modes: i64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct EvolveArgs {
    #[arg(long = "N", default_value_t = 102)]
    pub n: usize,
    #[arg(long, default_value = "1/4", value_parser = positive_q)]
    pub spacing: Q,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// Write the state every `stride` steps.
    #[arg(long, default_value_t = 100)]
    pub stride: usize,
    /// Packet centre.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    /// Packet carrier wavenumber.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub k0: f64,
    /// Norm drift tolerance; energy drift uses 100 times this.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct FfArgs {
    /// Prime modulus.
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
}
