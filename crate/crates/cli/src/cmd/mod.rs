pub mod exact;
pub mod spectral;
pub mod symmetry;

use crate::args::Command;
use crate::error::Result;
use crate::report::Report;

/// Runs one subcommand; `Replay` is resolved by the caller.
pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::BasicSeq(a) => exact::basic_seq(a),
        Command::ShefferSeq(a) => exact::sheffer_seq(a),
        Command::Star(a) => exact::star(a),
        Command::MapEquation(a) => exact::map_equation_cmd(a),
        Command::Newton(a) => exact::newton(a),
        Command::HoForward(a) => exact::ho_forward(a),
        Command::Hermite(a) => exact::hermite_cmd(a),
        Command::LieCheck(a) => symmetry::lie_check(a),
        Command::Sphere(a) => symmetry::sphere(a),
        Command::Poincare(a) => symmetry::poincare(a),
        Command::Doubling(a) => symmetry::doubling(a),
        Command::QpInverse(a) => spectral::qp_inverse(a),
        Command::Dispersion(a) => spectral::dispersion(a),
        Command::XhatSpectrum(a) => spectral::xhat_spectrum(a),
        Command::Oscillator(a) => spectral::oscillator(a),
        Command::GroundState(a) => spectral::ground_state(a),
        Command::Evolve(a) => spectral::evolve_cmd(a),
        Command::FfRep(a) => symmetry::ff_rep(a),
        Command::Replay(_) => unreachable!("replay is expanded before dispatch"),
    }
}

pub fn params(cmd: &Command) -> serde_json::Value {
    let v = match cmd {
        Command::BasicSeq(a) | Command::ShefferSeq(a) => serde_json::to_value(a),
        Command::Star(a) => serde_json::to_value(a),
        Command::MapEquation(a) => serde_json::to_value(a),
        Command::Newton(a) => serde_json::to_value(a),
        Command::HoForward(a) => serde_json::to_value(a),
        Command::Hermite(a) => serde_json::to_value(a),
        Command::LieCheck(a) => serde_json::to_value(a),
        Command::Sphere(a) => serde_json::to_value(a),
        Command::Poincare(a) => serde_json::to_value(a),
        Command::Doubling(a) => serde_json::to_value(a),
        Command::QpInverse(a) => serde_json::to_value(a),
        Command::Dispersion(a) => serde_json::to_value(a),
        Command::XhatSpectrum(a) => serde_json::to_value(a),
        Command::Oscillator(a) => serde_json::to_value(a),
        Command::GroundState(a) => serde_json::to_value(a),
        Command::Evolve(a) => serde_json::to_value(a),
        Command::FfRep(a) => serde_json::to_value(a),
        Command::Replay(a) => serde_json::to_value(a),
    };
    v.expect("arguments serialize")
}
