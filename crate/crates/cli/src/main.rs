mod args;
mod cmd;
mod error;
mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use error::{CliError, Result};

fn main() {
    let argv: Vec<OsString> = std::env::args_os().collect();
    std::process::exit(run(argv));
}

fn run(argv: Vec<OsString>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let name = cli.command.name();
    match execute(cli, &argv) {
        Ok(()) => 0,
        Err(e) => {
            let report = json!({
                "status": "error",
                "subcommand": name,
                "kind": e.kind(),
                "exit_code": e.exit_code(),
                "message": e.to_string(),
            });
            eprintln!("error: {e}");
            eprintln!("{report}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, argv: &[OsString]) -> Result<()> {
    let (cli, recorded) = match &cli.command {
        Command::Replay(r) => {
            let recorded = report::manifest_argv(&r.manifest)?;
            let mut full: Vec<String> = vec!["umbral".into()];
            full.extend(recorded.iter().cloned());
            full.push("--out".into());
            full.push(cli.out.to_string_lossy().into_owned());
            let replayed = Cli::try_parse_from(&full)
                .map_err(|e| CliError::Usage(format!("manifest arguments no longer parse: {e}")))?;
            (replayed, recorded)
        }
        _ => {
            let args: Vec<String> = argv
                .iter()
                .skip(1)
                .map(|a| {
                    a.to_str()
                        .map(str::to_owned)
                        .ok_or_else(|| CliError::Usage("arguments must be valid UTF-8".into()))
                })
                .collect::<Result<_>>()?;
            let recorded = report::strip_out(&args);
            (cli, recorded)
        }
    };
    let name = cli.command.name();
    let rep = cmd::run(&cli.command)?;
    let written = report::write_outputs(
        name,
        &rep,
        &cli.out,
        cli.format,
        &recorded,
        cmd::params(&cli.command),
    )?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for line in &rep.summary {
        let _ = writeln!(out, "{line}");
    }
    for p in &written {
        let _ = writeln!(out, "wrote {}", p.display());
    }
    Ok(())
}
