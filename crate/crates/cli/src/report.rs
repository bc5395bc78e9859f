use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;
use crate::error::{CliError, Result};

pub const MANIFEST_SCHEMA: &str = "umbral-run-manifest";
pub const MANIFEST_VERSION: u32 = 1;

/// One CSV table; `name` is appended to the subcommand in the file name.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, headers: &[&'static str]) -> Self {
        Self {
            name,
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// Everything a subcommand produces before anything touches the disk.
#[derive(Debug, Default)]
pub struct Report {
    pub summary: Vec<String>,
    pub tables: Vec<Table>,
    /// Payload of the JSON data file.
    pub data: Value,
    /// Residuals and verdicts recorded in the manifest.
    pub results: Value,
    pub tolerances: Value,
    /// Exact computations promise byte-identical replays.
    pub exact: bool,
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }
}

#[derive(Debug, Serialize)]
struct OutputEntry {
    path: String,
    rows: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub schema: &'static str,
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub subcommand: &'a str,
    /// Arguments after the program name, without `--out`.
    pub argv: &'a [String],
    pub params: Value,
    pub format: Format,
    pub exact: bool,
    pub tolerances: Value,
    pub results: &'a Value,
    outputs: Vec<OutputEntry>,
}

fn write(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn csv_bytes(t: &Table) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Domain(format!("csv: {e}"));
    w.write_record(&t.headers).map_err(err)?;
    for r in &t.rows {
        w.write_record(r).map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Domain(format!("csv: {e}")))
}

/// Writes the data files and the manifest; returns the paths written.
pub fn write_outputs(
    sub: &str,
    report: &Report,
    out: &Path,
    format: Format,
    argv: &[String],
    params: Value,
) -> Result<Vec<PathBuf>> {
    // Serialize everything first so a failure leaves no partial output.
    let mut files: Vec<(String, Vec<u8>, Option<usize>)> = Vec::new();
    match format {
        Format::Csv => {
            for t in &report.tables {
                let name = if t.name.is_empty() {
                    format!("{sub}.csv")
                } else {
                    format!("{sub}-{}.csv", t.name)
                };
                files.push((name, csv_bytes(t)?, Some(t.rows.len())));
            }
        }
        Format::Json => {
            let body = serde_json::to_vec_pretty(&report.data).expect("JSON values serialize");
            files.push((format!("{sub}.json"), body, None));
        }
    }
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA,
        schema_version: MANIFEST_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        subcommand: sub,
        argv,
        params,
        format,
        exact: report.exact,
        tolerances: if report.tolerances.is_null() {
            json!({})
        } else {
            report.tolerances.clone()
        },
        results: &report.results,
        outputs: files
            .iter()
            .map(|(p, _, rows)| OutputEntry {
                path: p.clone(),
                rows: *rows,
            })
            .collect(),
    };
    let manifest = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");

    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut written = Vec::new();
    for (name, body, _) in &files {
        let p = out.join(name);
        write(&p, body)?;
        written.push(p);
    }
    let p = out.join(format!("{sub}.manifest.json"));
    write(&p, &manifest)?;
    written.push(p);
    Ok(written)
}

/// Drops `--out <dir>` and `--out=<dir>` from an argument list.
pub fn strip_out(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--out" {
            skip = true;
        } else if !a.starts_with("--out=") {
            out.push(a.clone());
        }
    }
    out
}

/// Reads a manifest and returns its recorded arguments.
pub fn manifest_argv(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: not a JSON manifest: {e}", path.display())))?;
    if v["schema"] != json!(MANIFEST_SCHEMA) {
        return Err(CliError::Usage(format!("{}: not a run manifest", path.display())));
    }
    match v["schema_version"].as_u64() {
        Some(n) if n == MANIFEST_VERSION as u64 => {}
        other => {
            return Err(CliError::Usage(format!(
                "unsupported manifest schema version {other:?}, expected {MANIFEST_VERSION}"
            )))
        }
    }
    let argv: Vec<String> = serde_json::from_value(v["argv"].clone())
        .map_err(|e| CliError::Usage(format!("manifest argv: {e}")))?;
    if argv.first().map(String::as_str) == Some("replay") {
        return Err(CliError::Usage("a manifest cannot record a replay".into()));
    }
    Ok(argv)
}

/// `f64` rendered for CSV: shortest round-trip form.
pub fn num(x: f64) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_flag_is_stripped() {
        let args: Vec<String> = ["oscillator", "--out", "d", "--N", "6", "--out=e"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(strip_out(&args), vec!["oscillator", "--N", "6"]);
    }

    #[test]
    fn csv_quotes_commas() {
        let mut t = Table::new("", &["k", "p"]);
        t.push(vec!["1".into(), "x, y".into()]);
        let s = String::from_utf8(csv_bytes(&t).unwrap()).unwrap();
        assert_eq!(s, "k,p\n1,\"x, y\"\n");
    }
}
