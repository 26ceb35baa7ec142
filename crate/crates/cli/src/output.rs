use std::fmt::{self, Write};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::Run;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Library(canonfock::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Library(e) if e.is_numerical() => 3,
            CliError::Library(_) => 2,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Validation(_) => "Validation".into(),
            CliError::Io(_) => "Io".into(),
            CliError::Library(e) => {
                let debug = format!("{e:?}");
                debug.split(['(', ' ', '{']).next().unwrap_or_default().to_string()
            }
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Io(m) => f.write_str(m),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<canonfock::Error> for CliError {
    fn from(e: canonfock::Error) -> Self {
        CliError::Library(e)
    }
}

/// Hash of everything that determines the output.
pub fn config_hash(run: &Run) -> String {
    let canonical = json!({
        "command": run.command,
        "config": run.config,
        "seed": run.seed,
        "tol": run.tol,
        "cutoff": run.cutoff,
    });
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn meta(run: &Run) -> Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": run.command,
        "config_sha256": config_hash(run),
        "seed": run.seed,
    })
}

/// 17 significant digits, with `-0` printed as `0`.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn csv(run: &Run, units: &str, columns: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# canonfock {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# command: {}", run.command);
    let _ = writeln!(out, "# config_sha256: {}", config_hash(run));
    let _ = writeln!(out, "# seed: {}", run.seed);
    let _ = writeln!(out, "# units: {units}");
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| num(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn json_doc(run: &Run, mut body: Value) -> String {
    if let Value::Object(map) = &mut body {
        map.insert("meta".into(), meta(run));
    }
    let mut text = serde_json::to_string_pretty(&body).expect("serializable");
    text.push('\n');
    text
}
