//! Versioned JSON reports and error records.

use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::json;

pub const SCHEMA: u32 = 1;

/// Top-level shape of every `report.json`.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: u32,
    pub command: &'a str,
    pub pass: bool,
    pub result: T,
}

pub fn envelope<T: Serialize>(command: &str, pass: bool, result: T) -> Envelope<'_, T> {
    Envelope {
        schema: SCHEMA,
        command,
        pass,
        result,
    }
}

/// Pretty JSON with a trailing newline. Floats use the shortest
/// representation that round-trips; non-finite values become `null`.
pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    write_text(path, &to_json(value)?)
}

pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Structured error record for exit status 2.
pub fn error_record(err: &anyhow::Error) -> serde_json::Value {
    let kind = err
        .chain()
        .find_map(|e| e.downcast_ref::<reifenberg::Error>())
        .map(|e| e.kind())
        .unwrap_or("Io");
    json!({
        "schema": SCHEMA,
        "error": {
            "kind": kind,
            "message": format!("{err:#}"),
        }
    })
}
