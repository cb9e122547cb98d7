//! Key-value experiment manifests.
//!
//! A manifest is a plain-text file of `key = value` lines (with `#`
//! comments) where `mode` names a subcommand and every other key mirrors
//! that subcommand's long flag. The file is expanded into an equivalent
//! argument vector and parsed by the same machinery as the command line, so
//! the two paths cannot drift apart.

use crate::CliError;
use std::path::Path;

const MODES: &[&str] = &["line", "circle", "galton", "classical", "cavity", "sweep"];

/// Keys whose value is a boolean controlling flag presence.
const SWITCHES: &[&str] = &["compare-classical"];

/// Keys whose value is a whitespace- or comma-separated list passed as
/// multiple argument tokens.
const MULTI_VALUE: &[&str] = &["init"];

pub fn argv_from_file(path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading config {}: {e}", path.display())))?;

    let mut mode: Option<String> = None;
    let mut rest: Vec<String> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "{}:{}: expected 'key = value', got '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();

        if key == "mode" {
            if !MODES.contains(&value) {
                return Err(CliError::Config(format!(
                    "{}:{}: unknown mode '{value}' (expected one of {})",
                    path.display(),
                    lineno + 1,
                    MODES.join(", ")
                )));
            }
            if mode.replace(value.to_string()).is_some() {
                return Err(CliError::Config(format!(
                    "{}:{}: duplicate 'mode' key",
                    path.display(),
                    lineno + 1
                )));
            }
            continue;
        }

        if SWITCHES.contains(&key.as_str()) {
            match value {
                "true" => rest.push(format!("--{key}")),
                "false" => {}
                other => {
                    return Err(CliError::Config(format!(
                        "{}:{}: '{key}' takes true or false, got '{other}'",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
            continue;
        }

        rest.push(format!("--{key}"));
        if MULTI_VALUE.contains(&key.as_str()) {
            rest.extend(
                value
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(str::to_string),
            );
        } else {
            rest.push(value.to_string());
        }
    }

    let mode = mode.ok_or_else(|| {
        CliError::Config(format!("{}: missing required 'mode' key", path.display()))
    })?;
    let mut argv = vec!["qwalk-cli".to_string(), mode];
    argv.extend(rest);
    Ok(argv)
}
