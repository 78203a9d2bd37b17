//! Plain-text run configuration.
//!
//! One `key = value` pair per line, keys as accepted by
//! [`ScenarioConfig::set`]. Text after `#` is a comment. An optional
//! `scenario = NAME` line selects the built-in setup the remaining keys
//! modify; without it every key is applied to a uniform flat-bottom default.
//! A relative `initial.file` is resolved against the directory of the file.

use std::path::Path;

use crate::error::{Result, SweError};
use crate::scenarios::{scenario, ScenarioConfig};

/// `(line number, key, value)` triples in file order.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| SweError::Config { line, msg: format!("expected key = value, found {content:?}") })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(SweError::Config { line, msg: "empty key".into() });
        }
        if out.iter().any(|(_, k, _): &(usize, String, String)| k == key) {
            return Err(SweError::Config { line, msg: format!("duplicate key {key}") });
        }
        out.push((line, key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// Builds a configuration from file contents. `base_dir` anchors relative
/// data paths.
pub fn config_from_str(text: &str, base_dir: Option<&Path>) -> Result<ScenarioConfig> {
    let pairs = parse_pairs(text)?;
    let mut cfg = match pairs.iter().find(|(_, k, _)| k == "scenario") {
        Some((line, _, name)) => scenario(name).map_err(|e| SweError::Config { line: *line, msg: e.to_string() })?,
        None => ScenarioConfig::default(),
    };
    // the table is read against the final bottom, so its order does not matter
    for (line, key, value) in &pairs {
        if key == "scenario" {
            continue;
        }
        let value = match (key.as_str(), base_dir) {
            ("initial.file", Some(dir)) if Path::new(value).is_relative() => dir.join(value).display().to_string(),
            _ => value.clone(),
        };
        cfg.set(key, &value).map_err(|e| SweError::Config { line: *line, msg: e.to_string() })?;
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| SweError::io(path, e))?;
    config_from_str(&text, path.parent())
        .map_err(|e| SweError::InvalidInput(format!("{}: {e}", path.display())))
}

/// Text form that [`config_from_str`] reads back to the same configuration.
pub fn render_config(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    for (k, v) in cfg.to_pairs() {
        out.push_str(&format!("{k} = {v}\n"));
    }
    out
}

/// Applies `KEY=VALUE` overrides from the command line.
pub fn apply_overrides(cfg: &mut ScenarioConfig, overrides: &[String]) -> Result<()> {
    for item in overrides {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| SweError::InvalidInput(format!("override {item:?} is not KEY=VALUE")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    Ok(())
}
