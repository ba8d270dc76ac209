//! `key = value` config files merged into argv ahead of explicit flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use clap::{ArgAction, Command};

#[derive(Debug)]
pub struct ConfigError(pub String);

/// Parses a flat config file. Keys are long flag names; `_` and `-` are
/// interchangeable.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(ConfigError(format!("line {}: empty key", lineno + 1)));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(ConfigError(format!(
                "line {}: duplicate key `{key}`",
                lineno + 1
            )));
        }
    }
    Ok(out)
}

/// Value of `--config` in `args`, if any.
fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

fn flag_given(args: &[String], long: &str) -> bool {
    let bare = format!("--{long}");
    let eq = format!("--{long}=");
    args.iter().any(|a| *a == bare || a.starts_with(&eq))
}

/// Rewrites `args` so that config-file entries appear as flags, except where
/// the same flag was passed explicitly.
pub fn merge_config(cmd: &Command, args: Vec<String>) -> Result<Vec<String>, ConfigError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(Path::new(&path))
        .map_err(|e| ConfigError(format!("cannot read config file `{path}`: {e}")))?;
    let entries = parse_config(&text)?;

    // leading positional tokens name the (nested) subcommand
    let mut leaf = cmd;
    let mut split = 1;
    while let Some(tok) = args.get(split) {
        match leaf.find_subcommand(tok) {
            Some(sub) => {
                leaf = sub;
                split += 1;
            }
            None => break,
        }
    }
    if leaf.has_subcommands() {
        return Err(ConfigError(
            "a config file needs a complete subcommand".into(),
        ));
    }

    let mut injected = Vec::new();
    for (key, value) in &entries {
        let arg = leaf
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config")
            .ok_or_else(|| {
                ConfigError(format!(
                    "unknown config key `{key}` for `{}`",
                    leaf.get_name()
                ))
            })?;
        if flag_given(&args, key) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => match value.as_str() {
                "true" => injected.push(format!("--{key}")),
                "false" => {}
                other => {
                    return Err(ConfigError(format!(
                        "key `{key}` expects true or false, got `{other}`"
                    )))
                }
            },
            _ => injected.push(format!("--{key}={value}")),
        }
    }

    let mut merged = args[..split].to_vec();
    merged.extend(injected);
    merged.extend_from_slice(&args[split..]);
    Ok(merged)
}
