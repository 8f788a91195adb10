//! Flat `key=value` config files. Entries become flags placed before the
//! ones on the command line, so explicit flags win.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// Location of `--config` in raw arguments, if any.
pub fn find_config(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Parse `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(path: &Path, text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config {
                path: path.to_path_buf(),
                line: i + 1,
                reason: format!("expected key=value, got `{line}`"),
            });
        };
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Position just after the subcommand name, where injected flags go.
fn subcommand_position(argv: &[OsString], names: &[String]) -> Option<usize> {
    let mut skip_value = false;
    for (i, a) in argv.iter().enumerate().skip(1) {
        let s = a.to_string_lossy();
        if skip_value {
            skip_value = false;
            continue;
        }
        if s == "--config" || s == "--workers" || s == "--out-dir" {
            skip_value = true;
            continue;
        }
        if names.iter().any(|n| *n == s) {
            return Some(i);
        }
    }
    None
}

/// Rewrite `argv` with the config entries spliced in after the subcommand.
pub fn inject(argv: Vec<OsString>, entries: &[(String, String)], path: &Path) -> CliResult<Vec<OsString>> {
    let cmd = crate::command();
    let names: Vec<String> = cmd.get_subcommands().map(|c| c.get_name().to_string()).collect();
    let Some(pos) = subcommand_position(&argv, &names) else {
        return Ok(argv);
    };
    let name = argv[pos].to_string_lossy().to_string();
    let sub = cmd.find_subcommand(&name).expect("listed above");
    let mut flags: Vec<OsString> = Vec::new();
    for (i, (key, value)) in entries.iter().enumerate() {
        let arg = sub
            .get_arguments()
            .chain(cmd.get_arguments().filter(|a| a.get_long() != Some("config")))
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| CliError::Config {
                path: path.to_path_buf(),
                line: i + 1,
                reason: format!("`{key}` is not an option of `{name}`"),
            })?;
        if arg.get_action().takes_values() {
            flags.push(format!("--{key}").into());
            flags.push(value.into());
        } else {
            match value.as_str() {
                "true" => flags.push(format!("--{key}").into()),
                "false" => {}
                _ => {
                    return Err(CliError::Config {
                        path: path.to_path_buf(),
                        line: i + 1,
                        reason: format!("`{key}` takes true or false"),
                    })
                }
            }
        }
    }
    let mut out = argv[..=pos].to_vec();
    out.extend(flags);
    out.extend_from_slice(&argv[pos + 1..]);
    Ok(out)
}
