//! `--config <file>` support.
//!
//! A config file holds `key = value` lines; blank lines and lines starting with `#` are
//! ignored. Keys are the subcommand's long flag names (`_` and `-` are interchangeable).
//! The entries are spliced in as `--key=value` right after the subcommand name, ahead of
//! the real command-line flags, and the parser keeps the last occurrence of a flag, so
//! flags given on the command line override the file.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{read_file, Error, Result};

pub(crate) fn parse_config(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(i + 1, format!("expected `key = value`, got `{line}`")))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(Error::parse(i + 1, format!("bad key `{}`", k.trim())));
        }
        if out.iter().any(|(_, seen, _)| *seen == key) {
            return Err(Error::parse(i + 1, format!("duplicate key `{key}`")));
        }
        out.push((i + 1, key, v.trim().to_owned()));
    }
    Ok(out)
}

/// Removes `--config` from `args` and splices the file's entries in after the subcommand.
/// `accepts(subcommand, key)` decides which keys are valid; others are rejected with their
/// line number.
pub(crate) fn expand_args(
    args: Vec<OsString>,
    accepts: impl Fn(&str, &str) -> bool,
) -> Result<Vec<OsString>> {
    let Some(sub_at) = args.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map(|p| p + 1)
    else {
        return Ok(args);
    };
    let sub = args[sub_at].to_string_lossy().into_owned();
    let mut rest = Vec::new();
    let mut config = None;
    let mut iter = args[sub_at + 1..].iter();
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy();
        let path = if s == "--config" {
            Some(iter.next().ok_or_else(|| Error::config("--config needs a file path"))?.clone())
        } else {
            s.strip_prefix("--config=").map(OsString::from)
        };
        match path {
            Some(_) if config.is_some() => return Err(Error::config("--config given twice")),
            Some(p) => config = Some(p),
            None => rest.push(a.clone()),
        }
    }
    let mut out: Vec<OsString> = args[..=sub_at].to_vec();
    if let Some(path) = config {
        let path = Path::new(&path);
        let bytes = read_file(path)?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| Error::config(format!("{}: not UTF-8", path.display())))?;
        for (line, key, value) in parse_config(text)? {
            if key == "config" || !accepts(&sub, &key) {
                return Err(Error::config(format!(
                    "{}: line {line}: unknown key `{key}` for `{sub}`",
                    path.display()
                )));
            }
            out.push(format!("--{key}={value}").into());
        }
    }
    out.extend(rest);
    Ok(out)
}
