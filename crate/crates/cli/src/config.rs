//! `--config FILE` support: `key=value` lines turned into flags placed ahead
//! of the command-line flags, so the command line wins on repeats.

use std::ffi::OsString;
use std::fs;

use crate::CliError;

const COMMANDS: [&str; 7] = ["empirical", "theory", "compare", "sums", "r2d", "ortho", "constants"];

/// Flags read from a config file, plus the `command` key if present.
#[derive(Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub flags: Vec<String>,
}

/// Parses the text of a config file. Blank lines and `#` comments are
/// skipped; `true` switches a flag on and `false` leaves it off.
pub fn parse(text: &str, path: &str) -> Result<ConfigFile, CliError> {
    let mut out = ConfigFile::default();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::Input {
            path: path.to_string(),
            msg: format!("line {}: expected key=value", no + 1),
        })?;
        let (k, v) = (k.trim().trim_start_matches("--").replace('_', "-"), v.trim());
        if k.is_empty() {
            return Err(CliError::Input { path: path.to_string(), msg: format!("line {}: empty key", no + 1) });
        }
        match (k.as_str(), v) {
            ("command", _) => out.command = Some(v.to_string()),
            (_, "true") => out.flags.push(format!("--{k}")),
            (_, "false") => {}
            _ => out.flags.push(format!("--{k}={v}")),
        }
    }
    Ok(out)
}

/// Replaces `--config FILE` in `argv` by the flags of the file.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path: Option<OsString> = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        match a.to_str() {
            Some("--config") => {
                path = Some(it.next().ok_or_else(|| CliError::Usage("--config needs a file".into()))?);
            }
            Some(s) if s.starts_with("--config=") => path = Some(s["--config=".len()..].into()),
            _ => rest.push(a),
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let shown = path.to_string_lossy().into_owned();
    let text = fs::read_to_string(&path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    let file = parse(&text, &shown)?;

    let mut rest = rest.into_iter();
    let prog = rest.next().unwrap_or_else(|| "paircorr".into());
    let rest: Vec<OsString> = rest.collect();
    let given = rest.first().and_then(|a| a.to_str()).filter(|a| COMMANDS.contains(a)).map(str::to_string);
    let (command, user) = match (given, file.command) {
        (Some(c), _) => (c, &rest[1..]),
        (None, Some(c)) => (c, &rest[..]),
        (None, None) => return Err(CliError::Usage(format!("{shown}: no command given and no command= key"))),
    };
    let mut out = vec![prog, command.into()];
    out.extend(file.flags.into_iter().map(OsString::from));
    out.extend(user.iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines() {
        let c = parse("# comment\ncommand = empirical\nN=60\nprime_bound=10\ndiagonal=true\nforce=false\n\n", "f").unwrap();
        assert_eq!(c.command.as_deref(), Some("empirical"));
        assert_eq!(c.flags, vec!["--N=60", "--prime-bound=10", "--diagonal"]);
        assert!(parse("oops", "f").is_err());
    }

    #[test]
    fn without_config_is_identity() {
        let argv: Vec<OsString> = ["paircorr", "r2d", "--d", "1"].iter().map(OsString::from).collect();
        assert_eq!(expand(argv.clone()).unwrap(), argv);
    }
}
