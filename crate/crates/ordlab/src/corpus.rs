//! Corpus files: one `command args => expected` line each, `#` comments.
//!
//! Arguments use shell quoting. The expected text is compared with the
//! report's value when it has one and with its outcome otherwise; a command
//! that fails is read as `error`.

use std::fmt;
use std::path::Path;

use crate::cli::run_args;
use crate::error::Error;
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub location: String,
    pub command: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{mark} {} => {}", self.command, self.expected)?;
        if !self.pass {
            write!(f, " (got {})", self.got)?;
        }
        Ok(())
    }
}

/// What a report says, in corpus terms.
pub fn summary(r: &Report) -> String {
    match (&r.value, r.outcome) {
        (Some(v), _) => v.clone(),
        (None, Some(o)) => o.to_string(),
        (None, None) => String::new(),
    }
}

pub fn parse_line(line: &str) -> Option<Result<(Vec<String>, String), Error>> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('#') {
        return None;
    }
    let Some((cmd, expected)) = line.rsplit_once("=>") else {
        return Some(Err(Error::Usage(format!("missing `=>` in `{line}`"))));
    };
    Some(match shlex::split(cmd.trim()) {
        Some(args) if !args.is_empty() => Ok((args, expected.trim().to_string())),
        _ => Err(Error::Usage(format!("cannot split `{cmd}`"))),
    })
}

pub fn run_text(name: &str, src: &str) -> Result<Vec<Row>, Error> {
    let mut rows = Vec::new();
    for (n, line) in src.lines().enumerate() {
        let Some(parsed) = parse_line(line) else { continue };
        let (args, expected) = parsed?;
        let got = match run_args(&args) {
            Ok(r) => summary(&r),
            Err(_) => "error".to_string(),
        };
        rows.push(Row {
            location: format!("{name}:{}", n + 1),
            command: line.trim().rsplit_once("=>").map_or("", |(c, _)| c.trim()).to_string(),
            pass: got == expected,
            expected,
            got,
        });
    }
    Ok(rows)
}

pub fn run_dir(dir: &Path) -> Result<Vec<Row>, Error> {
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    let mut rows = Vec::new();
    for f in files {
        let name = f.file_name().map(|x| x.to_string_lossy().into_owned()).unwrap_or_default();
        rows.extend(run_text(&name, &std::fs::read_to_string(&f)?)?);
    }
    Ok(rows)
}

/// Fixed-width pass/fail table.
pub fn table(rows: &[Row]) -> String {
    let w = rows.iter().map(|r| r.location.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        out.push_str(&format!("{:w$}  {r}\n", r.location));
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    out.push_str(&format!("{passed}/{} passed\n", rows.len()));
    out
}
