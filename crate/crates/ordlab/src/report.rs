//! Command reports and their two serializations.
//!
//! The text form is a key-value tree: one `path = value` line per leaf,
//! where the path joins object keys and array indices with dots and the
//! value is a JSON scalar. Empty arrays and objects are written as `[]` and
//! `{}`. Both forms carry the same data and parse back to the same report.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value as Json};

use crate::decision::{Certificate, Decision, Outcome, Step};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    /// The command line that produced the report, without the program name
    /// and global options. `verify` replays it.
    pub command: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default)]
    pub trace: Vec<Step>,
    #[serde(default)]
    pub elapsed_us: u64,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report { command, outcome: None, value: None, certificate: None, trace: vec![], elapsed_us: 0 }
    }

    pub fn with_decision(mut self, d: Decision) -> Self {
        self.outcome = Some(d.outcome);
        self.certificate = d.certificate;
        self.trace = d.trace;
        self
    }

    pub fn with_value(mut self, v: impl Into<String>) -> Self {
        self.value = Some(v.into());
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome.map_or(0, Outcome::exit_code)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialize"),
            Format::Text => to_text(&serde_json::to_value(self).expect("reports serialize")),
        }
    }

    /// Reads either serialization.
    pub fn parse(src: &str) -> Result<Self, Error> {
        let src = src.trim_start();
        let json = if src.starts_with('{') { serde_json::from_str(src)? } else { from_text(src)? };
        Ok(serde_json::from_value(json)?)
    }
}

pub fn to_text(v: &Json) -> String {
    let mut out = String::new();
    flatten("", v, &mut out);
    out
}

fn flatten(path: &str, v: &Json, out: &mut String) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Json::Object(m) if !m.is_empty() => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Json::Array(a) if !a.is_empty() => a.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        _ => {
            out.push_str(path);
            out.push_str(" = ");
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
}

pub fn from_text(src: &str) -> Result<Json, Error> {
    let mut root = Json::Null;
    for (n, line) in src.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |m: &str| Error::Usage(format!("report line {}: {m}", n + 1));
        let (path, val) = line.split_once(" = ").ok_or_else(|| bad("expected `path = value`"))?;
        let val: Json = serde_json::from_str(val.trim()).map_err(|e| bad(&e.to_string()))?;
        let keys: Vec<&str> = path.trim().split('.').collect();
        insert(&mut root, &keys, val).map_err(|m| bad(&m))?;
    }
    Ok(root)
}

fn insert(node: &mut Json, keys: &[&str], val: Json) -> Result<(), String> {
    let Some((k, rest)) = keys.split_first() else {
        if !node.is_null() {
            return Err("duplicate path".into());
        }
        *node = val;
        return Ok(());
    };
    if let Ok(i) = k.parse::<usize>() {
        if node.is_null() {
            *node = Json::Array(vec![]);
        }
        let Json::Array(a) = node else { return Err(format!("`{k}` indexes a non-array")) };
        if i > a.len() {
            return Err(format!("index {i} skips entries"));
        }
        if i == a.len() {
            a.push(Json::Null);
        }
        insert(&mut a[i], rest, val)
    } else {
        if node.is_null() {
            *node = Json::Object(Map::new());
        }
        let Json::Object(m) = node else { return Err(format!("`{k}` keys a non-object")) };
        insert(m.entry(k.to_string()).or_insert(Json::Null), rest, val)
    }
}
