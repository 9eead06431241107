//! Browser bindings. Each function returns a rendered report (or an error
//! message) so the page only has to show text.

use ordlab::cli::run_args;
use ordlab::report::Format;
use wasm_bindgen::prelude::*;

fn render(args: &[&str], json: bool) -> Result<String, String> {
    let fmt = if json { Format::Json } else { Format::Text };
    run_args(args).map(|r| r.render(fmt)).map_err(|e| e.to_string())
}

/// Decides a relation between two orders. `relation` is one of the linear
/// verbs (`iso`, `embed`, `cvx`, `bicvx`) or `circ-` followed by a circular
/// one (`circ-iso`, `circ-cvx`, `circ-pcvx`, `circ-embed`).
#[wasm_bindgen]
pub fn decide(relation: &str, source: &str, target: &str, json: bool) -> Result<String, JsError> {
    let args: Vec<&str> = match relation.strip_prefix("circ-") {
        Some(r) => vec!["circ", r, source, target],
        None => vec![relation, source, target],
    };
    render(&args, json).map_err(|e| JsError::new(&e))
}

/// Normal form and compressibility class of a linear order term.
#[wasm_bindgen]
pub fn describe(term: &str, json: bool) -> Result<String, JsError> {
    let norm = render(&["normalize", term], json).map_err(|e| JsError::new(&e))?;
    let class = render(&["classify", term], json).map_err(|e| JsError::new(&e))?;
    Ok(format!("{norm}\n{class}"))
}

/// Runs any command line, quoted as in a shell.
#[wasm_bindgen]
pub fn run(line: &str, json: bool) -> Result<String, JsError> {
    let args = shlex::split(line).ok_or_else(|| JsError::new("unbalanced quotes"))?;
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    render(&args, json).map_err(|e| JsError::new(&e))
}
