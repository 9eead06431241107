//! Command surface. Every verb maps to one library operation and yields a
//! [`Report`].

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::arcknot::{self, arc_sum, classify_knot, decide_subarc, decide_subknot, ArcDescriptor, KnotDescriptor, Limit};
use crate::circular::{self, decide_c, CircObj, CircRel, CoArg, CoMap, RatSeq};
use crate::condense::{circ_condense, condense};
use crate::decision::{Certificate, Decision, Outcome, Step};
use crate::dsl::{parse_ordinal, parse_rational, parse_set, parse_term, parse_value, print_term, Value};
use crate::embed::{self, compressibility_form, infinite_intervals, reduce_lo, IntervalKind, LoMap, Relation, WoAnswer};
use crate::error::Error;
use crate::eval::Presentation;
use crate::form::to_form;
use crate::normalize::normalize;
use crate::report::{Format, Report};
use crate::term::OrderTerm;

#[derive(Parser, Debug)]
#[command(name = "ordlab", version, about = "Decide and certify relations between countable orders")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    pub format: FormatArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Canonical form of a term.
    Normalize { term: String },
    /// Isomorphism of SOURCE and TARGET.
    Iso { source: String, target: String },
    /// Order embeddability of SOURCE into TARGET.
    Embed { source: String, target: String },
    /// Convex embeddability of SOURCE into TARGET.
    Cvx { source: String, target: String },
    /// Convex embeddability in both directions.
    Bicvx { source: String, target: String },
    /// Condensation profile of a term or circular term.
    Condense { term: String },
    /// Left/right compressibility.
    Classify { term: String },
    /// Infinite intervals of a term.
    Intervals {
        term: String,
        #[arg(long, value_enum, default_value_t = KindArg::Closed)]
        kind: KindArg,
    },
    /// Well-order test with the order type.
    Wellorder { term: String },
    /// Z^L for the argument L, rewritten to Z^a or Z^a * e.
    Zpow { term: String },
    /// An ordinal that does not convexly embed (linear) or piecewise
    /// convexly embed (circular) into the argument.
    Unbounded { term: String },
    /// Ordinal arithmetic: add, mul, cmp, next.
    Ordinal { op: OrdOp, a: String, b: Option<String> },
    /// Compare two element codes of a term's presentation.
    Eval { term: String, i: u64, j: u64 },
    /// Reduction maps: phi0..phi3, psi, circ_iso, circ_pcvx, e1.
    Reduce { map: String, args: Vec<String> },
    /// Circular orders.
    #[command(subcommand)]
    Circ(CircCmd),
    /// Arc descriptors.
    #[command(subcommand)]
    Arc(ArcCmd),
    /// Knot descriptors.
    #[command(subcommand)]
    Knot(KnotCmd),
    /// Run an expectations corpus.
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Replay and check the certificate in a saved report.
    Verify { report: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Closed,
    Final,
    Initial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrdOp {
    Add,
    Mul,
    Cmp,
    Next,
}

#[derive(Subcommand, Debug, Clone)]
pub enum CircCmd {
    Iso { source: String, target: String },
    Embed { source: String, target: String },
    Cvx { source: String, target: String },
    /// Piecewise convex embeddability: finitely many convex pieces.
    Pcvx { source: String, target: String },
    /// Piecewise convex witness for C -> E from witnesses C -> D -> E.
    Compose { c: String, d: String, e: String },
    /// Linear order read off C[t] from the element with this code.
    Linearize { term: String, code: u64 },
    /// A ∩ B as at most two convex sets, in a finite circular order.
    Intersect { circ: String, a: String, b: String },
}

#[derive(Subcommand, Debug, Clone)]
pub enum ArcCmd {
    /// Subarc relation.
    Sub { source: String, target: String },
    /// Finite concatenation, optionally ended by an infinite sum.
    Sum {
        parts: Vec<String>,
        /// `none`, `interior:<set>` or `boundary:<set>`.
        #[arg(long, default_value = "none")]
        limit: String,
    },
    /// The order of isolated singular points, when defined.
    Isolated { arc: String },
}

#[derive(Subcommand, Debug, Clone)]
pub enum KnotCmd {
    /// Piecewise subknot relation.
    Sub { source: String, target: String },
    /// Tame or wild.
    Classify { knot: String },
}

#[derive(Subcommand, Debug, Clone)]
pub enum CorpusCmd {
    /// Run every `*.txt` corpus file in a directory.
    Run { dir: PathBuf },
}

/// Parses tokens (without the program name) and runs them.
pub fn run_args<S: AsRef<str>>(args: &[S]) -> Result<Report, Error> {
    let argv: Vec<String> = args.iter().map(|s| s.as_ref().to_string()).collect();
    let cli = Cli::try_parse_from(std::iter::once("ordlab".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| Error::Usage(e.to_string()))?;
    execute(&cli.command, strip_format(&argv))
}

/// Drops `--format X` and `--format=X` so that reports replay independently of output style.
pub fn strip_format(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv {
        if skip {
            skip = false;
        } else if a == "--format" {
            skip = true;
        } else if !a.starts_with("--format=") {
            out.push(a.clone());
        }
    }
    out
}

pub fn execute(cmd: &Command, argv: Vec<String>) -> Result<Report, Error> {
    // the browser target has no clock, so reports there carry zero time
    #[cfg(not(target_arch = "wasm32"))]
    let start = std::time::Instant::now();
    #[allow(unused_mut)]
    let mut r = dispatch(cmd, Report::new(argv))?;
    #[cfg(not(target_arch = "wasm32"))]
    {
        r.elapsed_us = start.elapsed().as_micros() as u64;
    }
    Ok(r)
}

/// `zpow L` and `zpow "Z^{L}"` mean the same thing.
fn zpow_arg(t: OrderTerm) -> OrderTerm {
    match t {
        OrderTerm::ZPowOf(_) => t,
        t => OrderTerm::zpow_of(t),
    }
}

pub fn term(s: &str) -> Result<OrderTerm, Error> {
    Ok(parse_term(s)?)
}

pub fn circ_obj(s: &str) -> Result<CircObj, Error> {
    match parse_value(s)? {
        Value::Circ(c) => Ok(CircObj::Term(c)),
        Value::FinCirc(c) => Ok(CircObj::Fin(c)),
        _ => Err(Error::Usage(format!("`{s}` is not a circular order"))),
    }
}

pub fn arc(s: &str) -> Result<ArcDescriptor, Error> {
    match parse_value(s)? {
        Value::Arc(a) => Ok(a),
        _ => Err(Error::Usage(format!("`{s}` is not an arc (write `arc: ...`)"))),
    }
}

pub fn knot(s: &str) -> Result<KnotDescriptor, Error> {
    match parse_value(s)? {
        Value::Knot(k) => Ok(k),
        _ => Err(Error::Usage(format!("`{s}` is not a knot (write `knot:`, `koa:` or `fknot:`)"))),
    }
}

fn unknown(r: Report, rule: &str, why: impl Into<String>) -> Report {
    r.with_decision(Decision::unknown(rule, why))
}

pub fn relation(cmd: &Command) -> Option<Relation> {
    match cmd {
        Command::Iso { .. } => Some(Relation::Iso),
        Command::Embed { .. } => Some(Relation::Embed),
        Command::Cvx { .. } => Some(Relation::Cvx),
        Command::Bicvx { .. } => Some(Relation::Bicvx),
        _ => None,
    }
}

pub fn circ_relation(cmd: &CircCmd) -> Option<CircRel> {
    match cmd {
        CircCmd::Iso { .. } => Some(CircRel::IsoC),
        CircCmd::Embed { .. } => Some(CircRel::EmbedC),
        CircCmd::Cvx { .. } => Some(CircRel::CvxC),
        CircCmd::Pcvx { .. } => Some(CircRel::Pcvx),
        _ => None,
    }
}

fn dispatch(cmd: &Command, r: Report) -> Result<Report, Error> {
    Ok(match cmd {
        Command::Normalize { term: t } => r.with_value(print_term(&normalize(&term(t)?)?)),
        Command::Iso { source, target }
        | Command::Embed { source, target }
        | Command::Cvx { source, target }
        | Command::Bicvx { source, target } => {
            let rel = relation(cmd).expect("linear relation verb");
            r.with_decision(embed::decide(rel, &term(source)?, &term(target)?))
        }
        Command::Condense { term: t } => {
            let p = match parse_value(t)? {
                Value::Term(x) => condense(&x),
                Value::Circ(c) => circ_condense(&c),
                _ => return Err(Error::Usage("condense takes a term or C[...]".into())),
            };
            match p {
                Ok(p) => r.with_value(p.to_string()),
                Err(e) => unknown(r, "fragment", e.to_string()),
            }
        }
        Command::Classify { term: t } => match to_form(&term(t)?) {
            Ok(f) => {
                let (class, cert) = compressibility_form(&f);
                let mut r = r.with_value(class.to_string());
                r.certificate = cert;
                if class == embed::CompressClass::Unknown {
                    r.outcome = Some(Outcome::Unknown);
                }
                r
            }
            Err(e) => unknown(r, "fragment", e.to_string()),
        },
        Command::Intervals { term: t, kind } => {
            let kind = match kind {
                KindArg::Closed => IntervalKind::Closed,
                KindArg::Final => IntervalKind::Final,
                KindArg::Initial => IntervalKind::Initial,
            };
            match infinite_intervals(&term(t)?, kind) {
                Ok(v) => r.with_value(format!("[{}]", v.iter().map(print_term).collect::<Vec<_>>().join(", "))),
                Err(e) => unknown(r, "intervals", e.to_string()),
            }
        }
        Command::Wellorder { term: t } => {
            let d = match embed::is_well_order(&term(t)?) {
                WoAnswer::Yes(a) => Decision::yes(Certificate::Ordinal { value: a.to_string() }, "well-order", format!("order type {a}")),
                WoAnswer::No => Decision::no(Certificate::Rule { rule: "not-well-ordered".into(), evidence: t.clone() }, "well-order", "a descending sequence exists"),
                WoAnswer::Unknown => Decision::unknown("well-order", "outside the fragment"),
            };
            r.with_decision(d)
        }
        Command::Zpow { term: t } => match embed::zpow_normalize(&zpow_arg(term(t)?)) {
            Ok(x) => r.with_value(print_term(&x)),
            Err(e) => unknown(r, "zpow", e.to_string()),
        },
        Command::Unbounded { term: t } => {
            let w = match parse_value(t)? {
                Value::Term(x) => embed::wo_unbounded_witness(&x),
                Value::Circ(c) => circular::circ_unbounded_witness(&c),
                _ => return Err(Error::Usage("unbounded takes a term or C[...]".into())),
            };
            match w {
                Ok(a) => r.with_value(a.to_string()),
                Err(e) => unknown(r, "unbounded", e.to_string()),
            }
        }
        Command::Ordinal { op, a, b } => {
            let a = parse_ordinal(a)?;
            let b = || -> Result<_, Error> {
                let s = b.as_deref().ok_or_else(|| Error::Usage("second ordinal missing".into()))?;
                Ok(parse_ordinal(s)?)
            };
            let v = match op {
                OrdOp::Add => a.checked_add(&b()?)?.to_string(),
                OrdOp::Mul => a.checked_mul(&b()?)?.to_string(),
                OrdOp::Cmp => ordering_name(a.cmp(&b()?)).to_string(),
                OrdOp::Next => a.next_indecomposable().to_string(),
            };
            r.with_value(v)
        }
        Command::Eval { term: t, i, j } => {
            let p = Presentation::new(term(t)?);
            let (Some(o), Some(x), Some(y)) = (p.compare(*i, *j), p.describe(*i), p.describe(*j)) else {
                return Err(Error::Usage(format!("codes {i}, {j} are not both in the domain")));
            };
            let mut r = r.with_value(ordering_name(o));
            r.trace.push(Step { rule: "decode".into(), detail: format!("{i} = {x}, {j} = {y}") });
            r
        }
        Command::Reduce { map, args } => r.with_value(reduce(map, args)?),
        Command::Circ(c) => circ(c, r)?,
        Command::Arc(a) => arc_cmd(a, r)?,
        Command::Knot(k) => match k {
            KnotCmd::Sub { source, target } => r.with_decision(decide_subknot(&knot(source)?, &knot(target)?)),
            KnotCmd::Classify { knot: k } => r.with_value(classify_knot(&knot(k)?).to_string()),
        },
        Command::Corpus(CorpusCmd::Run { dir }) => {
            let rows = crate::corpus::run_dir(dir)?;
            let passed = rows.iter().filter(|x| x.pass).count();
            let mut r = r.with_value(format!("{passed}/{}", rows.len()));
            r.trace = rows.iter().map(|x| Step { rule: x.location.clone(), detail: x.to_string() }).collect();
            r
        }
        Command::Verify { report } => {
            let src = std::fs::read_to_string(report)?;
            crate::verify::verify(&Report::parse(&src)?)?;
            r.with_value("accepted")
        }
    })
}

fn ordering_name(o: std::cmp::Ordering) -> &'static str {
    match o {
        std::cmp::Ordering::Less => "lt",
        std::cmp::Ordering::Equal => "eq",
        std::cmp::Ordering::Greater => "gt",
    }
}

fn rationals(s: &str) -> Result<Vec<crate::rational::Q>, Error> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(|x| Ok(parse_rational(x)?)).collect()
}

pub fn reduce(map: &str, args: &[String]) -> Result<String, Error> {
    if let Ok(m) = map.parse::<LoMap>() {
        let ts = args.iter().map(|a| term(a)).collect::<Result<Vec<_>, _>>()?;
        return Ok(print_term(&reduce_lo(m, &ts)?));
    }
    let m: CoMap = map.parse()?;
    let arg = match (m, args) {
        (CoMap::E1, [pre, cyc]) => CoArg::Seq(RatSeq { prefix: rationals(pre)?, cycle: rationals(cyc)? }),
        (CoMap::E1, _) => return Err(Error::Usage("e1 takes a prefix and a cycle of rationals".into())),
        (_, [t]) => CoArg::Term(term(t)?),
        _ => return Err(Error::Usage(format!("{map} takes one term"))),
    };
    Ok(circular::reduce_co(m, arg)?.to_string())
}

fn circ(c: &CircCmd, r: Report) -> Result<Report, Error> {
    Ok(match c {
        CircCmd::Iso { source, target }
        | CircCmd::Embed { source, target }
        | CircCmd::Cvx { source, target }
        | CircCmd::Pcvx { source, target } => {
            let rel = circ_relation(c).expect("circular relation verb");
            r.with_decision(decide_c(rel, &circ_obj(source)?, &circ_obj(target)?)?)
        }
        CircCmd::Compose { c, d, e } => match (circ_obj(c)?, circ_obj(d)?, circ_obj(e)?) {
            (CircObj::Fin(c), CircObj::Fin(d), CircObj::Fin(e)) => {
                let (Some(w1), Some(w2)) = (c.pcvx_search(&d), d.pcvx_search(&e)) else {
                    return Ok(r.with_decision(Decision::refuted(
                        crate::decision::Refutation::SizeMismatch { source: c.len() as u64, target: e.len() as u64 },
                        "compose",
                    )));
                };
                let w = circular::compose_fin(&c, &d, &e, &w1, &w2)?;
                r.with_decision(Decision::yes(Certificate::FinPcvx(w), "compose", "pieces split along intersections"))
            }
            (CircObj::Term(c), CircObj::Term(d), CircObj::Term(e)) => r.with_decision(circular::compose_term(&c, &d, &e)),
            _ => return Err(crate::error::CircError::MixedKinds.into()),
        },
        CircCmd::Linearize { term: t, code } => match circ_obj(t)? {
            CircObj::Fin(c) => {
                let base = usize::try_from(*code).ok().filter(|&b| b < c.len());
                let base = base.ok_or_else(|| Error::Usage(format!("code {code} is not an element")))?;
                r.with_value(serde_json::to_string(&c.linearize(base)?)?)
            }
            CircObj::Term(c) => {
                let base = Presentation::new(c.0.clone())
                    .decode(*code)
                    .ok_or_else(|| Error::Usage(format!("code {code} is not an element")))?;
                let line = normalize(&circular::linearize_term(&c, &base)?)?;
                r.with_value(print_term(&line))
            }
        },
        CircCmd::Intersect { circ: s, a, b } => {
            let CircObj::Fin(c) = circ_obj(s)? else {
                return Err(Error::Usage("intersect takes a finite circular order".into()));
            };
            let parts = c.decompose_intersection(&indices(a)?, &indices(b)?)?;
            r.with_value(serde_json::to_string(&parts)?)
        }
    })
}

fn indices(s: &str) -> Result<Vec<usize>, Error> {
    s.trim_matches(|c| c == '{' || c == '}')
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Error::Usage(format!("bad element `{x}`"))))
        .collect()
}

fn arc_cmd(a: &ArcCmd, r: Report) -> Result<Report, Error> {
    Ok(match a {
        ArcCmd::Sub { source, target } => r.with_decision(decide_subarc(&arc(source)?, &arc(target)?)),
        ArcCmd::Sum { parts, limit } => {
            let parts = parts.iter().map(|p| arc(p)).collect::<Result<Vec<_>, _>>()?;
            let limit = match limit.split_once(':') {
                None if limit == "none" => Limit::None,
                Some(("interior", s)) => Limit::Interior(parse_set(s)?),
                Some(("boundary", s)) => Limit::Boundary(parse_set(s)?),
                _ => return Err(Error::Usage(format!("bad limit `{limit}`"))),
            };
            r.with_value(arc_sum(&parts, limit)?.to_string())
        }
        ArcCmd::Isolated { arc: s } => match arcknot::isolated_order(&arc(s)?) {
            Some(t) => r.with_value(print_term(&t)),
            None => unknown(r, "isolated-order", "the singular points do not form an order in the fragment"),
        },
    })
}
