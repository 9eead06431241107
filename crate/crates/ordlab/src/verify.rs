//! Independent replay of report certificates.
//!
//! Witnesses (convex splits, finite maps, piece decompositions, shifts) are
//! checked directly against the inputs without running any search.
//! Certificates that only name a rule or a completed search are accepted
//! when a fresh run reproduces them exactly.

use clap::Parser;

use crate::circular::fincirc::FinCirc;
use crate::circular::{check_e1_shift, CircObj, CircRel};
use crate::cli::{self, circ_obj, term, ArcCmd, CircCmd, Cli, Command, CorpusCmd};
use crate::decision::{Certificate, Outcome, Refutation};
use crate::dsl::parse_term;
use crate::embed::{CompressClass, Relation};
use crate::error::Error;
use crate::form::{to_form, Form};
use crate::report::Report;
use crate::term::OrderTerm;

fn reject(msg: impl Into<String>) -> Error {
    Error::Verify(msg.into())
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), Error> {
    if ok {
        Ok(())
    } else {
        Err(reject(msg))
    }
}

/// Accepts the report or explains the first failed check.
pub fn verify(r: &Report) -> Result<(), Error> {
    let argv = std::iter::once("ordlab".to_string()).chain(r.command.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| reject(format!("command does not parse: {e}")))?;
    let cmd = cli.command;
    if matches!(cmd, Command::Verify { .. } | Command::Corpus(CorpusCmd::Run { .. })) {
        return Err(reject("reports of this verb carry nothing to replay"));
    }
    match (r.outcome, &r.certificate) {
        (Some(Outcome::Unknown), Some(_)) => return Err(reject("unknown outcome with a certificate")),
        (Some(Outcome::Yes | Outcome::No), None) => return Err(reject("decided outcome without a certificate")),
        _ => {}
    }
    let witnessed = match (&r.certificate, r.outcome) {
        (Some(c), Some(o)) if o != Outcome::Unknown => check(&cmd, o, c)?,
        (Some(c), _) => check_value_cert(&cmd, r, c)?,
        _ => false,
    };
    let replay_needed = !witnessed || r.value.is_some() || r.outcome.is_none() || r.outcome == Some(Outcome::Unknown);
    if replay_needed {
        let fresh = cli::execute(&cmd, r.command.clone())?;
        ensure(fresh.outcome == r.outcome, format!("outcome {:?} replays as {:?}", r.outcome, fresh.outcome))?;
        ensure(fresh.value == r.value, format!("value {:?} replays as {:?}", r.value, fresh.value))?;
        if !witnessed {
            ensure(fresh.certificate == r.certificate, "certificate differs from the replayed one")?;
        }
    }
    Ok(())
}

/// Returns true when the certificate was checked on its own merits.
fn check(cmd: &Command, outcome: Outcome, cert: &Certificate) -> Result<bool, Error> {
    match cmd {
        Command::Iso { source, target }
        | Command::Embed { source, target }
        | Command::Cvx { source, target }
        | Command::Bicvx { source, target } => {
            let rel = cli::relation(cmd).expect("linear verb");
            check_linear(rel, outcome, &term(source)?, &term(target)?, cert)
        }
        Command::Wellorder { term: t } => match cert {
            Certificate::Ordinal { value } => {
                let f = form(&term(t)?)?;
                let a = f.as_ordinal().ok_or_else(|| reject("term is not a well order"))?;
                ensure(outcome == Outcome::Yes && a.to_string() == *value, "order type mismatch")?;
                Ok(true)
            }
            _ => Ok(false),
        },
        Command::Circ(c) => match c {
            CircCmd::Iso { source, target }
            | CircCmd::Embed { source, target }
            | CircCmd::Cvx { source, target }
            | CircCmd::Pcvx { source, target } => {
                let rel = cli::circ_relation(c).expect("circular verb");
                check_circ(rel, outcome, &circ_obj(source)?, &circ_obj(target)?, cert)
            }
            CircCmd::Compose { c, e, .. } => check_circ(CircRel::Pcvx, outcome, &circ_obj(c)?, &circ_obj(e)?, cert),
            _ => Ok(false),
        },
        Command::Arc(ArcCmd::Sub { .. }) | Command::Knot(_) => Ok(false),
        _ => Ok(false),
    }
}

fn check_value_cert(cmd: &Command, r: &Report, cert: &Certificate) -> Result<bool, Error> {
    let Command::Classify { term: t } = cmd else { return Ok(false) };
    let Certificate::Compressible { side, left, right } = cert else { return Ok(false) };
    let f = form(&term(t)?)?;
    let whole = parts_form(&[left, right])?;
    ensure(whole == f, "split does not reassemble the order")?;
    let (l, rt) = (parts_form(&[left])?, parts_form(&[right])?);
    ensure(!l.is_empty() && !rt.is_empty(), "compression needs a nonempty remainder")?;
    let class: Option<CompressClass> = match r.value.as_deref() {
        Some("LeftOnly") => Some(CompressClass::LeftOnly),
        Some("RightOnly") => Some(CompressClass::RightOnly),
        Some("Bi") => Some(CompressClass::Bi),
        _ => None,
    };
    let class = class.ok_or_else(|| reject("compression certificate for a class without that side"))?;
    match side.as_str() {
        "left" => ensure(rt == f && class.left() == Some(true), "left remainder is not a copy of the order")?,
        "right" => ensure(l == f && class.right() == Some(true), "right remainder is not a copy of the order")?,
        _ => return Err(reject(format!("unknown side `{side}`"))),
    }
    Ok(true)
}

fn form(t: &OrderTerm) -> Result<Form, Error> {
    to_form(t).map_err(|e| reject(e.to_string()))
}

/// The canonical form of a sum of DSL strings, "0" spelling the empty order.
fn parts_form<S: AsRef<str>>(parts: &[S]) -> Result<Form, Error> {
    let mut ts = Vec::new();
    for p in parts {
        let p = p.as_ref().trim();
        if p != "0" {
            ts.push(parse_term(p)?);
        }
    }
    if ts.is_empty() {
        return Ok(Form::empty());
    }
    form(&OrderTerm::sum(ts))
}

/// Contiguous occurrence of `part` among the tokens of `whole`.
fn occurs(part: &Form, whole: &Form) -> bool {
    let (p, w) = (part.toks(), whole.toks());
    !p.is_empty() && w.windows(p.len()).any(|x| x == p)
}

fn check_linear(rel: Relation, outcome: Outcome, t: &OrderTerm, u: &OrderTerm, cert: &Certificate) -> Result<bool, Error> {
    let (a, b) = (form(t)?, form(u)?);
    check_linear_forms(rel, outcome, &a, &b, cert)
}

fn check_linear_forms(rel: Relation, outcome: Outcome, a: &Form, b: &Form, cert: &Certificate) -> Result<bool, Error> {
    match cert {
        Certificate::SameForm { form } => {
            ensure(outcome == Outcome::Yes, "equal forms prove a positive answer")?;
            ensure(a == b && a.to_string() == *form, "forms are not the stated one")?;
        }
        Certificate::DistinctForms { source, target } => {
            ensure(outcome == Outcome::No && rel == Relation::Iso, "distinct forms only refute isomorphism")?;
            ensure(a.is_transparent() && b.is_transparent(), "forms are not known to be unique")?;
            ensure(a != b && a.to_string() == *source && b.to_string() == *target, "forms are not the stated ones")?;
        }
        Certificate::Convex { left, right } => {
            ensure(outcome == Outcome::Yes && matches!(rel, Relation::Cvx | Relation::Embed), "convex split for another relation")?;
            let mid = a.to_string();
            ensure(parts_form(&[left.as_str(), &mid, right.as_str()])? == *b, "left + source + right is not the target")?;
        }
        Certificate::Pair { forward, backward } => {
            ensure(outcome == Outcome::Yes && rel == Relation::Bicvx, "paired certificate outside bicvx")?;
            let f = check_linear_forms(Relation::Cvx, Outcome::Yes, a, b, forward)?;
            let g = check_linear_forms(Relation::Cvx, Outcome::Yes, b, a, backward)?;
            return Ok(f && g);
        }
        Certificate::DenseTarget { part } => {
            ensure(outcome == Outcome::Yes && rel == Relation::Embed, "dense target proves embeddability only")?;
            let p = parts_form(&[part])?;
            ensure(p.is_dense_somewhere() && occurs(&p, b), "stated part is not a dense piece of the target")?;
        }
        Certificate::Refuted(Refutation::ScatteredTarget) if rel == Relation::Embed => {
            ensure(outcome == Outcome::No, "refutation with a positive outcome")?;
            ensure(a.is_dense_somewhere() && !b.is_dense_somewhere(), "source is scattered or target is not")?;
        }
        Certificate::Ordinal { value } if rel == Relation::Embed => {
            let (x, y) = a.as_ordinal().zip(b.as_ordinal()).ok_or_else(|| reject("not both well orders"))?;
            ensure(*value == format!("{x} vs {y}"), "ordinals are not the stated ones")?;
            ensure(outcome == Outcome::from_bool(x <= y), "comparison contradicts the outcome")?;
        }
        Certificate::AtomMap { source_atoms, target_atoms, assignment } if outcome == Outcome::Yes => {
            ensure(rel == Relation::Embed, "atom placement proves embeddability only")?;
            ensure(parts_form(source_atoms)? == *a && parts_form(target_atoms)? == *b, "atoms do not spell the inputs")?;
            check_placement(source_atoms, target_atoms, assignment)?;
        }
        _ => return Ok(false),
    }
    Ok(true)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum A {
    Fin(u64),
    W,
    WStar,
}

fn atom(s: &str) -> Result<A, Error> {
    match s {
        "w" => Ok(A::W),
        "w*" => Ok(A::WStar),
        n => n.parse().map(A::Fin).map_err(|_| reject(format!("bad atom `{n}`"))),
    }
}

/// Each target atom must hold the source atoms assigned to it, in order:
/// a finite atom holds a total of at most its size, ω holds finite atoms
/// followed by at most one ω, ω* holds at most one ω* followed by finite atoms.
fn check_placement(src: &[String], tgt: &[String], assign: &[usize]) -> Result<(), Error> {
    ensure(assign.len() == src.len(), "assignment length differs from the source")?;
    ensure(assign.windows(2).all(|w| w[0] <= w[1]), "assignment is not monotone")?;
    ensure(assign.iter().all(|&j| j < tgt.len()), "assignment leaves the target")?;
    for (j, t) in tgt.iter().enumerate() {
        let here = src.iter().zip(assign).filter(|(_, &k)| k == j).map(|(s, _)| atom(s)).collect::<Result<Vec<_>, _>>()?;
        let ok = match atom(t)? {
            A::Fin(n) => here.iter().map(|x| if let A::Fin(k) = x { Some(*k) } else { None }).sum::<Option<u64>>().is_some_and(|s| s <= n),
            A::W => {
                let ws = here.iter().filter(|x| **x == A::W).count();
                !here.contains(&A::WStar) && ws <= 1 && (ws == 0 || here.last() == Some(&A::W))
            }
            A::WStar => {
                let ws = here.iter().filter(|x| **x == A::WStar).count();
                !here.contains(&A::W) && ws <= 1 && (ws == 0 || here.first() == Some(&A::WStar))
            }
        };
        ensure(ok, format!("target atom {j} cannot hold its assigned atoms"))?;
    }
    Ok(())
}

fn check_circ(rel: CircRel, outcome: Outcome, c: &CircObj, d: &CircObj, cert: &Certificate) -> Result<bool, Error> {
    match (c, d) {
        (CircObj::Fin(c), CircObj::Fin(d)) => check_fin(rel, outcome, c, d, cert),
        (CircObj::Term(c), CircObj::Term(d)) => {
            if let (OrderTerm::ZSum(x), OrderTerm::ZSum(y), Certificate::E1Shift { n_bar, m_bar }) = (&c.0, &d.0, cert) {
                ensure(outcome == Outcome::Yes && rel == CircRel::Pcvx, "shift proves piecewise convexity only")?;
                ensure(x.neg == y.neg && check_e1_shift(x, y, *n_bar, *m_bar), "label sequences disagree after the shift")?;
                return Ok(true);
            }
            if matches!(c.0, OrderTerm::ZSum(_)) || matches!(d.0, OrderTerm::ZSum(_)) {
                return Ok(false);
            }
            let (f, g) = (form(&c.0)?, form(&d.0)?);
            check_circ_forms(rel, outcome, &f, &g, cert)
        }
        _ => Err(reject("mixed circular kinds")),
    }
}

fn check_fin(rel: CircRel, outcome: Outcome, c: &FinCirc, d: &FinCirc, cert: &Certificate) -> Result<bool, Error> {
    c.validate()?;
    d.validate()?;
    match cert {
        Certificate::FinMap { map } => {
            ensure(outcome == Outcome::Yes && rel != CircRel::Pcvx, "map certificate for pcvx")?;
            ensure(c.is_embedding(d, map), "map is not an embedding")?;
            match rel {
                CircRel::IsoC => ensure(c.len() == d.len(), "map is not onto")?,
                CircRel::CvxC => ensure(d.is_convex(map), "image is not convex")?,
                _ => {}
            }
        }
        Certificate::FinPcvx(w) => {
            ensure(outcome == Outcome::Yes && rel == CircRel::Pcvx, "piece witness for another relation")?;
            c.validate_witness(d, w)?;
        }
        Certificate::Refuted(Refutation::SizeMismatch { source, target }) => {
            ensure(outcome == Outcome::No, "refutation with a positive outcome")?;
            ensure(*source == c.len() as u64 && *target == d.len() as u64, "sizes are not the stated ones")?;
            let bad = if rel == CircRel::IsoC { c.len() != d.len() } else { c.len() > d.len() };
            ensure(bad, "sizes do not rule the relation out")?;
        }
        _ => return Ok(false),
    }
    Ok(true)
}

fn check_circ_forms(rel: CircRel, outcome: Outcome, f: &Form, g: &Form, cert: &Certificate) -> Result<bool, Error> {
    match cert {
        Certificate::CircPieces { source_cut, pieces, target_cut, gaps } => {
            ensure(outcome == Outcome::Yes, "pieces prove a positive answer")?;
            ensure(!pieces.is_empty() && pieces.len() == gaps.len(), "pieces and gaps do not pair up")?;
            match rel {
                CircRel::IsoC => ensure(pieces.len() == 1 && parts_form(gaps)?.is_empty(), "isomorphism needs one piece and no gaps")?,
                CircRel::CvxC => ensure(pieces.len() == 1, "convexity needs one piece")?,
                _ => {}
            }
            let (a, b) = (&source_cut.0, &source_cut.1);
            ensure(parts_form(&[a, b])? == *f, "source cut does not reassemble the source")?;
            ensure(parts_form(&[b, a])? == parts_form(pieces)?, "pieces do not fill the rotated source")?;
            let (x, y) = (&target_cut.0, &target_cut.1);
            ensure(parts_form(&[x, y])? == *g, "target cut does not reassemble the target")?;
            let laid: Vec<&String> = pieces.iter().zip(gaps).flat_map(|(p, q)| [p, q]).collect();
            ensure(parts_form(&[y, x])? == parts_form(&laid)?, "pieces and gaps do not fill the rotated target")?;
        }
        Certificate::DenseTarget { part } => {
            ensure(outcome == Outcome::Yes && rel == CircRel::EmbedC, "dense target proves embeddability only")?;
            let p = parts_form(&[part])?;
            ensure(p.is_dense_somewhere() && occurs(&p, g), "stated part is not a dense piece of the target")?;
        }
        Certificate::Refuted(Refutation::ScatteredTarget) if rel == CircRel::EmbedC => {
            ensure(outcome == Outcome::No, "refutation with a positive outcome")?;
            ensure(f.is_dense_somewhere() && !g.is_dense_somewhere(), "source is scattered or target is not")?;
        }
        Certificate::Refuted(Refutation::SizeMismatch { source, target }) => {
            ensure(outcome == Outcome::No, "refutation with a positive outcome")?;
            let m = g.finite_size().ok_or_else(|| reject("target is infinite"))?;
            ensure(*target == m, "target size is not the stated one")?;
            let bad = match f.finite_size() {
                Some(n) => *source == n && if rel == CircRel::IsoC { n != m } else { n > m },
                None => *source == u64::MAX,
            };
            ensure(bad, "sizes do not rule the relation out")?;
        }
        _ => return Ok(false),
    }
    Ok(true)
}
