//! Decisions for isomorphism, embeddability and convex embeddability on the
//! fragment, plus compressibility, interval enumeration and reduction maps.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::condense::refute_forms;
use crate::decision::{Certificate, Decision, Outcome, Refutation};
use crate::error::TermError;
use crate::form::{convex_in, pointsplits, splits, to_form, wo_prefix, Form, Hints, Outside, Tok};
use crate::ordinal::Ordinal;
use crate::setdesc::SetDesc;
use crate::term::OrderTerm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Iso,
    Embed,
    Cvx,
    Bicvx,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Iso => "iso",
            Relation::Embed => "embed",
            Relation::Cvx => "cvx",
            Relation::Bicvx => "bicvx",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CompressClass {
    LeftOnly,
    RightOnly,
    Bi,
    Incompressible,
    Unknown,
}

impl CompressClass {
    fn from_sides(left: Option<bool>, right: Option<bool>) -> Self {
        match (left, right) {
            (Some(true), Some(true)) => CompressClass::Bi,
            (Some(true), Some(false)) => CompressClass::LeftOnly,
            (Some(false), Some(true)) => CompressClass::RightOnly,
            (Some(false), Some(false)) => CompressClass::Incompressible,
            _ => CompressClass::Unknown,
        }
    }

    /// Left compressibility, when known.
    pub fn left(self) -> Option<bool> {
        match self {
            CompressClass::LeftOnly | CompressClass::Bi => Some(true),
            CompressClass::RightOnly | CompressClass::Incompressible => Some(false),
            CompressClass::Unknown => None,
        }
    }

    pub fn right(self) -> Option<bool> {
        self.mirror().left()
    }

    pub fn mirror(self) -> Self {
        match self {
            CompressClass::LeftOnly => CompressClass::RightOnly,
            CompressClass::RightOnly => CompressClass::LeftOnly,
            c => c,
        }
    }
}

impl fmt::Display for CompressClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn outside_unknown(e: Outside) -> Decision {
    Decision::unknown("fragment", e.to_string())
}

fn cert_form(f: &Form) -> String {
    f.to_string()
}

pub fn decide(rel: Relation, t: &OrderTerm, u: &OrderTerm) -> Decision {
    let (a, b) = match (to_form(t), to_form(u)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return outside_unknown(e),
    };
    decide_forms(rel, &a, &b)
}

pub fn decide_forms(rel: Relation, a: &Form, b: &Form) -> Decision {
    match rel {
        Relation::Iso => iso_forms(a, b),
        Relation::Cvx => cvx_forms(a, b, 0),
        Relation::Embed => embed_forms(a, b),
        Relation::Bicvx => bicvx_forms(a, b),
    }
}

fn iso_forms(a: &Form, b: &Form) -> Decision {
    if a == b {
        return Decision::yes(Certificate::SameForm { form: cert_form(a) }, "canonical-form", "forms coincide");
    }
    if a.is_transparent() && b.is_transparent() {
        let cert = Certificate::DistinctForms { source: cert_form(a), target: cert_form(b) };
        return Decision::no(cert, "canonical-form", "distinct canonical forms");
    }
    for (x, y) in [(a, b), (b, a)] {
        let d = cvx_forms(x, y, 0);
        if d.outcome == Outcome::No {
            return d.with_step("iso-via-cvx", format!("{x} is not convex in {y}"));
        }
    }
    Decision::unknown("canonical-form", "forms differ on opaque tokens")
}

/// Convex embeddability of `l` into `t`.
pub fn cvx_forms(l: &Form, t: &Form, depth: u32) -> Decision {
    let (found, exact) = convex_in(l, t);
    if let Some((left, right)) = found {
        let cert = Certificate::Convex { left: cert_form(&left), right: cert_form(&right) };
        return Decision::yes(cert, "convex-split", format!("{t} = {left} + {l} + {right}"));
    }
    match refute_forms(l, t, depth) {
        Ok(Some(r)) => return Decision::refuted(r, "condensation"),
        Ok(None) => {}
        Err(e) => return outside_unknown(e),
    }
    if exact {
        let h = Hints::from_forms(&[l]);
        let cuts = splits(t, &h).items.len();
        return Decision::no(Certificate::Exhausted { cuts }, "exhaustive-cuts", format!("{cuts} cuts of {t}"));
    }
    Decision::unknown("convex-split", "cut enumeration is not exhaustive here")
}

fn bicvx_forms(a: &Form, b: &Form) -> Decision {
    let f = cvx_forms(a, b, 0);
    if f.outcome == Outcome::No {
        return f.with_step("bicvx", "forward direction fails");
    }
    let g = cvx_forms(b, a, 0);
    if g.outcome == Outcome::No {
        return g.with_step("bicvx", "backward direction fails");
    }
    match (f.certificate, g.certificate) {
        (Some(fc), Some(gc)) if f.outcome == Outcome::Yes && g.outcome == Outcome::Yes => {
            let cert = Certificate::Pair { forward: Box::new(fc), backward: Box::new(gc) };
            Decision::yes(cert, "bicvx", "both directions convex")
        }
        _ => Decision::unknown("bicvx", "one direction undecided"),
    }
}

// ---------------------------------------------------------------- embeddings

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Atom {
    Fin(u64),
    W,
    WStar,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Fin(n) => write!(f, "{n}"),
            Atom::W => f.write_str("w"),
            Atom::WStar => f.write_str("w*"),
        }
    }
}

/// Splits a scattered simple sum into atoms, ζ as ω* + ω.
fn atoms(f: &Form) -> Option<Vec<Atom>> {
    let mut out = Vec::new();
    for t in f.toks() {
        match t {
            Tok::Fin(n) => out.push(Atom::Fin(*n)),
            Tok::Omega => out.push(Atom::W),
            Tok::OmegaStar => out.push(Atom::WStar),
            Tok::Lift(g) if *g == Form::one() => out.extend([Atom::WStar, Atom::W]),
            _ => return None,
        }
    }
    Some(out)
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Fresh,
    /// Finite atom with this many points left.
    Rem(u64),
    /// Only an unbounded finite supply left (an ω* after a piece went in).
    ArbFin,
    /// An ω atom with finitely many points used.
    OmegaLeft,
}

/// Greedy leftmost placement of source atoms into target atoms.
fn embed_atoms(src: &[Atom], tgt: &[Atom]) -> Option<Vec<usize>> {
    let mut j = 0usize;
    let mut slot = Slot::Fresh;
    let mut assign = Vec::with_capacity(src.len());
    for &a in src {
        match a {
            Atom::Fin(mut k) => {
                loop {
                    let b = *tgt.get(j)?;
                    let (used_all, next) = match (b, slot) {
                        (Atom::Fin(n), Slot::Fresh) => fill(n, &mut k),
                        (Atom::Fin(_), Slot::Rem(r)) => fill(r, &mut k),
                        (Atom::W, Slot::Fresh | Slot::OmegaLeft) => (true, Slot::OmegaLeft),
                        (Atom::WStar, Slot::Fresh | Slot::ArbFin) => (true, Slot::ArbFin),
                        _ => (false, Slot::Fresh),
                    };
                    if used_all {
                        slot = next;
                        break;
                    }
                    j += 1;
                    slot = Slot::Fresh;
                }
                assign.push(j);
            }
            Atom::W => {
                loop {
                    let b = *tgt.get(j)?;
                    if b == Atom::W && matches!(slot, Slot::Fresh | Slot::OmegaLeft) {
                        break;
                    }
                    j += 1;
                    slot = Slot::Fresh;
                }
                assign.push(j);
                j += 1;
                slot = Slot::Fresh;
            }
            Atom::WStar => {
                loop {
                    let b = *tgt.get(j)?;
                    if b == Atom::WStar && matches!(slot, Slot::Fresh) {
                        break;
                    }
                    j += 1;
                    slot = Slot::Fresh;
                }
                assign.push(j);
                slot = Slot::ArbFin;
            }
        }
    }
    Some(assign)
}

/// Places up to `cap` of the `k` points; returns whether all fit.
fn fill(cap: u64, k: &mut u64) -> (bool, Slot) {
    if *k <= cap {
        let r = cap - *k;
        *k = 0;
        (true, Slot::Rem(r))
    } else {
        *k -= cap;
        (false, Slot::Fresh)
    }
}

fn dense_part(f: &Form) -> Option<String> {
    f.toks().iter().find(|t| Form::tok((*t).clone()).is_dense_somewhere()).map(|t| Form::tok(t.clone()).to_string())
}

fn embed_forms(l: &Form, t: &Form) -> Decision {
    let c = cvx_forms(l, t, 0);
    if c.outcome == Outcome::Yes {
        return c.with_step("embed-via-cvx", "convex embeddings are embeddings");
    }
    if let Some(part) = dense_part(t) {
        return Decision::yes(Certificate::DenseTarget { part: part.clone() }, "dense-target", format!("{part} holds a copy of every countable order"));
    }
    if l.is_dense_somewhere() {
        return Decision::refuted(Refutation::ScatteredTarget, "scattered-target");
    }
    if let (Some(a), Some(b)) = (l.as_ordinal(), t.as_ordinal()) {
        let cert = Certificate::Ordinal { value: format!("{a} vs {b}") };
        return if a <= b {
            Decision::yes(cert, "ordinal-compare", format!("{a} <= {b}"))
        } else {
            Decision::no(cert, "ordinal-compare", format!("{a} > {b}"))
        };
    }
    if let (Some(sa), Some(ta)) = (atoms(l), atoms(t)) {
        let names = |v: &[Atom]| v.iter().map(Atom::to_string).collect::<Vec<_>>();
        return match embed_atoms(&sa, &ta) {
            Some(assignment) => {
                let cert = Certificate::AtomMap { source_atoms: names(&sa), target_atoms: names(&ta), assignment };
                Decision::yes(cert, "atom-placement", "greedy leftmost placement succeeds")
            }
            None => {
                let cert = Certificate::AtomMap { source_atoms: names(&sa), target_atoms: names(&ta), assignment: vec![] };
                Decision::no(cert, "atom-placement", "leftmost placement runs out of target atoms")
            }
        };
    }
    Decision::unknown("embed", "no embedding rule applies")
}

// ---------------------------------------------------------------- compressibility

/// Split search for L = A + B with B ≅ L (left) or A ≅ L (right), both sides nonempty.
fn compress_sides(f: &Form) -> (Option<bool>, Option<bool>, Option<(Form, Form)>, Option<(Form, Form)>) {
    let h = Hints::from_forms(&[f]);
    let c = splits(f, &h);
    let mut left = None;
    let mut right = None;
    for (a, b) in &c.items {
        if a.is_empty() || b.is_empty() {
            continue;
        }
        if left.is_none() && b == f {
            left = Some((a.clone(), b.clone()));
        }
        if right.is_none() && a == f {
            right = Some((a.clone(), b.clone()));
        }
    }
    let side = |w: &Option<(Form, Form)>| if w.is_some() { Some(true) } else if c.exact { Some(false) } else { None };
    (side(&left), side(&right), left, right)
}

fn is_zpow_eta_like(f: &Form) -> Option<bool> {
    match f.toks() {
        [Tok::ZPowEta(_)] => Some(true),
        [Tok::ZPow(_)] => Some(false),
        [Tok::Lift(g)] => is_zpow_eta_like(g),
        [Tok::Mix(s)] if *s == SetDesc::finite(&[1]) => Some(true),
        [Tok::Fin(1)] => Some(false),
        _ => None,
    }
}

/// Forms A + η + B with A, B powers of Z: the η-type sides decide.
fn psi_shape(f: &Form) -> Option<(Option<bool>, Option<bool>)> {
    let toks = f.toks();
    let eta = Tok::Mix(SetDesc::finite(&[1]));
    let i = toks.iter().position(|t| *t == eta)?;
    let a = Form::from_toks(toks[..i].to_vec());
    let b = Form::from_toks(toks[i + 1..].to_vec());
    if a.is_empty() || b.is_empty() {
        return None;
    }
    Some((is_zpow_eta_like(&a), is_zpow_eta_like(&b)))
}

pub fn compressibility_form(f: &Form) -> (CompressClass, Option<Certificate>) {
    if f.is_empty() {
        return (CompressClass::Unknown, None);
    }
    match f.toks() {
        [Tok::ZPow(_)] => return (CompressClass::Incompressible, Some(rule("zpow-incompressible", f))),
        [Tok::ZPowEta(_)] => return (CompressClass::Bi, Some(rule("zpow-eta", f))),
        [Tok::Wo(_)] => return (CompressClass::LeftOnly, Some(rule("infinite-well-order", f))),
        [Tok::WoStar(_)] => return (CompressClass::RightOnly, Some(rule("infinite-well-order", f))),
        _ => {}
    }
    let (l, r, lw, rw) = compress_sides(f);
    let (l, r) = match (l, r, psi_shape(f)) {
        (None, _, Some((pl, pr))) | (_, None, Some((pl, pr))) => (l.or(pl), r.or(pr)),
        _ => (l, r),
    };
    let class = CompressClass::from_sides(l, r);
    let cert = match (lw, rw) {
        (Some((a, b)), _) => Some(Certificate::Compressible { side: "left".into(), left: cert_form(&a), right: cert_form(&b) }),
        (_, Some((a, b))) => Some(Certificate::Compressible { side: "right".into(), left: cert_form(&a), right: cert_form(&b) }),
        _ => None,
    };
    (class, cert)
}

fn rule(name: &str, f: &Form) -> Certificate {
    Certificate::Rule { rule: name.into(), evidence: cert_form(f) }
}

pub fn compressibility(t: &OrderTerm) -> CompressClass {
    match to_form(t) {
        Ok(f) => compressibility_form(&f).0,
        Err(_) => CompressClass::Unknown,
    }
}

// ---------------------------------------------------------------- intervals

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalKind {
    Closed,
    Final,
    Initial,
}

fn interval_types(f: &Form, kind: IntervalKind, bound: u64) -> Option<BTreeSet<Form>> {
    let mut h = Hints::from_forms(&[f]);
    h.fin = h.fin.max(bound);
    h.copies = bound;
    let pts = pointsplits(f, &h);
    if !pts.exact {
        return None;
    }
    let mut out = BTreeSet::new();
    for (a, b) in &pts.items {
        match kind {
            IntervalKind::Final => {
                out.insert(Form::one().concat(b));
            }
            IntervalKind::Initial => {
                out.insert(a.concat(&Form::one()));
            }
            IntervalKind::Closed => {
                let inner = pointsplits(b, &h);
                if !inner.exact {
                    return None;
                }
                for (m, _) in inner.items {
                    out.insert(Form::cat(&[&Form::one(), &m, &Form::one()]));
                }
            }
        }
    }
    out.retain(|x| !x.is_finite());
    Some(out)
}

fn has_ival(f: &Form) -> bool {
    f.toks().iter().any(|t| match t {
        Tok::Ival(..) | Tok::IvalStar(..) => true,
        Tok::Lift(g) | Tok::Rep(g) | Tok::RepStar(g) => has_ival(g),
        _ => false,
    })
}

/// Isomorphism types of the infinite intervals of the requested shape, when
/// there are finitely many and the enumeration is stable.
pub fn infinite_intervals(t: &OrderTerm, kind: IntervalKind) -> Result<Vec<OrderTerm>, Outside> {
    let f = to_form(t)?;
    if has_ival(&f) {
        return Err(Outside("interval shuffles have infinitely many interval types".into()));
    }
    let small = interval_types(&f, kind, 3);
    let large = interval_types(&f, kind, 6);
    match (small, large) {
        (Some(a), Some(b)) if a == b => Ok(a.iter().map(Form::to_term).collect()),
        _ => Err(Outside(format!("interval types of {f} are not finitely enumerable"))),
    }
}

// ---------------------------------------------------------------- reductions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoMap {
    Phi0,
    Phi1,
    Phi2,
    Phi3,
    Psi,
}

impl std::str::FromStr for LoMap {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, TermError> {
        Ok(match s {
            "phi0" => LoMap::Phi0,
            "phi1" => LoMap::Phi1,
            "phi2" => LoMap::Phi2,
            "phi3" => LoMap::Phi3,
            "psi" => LoMap::Psi,
            _ => return Err(TermError::Shape(format!("unknown map `{s}`"))),
        })
    }
}

pub fn reduce_lo(map: LoMap, args: &[OrderTerm]) -> Result<OrderTerm, TermError> {
    use OrderTerm as T;
    let arity = if map == LoMap::Psi { 2 } else { 1 };
    if args.len() != arity {
        return Err(TermError::Shape(format!("expected {arity} argument(s), got {}", args.len())));
    }
    let zl = || T::lift(args[0].clone());
    Ok(match map {
        LoMap::Phi0 => T::Sum(vec![T::one(), zl(), T::one()]),
        LoMap::Phi1 => T::Sum(vec![T::Eta, zl(), T::one()]),
        LoMap::Phi2 => T::Sum(vec![T::one(), zl(), T::Eta]),
        LoMap::Phi3 => T::Sum(vec![T::Eta, zl(), T::Eta]),
        LoMap::Psi => {
            let z = |x: &OrderTerm| T::zpow_of(T::Sum(vec![T::one(), x.clone()]));
            T::Sum(vec![z(&args[1]), T::Eta, z(&args[0])])
        }
    })
}

// ---------------------------------------------------------------- well orders

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WoAnswer {
    Yes(Ordinal),
    No,
    Unknown,
}

pub fn is_well_order(t: &OrderTerm) -> WoAnswer {
    match to_form(t) {
        Ok(f) => match f.as_ordinal() {
            Some(a) => WoAnswer::Yes(a),
            None => WoAnswer::No,
        },
        Err(_) => WoAnswer::Unknown,
    }
}

/// ZPowOf(u) as ZPow(α), or ZPow(α)·η when u is not a well order.
pub fn zpow_normalize(t: &OrderTerm) -> Result<OrderTerm, Outside> {
    let OrderTerm::ZPowOf(u) = t else {
        return Err(Outside("expected a power Z^{..}".into()));
    };
    let f = to_form(u)?;
    Ok(match f.as_ordinal() {
        Some(a) => OrderTerm::ZPow(a),
        None => OrderTerm::prod(OrderTerm::ZPow(wo_prefix(&f)), OrderTerm::Eta),
    })
}

/// Well-ordered convex pieces of a form: longest initial one, the sup of
/// all of them, and the longest final one.
#[derive(Clone, Debug)]
pub(crate) struct WoPieces {
    pub pre: Ordinal,
    pub sup: Ordinal,
    pub suf: Ordinal,
}

fn add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a.checked_add(b).unwrap_or_else(|_| a.clone().max(b.clone()))
}

fn tok_pieces(t: &Tok) -> WoPieces {
    let omega = Ordinal::omega();
    let z = Ordinal::zero();
    let p = |pre: Ordinal, sup: Ordinal, suf: Ordinal| WoPieces { pre, sup, suf };
    match t {
        Tok::Fin(n) => p(Ordinal::nat(*n), Ordinal::nat(*n), Ordinal::nat(*n)),
        Tok::Omega => p(omega.clone(), omega.clone(), omega),
        Tok::Wo(a) => p(a.clone(), a.clone(), a.clone()),
        Tok::OmegaStar | Tok::WoStar(_) => p(z.clone(), omega, Ordinal::nat(t_fin_tail(t))),
        Tok::Mix(s) => p(z.clone(), s.greatest().map_or(omega, Ordinal::nat), z),
        Tok::Ival(..) | Tok::IvalStar(..) => p(z.clone(), omega, z),
        Tok::Lift(g) => p(z.clone(), omega.clone(), if g.has_max() { omega } else { z }),
        Tok::ZPow(_) | Tok::ZPowEta(_) => p(z.clone(), omega, z),
        Tok::Rep(x) => {
            let inner = wo_pieces(x);
            let seam = add(&inner.suf, &inner.pre);
            p(inner.pre.clone(), inner.sup.max(seam), z)
        }
        Tok::RepStar(x) => {
            let inner = wo_pieces(x);
            let seam = add(&inner.suf, &inner.pre);
            p(z, inner.sup.max(seam), inner.suf.clone())
        }
    }
}

fn t_fin_tail(t: &Tok) -> u64 {
    match t {
        Tok::WoStar(a) => a.finite_part(),
        _ => 0,
    }
}

pub(crate) fn wo_pieces(f: &Form) -> WoPieces {
    let mut best = Ordinal::zero();
    let mut cur = Ordinal::zero();
    let mut pre = Ordinal::zero();
    let mut in_prefix = true;
    for t in f.toks() {
        let p = tok_pieces(t);
        let whole = matches!(t, Tok::Fin(_) | Tok::Omega | Tok::Wo(_));
        if whole {
            cur = add(&cur, &p.pre);
            if in_prefix {
                pre = cur.clone();
            }
        } else {
            let cand = add(&cur, &p.pre);
            if in_prefix {
                pre = cand.clone();
                in_prefix = false;
            }
            best = best.max(cand).max(p.sup);
            cur = p.suf;
        }
        best = best.max(cur.clone());
    }
    WoPieces { pre, sup: best, suf: cur }
}

/// An ordinal α with α + 1 not convex in t.
pub fn wo_unbounded_witness(t: &OrderTerm) -> Result<Ordinal, Outside> {
    let f = to_form(t)?;
    Ok(wo_pieces(&f).sup.max(Ordinal::omega()))
}

/// Whether decisions for this relation are guaranteed to be decided.
pub fn in_fragment(rel: Relation, t: &OrderTerm, u: &OrderTerm) -> bool {
    let (Ok(a), Ok(b)) = (to_form(t), to_form(u)) else { return false };
    match rel {
        Relation::Iso | Relation::Cvx | Relation::Bicvx => a.is_transparent() && b.is_transparent(),
        Relation::Embed => atoms(&a).is_some() && atoms(&b).is_some() || b.is_dense_somewhere(),
    }
}
