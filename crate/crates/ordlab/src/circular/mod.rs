//! Circular orders C[L] and finite circular tables: convexity, piecewise
//! convex embeddability, and the circular reduction maps.

pub mod fincirc;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::condense::{circ_profile, ClassKind, CondProfile, Mult};
use crate::decision::{Certificate, Decision, Outcome, Refutation};
use crate::embed::{decide_forms, wo_pieces, Relation};
use crate::error::{CircError, TermError};
use crate::eval::Elem;
use crate::form::{convex_in, splits, to_form, Form, Hints, Outside, Tok};
use crate::ordinal::Ordinal;
use crate::rational::{Bound, Q};
use crate::term::{CircTerm, OrderTerm, ZSumSpec};

use fincirc::{FinCirc, PcvxWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircRel {
    IsoC,
    EmbedC,
    CvxC,
    Pcvx,
}

impl fmt::Display for CircRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CircRel::IsoC => "iso",
            CircRel::EmbedC => "embed",
            CircRel::CvxC => "cvx",
            CircRel::Pcvx => "pcvx",
        })
    }
}

/// Either kind of circular order.
#[derive(Clone, Debug, PartialEq)]
pub enum CircObj {
    Fin(FinCirc),
    Term(CircTerm),
}

pub fn decide_c(rel: CircRel, c: &CircObj, d: &CircObj) -> Result<Decision, CircError> {
    match (c, d) {
        (CircObj::Fin(a), CircObj::Fin(b)) => decide_fin(rel, a, b),
        (CircObj::Term(a), CircObj::Term(b)) => Ok(decide_term(rel, a, b)),
        _ => Err(CircError::MixedKinds),
    }
}

// ---------------------------------------------------------------- finite tables

/// Exhaustive decision over all embeddings.
pub fn decide_fin(rel: CircRel, c: &FinCirc, d: &FinCirc) -> Result<Decision, CircError> {
    c.validate()?;
    d.validate()?;
    let found = match rel {
        CircRel::IsoC => c.iso_search(d).map(|map| Certificate::FinMap { map }),
        CircRel::EmbedC => c.embed_search(d).map(|map| Certificate::FinMap { map }),
        CircRel::CvxC => {
            if d.len() == 1 && c.len() == 1 {
                Some(Certificate::FinMap { map: vec![0] })
            } else {
                c.cvx_search(d).map(|map| Certificate::FinMap { map })
            }
        }
        CircRel::Pcvx => c.pcvx_search(d).map(Certificate::FinPcvx),
    };
    Ok(match found {
        Some(cert) => Decision::yes(cert, "exhaustive-search", format!("{rel} {c} -> {d}")),
        None => Decision::no(Certificate::Exhausted { cuts: d.len() }, "exhaustive-search", format!("no {rel} map {c} -> {d}")),
    })
}

/// Every finite circular order of size n is a cycle, so C ⊴^{<ω} D iff |C| ≤ |D|.
pub fn rule_pcvx_fin(c: &FinCirc, d: &FinCirc) -> Result<Decision, CircError> {
    let (Some(cc), Some(dc)) = (c.cycle(), d.cycle()) else {
        c.validate()?;
        d.validate()?;
        unreachable!("valid tables have cycles");
    };
    if cc.len() > dc.len() {
        let r = Refutation::SizeMismatch { source: cc.len() as u64, target: dc.len() as u64 };
        return Ok(Decision::refuted(r, "finite-size"));
    }
    let mut map = vec![0; cc.len()];
    for (i, &x) in cc.iter().enumerate() {
        map[x] = dc[i];
    }
    let w = PcvxWitness { pieces: c.pieces_for(d, &map), map };
    Ok(Decision::yes(Certificate::FinPcvx(w), "finite-size", format!("{} <= {}", cc.len(), dc.len())))
}

pub fn compose_fin(
    c: &FinCirc,
    d: &FinCirc,
    e: &FinCirc,
    w1: &PcvxWitness,
    w2: &PcvxWitness,
) -> Result<PcvxWitness, CircError> {
    c.compose(d, e, w1, w2)
}

// ---------------------------------------------------------------- circular terms

struct Rot {
    cut: (Form, Form),
    form: Form,
}

/// Representatives of every rotation b + a of f = a + b, up to the cut bounds.
fn rotations(f: &Form, h: &Hints) -> (Vec<Rot>, bool) {
    let c = splits(f, h);
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for (a, b) in c.items {
        let r = b.concat(&a);
        if seen.insert(r.clone(), ()).is_none() {
            out.push(Rot { cut: (a, b), form: r });
        }
    }
    (out, c.exact)
}

fn strs(c: &(Form, Form)) -> (String, String) {
    (c.0.to_string(), c.1.to_string())
}

fn pieces_cert(src: &Rot, pieces: &[&Form], tgt: &Rot, gaps: &[&Form]) -> Certificate {
    Certificate::CircPieces {
        source_cut: strs(&src.cut),
        pieces: pieces.iter().map(|p| p.to_string()).collect(),
        target_cut: strs(&tgt.cut),
        gaps: gaps.iter().map(|g| g.to_string()).collect(),
    }
}

fn identity_rot(f: &Form) -> Rot {
    Rot { cut: (Form::empty(), f.clone()), form: f.clone() }
}

struct Pair<'a> {
    f: &'a Form,
    g: &'a Form,
    h: Hints,
}

impl<'a> Pair<'a> {
    fn new(f: &'a Form, g: &'a Form) -> Self {
        Pair { f, g, h: Hints::from_forms(&[f, g]) }
    }

    /// One piece: some rotation of f is an initial segment of some rotation of g.
    fn convex(&self) -> (Option<Certificate>, bool) {
        let (rf, ef) = rotations(self.f, &self.h);
        let index: HashMap<&Form, &Rot> = rf.iter().map(|r| (&r.form, r)).collect();
        let (rg, eg) = rotations(self.g, &self.h);
        let mut exact = ef && eg;
        for tr in &rg {
            let c = splits(&tr.form, &self.h);
            exact &= c.exact;
            for (x, m) in &c.items {
                if let Some(sr) = index.get(x) {
                    return (Some(pieces_cert(sr, &[x], tr, &[m])), true);
                }
            }
        }
        (None, exact)
    }

    fn iso(&self) -> (Option<Certificate>, bool) {
        let (rf, ef) = rotations(self.f, &self.h);
        for r in &rf {
            if r.form == *self.g {
                let tr = identity_rot(self.g);
                return (Some(pieces_cert(r, &[&r.form], &tr, &[&Form::empty()])), true);
            }
        }
        (None, ef)
    }

    /// Two pieces a rotation of f splits into, placed in order along a rotation of g.
    fn two_pieces(&self) -> Option<Certificate> {
        let (rg, _) = rotations(self.g, &self.h);
        let mut heads: HashMap<Form, Vec<(usize, Form)>> = HashMap::new();
        for (i, tr) in rg.iter().enumerate() {
            for (x, rest) in splits(&tr.form, &self.h).items {
                if !x.is_empty() && !rest.is_empty() {
                    heads.entry(x).or_default().push((i, rest));
                }
            }
        }
        let (rf, _) = rotations(self.f, &self.h);
        for sr in &rf {
            for (p1, p2) in splits(&sr.form, &self.h).items {
                if p1.is_empty() || p2.is_empty() {
                    continue;
                }
                let Some(cands) = heads.get(&p1) else { continue };
                for (i, rest) in cands {
                    if let (Some((m1, m2)), _) = convex_in(&p2, rest) {
                        return Some(pieces_cert(sr, &[&p1, &p2], &rg[*i], &[&m1, &m2]));
                    }
                }
            }
        }
        None
    }

    fn embed(&self) -> (Option<Certificate>, bool) {
        let (rf, mut exact) = rotations(self.f, &self.h);
        for r in &rf {
            let d = decide_forms(Relation::Embed, &r.form, self.g);
            match d.outcome {
                Outcome::Yes => {
                    let ev = d.certificate.map(|c| format!("{c:?}")).unwrap_or_default();
                    let cert = Certificate::Rule { rule: "rotation-embeds".into(), evidence: format!("{} | {ev}", r.form) };
                    return (Some(cert), true);
                }
                Outcome::Unknown => exact = false,
                Outcome::No => {}
            }
        }
        (None, exact)
    }
}

/// Largest indecomposable ω^e with e ≥ 1 that is a convex piece of C[f].
fn source_wo_core(f: &Form) -> Option<Ordinal> {
    let p = wo_lower(f);
    let seam = p.suf.checked_add(&p.pre).unwrap_or(p.suf.clone());
    let top = p.sup.max(seam);
    let e = top.leading_exponent();
    (!e.is_zero()).then(|| Ordinal::omega_pow(e))
}

/// Like `wo_pieces` but only counting pieces that are attained.
fn wo_lower(f: &Form) -> crate::embed::WoPieces {
    let stripped = Form::from_toks(
        f.toks()
            .iter()
            .map(|t| match t {
                Tok::OmegaStar | Tok::Ival(..) | Tok::IvalStar(..) => Tok::Fin(1),
                Tok::Mix(s) if !s.is_finite() => Tok::Fin(1),
                Tok::WoStar(a) => Tok::Fin(a.finite_part().max(1)),
                _ => t.clone(),
            })
            .collect(),
    );
    if stripped.toks().len() == f.toks().len() {
        wo_pieces(&stripped)
    } else {
        wo_pieces(f)
    }
}

/// sup of well-ordered convex pieces of C[f], including the seam.
fn circ_wo_sup(f: &Form) -> Ordinal {
    let p = wo_pieces(f);
    let seam = p.suf.checked_add(&p.pre).unwrap_or(p.suf.clone());
    p.sup.max(seam)
}

fn kinds_anywhere(p: &CondProfile) -> impl Fn(ClassKind) -> bool + '_ {
    move |k| match k {
        ClassKind::Finite(n) => {
            p.counts.contains_key(&k)
                || p.dense_sizes.contains(n)
                || crate::rational::rational_of_block_size(n)
                    .map_or(false, |q| p.dense_blocks.iter().any(|(lo, hi)| lo.below(q) && hi.above(q)))
        }
        _ => p.counts.contains_key(&k),
    }
}

/// Refutations of C[f] ⊴^{<ω} C[g].
fn refute_pcvx(f: &Form, g: &Form) -> Result<Option<Refutation>, Outside> {
    let p = circ_profile(f)?;
    let q = circ_profile(g)?;
    let has = kinds_anywhere(&q);
    for (k, m) in &p.counts {
        if *m == Mult::Many && !has(*k) {
            return Ok(Some(Refutation::MissingClassSize { class: k.to_string() }));
        }
    }
    for n in p.dense_sizes.iter().take(256) {
        if !has(ClassKind::Finite(n)) {
            return Ok(Some(Refutation::MissingClassSize { class: n.to_string() }));
        }
    }
    for (lo, hi) in &p.dense_blocks {
        for q_ in crate::rational::rationals_in(*lo, *hi).take(64) {
            if let Ok(n) = crate::rational::block_size(q_) {
                if !has(ClassKind::Finite(n)) {
                    return Ok(Some(Refutation::MissingClassSize { class: n.to_string() }));
                }
            }
        }
    }
    if let Some(common) = circ_dense_everywhere(g) {
        let own = kinds_anywhere(&p);
        if p.class_count().is_none() {
            if let Some(n) = common.iter().take(256).find(|&n| !own(ClassKind::Finite(n))) {
                return Ok(Some(Refutation::DenseClassSizeAbsent { size: n }));
            }
        }
    }
    if f.is_dense_somewhere() && !g.is_dense_somewhere() {
        return Ok(Some(Refutation::ForcedCore { core: "e".into() }));
    }
    for (ff, gg) in [(f.clone(), g.clone()), (f.rev(), g.rev())] {
        if let Some(core) = source_wo_core(&ff) {
            let avail = circ_wo_sup(&gg);
            if core > avail {
                return Ok(Some(Refutation::WellOrderBound { required: core.to_string(), available: avail.to_string() }));
            }
        }
    }
    for t in f.toks() {
        if let Tok::Rep(x) | Tok::RepStar(x) = t {
            let core = x.repeat(3);
            let pair = Pair::new(&core, g);
            if let (None, true) = lin_in_circ(&pair) {
                return Ok(Some(Refutation::ForcedCore { core: core.to_string() }));
            }
        }
    }
    Ok(None)
}

/// A linear order x convex in C[g]: x is an initial segment of a rotation of g.
fn lin_in_circ(p: &Pair<'_>) -> (Option<(Form, Form)>, bool) {
    // every arc of C[g] is an interval of g + g, and that test is much cheaper
    if let (None, true) = convex_in(p.f, &p.g.concat(p.g)) {
        return (None, true);
    }
    let (rg, mut exact) = rotations(p.g, &p.h);
    for tr in &rg {
        let c = splits(&tr.form, &p.h);
        exact &= c.exact;
        for (x, m) in &c.items {
            if x == p.f {
                return (Some((tr.form.clone(), m.clone())), true);
            }
        }
    }
    (None, exact)
}

fn circ_dense_everywhere(g: &Form) -> Option<crate::setdesc::SetDesc> {
    let mut common: Option<crate::setdesc::SetDesc> = None;
    for t in g.toks() {
        match t {
            Tok::Mix(s) => common = Some(common.map_or(s.clone(), |c| c.intersect(s))),
            Tok::Fin(_) => {}
            _ => return None,
        }
    }
    let toks = g.toks();
    let n = toks.len();
    if n >= 2 && (0..n).any(|i| matches!((&toks[i], &toks[(i + 1) % n]), (Tok::Fin(_), Tok::Fin(_)))) {
        return None;
    }
    common.filter(|c| !c.is_empty())
}

pub fn decide_term(rel: CircRel, c: &CircTerm, d: &CircTerm) -> Decision {
    if let (OrderTerm::ZSum(x), OrderTerm::ZSum(y)) = (&c.0, &d.0) {
        return e1_rule(rel, x, y);
    }
    let (f, g) = match (to_form(&c.0), to_form(&d.0)) {
        (Ok(f), Ok(g)) => (f, g),
        (Err(e), _) | (_, Err(e)) => return Decision::unknown("fragment", e.to_string()),
    };
    decide_forms_c(rel, &f, &g)
}

fn size_rule(rel: CircRel, f: &Form, g: &Form) -> Option<Decision> {
    let (fs, gs) = (f.finite_size(), g.finite_size());
    match (fs, gs) {
        (Some(n), Some(m)) => {
            let ok = if rel == CircRel::IsoC { n == m } else { n <= m };
            Some(if ok {
                Decision::yes(Certificate::Rule { rule: "finite-cycles".into(), evidence: format!("{n} vs {m}") }, "finite-cycles", "finite circular orders are cycles")
            } else {
                Decision::refuted(Refutation::SizeMismatch { source: n, target: m }, "finite-cycles")
            })
        }
        (Some(n), None) if rel != CircRel::IsoC && rel != CircRel::CvxC => {
            Some(Decision::yes(Certificate::Rule { rule: "finite-source".into(), evidence: format!("{n} points") }, "finite-source", "each point is its own piece"))
        }
        (None, Some(m)) => {
            Some(Decision::refuted(Refutation::SizeMismatch { source: u64::MAX, target: m }, "finite-target"))
        }
        _ => None,
    }
}

pub fn decide_forms_c(rel: CircRel, f: &Form, g: &Form) -> Decision {
    if f == g {
        let r = identity_rot(f);
        let cert = pieces_cert(&r, &[f], &r, &[&Form::empty()]);
        return Decision::yes(cert, "reflexive", "identical bases");
    }
    if let Some(d) = size_rule(rel, f, g) {
        return d;
    }
    let pair = Pair::new(f, g);
    match rel {
        CircRel::IsoC => {
            let (w, exact) = pair.iso();
            if let Some(cert) = w {
                return Decision::yes(cert, "rotation", "target is a rotation of the source");
            }
            let back = Pair::new(g, f).iso();
            if let (Some(_), _) = back {
                return Decision::unknown("rotation", "cut bounds differ by direction");
            }
            if let Some(r) = refute(f, g).or_else(|| refute(g, f)) {
                return Decision::refuted(r, "circular-condensation");
            }
            if exact && back.1 && f.is_transparent() && g.is_transparent() {
                return Decision::no(Certificate::Exhausted { cuts: 0 }, "rotation", "no rotation of the source matches");
            }
            Decision::unknown("rotation", "rotation search is not exhaustive")
        }
        CircRel::CvxC => {
            let (w, exact) = pair.convex();
            if let Some(cert) = w {
                return Decision::yes(cert, "circular-convex", "a rotation of the source opens a rotation of the target");
            }
            if let Some(r) = refute(f, g) {
                return Decision::refuted(r, "circular-condensation");
            }
            if exact && f.is_transparent() && g.is_transparent() {
                return Decision::no(Certificate::Exhausted { cuts: 0 }, "circular-convex", "no convex placement");
            }
            Decision::unknown("circular-convex", "search is not exhaustive")
        }
        CircRel::Pcvx => {
            // refutations are cheap next to the piece search, so they go first
            if let Some(r) = refute(f, g) {
                return Decision::refuted(r, "circular-condensation");
            }
            if let (Some(cert), _) = pair.convex() {
                return Decision::yes(cert, "pcvx-pieces", "one piece");
            }
            if let Some(cert) = pair.two_pieces() {
                return Decision::yes(cert, "pcvx-pieces", "two pieces");
            }
            Decision::unknown("pcvx-pieces", "no witness with at most two pieces and no refutation")
        }
        CircRel::EmbedC => {
            if g.is_dense_somewhere() {
                let cert = Certificate::DenseTarget { part: g.to_string() };
                return Decision::yes(cert, "dense-target", "every countable circular order embeds");
            }
            if f.is_dense_somewhere() {
                return Decision::refuted(Refutation::ScatteredTarget, "scattered-target");
            }
            let (w, exact) = pair.embed();
            match w {
                Some(cert) => Decision::yes(cert, "rotation-embeds", "a rotation of the source embeds linearly"),
                None if exact => Decision::no(Certificate::Exhausted { cuts: 0 }, "rotation-embeds", "no rotation embeds"),
                None => Decision::unknown("rotation-embeds", "linear embedding undecided"),
            }
        }
    }
}

fn refute(f: &Form, g: &Form) -> Option<Refutation> {
    refute_pcvx(f, g).ok().flatten()
}

/// Bounded re-search for C ⊴^{<ω} E after checking both links.
pub fn compose_term(c: &CircTerm, d: &CircTerm, e: &CircTerm) -> Decision {
    let first = decide_term(CircRel::Pcvx, c, d);
    let second = decide_term(CircRel::Pcvx, d, e);
    if first.outcome != Outcome::Yes || second.outcome != Outcome::Yes {
        return Decision::unknown("compose", "a link is not established");
    }
    let d = decide_term(CircRel::Pcvx, c, e);
    match d.outcome {
        Outcome::Yes => d.with_step("compose", "links checked, witness recomputed"),
        _ => Decision::unknown("compose", "links hold but no bounded witness was found"),
    }
}

// ---------------------------------------------------------------- E1

fn e1_label(t: &OrderTerm) -> Option<(Bound, Bound)> {
    match t {
        OrderTerm::Sum(v) => match v.as_slice() {
            [OrderTerm::Ival(a, b), OrderTerm::Eta] => Some((*a, *b)),
            _ => None,
        },
        _ => None,
    }
}

fn e1_shape(z: &ZSumSpec) -> Option<(Vec<(Bound, Bound)>, Vec<(Bound, Bound)>)> {
    if e1_label(&z.neg) != Some((Bound::NegInf, Bound::PosInf)) {
        return None;
    }
    let pre = z.prefix.iter().map(e1_label).collect::<Option<Vec<_>>>()?;
    let cyc = z.cycle.iter().map(e1_label).collect::<Option<Vec<_>>>()?;
    Some((pre, cyc))
}

fn primitive<T: PartialEq + Clone>(v: &[T]) -> Vec<T> {
    let n = v.len();
    for d in 1..=n {
        if n % d == 0 && (0..n).all(|i| v[i] == v[i % d]) {
            return v[..d].to_vec();
        }
    }
    v.to_vec()
}

/// (n̄, m̄) with x[n̄+k] = y[m̄+k] for all k.
pub fn e1_shift(x: &ZSumSpec, y: &ZSumSpec) -> Option<(u64, u64)> {
    let (_, cx) = e1_shape(x)?;
    let (_, cy) = e1_shape(y)?;
    let (px, py) = (primitive(&cx), primitive(&cy));
    if px.len() != py.len() {
        return None;
    }
    let n = px.len();
    let r = (0..n).find(|&r| (0..n).all(|i| px[(i + r) % n] == py[i]))?;
    Some(((x.prefix.len() + r) as u64, y.prefix.len() as u64))
}

fn e1_rule(rel: CircRel, x: &ZSumSpec, y: &ZSumSpec) -> Decision {
    if rel != CircRel::Pcvx || e1_shape(x).is_none() || e1_shape(y).is_none() {
        return Decision::unknown("e1", "only piecewise convexity between E1 images is decided");
    }
    match e1_shift(x, y) {
        Some((n_bar, m_bar)) => Decision::yes(Certificate::E1Shift { n_bar, m_bar }, "e1-shift", "tails agree after shifting"),
        None => {
            let show = |z: &ZSumSpec| z.cycle.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ");
            Decision::refuted(Refutation::E1Tail { source: show(x), target: show(y) }, "e1-tail")
        }
    }
}

/// Checks x[n̄+k] = y[m̄+k] over a full period past both prefixes.
pub fn check_e1_shift(x: &ZSumSpec, y: &ZSumSpec, n_bar: u64, m_bar: u64) -> bool {
    let span = (x.prefix.len() + y.prefix.len() + x.cycle.len() * y.cycle.len() + 1) as u64;
    (0..span).all(|k| x.seq(n_bar + k) == y.seq(m_bar + k))
}

/// An eventually periodic rational sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatSeq {
    pub prefix: Vec<Q>,
    pub cycle: Vec<Q>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoMap {
    CircIso,
    CircPcvx,
    E1,
}

impl std::str::FromStr for CoMap {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, TermError> {
        Ok(match s {
            "circ_iso" => CoMap::CircIso,
            "circ_pcvx" => CoMap::CircPcvx,
            "e1" => CoMap::E1,
            _ => return Err(TermError::Shape(format!("unknown circular map `{s}`"))),
        })
    }
}

pub enum CoArg {
    Term(OrderTerm),
    Seq(RatSeq),
}

fn e1_block(x: Q) -> OrderTerm {
    let one = Q::from_integer(1);
    OrderTerm::Sum(vec![OrderTerm::Ival(Bound::Q(x), Bound::Q(x + one)), OrderTerm::Eta])
}

pub fn reduce_co(map: CoMap, arg: CoArg) -> Result<CircTerm, TermError> {
    use OrderTerm as T;
    let one_zl = |l: OrderTerm| T::Sum(vec![T::one(), T::lift(l)]);
    match (map, arg) {
        (CoMap::CircIso, CoArg::Term(l)) => Ok(CircTerm(one_zl(l))),
        (CoMap::CircPcvx, CoArg::Term(l)) => Ok(CircTerm(T::prod(one_zl(l), T::Omega))),
        (CoMap::E1, CoArg::Seq(s)) => {
            if s.cycle.is_empty() {
                return Err(TermError::Shape("sequence cycle must be nonempty".into()));
            }
            let neg = T::Sum(vec![T::Ival(Bound::NegInf, Bound::PosInf), T::Eta]);
            let spec = ZSumSpec {
                neg,
                prefix: s.prefix.iter().map(|&q| e1_block(q)).collect(),
                cycle: s.cycle.iter().map(|&q| e1_block(q)).collect(),
            };
            Ok(CircTerm(T::ZSum(Box::new(spec))))
        }
        _ => Err(TermError::Shape("argument does not fit the map".into())),
    }
}

// ---------------------------------------------------------------- misc

/// An ordinal α with C[α] not piecewise convex in c.
pub fn circ_unbounded_witness(c: &CircTerm) -> Result<Ordinal, Outside> {
    let f = to_form(&c.0)?;
    let sup = circ_wo_sup(&f).max(circ_wo_sup(&f.rev()));
    let a = sup.checked_add(&Ordinal::one()).map_err(|e| Outside(e.to_string()))?;
    Ok(a.next_indecomposable())
}

/// Splits a term at one of its elements into the parts before and after.
fn split_at(t: &OrderTerm, e: &Elem) -> Result<(Option<OrderTerm>, Option<OrderTerm>), CircError> {
    use OrderTerm as T;
    let fin = |n: u64| (n > 0).then_some(T::Fin(n));
    let bad = || CircError::Term(TermError::Shape(format!("cannot split {t} at {e}")));
    Ok(match (t, e) {
        (T::Fin(n), Elem::Idx(k)) if k < n => (fin(*k), fin(n - k - 1)),
        (T::Omega, Elem::Idx(k)) => (fin(*k), Some(T::Omega)),
        (T::OmegaStar, Elem::Idx(k)) => (Some(T::OmegaStar), fin(*k)),
        (T::Zeta, Elem::Int(_)) => (Some(T::OmegaStar), Some(T::Omega)),
        (T::Eta, Elem::Rat(_)) => (Some(T::Eta), Some(T::Eta)),
        (T::Ord(a), Elem::Ordinal(b)) => {
            let after = a.checked_sub_left(&b.checked_add(&Ordinal::one()).map_err(|_| bad())?).ok_or_else(bad)?;
            let ord = |x: Ordinal| (!x.is_zero()).then(|| T::Ord(x));
            (ord(b.clone()), ord(after))
        }
        (T::Sum(parts), Elem::Part(i, inner)) => {
            let (b, a) = split_at(parts.get(*i).ok_or_else(bad)?, inner)?;
            let mut before: Vec<T> = parts[..*i].to_vec();
            before.extend(b);
            let mut after: Vec<T> = a.into_iter().collect();
            after.extend(parts[i + 1..].iter().cloned());
            let wrap = |v: Vec<T>| (!v.is_empty()).then(|| T::sum(v));
            (wrap(before), wrap(after))
        }
        (T::Rev(inner), Elem::Rev(x)) => {
            let (b, a) = split_at(inner, x)?;
            (a.map(T::rev), b.map(T::rev))
        }
        _ => return Err(bad()),
    })
}

/// The linear order read from `base` around C[t]: base first.
pub fn linearize_term(c: &CircTerm, base: &Elem) -> Result<OrderTerm, CircError> {
    let (before, after) = split_at(&c.0, base)?;
    let mut parts = vec![OrderTerm::one()];
    parts.extend(after);
    parts.extend(before);
    Ok(OrderTerm::sum(parts))
}
