//! Finite condensation: class profiles and the refutations they support.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::decision::{Outcome, Refutation};
use crate::form::{pointsplits, rep, repstar, to_form, Form, Hints, Outside, Tok};
use crate::ordinal::Ordinal;
use crate::rational::{block_size, rational_at, rational_of_block_size, Bound};
use crate::setdesc::SetDesc;
use crate::term::{CircTerm, OrderTerm};

/// Order type of a condensation class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClassKind {
    Finite(u64),
    Omega,
    OmegaStar,
    Zeta,
}

impl ClassKind {
    fn mirror(self) -> Self {
        match self {
            ClassKind::Omega => ClassKind::OmegaStar,
            ClassKind::OmegaStar => ClassKind::Omega,
            k => k,
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::Finite(n) => write!(f, "{n}"),
            ClassKind::Omega => f.write_str("w"),
            ClassKind::OmegaStar => f.write_str("w*"),
            ClassKind::Zeta => f.write_str("z"),
        }
    }
}

/// How many classes of a kind occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Mult {
    Count(u64),
    Many,
}

impl Mult {
    fn add(self, o: Mult) -> Mult {
        match (self, o) {
            (Mult::Count(a), Mult::Count(b)) => Mult::Count(a + b),
            _ => Mult::Many,
        }
    }

    fn minus_one(self) -> Mult {
        match self {
            Mult::Count(a) => Mult::Count(a.saturating_sub(1)),
            Mult::Many => Mult::Many,
        }
    }

    fn positive(self) -> bool {
        self != Mult::Count(0)
    }
}

/// Condensation data of an order, or of a circular order when `cyclic`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondProfile {
    pub first: Option<ClassKind>,
    pub last: Option<ClassKind>,
    /// Every class outside the dense families, endpoint classes included.
    pub counts: BTreeMap<ClassKind, Mult>,
    /// Finite sizes occurring densely.
    pub dense_sizes: SetDesc,
    /// Interval shuffles: one class of size f(q) for each rational q inside.
    pub dense_blocks: Vec<(Bound, Bound)>,
    pub cyclic: bool,
    pub skeleton: OrderTerm,
    skel_form: Form,
}

impl CondProfile {
    /// Total number of classes, if finite.
    pub fn class_count(&self) -> Option<u64> {
        if !self.dense_sizes.is_empty() || !self.dense_blocks.is_empty() {
            return None;
        }
        self.counts.values().try_fold(0u64, |acc, m| match m {
            Mult::Count(c) => Some(acc + c),
            Mult::Many => None,
        })
    }

    fn several_classes(&self) -> bool {
        self.class_count().map_or(true, |c| c >= 2)
    }

    /// Classes with the first and/or last one removed.
    fn counts_without(&self, first: bool, last: bool) -> BTreeMap<ClassKind, Mult> {
        let mut m = self.counts.clone();
        let single = self.class_count() == Some(1);
        let mut drop = |k: Option<ClassKind>| {
            if let Some(k) = k {
                if let Some(v) = m.get_mut(&k) {
                    *v = v.minus_one();
                }
            }
        };
        if first {
            drop(self.first);
        }
        if last && !(first && single) {
            drop(self.last);
        }
        m.retain(|_, v| v.positive());
        m
    }

    /// Interior classes: everything except the endpoint classes.
    pub fn interior(&self) -> BTreeMap<ClassKind, Mult> {
        self.counts_without(true, true)
    }

    fn block_size_present(&self, n: u64) -> bool {
        let Some(q) = rational_of_block_size(n) else { return false };
        self.dense_blocks.iter().any(|(lo, hi)| lo.below(q) && hi.above(q))
    }

    fn has_size_in(&self, counts: &BTreeMap<ClassKind, Mult>, n: u64) -> bool {
        counts.contains_key(&ClassKind::Finite(n)) || self.dense_sizes.contains(n) || self.block_size_present(n)
    }

    pub fn skeleton_form(&self) -> &Form {
        &self.skel_form
    }
}

impl fmt::Display for CondProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = |k: Option<ClassKind>| k.map_or("-".to_string(), |k| k.to_string());
        let mut parts = Vec::new();
        for (k, m) in &self.counts {
            match m {
                Mult::Count(c) => parts.push(format!("{k} x{c}")),
                Mult::Many => parts.push(format!("{k} x inf")),
            }
        }
        if !self.dense_sizes.is_empty() {
            parts.push(format!("dense {}", self.dense_sizes));
        }
        for (lo, hi) in &self.dense_blocks {
            parts.push(format!("dense f({lo},{hi})"));
        }
        if self.cyclic {
            write!(f, "cyclic; ")?;
        } else {
            write!(f, "first {}; last {}; ", end(self.first), end(self.last))?;
        }
        write!(f, "classes [{}]; skeleton {}", parts.join(", "), self.skeleton)
    }
}

// ---------------------------------------------------------------- profiles

#[derive(Default)]
struct Acc {
    counts: BTreeMap<ClassKind, Mult>,
    dense: Option<SetDesc>,
    blocks: Vec<(Bound, Bound)>,
}

impl Acc {
    fn add(&mut self, k: ClassKind, m: Mult) {
        let e = self.counts.entry(k).or_insert(Mult::Count(0));
        *e = e.add(m);
    }

    fn add_dense(&mut self, s: &SetDesc) {
        self.dense = Some(match self.dense.take() {
            None => s.clone(),
            Some(d) => d.union(s),
        });
    }

    fn tok(&mut self, t: &Tok, mult: Mult) {
        match t {
            Tok::Fin(n) => self.add(ClassKind::Finite(*n), mult),
            Tok::Omega => self.add(ClassKind::Omega, mult),
            Tok::OmegaStar => self.add(ClassKind::OmegaStar, mult),
            Tok::Mix(s) => self.add_dense(s),
            Tok::Ival(a, b) | Tok::IvalStar(a, b) => self.blocks.push((*a, *b)),
            Tok::Lift(g) => {
                let m = match g.finite_size() {
                    Some(n) => Mult::Count(n),
                    None => Mult::Many,
                };
                self.add(ClassKind::Zeta, times(m, mult));
            }
            Tok::Wo(a) => {
                self.add(ClassKind::Omega, Mult::Many);
                if a.finite_part() > 0 {
                    self.add(ClassKind::Finite(a.finite_part()), mult);
                }
            }
            Tok::WoStar(a) => {
                self.add(ClassKind::OmegaStar, Mult::Many);
                if a.finite_part() > 0 {
                    self.add(ClassKind::Finite(a.finite_part()), mult);
                }
            }
            Tok::Rep(x) | Tok::RepStar(x) => {
                for t in x.toks() {
                    self.tok(t, Mult::Many);
                }
            }
            Tok::ZPow(_) | Tok::ZPowEta(_) => self.add(ClassKind::Zeta, Mult::Many),
        }
    }
}

fn times(a: Mult, b: Mult) -> Mult {
    match (a, b) {
        (Mult::Count(x), Mult::Count(y)) => Mult::Count(x * y),
        (Mult::Count(0), _) | (_, Mult::Count(0)) => Mult::Count(0),
        _ => Mult::Many,
    }
}

/// (β, n) with α = ω·β + n.
fn div_omega(a: &Ordinal) -> (Ordinal, u64) {
    let terms: Vec<(Ordinal, u64)> = a
        .terms()
        .iter()
        .filter(|(e, _)| !e.is_zero())
        .map(|(e, c)| (e.checked_sub_left(&Ordinal::one()).unwrap_or_default(), *c))
        .collect();
    let beta = Ordinal::from_terms(terms).unwrap_or_default();
    (beta, a.finite_part())
}

fn first_class_tok(t: &Tok) -> Option<ClassKind> {
    match t {
        Tok::Fin(n) => Some(ClassKind::Finite(*n)),
        Tok::Omega | Tok::Wo(_) => Some(ClassKind::Omega),
        Tok::OmegaStar => Some(ClassKind::OmegaStar),
        Tok::Lift(g) => g.has_min().then_some(ClassKind::Zeta),
        Tok::WoStar(a) => {
            let (beta, n) = div_omega(a);
            if n > 0 {
                Some(ClassKind::Finite(n))
            } else if !beta.is_limit_or_zero() {
                Some(ClassKind::OmegaStar)
            } else {
                None
            }
        }
        Tok::Rep(x) => first_class(x),
        _ => None,
    }
}

fn first_class(f: &Form) -> Option<ClassKind> {
    f.toks().first().and_then(first_class_tok)
}

fn last_class(f: &Form) -> Option<ClassKind> {
    first_class(&f.rev()).map(ClassKind::mirror)
}

fn skeleton_tok(t: &Tok) -> Result<Form, Outside> {
    Ok(match t {
        Tok::Fin(_) | Tok::Omega | Tok::OmegaStar => Form::one(),
        Tok::Mix(_) | Tok::Ival(..) | Tok::IvalStar(..) => Form::tok(Tok::Mix(SetDesc::finite(&[1]))),
        Tok::Lift(g) => g.clone(),
        Tok::Wo(a) | Tok::WoStar(a) => {
            let (beta, n) = div_omega(a);
            let b = beta.checked_add(&Ordinal::nat(n.min(1))).map_err(|e| Outside(e.to_string()))?;
            let f = Form::from_toks(crate::form::wo_tokens(&b));
            if matches!(t, Tok::WoStar(_)) {
                f.rev()
            } else {
                f
            }
        }
        Tok::Rep(x) => rep(&skeleton(x)?)?,
        Tok::RepStar(x) => repstar(&skeleton(x)?)?,
        Tok::ZPow(_) | Tok::ZPowEta(_) => Form::tok(t.clone()),
    })
}

/// The condensation L_F as a form.
pub fn skeleton(f: &Form) -> Result<Form, Outside> {
    let mut out = Form::empty();
    for t in f.toks() {
        out = out.concat(&skeleton_tok(t)?);
    }
    Ok(out)
}

pub fn profile(f: &Form) -> Result<CondProfile, Outside> {
    let mut acc = Acc::default();
    for t in f.toks() {
        acc.tok(t, Mult::Count(1));
    }
    let skel = skeleton(f)?;
    Ok(CondProfile {
        first: first_class(f),
        last: last_class(f),
        counts: acc.counts,
        dense_sizes: acc.dense.unwrap_or_else(SetDesc::empty),
        dense_blocks: acc.blocks,
        cyclic: false,
        skeleton: skel.to_term(),
        skel_form: skel,
    })
}

pub fn condense(t: &OrderTerm) -> Result<CondProfile, Outside> {
    profile(&to_form(t)?)
}

fn join_classes(last: ClassKind, first: ClassKind) -> Option<ClassKind> {
    use ClassKind::*;
    match (last, first) {
        (Finite(a), Finite(b)) => Some(Finite(a + b)),
        (Finite(_), Omega) => Some(Omega),
        (OmegaStar, Finite(_)) => Some(OmegaStar),
        (OmegaStar, Omega) => Some(Zeta),
        _ => None,
    }
}

/// Condensation of C[F]: the last and first classes join across the seam
/// when they are at finite distance.
pub fn circ_profile(f: &Form) -> Result<CondProfile, Outside> {
    let mut p = profile(f)?;
    if let (Some(a), Some(b), true) = (p.last, p.first, p.several_classes()) {
        if let Some(j) = join_classes(a, b) {
            for k in [a, b] {
                if let Some(v) = p.counts.get_mut(&k) {
                    *v = v.minus_one();
                }
            }
            let e = p.counts.entry(j).or_insert(Mult::Count(0));
            *e = e.add(Mult::Count(1));
            p.counts.retain(|_, v| v.positive());
            // the two end points of the skeleton are now one point
            let h = Hints::from_forms(&[&p.skel_form]);
            if let Some((_, rest)) = pointsplits(&p.skel_form, &h).items.into_iter().find(|(a, _)| a.is_empty()) {
                p.skeleton = rest.to_term();
                p.skel_form = rest;
            }
        }
    }
    p.first = None;
    p.last = None;
    p.cyclic = true;
    Ok(p)
}

pub fn circ_condense(c: &CircTerm) -> Result<CondProfile, Outside> {
    circ_profile(&to_form(&c.0)?)
}

// ---------------------------------------------------------------- refutations

const SAMPLE: u64 = 256;

/// A finite size class of `p` (outside `counts`) that `q` lacks among `target`.
fn missing_dense_size(p: &CondProfile, q: &CondProfile, target: &BTreeMap<ClassKind, Mult>) -> Option<u64> {
    let lacks = |n: u64| !q.has_size_in(target, n);
    if let Some(n) = p.dense_sizes.difference(&q.dense_sizes).iter().take(SAMPLE as usize).find(|&n| lacks(n)) {
        return Some(n);
    }
    for (lo, hi) in &p.dense_blocks {
        for i in 0..SAMPLE * 4 {
            let r = rational_at(i);
            if lo.below(r) && hi.above(r) {
                if let Ok(n) = block_size(r) {
                    if lacks(n) {
                        return Some(n);
                    }
                }
            }
        }
    }
    None
}

/// Whether a final segment of a class of kind `d` can have kind `k`.
fn fits_final(k: ClassKind, d: ClassKind) -> bool {
    use ClassKind::*;
    match k {
        OmegaStar => d == OmegaStar,
        Zeta => d == Zeta,
        Omega => matches!(d, Omega | Zeta),
        Finite(n) => match d {
            Finite(m) => m >= n,
            OmegaStar => true,
            _ => false,
        },
    }
}

fn endpoint_target(k: ClassKind, q: &CondProfile, avail: &BTreeMap<ClassKind, Mult>) -> bool {
    if avail.keys().any(|&d| fits_final(k, d)) {
        return true;
    }
    match k {
        ClassKind::Finite(n) => {
            q.dense_sizes.iter().take(SAMPLE as usize).any(|m| m >= n)
                || (!q.dense_sizes.is_finite())
                || !q.dense_blocks.is_empty()
        }
        _ => false,
    }
}

/// Searches a condensation invariant showing that `l` is not convex in `t`.
pub fn refute_forms(l: &Form, t: &Form, depth: u32) -> Result<Option<Refutation>, Outside> {
    if l == t || l.is_empty() {
        return Ok(None);
    }
    let p = profile(l)?;
    let q = profile(t)?;
    let q_inner = q.interior();

    for (k, _) in p.interior() {
        let present = match k {
            ClassKind::Finite(n) => q.has_size_in(&q_inner, n),
            _ => q_inner.contains_key(&k),
        };
        if !present {
            return Ok(Some(Refutation::MissingClassSize { class: k.to_string() }));
        }
    }
    if p.class_count() == Some(1) {
        if let Some(k) = p.first {
            if !holds_convexly(&q, k) {
                return Ok(Some(Refutation::MissingClassSize { class: k.to_string() }));
            }
        }
    }
    if let Some(n) = missing_dense_size(&p, &q, &q_inner) {
        return Ok(Some(Refutation::MissingClassSize { class: n.to_string() }));
    }

    if let Some(common) = dense_everywhere(t) {
        let p_inner = p.interior();
        if p.several_classes() {
            if let Some(n) = common.iter().take(256).find(|&n| !p.has_size_in(&p_inner, n)) {
                return Ok(Some(Refutation::DenseClassSizeAbsent { size: n }));
            }
        }
    }

    if p.several_classes() {
        if let Some(k) = p.first {
            if !endpoint_target(k, &q, &q.counts_without(false, true)) {
                return Ok(Some(Refutation::EndpointMismatch { side: "first".into(), class: k.to_string() }));
            }
        }
        if let Some(k) = p.last {
            let avail: BTreeMap<ClassKind, Mult> =
                q.counts_without(true, false).into_iter().map(|(k, m)| (k.mirror(), m)).collect();
            if !endpoint_target(k.mirror(), &q, &avail) {
                return Ok(Some(Refutation::EndpointMismatch { side: "last".into(), class: k.to_string() }));
            }
        }
    }

    let (sl, st) = (p.skeleton_form(), q.skeleton_form());
    if depth < 3 && (sl != l || st != t) {
        let d = crate::embed::cvx_forms(sl, st, depth + 1);
        if d.outcome == Outcome::No {
            return Ok(Some(Refutation::SkeletonNotConvexEmbeddable {
                source: sl.to_string(),
                target: st.to_string(),
            }));
        }
    }
    Ok(None)
}

/// Can a single class of kind k sit convexly inside some class of q?
fn holds_convexly(q: &CondProfile, k: ClassKind) -> bool {
    let inside = |big: ClassKind| match (big, k) {
        (ClassKind::Zeta, _) => true,
        (ClassKind::Omega, ClassKind::Omega | ClassKind::Finite(_)) => true,
        (ClassKind::OmegaStar, ClassKind::OmegaStar | ClassKind::Finite(_)) => true,
        (ClassKind::Finite(m), ClassKind::Finite(n)) => n <= m,
        _ => false,
    };
    if q.counts.keys().any(|&big| inside(big)) {
        return true;
    }
    match k {
        ClassKind::Finite(n) => {
            !q.dense_blocks.is_empty() || !q.dense_sizes.is_finite() || q.dense_sizes.greatest().map_or(false, |m| m >= n)
        }
        _ => false,
    }
}

/// Sizes present densely between any two classes of `t`: `t` is a sum of
/// shuffles all containing them, separated by finite blocks.
fn dense_everywhere(t: &Form) -> Option<SetDesc> {
    let mut common: Option<SetDesc> = None;
    let mut any_mix = false;
    for tok in t.toks() {
        match tok {
            Tok::Mix(s) => {
                any_mix = true;
                common = Some(match common {
                    None => s.clone(),
                    Some(c) => c.intersect(s),
                });
            }
            Tok::Fin(_) => {}
            _ => return None,
        }
    }
    let toks = t.toks();
    if !any_mix || toks.windows(2).any(|w| matches!(w, [Tok::Fin(_), Tok::Fin(_)])) {
        return None;
    }
    common.filter(|c| !c.is_empty())
}

/// Condensation refutation of t ⊴ u.
pub fn refute_cvx(t: &OrderTerm, u: &OrderTerm) -> Result<Option<Refutation>, Outside> {
    refute_forms(&to_form(t)?, &to_form(u)?, 0)
}
