//! Descriptor calculus for proper arcs and knots.
//!
//! Prime labels are opaque: `Prime(i)` is the i-th registered prime arc
//! (think of the (p,q) torus arcs in some fixed enumeration). No topology is
//! computed; the rules below are the only source of yes/no answers.

use std::collections::BTreeMap;
use std::fmt;

use crate::circular::{decide_term, CircRel};
use crate::decision::{Certificate, Decision, Outcome};
use crate::dsl::{print_pieces, print_term};
use crate::embed::{decide, Relation};
use crate::error::ArcError;
use crate::form::to_form;
use crate::setdesc::SetDesc;
use crate::term::{CircTerm, OrderTerm};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArcAtom {
    Trivial,
    Prime(u32),
    /// Infinite sum with its limit on the boundary. With `repeated` the set
    /// names a single prime used infinitely often.
    BSum { set: SetDesc, repeated: bool },
    /// Infinite sum with its limit in the interior.
    ISum(SetDesc),
    /// The arc F(L) built over the interior sum of the primes in the set.
    OrderSing(OrderTerm, SetDesc),
}

impl ArcAtom {
    fn is_wild(&self) -> bool {
        !matches!(self, ArcAtom::Trivial | ArcAtom::Prime(_))
    }

    fn labels(&self) -> SetDesc {
        match self {
            ArcAtom::Trivial => SetDesc::empty(),
            ArcAtom::Prime(p) => SetDesc::finite(&[*p as u64]),
            ArcAtom::BSum { set, .. } | ArcAtom::ISum(set) | ArcAtom::OrderSing(_, set) => set.clone(),
        }
    }

    fn check(&self) -> Result<(), ArcError> {
        match self {
            ArcAtom::BSum { set, repeated: true } => {
                if set.iter().count() != 1 {
                    return Err(ArcError::FiniteSet(format!("rep needs one prime, got {set}")));
                }
            }
            ArcAtom::BSum { set, .. } | ArcAtom::ISum(set) => {
                if set.is_finite() {
                    return Err(ArcError::FiniteSet(set.to_string()));
                }
            }
            ArcAtom::OrderSing(l, set) => {
                if set.is_finite() {
                    return Err(ArcError::FiniteSet(set.to_string()));
                }
                if l.size() == Some(0) || to_form(l).is_err() {
                    return Err(ArcError::BadOrder(print_term(l)));
                }
            }
            ArcAtom::Trivial | ArcAtom::Prime(_) => {}
        }
        Ok(())
    }
}

/// A proper arc as a finite sum of atoms, kept in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArcDescriptor {
    atoms: Vec<ArcAtom>,
}

/// Trivial pieces vanish, and a prime directly before an infinite sum joins it.
fn normalize_atoms(atoms: Vec<ArcAtom>) -> Vec<ArcAtom> {
    let mut out: Vec<ArcAtom> = Vec::new();
    for a in atoms.into_iter().rev() {
        if a == ArcAtom::Trivial {
            continue;
        }
        if let (ArcAtom::Prime(p), Some(next)) = (&a, out.last_mut()) {
            let p = *p as u64;
            match next {
                ArcAtom::BSum { set, repeated: true } if set.contains(p) => continue,
                ArcAtom::BSum { set, repeated: false } | ArcAtom::ISum(set) if !set.contains(p) => {
                    *set = set.union(&SetDesc::finite(&[p]));
                    continue;
                }
                _ => {}
            }
        }
        out.push(a);
    }
    out.reverse();
    if out.is_empty() {
        out.push(ArcAtom::Trivial);
    }
    out
}

impl ArcDescriptor {
    pub fn new(atoms: Vec<ArcAtom>) -> Result<Self, ArcError> {
        if atoms.is_empty() {
            return Err(ArcError::Empty);
        }
        for a in &atoms {
            a.check()?;
        }
        Ok(ArcDescriptor { atoms: normalize_atoms(atoms) })
    }

    pub fn trivial() -> Self {
        ArcDescriptor { atoms: vec![ArcAtom::Trivial] }
    }

    pub fn atoms(&self) -> &[ArcAtom] {
        &self.atoms
    }

    pub fn is_tame(&self) -> bool {
        !self.atoms.iter().any(ArcAtom::is_wild)
    }

    fn primes(&self) -> BTreeMap<u64, u64> {
        let mut m = BTreeMap::new();
        for a in &self.atoms {
            if let ArcAtom::Prime(p) = a {
                *m.entry(*p as u64).or_default() += 1;
            }
        }
        m
    }

    fn labels(&self) -> SetDesc {
        self.atoms.iter().fold(SetDesc::empty(), |s, a| s.union(&a.labels()))
    }
}

impl fmt::Display for ArcDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arc: {}", print_pieces(&self.atoms))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    None,
    Interior(SetDesc),
    Boundary(SetDesc),
}

/// Finite concatenation, optionally closed off by an infinite sum over a set of primes.
pub fn arc_sum(parts: &[ArcDescriptor], limit: Limit) -> Result<ArcDescriptor, ArcError> {
    let mut atoms: Vec<ArcAtom> = parts.iter().flat_map(|p| p.atoms.iter().cloned()).collect();
    match limit {
        Limit::None if atoms.is_empty() => return Err(ArcError::Empty),
        Limit::None => {}
        Limit::Interior(s) => atoms.push(ArcAtom::ISum(s)),
        Limit::Boundary(s) => atoms.push(ArcAtom::BSum { set: s, repeated: false }),
    }
    ArcDescriptor::new(atoms)
}

pub type ArcDecision = Decision;

fn yes(rule: &str, evidence: impl Into<String>) -> ArcDecision {
    let evidence = evidence.into();
    Decision::yes(Certificate::Rule { rule: rule.into(), evidence: evidence.clone() }, rule, evidence)
}

fn no(rule: &str, evidence: impl Into<String>) -> ArcDecision {
    let evidence = evidence.into();
    Decision::no(Certificate::Rule { rule: rule.into(), evidence: evidence.clone() }, rule, evidence)
}

fn fits(need: &BTreeMap<u64, u64>, have: &BTreeMap<u64, u64>) -> bool {
    need.iter().all(|(p, n)| have.get(p).copied().unwrap_or(0) >= *n)
}

/// Prime multiplicities available in one tame stretch; `u64::MAX` for unbounded.
fn tame_regions(b: &ArcDescriptor) -> Vec<BTreeMap<u64, u64>> {
    let mut out = Vec::new();
    let mut cur: BTreeMap<u64, u64> = BTreeMap::new();
    let offer = |m: &mut BTreeMap<u64, u64>, s: &SetDesc, n: u64| {
        for p in s.iter().take(512) {
            let e = m.entry(p).or_default();
            *e = e.saturating_add(n);
        }
    };
    for a in &b.atoms {
        match a {
            ArcAtom::Trivial => {}
            ArcAtom::Prime(p) => *cur.entry(*p as u64).or_default() += 1,
            ArcAtom::BSum { set, repeated } => {
                offer(&mut cur, set, if *repeated { u64::MAX } else { 1 });
                out.push(std::mem::take(&mut cur));
            }
            ArcAtom::ISum(set) => {
                offer(&mut cur, set, 1);
                out.push(std::mem::take(&mut cur));
            }
            ArcAtom::OrderSing(_, set) => {
                out.push(std::mem::take(&mut cur));
                let mut own = BTreeMap::new();
                offer(&mut own, set, 1);
                out.push(own);
            }
        }
    }
    out.push(cur);
    out
}

fn iso_parts(atoms: &[ArcAtom], interior_only: bool) -> Vec<OrderTerm> {
    let mut parts = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        match a {
            ArcAtom::BSum { .. } if interior_only && i + 1 == atoms.len() => {}
            ArcAtom::BSum { .. } | ArcAtom::ISum(_) => parts.push(OrderTerm::one()),
            ArcAtom::OrderSing(l, _) => parts.push(l.clone()),
            ArcAtom::Trivial | ArcAtom::Prime(_) => {}
        }
    }
    parts
}

fn join(parts: Vec<OrderTerm>) -> Option<OrderTerm> {
    (!parts.is_empty()).then(|| OrderTerm::sum(parts))
}

/// The order of isolated singular points along the arc; `None` when there are none.
pub fn isolated_order(a: &ArcDescriptor) -> Option<OrderTerm> {
    join(iso_parts(&a.atoms, false))
}

/// Isolated singular points off the boundary of the ambient ball.
fn interior_isolated(a: &ArcDescriptor) -> Option<OrderTerm> {
    join(iso_parts(&a.atoms, true))
}

fn single_atom_below(x: &ArcAtom, y: &ArcAtom) -> bool {
    use ArcAtom::*;
    match (x, y) {
        _ if x == y => true,
        (BSum { set: a, repeated: false }, BSum { set: s, repeated: false }) => a.is_subset(s),
        (BSum { set: a, repeated: false } | ISum(a), ISum(s)) => a.is_subset(s),
        (BSum { set: a, repeated: false } | ISum(a), OrderSing(_, s)) => a.is_subset(s),
        (OrderSing(l, p), OrderSing(l2, p2)) => p == p2 && decide(Relation::Cvx, l, l2).outcome == Outcome::Yes,
        _ => false,
    }
}

/// Subarc relation on descriptors.
pub fn decide_subarc(a: &ArcDescriptor, b: &ArcDescriptor) -> ArcDecision {
    if a == b {
        return yes("reflexive", a.to_string());
    }
    if a.atoms == [ArcAtom::Trivial] {
        return yes("trivial-minimum", "the trivial arc sits below every arc");
    }
    if a.is_tame() {
        let need = a.primes();
        if b.is_tame() {
            let have = b.primes();
            return if fits(&need, &have) {
                yes("R1-tame-decomposition", "prime multiset is contained")
            } else {
                no("R1-tame-decomposition", "prime decompositions are unique up to order")
            };
        }
        let labels = b.labels();
        if let Some(p) = need.keys().find(|p| !labels.contains(**p)) {
            return no("R2-prime-labels", format!("prime {p} occurs nowhere in the target"));
        }
        if tame_regions(b).iter().any(|r| fits(&need, r)) {
            return yes("R2-tame-region", "primes found in one tame stretch");
        }
        return Decision::unknown("R2-tame-region", "primes are present but spread over singularities");
    }
    if b.is_tame() {
        return no("wild-below-tame", "singular points embed into singular points");
    }
    if let [ArcAtom::BSum { set: s, repeated }] = b.atoms.as_slice() {
        return match a.atoms.as_slice() {
            [ArcAtom::BSum { set: x, repeated: r }] if r == repeated && x.is_subset(s) => {
                yes("R3-boundary-sum", format!("{x} is contained in {s}"))
            }
            _ => no("R3-boundary-sum", "predecessors of a boundary sum are boundary sums over subsets"),
        };
    }
    if b.atoms.windows(a.atoms.len()).any(|w| w == a.atoms.as_slice()) {
        return yes("contiguous-block", "the source is a block of the target");
    }
    if let [x] = a.atoms.as_slice() {
        if let Some(y) = b.atoms.iter().find(|y| single_atom_below(x, y)) {
            let rule = match (x, y) {
                (_, ArcAtom::ISum(_)) => "R4-boundary-below-interior",
                (ArcAtom::OrderSing(..), ArcAtom::OrderSing(..)) => "R5-order-reduction",
                _ => "R3-boundary-sum",
            };
            return yes(rule, format!("{} lies below {}", print_pieces(&[x.clone()]), print_pieces(&[y.clone()])));
        }
    }
    let labels = b.labels();
    if let Some(p) = a.primes().keys().find(|p| !labels.contains(**p)) {
        return no("R2-prime-labels", format!("prime {p} occurs nowhere in the target"));
    }
    if let [ArcAtom::ISum(s) | ArcAtom::OrderSing(_, s)] = b.atoms.as_slice() {
        let shared = a
            .atoms
            .iter()
            .filter_map(|x| match x {
                ArcAtom::BSum { set, repeated: false } | ArcAtom::ISum(set) | ArcAtom::OrderSing(_, set) => Some(set),
                _ => None,
            })
            .any(|set| !set.intersect(s).is_finite());
        if !shared {
            return no("R3-wild-predecessor", "no wild piece of the source is a boundary sum over the target's primes");
        }
    }
    if let Some(k) = interior_isolated(a) {
        let Some(lb) = isolated_order(b) else {
            return no("R5-isolated-order", "the target has no isolated singular points");
        };
        let fwd = decide(Relation::Cvx, &k, &lb).outcome;
        let back = decide(Relation::Cvx, &k, &OrderTerm::rev(lb.clone())).outcome;
        if fwd == Outcome::No && back == Outcome::No {
            return no("R5-isolated-order", format!("{} is convex in neither {} nor its reverse", print_term(&k), print_term(&lb)));
        }
    }
    Decision::unknown("no-rule", "no registered rule applies")
}

// ---------------------------------------------------------------- knots

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnotOrigin {
    Circularize,
    KnotOfArc,
    FKnot,
}

/// A knot as a cyclic word of atoms.
#[derive(Clone, Debug)]
pub struct KnotDescriptor {
    pub cyclic: Vec<ArcAtom>,
    pub origin: KnotOrigin,
    /// The circular order a `f_knot` image was built from.
    pub circ: Option<CircTerm>,
}

impl PartialEq for KnotDescriptor {
    fn eq(&self, other: &Self) -> bool {
        let n = self.cyclic.len();
        self.circ == other.circ
            && n == other.cyclic.len()
            && (0..n).any(|r| (0..n).all(|i| self.cyclic[(i + r) % n] == other.cyclic[i]))
    }
}

impl KnotDescriptor {
    pub fn circularize(a: &ArcDescriptor) -> Self {
        KnotDescriptor { cyclic: a.atoms.clone(), origin: KnotOrigin::Circularize, circ: None }
    }

    /// Circularization of a ⊕ I.
    pub fn knot_of_arc(a: &ArcDescriptor) -> Self {
        let mut atoms = a.atoms.clone();
        atoms.push(ArcAtom::Trivial);
        KnotDescriptor { cyclic: normalize_atoms(atoms), origin: KnotOrigin::KnotOfArc, circ: None }
    }

    pub fn f_knot(c: CircTerm) -> Self {
        let atom = ArcAtom::OrderSing(c.0.clone(), SetDesc::from(0));
        KnotDescriptor { cyclic: vec![atom], origin: KnotOrigin::FKnot, circ: Some(c) }
    }

    pub fn trivial() -> Self {
        KnotDescriptor::circularize(&ArcDescriptor::trivial())
    }

    /// C[⊕_{i∈S} P_i] with the limit in the interior.
    pub fn k_star(s: SetDesc) -> Result<Self, ArcError> {
        Ok(KnotDescriptor::circularize(&ArcDescriptor::new(vec![ArcAtom::ISum(s)])?))
    }

    fn skeleton(&self) -> Vec<SkAtom> {
        self.cyclic
            .iter()
            .filter_map(|a| match a {
                ArcAtom::BSum { set, repeated: false } | ArcAtom::ISum(set) => Some(SkAtom::Sum(set.clone())),
                ArcAtom::BSum { set, repeated: true } => Some(SkAtom::Rep(set.least().unwrap_or(0))),
                ArcAtom::OrderSing(l, s) => Some(SkAtom::Sing(l.clone(), s.clone())),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for KnotDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.origin, &self.circ) {
            (KnotOrigin::FKnot, Some(c)) => write!(f, "fknot: {c}"),
            (KnotOrigin::KnotOfArc, _) => write!(f, "koa: {}", print_pieces(&self.cyclic)),
            _ => write!(f, "knot: {}", print_pieces(&self.cyclic)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tameness {
    Tame,
    Wild,
}

impl fmt::Display for Tameness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tameness::Tame => "tame",
            Tameness::Wild => "wild",
        })
    }
}

pub fn classify_knot(k: &KnotDescriptor) -> Tameness {
    if k.cyclic.iter().any(ArcAtom::is_wild) {
        Tameness::Wild
    } else {
        Tameness::Tame
    }
}

/// Wild atoms of a knot up to the changes that tame parts allow: sets only
/// matter modulo finite sets.
#[derive(Clone, Debug)]
enum SkAtom {
    Sum(SetDesc),
    Rep(u64),
    Sing(OrderTerm, SetDesc),
}

impl SkAtom {
    fn same(&self, o: &SkAtom) -> bool {
        match (self, o) {
            (SkAtom::Sum(a), SkAtom::Sum(b)) => a.eq_mod_finite(b),
            (SkAtom::Rep(a), SkAtom::Rep(b)) => a == b,
            (SkAtom::Sing(l, a), SkAtom::Sing(m, b)) => l == m && a.eq_mod_finite(b),
            _ => false,
        }
    }
}

/// Is `x` a cyclic subsequence of `y`?
fn cyclic_subsequence(x: &[SkAtom], y: &[SkAtom]) -> bool {
    let n = y.len();
    (0..n.max(1)).any(|r| {
        let mut it = (0..n).map(|i| &y[(i + r) % n]);
        x.iter().all(|a| it.any(|b| a.same(b)))
    })
}

/// Piecewise subknot relation on descriptors.
pub fn decide_subknot(k: &KnotDescriptor, k2: &KnotDescriptor) -> ArcDecision {
    if let (Some(c), Some(d)) = (&k.circ, &k2.circ) {
        return decide_term(CircRel::Pcvx, c, d).with_step("f-knot-delegation", "compare the circular orders");
    }
    if k == k2 {
        return yes("reflexive", k.to_string());
    }
    match (classify_knot(k), classify_knot(k2)) {
        (Tameness::Tame, _) => return yes("tame-minimum", "tame knots are piecewise equivalent to the trivial knot"),
        (Tameness::Wild, Tameness::Tame) => return no("tame-minimum", "only tame knots lie below the trivial knot"),
        _ => {}
    }
    if k.circ.is_some() || k2.circ.is_some() {
        return Decision::unknown("no-rule", "mixed circular-order image and descriptor");
    }
    let (sk, sk2) = (k.skeleton(), k2.skeleton());
    if let [x @ (SkAtom::Sum(_) | SkAtom::Rep(_))] = sk2.as_slice() {
        return match sk.as_slice() {
            [y] if y.same(x) => yes("kstar-tail", "the wild blocks agree modulo finite sets"),
            _ => no("kstar-tail", "a piece of a one-singularity sum knot is a cofinite tail of it"),
        };
    }
    if cyclic_subsequence(&sk, &sk2) {
        return yes("block-selection", "the wild blocks of the source are a cyclic selection of the target's");
    }
    Decision::unknown("no-rule", "no registered rule applies")
}
