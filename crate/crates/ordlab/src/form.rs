//! Canonical token forms for the fragment.
//!
//! A [`Form`] is a finite sum of tokens kept in a canonical shape, so that
//! two fragment orders are isomorphic exactly when their forms are equal.
//! Cut enumeration ([`splits`], [`pointsplits`]) drives every convexity
//! decision.

use std::collections::BTreeSet;
use std::fmt;

use crate::normalize::normalize;
use crate::ordinal::Ordinal;
use crate::rational::{block_size, Bound, Q};
use crate::setdesc::SetDesc;
use crate::term::OrderTerm;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tok {
    Fin(u64),
    Omega,
    OmegaStar,
    /// η_{f_S}
    Mix(SetDesc),
    Ival(Bound, Bound),
    IvalStar(Bound, Bound),
    /// ζ·F
    Lift(Form),
    /// A well order α ≥ ω².
    Wo(Ordinal),
    WoStar(Ordinal),
    /// X·ω
    Rep(Form),
    /// X·ω*
    RepStar(Form),
    /// Z^α for α ≥ ω.
    ZPow(Ordinal),
    /// Z^α·η for α ≥ ω.
    ZPowEta(Ordinal),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Form(Vec<Tok>);

/// The term lies outside what forms can represent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outside(pub String);

impl fmt::Display for Outside {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "outside the fragment: {}", self.0)
    }
}

type Res<T> = Result<T, Outside>;

fn outside<T>(msg: impl Into<String>) -> Res<T> {
    Err(Outside(msg.into()))
}

fn lift1() -> Tok {
    Tok::Lift(Form(vec![Tok::Fin(1)]))
}

fn eta() -> SetDesc {
    SetDesc::finite(&[1])
}

fn is_wo_tok(t: &Tok) -> bool {
    matches!(t, Tok::Fin(_) | Tok::Omega | Tok::Wo(_))
}

fn is_wostar_tok(t: &Tok) -> bool {
    matches!(t, Tok::Fin(_) | Tok::OmegaStar | Tok::WoStar(_))
}

fn tok_ordinal(t: &Tok) -> Ordinal {
    match t {
        Tok::Fin(n) => Ordinal::nat(*n),
        Tok::Omega | Tok::OmegaStar => Ordinal::omega(),
        Tok::Wo(a) | Tok::WoStar(a) => a.clone(),
        _ => unreachable!("not a well-order token"),
    }
}

/// Tokens spelling a well order: ω·k + n below ω², one token above.
pub fn wo_tokens(a: &Ordinal) -> Vec<Tok> {
    if a.is_zero() {
        return vec![];
    }
    let two = Ordinal::nat(2);
    let below = a.terms().first().map_or(true, |(e, _)| *e < two);
    if !below {
        return vec![Tok::Wo(a.clone())];
    }
    let mut out = Vec::new();
    for (e, c) in a.terms() {
        if *e == Ordinal::one() {
            out.extend(std::iter::repeat(Tok::Omega).take(*c as usize));
        } else {
            out.push(Tok::Fin(*c));
        }
    }
    out
}

fn wostar_tokens(a: &Ordinal) -> Vec<Tok> {
    let mut v: Vec<Tok> = wo_tokens(a).into_iter().map(rev_tok).collect();
    v.reverse();
    v
}

fn rev_tok(t: Tok) -> Tok {
    match t {
        Tok::Fin(_) | Tok::Mix(_) | Tok::ZPow(_) | Tok::ZPowEta(_) => t,
        Tok::Omega => Tok::OmegaStar,
        Tok::OmegaStar => Tok::Omega,
        Tok::Ival(a, b) => Tok::IvalStar(a, b),
        Tok::IvalStar(a, b) => Tok::Ival(a, b),
        Tok::Lift(f) => Tok::Lift(f.rev()),
        Tok::Wo(a) => Tok::WoStar(a),
        Tok::WoStar(a) => Tok::Wo(a),
        Tok::Rep(x) => Tok::RepStar(x.rev()),
        Tok::RepStar(x) => Tok::Rep(x.rev()),
    }
}

fn ival_block(b: &Bound) -> Option<u64> {
    b.as_q().and_then(|q| block_size(q).ok())
}

fn pair_rule(a: &Tok, b: &Tok) -> Option<Vec<Tok>> {
    use Tok::*;
    Some(match (a, b) {
        (Fin(x), Fin(y)) => vec![Fin(x + y)],
        (Fin(_), Omega) => vec![Omega],
        (OmegaStar, Fin(_)) => vec![OmegaStar],
        (OmegaStar, Omega) => vec![lift1()],
        (Lift(f), Lift(g)) => vec![Lift(f.concat(g))],
        (Mix(s), Mix(t)) if s == t => vec![a.clone()],
        (ZPowEta(x), ZPowEta(y)) if x == y => vec![a.clone()],
        (OmegaStar, Wo(_)) => vec![lift1(), b.clone()],
        (WoStar(_), Omega) => vec![a.clone(), lift1()],
        _ => return None,
    })
}

fn triple_rule(a: &Tok, b: &Tok, c: &Tok) -> Option<Tok> {
    use Tok::*;
    match (a, b, c) {
        (Mix(s), Fin(k), Mix(t)) if s == t && s.contains(*k) => Some(a.clone()),
        (Ival(x, y), Fin(k), Ival(y2, z)) if y == y2 && ival_block(y) == Some(*k) => {
            Some(Ival(*x, *z))
        }
        (IvalStar(y, z), Fin(k), IvalStar(x, y2)) if y == y2 && ival_block(y) == Some(*k) => {
            Some(IvalStar(*x, *z))
        }
        (ZPowEta(x), ZPow(y), ZPowEta(z)) if x == y && y == z => Some(a.clone()),
        _ => None,
    }
}

fn reduce(st: &mut Vec<Tok>) {
    loop {
        let n = st.len();
        if n >= 3 {
            if let Some(t) = triple_rule(&st[n - 3], &st[n - 2], &st[n - 1]) {
                st.truncate(n - 3);
                push(st, t);
                continue;
            }
        }
        if n >= 2 {
            if let Some(out) = pair_rule(&st[n - 2], &st[n - 1]) {
                st.truncate(n - 2);
                for t in out {
                    push(st, t);
                }
                return;
            }
            if let Tok::RepStar(x) = &st[n - 2] {
                if let Some((x2, rest)) = absorb_front(x, &st[n - 1]) {
                    st.truncate(n - 2);
                    st.push(Tok::RepStar(x2));
                    if let Some(r) = rest {
                        push(st, r);
                    }
                    return;
                }
                if let Some((x2, rest)) = absorb_back(x, &st[n - 1]) {
                    st.truncate(n - 2);
                    st.push(Tok::RepStar(x2));
                    for r in rest {
                        push(st, r);
                    }
                    return;
                }
            }
        }
        if merge_runs(st) {
            continue;
        }
        return;
    }
}

/// RepStar(X) + t where t is the first token of X.
fn absorb_front(x: &Form, t: &Tok) -> Option<(Form, Option<Tok>)> {
    let first = x.0.first()?;
    let rest = match (first, t) {
        _ if first == t => None,
        (Tok::Fin(k), Tok::Fin(m)) if m > k => Some(Tok::Fin(m - k)),
        _ => return None,
    };
    let mut v = x.0.clone();
    v.rotate_left(1);
    Some((Form(v), rest))
}

fn merge_runs(st: &mut Vec<Tok>) -> bool {
    let n = st.len();
    let k = st.iter().rev().take_while(|t| is_wo_tok(t)).count();
    if k >= 2 {
        let mut total = Ordinal::zero();
        for t in &st[n - k..] {
            match total.checked_add(&tok_ordinal(t)) {
                Ok(s) => total = s,
                Err(_) => return false,
            }
        }
        let toks = wo_tokens(&total);
        if toks[..] != st[n - k..] {
            st.truncate(n - k);
            st.extend(toks);
            return true;
        }
    }
    let k = st.iter().rev().take_while(|t| is_wostar_tok(t)).count();
    if k >= 2 {
        let mut total = Ordinal::zero();
        for t in st[n - k..].iter().rev() {
            match total.checked_add(&tok_ordinal(t)) {
                Ok(s) => total = s,
                Err(_) => return false,
            }
        }
        let toks = wostar_tokens(&total);
        if toks[..] != st[n - k..] {
            st.truncate(n - k);
            st.extend(toks);
            return true;
        }
    }
    false
}

fn push(st: &mut Vec<Tok>, t: Tok) {
    if let Tok::Rep(x) = t {
        push_rep(st, x);
        return;
    }
    st.push(t);
    reduce(st);
}

/// Pushes Rep(X), folding a preceding copy of the tail of X into it
/// (A + (B + A)·ω = (A + B)·ω) and merging a preceding token into the
/// first copy when their classes join.
fn push_rep(st: &mut Vec<Tok>, mut x: Form) {
    for _ in 0..64 {
        let (Some(top), Some(last), Some(first)) = (st.last(), x.0.last(), x.0.first()) else {
            break;
        };
        if top == last {
            st.pop();
            x.0.rotate_right(1);
            continue;
        }
        if let (Tok::Fin(m), Tok::Fin(k)) = (top, last) {
            if m > k {
                let r = m - k;
                st.pop();
                st.push(Tok::Fin(r));
                x.0.rotate_right(1);
                continue;
            }
        }
        if let (Tok::Fin(_), Tok::Fin(_)) = (top, first) {
            break;
        }
        match pair_rule(top, first) {
            Some(v) if v.len() == 1 && v[0] == *first => {
                st.pop();
            }
            Some(v) => {
                st.pop();
                for t in v {
                    push(st, t);
                }
                x.0.rotate_left(1);
            }
            None => break,
        }
    }
    st.push(Tok::Rep(x));
}

/// RepStar(X) followed by t, where the last copy of X merges with t.
fn absorb_back(x: &Form, t: &Tok) -> Option<(Form, Vec<Tok>)> {
    let last = x.0.last()?;
    if let (Tok::Fin(_), Tok::Fin(_)) = (last, t) {
        return None;
    }
    let v = pair_rule(last, t)?;
    if v.len() == 1 && v[0] == *last {
        return Some((x.clone(), vec![]));
    }
    let mut r = x.0.clone();
    r.rotate_right(1);
    Some((Form(r), v))
}

impl Form {
    pub fn empty() -> Self {
        Form(vec![])
    }

    pub fn one() -> Self {
        Form(vec![Tok::Fin(1)])
    }

    pub fn fin(n: u64) -> Self {
        if n == 0 {
            Form::empty()
        } else {
            Form(vec![Tok::Fin(n)])
        }
    }

    pub fn tok(t: Tok) -> Self {
        Form::from_toks(vec![t])
    }

    /// Canonicalizes a token sequence.
    pub fn from_toks(toks: Vec<Tok>) -> Self {
        let mut st = Vec::with_capacity(toks.len());
        for t in toks {
            push(&mut st, t);
        }
        Form(st)
    }

    pub fn toks(&self) -> &[Tok] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Form) -> Form {
        let mut st = self.0.clone();
        for t in &other.0 {
            push(&mut st, t.clone());
        }
        Form(st)
    }

    pub fn cat(parts: &[&Form]) -> Form {
        let mut st = Vec::new();
        for p in parts {
            for t in &p.0 {
                push(&mut st, t.clone());
            }
        }
        Form(st)
    }

    pub fn rev(&self) -> Form {
        Form::from_toks(self.0.iter().rev().cloned().map(rev_tok).collect())
    }

    pub fn repeat(&self, n: u64) -> Form {
        let mut st = Vec::new();
        for _ in 0..n {
            for t in &self.0 {
                push(&mut st, t.clone());
            }
        }
        Form(st)
    }

    /// The order type when this is a well order.
    pub fn as_ordinal(&self) -> Option<Ordinal> {
        let mut total = Ordinal::zero();
        for t in &self.0 {
            if !is_wo_tok(t) {
                return None;
            }
            total = total.checked_add(&tok_ordinal(t)).ok()?;
        }
        Some(total)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.0.as_slice(), [] | [Tok::Fin(_)])
    }

    pub fn finite_size(&self) -> Option<u64> {
        match self.0.as_slice() {
            [] => Some(0),
            [Tok::Fin(n)] => Some(*n),
            _ => None,
        }
    }

    /// Total number of tokens including nested ones.
    pub fn weight(&self) -> usize {
        self.0
            .iter()
            .map(|t| match t {
                Tok::Lift(f) | Tok::Rep(f) | Tok::RepStar(f) => 1 + f.weight(),
                _ => 1,
            })
            .sum()
    }

    /// True when no token hides structure the cut enumeration cannot see.
    pub fn is_transparent(&self) -> bool {
        self.0.iter().all(|t| match t {
            Tok::ZPow(_) | Tok::ZPowEta(_) => false,
            Tok::Lift(f) | Tok::Rep(f) | Tok::RepStar(f) => f.is_transparent(),
            _ => true,
        })
    }

    /// True when the order contains a copy of η.
    pub fn is_dense_somewhere(&self) -> bool {
        self.0.iter().any(|t| match t {
            Tok::Mix(_) | Tok::Ival(..) | Tok::IvalStar(..) | Tok::ZPowEta(_) => true,
            Tok::Lift(f) | Tok::Rep(f) | Tok::RepStar(f) => f.is_dense_somewhere(),
            _ => false,
        })
    }

    pub fn has_min(&self) -> bool {
        match self.0.first() {
            None => false,
            Some(t) => tok_has_min(t),
        }
    }

    pub fn has_max(&self) -> bool {
        match self.0.last() {
            None => false,
            Some(t) => rev_tok_has_max(t),
        }
    }

    /// Builds the equivalent term.
    pub fn to_term(&self) -> OrderTerm {
        if self.0.is_empty() {
            return OrderTerm::Fin(0);
        }
        OrderTerm::sum(self.0.iter().map(tok_term).collect())
    }

    pub fn to_term_opt(&self) -> Option<OrderTerm> {
        (!self.0.is_empty()).then(|| self.to_term())
    }
}

fn tok_has_min(t: &Tok) -> bool {
    match t {
        Tok::Fin(_) | Tok::Omega | Tok::Wo(_) => true,
        Tok::Rep(x) => x.has_min(),
        _ => false,
    }
}

fn rev_tok_has_max(t: &Tok) -> bool {
    tok_has_min(&rev_tok(t.clone()))
}

fn tok_term(t: &Tok) -> OrderTerm {
    use OrderTerm as T;
    match t {
        Tok::Fin(n) => T::Fin(*n),
        Tok::Omega => T::Omega,
        Tok::OmegaStar => T::OmegaStar,
        Tok::Mix(s) if *s == eta() => T::Eta,
        Tok::Mix(s) => T::Shuffle(s.clone()),
        Tok::Ival(a, b) => T::Ival(*a, *b),
        Tok::IvalStar(a, b) => T::rev(T::Ival(*a, *b)),
        Tok::Lift(f) if *f == Form::one() => T::Zeta,
        Tok::Lift(f) => T::prod(T::Zeta, paren(f)),
        Tok::Wo(a) => T::Ord(a.clone()),
        Tok::WoStar(a) => T::rev(T::Ord(a.clone())),
        Tok::Rep(x) => T::prod(paren(x), T::Omega),
        Tok::RepStar(x) => T::prod(paren(x), T::OmegaStar),
        Tok::ZPow(a) => T::ZPow(a.clone()),
        Tok::ZPowEta(a) => T::prod(T::ZPow(a.clone()), T::Eta),
    }
}

fn paren(f: &Form) -> OrderTerm {
    f.to_term()
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        write!(f, "{}", self.to_term())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

impl fmt::Debug for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", tok_term(self))
    }
}

// ---------------------------------------------------------------- products

/// X·ω in canonical shape.
pub fn rep(x: &Form) -> Res<Form> {
    if x.is_empty() {
        return outside("repetition of the empty order");
    }
    if let Some(a) = x.as_ordinal() {
        let p = a.checked_mul(&Ordinal::omega()).map_err(|e| Outside(e.to_string()))?;
        return Ok(Form(wo_tokens(&p)));
    }
    match x.0.as_slice() {
        [Tok::Lift(g)] => return Ok(Form(vec![Tok::Lift(rep(g)?)])),
        [Tok::Mix(_)] | [Tok::ZPowEta(_)] => return Ok(x.clone()),
        [Tok::Mix(s), Tok::Fin(k)] if s.contains(*k) => return Ok(Form(vec![Tok::Mix(s.clone())])),
        [Tok::Fin(k), Tok::Mix(s)] if s.contains(*k) => return Ok(x.clone()),
        _ => {}
    }
    let mut x = x.clone();
    let mut prefix: Vec<Tok> = Vec::new();
    let mut stable = false;
    for _ in 0..=(2 * x.len() + 2) {
        let xx = x.concat(&x);
        if xx.0.len() == 2 * x.0.len() && xx.0[..x.0.len()] == x.0[..] && xx.0[x.0.len()..] == x.0[..] {
            stable = true;
            break;
        }
        let f = x.0[0].clone();
        prefix.push(f.clone());
        x = Form::from_toks(x.0[1..].iter().cloned().chain(std::iter::once(f)).collect());
        if x.is_empty() {
            return outside("repetition collapsed");
        }
        if let Some(_) = x.as_ordinal() {
            let tail = rep(&x)?;
            return Ok(Form(prefix).concat(&tail));
        }
        if let [Tok::Lift(_)] | [Tok::Mix(_)] = x.0.as_slice() {
            let tail = rep(&x)?;
            return Ok(Form(prefix).concat(&tail));
        }
    }
    if !stable {
        return outside(format!("repetition of {x} does not settle"));
    }
    let n = x.0.len();
    for d in 1..n {
        if n % d == 0 && (0..n).all(|i| x.0[i] == x.0[i % d]) {
            x = Form(x.0[..d].to_vec());
            break;
        }
    }
    let mut st = Vec::new();
    for t in prefix {
        push(&mut st, t);
    }
    push_rep(&mut st, x);
    Ok(Form(st))
}

/// X·ω*
pub fn repstar(x: &Form) -> Res<Form> {
    Ok(rep(&x.rev())?.rev())
}

/// The antilexicographic product l·r (r copies of l).
pub fn product(l: &Form, r: &Form) -> Res<Form> {
    if let [Tok::Lift(g)] = l.0.as_slice() {
        return Ok(Form(vec![Tok::Lift(product(g, r)?)]));
    }
    let mut out = Form::empty();
    for t in &r.0 {
        let p = tok_product(l, t)?;
        out = out.concat(&p);
    }
    Ok(out)
}

fn tok_product(l: &Form, t: &Tok) -> Res<Form> {
    match t {
        Tok::Fin(n) => Ok(l.repeat(*n)),
        Tok::Omega => rep(l),
        Tok::OmegaStar => repstar(l),
        Tok::Lift(h) => {
            let lz = repstar(l)?.concat(&rep(l)?);
            product(&lz, h)
        }
        Tok::Mix(s) => match l.0.as_slice() {
            [Tok::Fin(n)] => Ok(Form(vec![Tok::Mix(s.scale(*n))])),
            [Tok::Mix(_)] => Ok(l.clone()),
            [Tok::ZPow(a)] | [Tok::ZPowEta(a)] if *s == eta() => Ok(Form(vec![Tok::ZPowEta(a.clone())])),
            _ => outside(format!("product ({l})*{}", tok_term(t))),
        },
        Tok::Wo(b) => match l.as_ordinal() {
            Some(a) => {
                let p = a.checked_mul(b).map_err(|e| Outside(e.to_string()))?;
                Ok(Form(wo_tokens(&p)))
            }
            None => outside(format!("product ({l})*{}", tok_term(t))),
        },
        Tok::Rep(x) => rep(&product(l, x)?),
        Tok::RepStar(x) => repstar(&product(l, x)?),
        _ => outside(format!("product ({l})*{}", tok_term(t))),
    }
}

fn lift_pow(n: u64, base: Form) -> Form {
    let mut f = base;
    for _ in 0..n {
        f = Form(vec![Tok::Lift(f)]);
    }
    f
}

/// Z^u, with u a form: Z^α when u ≅ α is a well order, Z^α·η otherwise, where
/// α is the longest well-ordered initial segment of u.
pub fn zpow(u: &Form) -> Res<Form> {
    if let Some(a) = u.as_ordinal() {
        return Ok(zpow_ordinal(&a));
    }
    let a = wo_prefix(u);
    Ok(match a.as_nat() {
        Some(n) => lift_pow(n, Form(vec![Tok::Mix(eta())])),
        None => Form(vec![Tok::ZPowEta(a)]),
    })
}

pub fn zpow_ordinal(a: &Ordinal) -> Form {
    match a.as_nat() {
        Some(n) => lift_pow(n, Form::one()),
        None => Form(vec![Tok::ZPow(a.clone())]),
    }
}

/// Order type of the longest well-ordered initial segment.
pub fn wo_prefix(u: &Form) -> Ordinal {
    let mut total = Ordinal::zero();
    for t in &u.0 {
        if is_wo_tok(t) {
            total = total.checked_add(&tok_ordinal(t)).unwrap_or(total);
        } else {
            if let Tok::Rep(x) = t {
                total = total.checked_add(&wo_prefix(x)).unwrap_or(total);
            }
            break;
        }
    }
    total
}

/// Converts a term into its canonical form.
pub fn to_form(t: &OrderTerm) -> Res<Form> {
    let t = normalize(t).map_err(|e| Outside(e.to_string()))?;
    build(&t)
}

fn build(t: &OrderTerm) -> Res<Form> {
    use OrderTerm as T;
    Ok(match t {
        T::Fin(n) => Form::fin(*n),
        T::Omega => Form(vec![Tok::Omega]),
        T::OmegaStar => Form(vec![Tok::OmegaStar]),
        T::Zeta => Form(vec![lift1()]),
        T::Eta => Form(vec![Tok::Mix(eta())]),
        T::Shuffle(s) => Form(vec![Tok::Mix(s.clone())]),
        T::Ival(a, b) => Form(vec![Tok::Ival(*a, *b)]),
        T::Ord(a) => Form(wo_tokens(a)),
        T::ZPow(a) => zpow_ordinal(a),
        T::ZPowOf(u) => zpow(&build(u)?)?,
        T::Sum(parts) => {
            let mut out = Form::empty();
            for p in parts {
                out = out.concat(&build(p)?);
            }
            out
        }
        T::Prod(l, r) => product(&build(l)?, &build(r)?)?,
        T::Rev(x) => build(x)?.rev(),
        T::ZSum(_) => return outside("Z-indexed sums have no form"),
    })
}

// ---------------------------------------------------------------- cuts

/// Parameters bounding the cut enumeration, taken from the order being
/// matched.
#[derive(Clone, Debug, Default)]
pub struct Hints {
    pub fin: u64,
    pub copies: u64,
    pub rats: BTreeSet<Q>,
    pub ords: BTreeSet<Ordinal>,
}

impl Hints {
    pub fn from_forms(forms: &[&Form]) -> Self {
        let mut h = Hints { fin: 0, copies: 0, ..Default::default() };
        for f in forms {
            h.collect(f);
            h.copies += f.weight() as u64;
        }
        h.fin += 2;
        h.copies += 2;
        h
    }

    fn collect(&mut self, f: &Form) {
        let mut run = Ordinal::zero();
        let mut prefixes = vec![];
        for t in &f.0 {
            if is_wo_tok(t) {
                run = run.checked_add(&tok_ordinal(t)).unwrap_or(run);
                prefixes.push(run.clone());
            } else {
                self.ords.extend(prefixes.drain(..));
                run = Ordinal::zero();
            }
            match t {
                Tok::Fin(n) => self.fin = self.fin.max(*n),
                Tok::Mix(s) => {
                    let small = s.iter().take(4).max().unwrap_or(1);
                    self.fin = self.fin.max(small);
                }
                Tok::Ival(a, b) | Tok::IvalStar(a, b) => {
                    for q in [a.as_q(), b.as_q()].into_iter().flatten() {
                        self.rats.insert(q);
                        if let Ok(k) = block_size(q) {
                            self.fin = self.fin.max(k);
                        }
                    }
                }
                Tok::Lift(g) | Tok::Rep(g) | Tok::RepStar(g) => self.collect(g),
                Tok::Wo(a) | Tok::WoStar(a) => {
                    self.ords.insert(a.clone());
                    self.fin = self.fin.max(a.finite_part());
                }
                _ => {}
            }
        }
        self.ords.extend(prefixes);
        // suffixes of well-ordered runs
        let toks: Vec<&Tok> = f.0.iter().collect();
        let mut i = toks.len();
        while i > 0 {
            let mut j = i;
            while j > 0 && is_wo_tok(toks[j - 1]) {
                j -= 1;
            }
            for s in j..i {
                let mut tot = Ordinal::zero();
                for t in &toks[s..i] {
                    tot = tot.checked_add(&tok_ordinal(t)).unwrap_or(tot);
                }
                if !tot.is_zero() {
                    self.ords.insert(tot);
                }
            }
            i = if j == i { i - 1 } else { j };
        }
    }
}

/// A list of cuts; `exact` is false when some cut types were not enumerated.
#[derive(Clone, Debug)]
pub struct Cuts {
    pub items: Vec<(Form, Form)>,
    pub exact: bool,
}

impl Cuts {
    fn new() -> Self {
        Cuts { items: vec![], exact: true }
    }

    fn dedup(mut self) -> Self {
        let mut seen = BTreeSet::new();
        self.items.retain(|p| seen.insert(p.clone()));
        self
    }
}

fn f1(t: Tok) -> Form {
    Form(vec![t])
}

fn finite_reps(s: &SetDesc, h: &Hints) -> Vec<u64> {
    let cap = h.fin + 1;
    let mut v: Vec<u64> = s.iter().take_while(|&k| k <= cap).collect();
    if let Some(k) = s.iter().find(|&k| k > cap) {
        v.push(k);
    }
    v
}

fn offsets(s: u64, bound: u64) -> Vec<u64> {
    if s <= 2 * bound + 2 {
        (0..=s).collect()
    } else {
        (0..=bound).chain(s - bound..=s).collect()
    }
}

/// Well-order tails: pairs (β, γ) with β + γ = α, γ ≥ 1, one β per γ.
fn wo_tails(a: &Ordinal) -> Vec<(Ordinal, Ordinal)> {
    let terms = a.terms();
    let mut out = Vec::new();
    for i in 0..terms.len() {
        let (e, c) = &terms[i];
        let rest: Vec<(Ordinal, u64)> = terms[i + 1..].to_vec();
        let mut ds: Vec<u64> = (1..=(*c).min(3)).collect();
        ds.push(*c);
        ds.dedup();
        for d in ds {
            let mut g = vec![(e.clone(), d)];
            g.extend(rest.iter().cloned());
            let mut b: Vec<(Ordinal, u64)> = terms[..i].to_vec();
            if *c > d {
                b.push((e.clone(), c - d));
            }
            if let (Ok(g), Ok(b)) = (Ordinal::from_terms(g), Ordinal::from_terms(b)) {
                out.push((b, g));
            }
        }
    }
    out
}

fn internal_splits(t: &Tok, h: &Hints) -> Cuts {
    let mut c = Cuts::new();
    let b = h.fin;
    match t {
        Tok::Fin(n) => {
            for j in 1..*n {
                if j <= b + 1 || n - j <= b + 1 {
                    c.items.push((Form::fin(j), Form::fin(n - j)));
                }
            }
        }
        Tok::Omega => {
            for j in 1..=b {
                c.items.push((Form::fin(j), f1(Tok::Omega)));
            }
        }
        Tok::OmegaStar => {
            for j in 1..=b {
                c.items.push((f1(Tok::OmegaStar), Form::fin(j)));
            }
        }
        Tok::Mix(s) => {
            let m = f1(t.clone());
            c.items.push((m.clone(), m.clone()));
            for k in finite_reps(s, h) {
                for a in offsets(k, b + 1) {
                    c.items.push((m.concat(&Form::fin(a)), Form::fin(k - a).concat(&m)));
                }
            }
        }
        Tok::Ival(lo, hi) => {
            for &q in &h.rats {
                let qb = Bound::Q(q);
                if !(lo.below(q) && hi.above(q)) {
                    continue;
                }
                let Ok(k) = block_size(q) else { continue };
                let l = f1(Tok::Ival(*lo, qb));
                let r = f1(Tok::Ival(qb, *hi));
                for a in 0..=k {
                    c.items.push((l.concat(&Form::fin(a)), Form::fin(k - a).concat(&r)));
                }
            }
        }
        Tok::IvalStar(lo, hi) => {
            let m = internal_splits(&Tok::Ival(*lo, *hi), h);
            c.exact = m.exact;
            c.items = m.items.into_iter().map(|(x, y)| (y.rev(), x.rev())).collect();
        }
        Tok::Lift(g) => {
            let s = splits(g, h);
            let p = pointsplits(g, h);
            c.exact = s.exact && p.exact;
            for (g1, g2) in s.items {
                if !g1.is_empty() && !g2.is_empty() {
                    c.items.push((f1(Tok::Lift(g1)), f1(Tok::Lift(g2))));
                }
            }
            for (g1, g2) in p.items {
                let l = lift_opt(g1).concat(&f1(Tok::OmegaStar));
                let r = f1(Tok::Omega).concat(&lift_opt(g2));
                c.items.push((l, r));
            }
        }
        Tok::Rep(x) => {
            let s = splits(x, h);
            c.exact = s.exact;
            let tail = f1(t.clone());
            for n in 0..h.copies {
                let head = x.repeat(n);
                for (x1, x2) in &s.items {
                    if x1.is_empty() {
                        continue;
                    }
                    c.items.push((head.concat(x1), x2.concat(&tail)));
                }
            }
        }
        Tok::RepStar(x) => {
            let m = internal_splits(&Tok::Rep(x.rev()), h);
            c.exact = m.exact;
            c.items = m.items.into_iter().map(|(p, q)| (q.rev(), p.rev())).collect();
        }
        Tok::Wo(a) => {
            for (beta, gamma) in wo_tails(a) {
                if !beta.is_zero() {
                    c.items.push((Form(wo_tokens(&beta)), Form(wo_tokens(&gamma))));
                }
            }
            for beta in &h.ords {
                if beta < a && !beta.is_zero() {
                    if let Some(g) = a.checked_sub_left(beta) {
                        c.items.push((Form(wo_tokens(beta)), Form(wo_tokens(&g))));
                    }
                }
            }
        }
        Tok::WoStar(a) => {
            let m = internal_splits(&Tok::Wo(a.clone()), h);
            c.items = m.items.into_iter().map(|(p, q)| (q.rev(), p.rev())).collect();
        }
        Tok::ZPowEta(a) => {
            let m = f1(t.clone());
            let z = f1(Tok::ZPow(a.clone()));
            c.items.push((m.clone(), m.clone()));
            c.items.push((m.clone(), z.concat(&m)));
            c.items.push((m.concat(&z), m));
            c.exact = false;
        }
        Tok::ZPow(_) => c.exact = false,
    }
    c
}

fn lift_opt(g: Form) -> Form {
    if g.is_empty() {
        g
    } else {
        f1(Tok::Lift(g))
    }
}

fn internal_points(t: &Tok, h: &Hints) -> Cuts {
    let mut c = Cuts::new();
    let b = h.fin;
    match t {
        Tok::Fin(n) => {
            for i in 0..*n {
                if i <= b + 1 || n - 1 - i <= b + 1 {
                    c.items.push((Form::fin(i), Form::fin(n - 1 - i)));
                }
            }
        }
        Tok::Omega => {
            for i in 0..=b {
                c.items.push((Form::fin(i), f1(Tok::Omega)));
            }
        }
        Tok::OmegaStar => {
            for i in 0..=b {
                c.items.push((f1(Tok::OmegaStar), Form::fin(i)));
            }
        }
        Tok::Mix(s) => {
            let m = f1(t.clone());
            for k in finite_reps(s, h) {
                for a in offsets(k - 1, b + 1) {
                    c.items.push((m.concat(&Form::fin(a)), Form::fin(k - 1 - a).concat(&m)));
                }
            }
        }
        Tok::Ival(lo, hi) => {
            for &q in &h.rats {
                let qb = Bound::Q(q);
                if !(lo.below(q) && hi.above(q)) {
                    continue;
                }
                let Ok(k) = block_size(q) else { continue };
                let l = f1(Tok::Ival(*lo, qb));
                let r = f1(Tok::Ival(qb, *hi));
                for a in 0..k {
                    c.items.push((l.concat(&Form::fin(a)), Form::fin(k - 1 - a).concat(&r)));
                }
            }
        }
        Tok::IvalStar(lo, hi) => {
            let m = internal_points(&Tok::Ival(*lo, *hi), h);
            c.exact = m.exact;
            c.items = m.items.into_iter().map(|(x, y)| (y.rev(), x.rev())).collect();
        }
        Tok::Lift(g) => {
            let p = pointsplits(g, h);
            c.exact = p.exact;
            for (g1, g2) in p.items {
                let l = lift_opt(g1).concat(&f1(Tok::OmegaStar));
                let r = f1(Tok::Omega).concat(&lift_opt(g2));
                c.items.push((l, r));
            }
        }
        Tok::Rep(x) => {
            let p = pointsplits(x, h);
            c.exact = p.exact;
            let tail = f1(t.clone());
            for n in 0..h.copies {
                let head = x.repeat(n);
                for (x1, x2) in &p.items {
                    c.items.push((head.concat(x1), x2.concat(&tail)));
                }
            }
        }
        Tok::RepStar(x) => {
            let m = internal_points(&Tok::Rep(x.rev()), h);
            c.exact = m.exact;
            c.items = m.items.into_iter().map(|(p, q)| (q.rev(), p.rev())).collect();
        }
        Tok::Wo(a) => {
            let n = a.finite_part();
            let lim = a.limit_part();
            for i in 0..n.min(b + 2) {
                let l = lim.checked_add(&Ordinal::nat(i)).unwrap_or_else(|_| lim.clone());
                c.items.push((Form(wo_tokens(&l)), Form::fin(n - 1 - i)));
            }
            for (beta, gamma) in wo_tails(a) {
                if !gamma.is_finite() {
                    c.items.push((Form(wo_tokens(&beta)), Form(wo_tokens(&gamma))));
                }
            }
            for beta in &h.ords {
                let Ok(b1) = beta.checked_add(&Ordinal::one()) else { continue };
                if b1 <= *a {
                    if let Some(g) = a.checked_sub_left(&b1) {
                        c.items.push((Form(wo_tokens(beta)), Form(wo_tokens(&g))));
                    }
                }
            }
        }
        Tok::WoStar(a) => {
            let m = internal_points(&Tok::Wo(a.clone()), h);
            c.items = m.items.into_iter().map(|(p, q)| (q.rev(), p.rev())).collect();
        }
        Tok::ZPow(_) | Tok::ZPowEta(_) => c.exact = false,
    }
    c
}

/// All decompositions F = A + B up to the bounds in `h`, including the
/// trivial ones with an empty side.
pub fn splits(f: &Form, h: &Hints) -> Cuts {
    let mut c = Cuts::new();
    let n = f.0.len();
    for i in 0..=n {
        c.items.push((Form(f.0[..i].to_vec()), Form(f.0[i..].to_vec())));
    }
    for i in 0..n {
        let inner = internal_splits(&f.0[i], h);
        c.exact &= inner.exact;
        let pre = Form(f.0[..i].to_vec());
        let post = Form(f.0[i + 1..].to_vec());
        for (a, b) in inner.items {
            c.items.push((pre.concat(&a), b.concat(&post)));
        }
    }
    c.dedup()
}

/// All decompositions F = A + 1 + B up to the bounds in `h`.
pub fn pointsplits(f: &Form, h: &Hints) -> Cuts {
    let mut c = Cuts::new();
    let n = f.0.len();
    for i in 0..n {
        let inner = internal_points(&f.0[i], h);
        c.exact &= inner.exact;
        let pre = Form(f.0[..i].to_vec());
        let post = Form(f.0[i + 1..].to_vec());
        for (a, b) in inner.items {
            c.items.push((pre.concat(&a), b.concat(&post)));
        }
    }
    c.dedup()
}

/// Searches T = left + L + right. Returns the witness, or None together
/// with whether the search was exhaustive.
pub fn convex_in(l: &Form, t: &Form) -> (Option<(Form, Form)>, bool) {
    if l == t {
        return (Some((Form::empty(), Form::empty())), true);
    }
    if l.is_empty() {
        return (Some((Form::empty(), t.clone())), true);
    }
    let h = Hints::from_forms(&[l]);
    let outer = splits(t, &h);
    let mut exact = outer.exact;
    let mut seen = std::collections::HashSet::new();
    for (left, rest) in &outer.items {
        // many cuts leave the same remainder
        if !seen.insert(rest) {
            continue;
        }
        let inner = splits(rest, &h);
        exact &= inner.exact;
        for (mid, right) in &inner.items {
            if mid == l {
                return (Some((left.clone(), right.clone())), true);
            }
        }
    }
    (None, exact)
}
