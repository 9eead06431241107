//! Text syntax for terms, circular orders, arcs and knots.
//!
//! ```text
//! term   := prod ('+' prod)*
//! prod   := atom ('*' atom)*            antilexicographic, left-associative
//! atom   := NAT | w | w* | z | e | Z^oexp | Z^{term} | shuffle SET
//!         | ival(BOUND, BOUND) | Ord(ord) | rev(term) | (term)
//!         | zsum(term; term,... ; term,...)
//! ord    := oterm ('+' oterm)*
//! oterm  := NAT | w ['^' oexp] ['*' NAT]
//! oexp   := NAT | w | (ord)
//! SET    := {n,...} | {r,... mod m} | {bits 0110|01}
//! circ   := C[term] | cyc(i,...)
//! arc    := arc: piece ('+' piece)*
//! piece  := triv | pN | bsum SET | rep{N} | isum SET | sing(term; SET)
//! knot   := knot: piece (+ piece)* | koa: piece (+ piece)* | fknot: C[term]
//! ```

use crate::arcknot::{ArcAtom, ArcDescriptor, KnotDescriptor, KnotOrigin};
use crate::circular::fincirc::FinCirc;
use crate::error::ParseError;
use crate::ordinal::Ordinal;
use crate::rational::{Bound, Q};
use crate::setdesc::SetDesc;
use crate::term::{CircTerm, OrderTerm, ZSumSpec};

/// Any value the DSL can spell.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Term(OrderTerm),
    Circ(CircTerm),
    FinCirc(FinCirc),
    Arc(ArcDescriptor),
    Knot(KnotDescriptor),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> PResult<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn done(&mut self) -> PResult<()> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let r = self.rest();
        let n = r.chars().take_while(|c| c.is_ascii_alphabetic() || *c == '_').count();
        if n == 0 {
            None
        } else {
            self.pos += n;
            Some(&r[..n])
        }
    }

    fn nat(&mut self) -> PResult<u64> {
        self.skip_ws();
        let r = self.rest();
        let n = r.chars().take_while(|c| c.is_ascii_digit()).count();
        if n == 0 {
            return self.err("expected a natural number");
        }
        let v = r[..n].parse().or_else(|_| self.err("number too large"))?;
        self.pos += n;
        Ok(v)
    }

    // ordinals

    fn ord(&mut self) -> PResult<Ordinal> {
        let mut acc = self.oterm()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            let t = self.oterm()?;
            acc = acc.checked_add(&t).or_else(|e| self.err(e.to_string()))?;
        }
        Ok(acc)
    }

    fn oterm(&mut self) -> PResult<Ordinal> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            Some('w') => {
                self.pos += 1;
                let e = if self.eat("^") { self.oexp()? } else { Ordinal::one() };
                let base = Ordinal::from_terms(vec![(e, 1)]).or_else(|e| self.err(e.to_string()))?;
                if self.peek() == Some('*') && self.rest()[1..].trim_start().starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                    let c = self.nat()?;
                    if c == 0 {
                        return Ok(Ordinal::zero());
                    }
                    return base.checked_mul(&Ordinal::nat(c)).or_else(|e| self.err(e.to_string()));
                }
                Ok(base)
            }
            _ => self.err("expected an ordinal"),
        }
    }

    fn oexp(&mut self) -> PResult<Ordinal> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            Some('w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some('(') => {
                self.pos += 1;
                let o = self.ord()?;
                self.expect(")")?;
                Ok(o)
            }
            _ => self.err("expected an exponent"),
        }
    }

    // sets and rationals

    fn set(&mut self) -> PResult<SetDesc> {
        self.expect("{")?;
        if self.eat("}") {
            return Ok(SetDesc::empty());
        }
        let save = self.pos;
        if self.ident() == Some("bits") {
            let pre = self.bits()?;
            self.expect("|")?;
            let per = self.bits()?;
            self.expect("}")?;
            return SetDesc::new(pre, per).or_else(|e| self.err(e.to_string()));
        }
        self.pos = save;
        let mut items = vec![self.nat()?];
        while self.eat(",") {
            items.push(self.nat()?);
        }
        let save = self.pos;
        if self.ident() == Some("mod") {
            let m = self.nat()?;
            self.expect("}")?;
            return SetDesc::residues(&items, m).or_else(|e| self.err(e.to_string()));
        }
        self.pos = save;
        self.expect("}")?;
        Ok(SetDesc::finite(&items))
    }

    fn bits(&mut self) -> PResult<Vec<bool>> {
        self.skip_ws();
        let r = self.rest();
        let n = r.chars().take_while(|c| *c == '0' || *c == '1').count();
        self.pos += n;
        Ok(r[..n].chars().map(|c| c == '1').collect())
    }

    fn rational(&mut self) -> PResult<Q> {
        let neg = self.eat("-");
        let n = self.nat()? as i64;
        let d = if self.eat("/") { self.nat()? as i64 } else { 1 };
        if d == 0 {
            return self.err("zero denominator");
        }
        let q = Q::new(n, d);
        Ok(if neg { -q } else { q })
    }

    fn bound(&mut self) -> PResult<Bound> {
        self.skip_ws();
        if self.eat("-inf") {
            return Ok(Bound::NegInf);
        }
        if self.eat("+inf") || self.eat("inf") {
            return Ok(Bound::PosInf);
        }
        Ok(Bound::Q(self.rational()?))
    }

    // terms

    fn term(&mut self) -> PResult<OrderTerm> {
        let mut parts = vec![self.prod()?];
        while self.peek() == Some('+') {
            self.pos += 1;
            parts.push(self.prod()?);
        }
        Ok(OrderTerm::sum(parts))
    }

    fn prod(&mut self) -> PResult<OrderTerm> {
        let mut acc = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let r = self.atom()?;
            acc = OrderTerm::prod(acc, r);
        }
        Ok(acc)
    }

    /// After `w`, a `*` is the reversal mark unless an operand follows it.
    fn star_follows_w(&mut self) -> bool {
        self.skip_ws();
        let r = self.rest();
        if !r.starts_with('*') {
            return false;
        }
        let after = r[1..].trim_start();
        match after.chars().next() {
            None => true,
            Some(c) => matches!(c, ')' | '+' | ']' | '}' | ',' | ';' | '*'),
        }
    }

    fn atom(&mut self) -> PResult<OrderTerm> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                if n == 0 {
                    return self.err("finite orders have positive size");
                }
                Ok(OrderTerm::Fin(n))
            }
            Some(_) => {
                let start = self.pos;
                let id = match self.ident() {
                    Some(id) => id,
                    None => return self.err("expected a term"),
                };
                match id {
                    "w" => {
                        if self.star_follows_w() {
                            self.eat("*");
                            Ok(OrderTerm::OmegaStar)
                        } else {
                            Ok(OrderTerm::Omega)
                        }
                    }
                    "z" => Ok(OrderTerm::Zeta),
                    "e" => Ok(OrderTerm::Eta),
                    "Z" => {
                        self.expect("^")?;
                        if self.eat("{") {
                            let t = self.term()?;
                            self.expect("}")?;
                            Ok(OrderTerm::zpow_of(t))
                        } else {
                            Ok(OrderTerm::ZPow(self.oexp()?))
                        }
                    }
                    "shuffle" => {
                        let s = self.set()?;
                        let t = OrderTerm::Shuffle(s);
                        t.check().or_else(|e| self.err(e.to_string()))?;
                        Ok(t)
                    }
                    "ival" => {
                        self.expect("(")?;
                        let lo = self.bound()?;
                        self.expect(",")?;
                        let hi = self.bound()?;
                        self.expect(")")?;
                        let t = OrderTerm::Ival(lo, hi);
                        t.check().or_else(|e| self.err(e.to_string()))?;
                        Ok(t)
                    }
                    "Ord" => {
                        self.expect("(")?;
                        let a = self.ord()?;
                        self.expect(")")?;
                        if a.is_zero() {
                            return self.err("Ord(0) is empty");
                        }
                        Ok(OrderTerm::Ord(a))
                    }
                    "rev" => {
                        self.expect("(")?;
                        let t = self.term()?;
                        self.expect(")")?;
                        Ok(OrderTerm::rev(t))
                    }
                    "zsum" => {
                        self.expect("(")?;
                        let neg = self.term()?;
                        self.expect(";")?;
                        let prefix = self.term_list(";")?;
                        self.expect(";")?;
                        let cycle = self.term_list(")")?;
                        self.expect(")")?;
                        if cycle.is_empty() {
                            return self.err("zsum cycle must be nonempty");
                        }
                        Ok(OrderTerm::ZSum(Box::new(ZSumSpec { neg, prefix, cycle })))
                    }
                    _ => {
                        self.pos = start;
                        self.err(format!("unknown atom `{id}`"))
                    }
                }
            }
        }
    }

    fn term_list(&mut self, end: &str) -> PResult<Vec<OrderTerm>> {
        let mut out = Vec::new();
        self.skip_ws();
        if self.rest().starts_with(end) {
            return Ok(out);
        }
        out.push(self.term()?);
        while self.eat(",") {
            out.push(self.term()?);
        }
        Ok(out)
    }

    fn circ(&mut self) -> PResult<CircTerm> {
        self.expect("C[")?;
        let t = self.term()?;
        self.expect("]")?;
        Ok(CircTerm(t))
    }

    fn fincirc(&mut self) -> PResult<FinCirc> {
        self.expect("cyc(")?;
        let mut seq = Vec::new();
        if !self.eat(")") {
            seq.push(self.nat()? as usize);
            while self.eat(",") {
                seq.push(self.nat()? as usize);
            }
            self.expect(")")?;
        }
        FinCirc::from_cycle(&seq).or_else(|e| self.err(e.to_string()))
    }

    // arcs and knots

    fn piece(&mut self) -> PResult<ArcAtom> {
        let start = self.pos;
        let Some(id) = self.ident() else {
            return self.err("expected an arc piece");
        };
        match id {
            "triv" => Ok(ArcAtom::Trivial),
            "p" => Ok(ArcAtom::Prime(self.nat()? as u32)),
            "bsum" => Ok(ArcAtom::BSum { set: self.set()?, repeated: false }),
            "rep" => {
                self.expect("{")?;
                let i = self.nat()?;
                self.expect("}")?;
                Ok(ArcAtom::BSum { set: SetDesc::finite(&[i]), repeated: true })
            }
            "isum" => Ok(ArcAtom::ISum(self.set()?)),
            "sing" => {
                self.expect("(")?;
                let t = self.term()?;
                self.expect(";")?;
                let s = self.set()?;
                self.expect(")")?;
                Ok(ArcAtom::OrderSing(t, s))
            }
            _ => {
                self.pos = start;
                self.err(format!("unknown arc piece `{id}`"))
            }
        }
    }

    fn pieces(&mut self) -> PResult<Vec<ArcAtom>> {
        let mut out = vec![self.piece()?];
        while self.eat("+") {
            out.push(self.piece()?);
        }
        Ok(out)
    }

    fn value(&mut self) -> PResult<Value> {
        self.skip_ws();
        let r = self.rest();
        if r.starts_with("C[") {
            return Ok(Value::Circ(self.circ()?));
        }
        if r.starts_with("cyc(") {
            return Ok(Value::FinCirc(self.fincirc()?));
        }
        for (kw, kind) in [("arc:", 0), ("knot:", 1), ("koa:", 2), ("fknot:", 3)] {
            if r.starts_with(kw) {
                self.pos += kw.len();
                return Ok(match kind {
                    0 => Value::Arc(arc_from(self.pieces()?, self)?),
                    1 => Value::Knot(KnotDescriptor::circularize(&arc_from(self.pieces()?, self)?)),
                    2 => Value::Knot(KnotDescriptor::knot_of_arc(&arc_from(self.pieces()?, self)?)),
                    _ => Value::Knot(KnotDescriptor::f_knot(self.circ()?)),
                });
            }
        }
        Ok(Value::Term(self.term()?))
    }
}

fn arc_from(atoms: Vec<ArcAtom>, p: &Parser<'_>) -> PResult<ArcDescriptor> {
    ArcDescriptor::new(atoms).or_else(|e| p.err(e.to_string()))
}

fn finish<T>(src: &str, f: impl FnOnce(&mut Parser<'_>) -> PResult<T>) -> PResult<T> {
    let mut p = Parser::new(src);
    let v = f(&mut p)?;
    p.done()?;
    Ok(v)
}

pub fn parse_term(src: &str) -> Result<OrderTerm, ParseError> {
    finish(src, |p| p.term())
}

pub fn parse_circ(src: &str) -> Result<CircTerm, ParseError> {
    finish(src, |p| p.circ())
}

pub fn parse_ordinal(src: &str) -> Result<Ordinal, ParseError> {
    finish(src, |p| p.ord())
}

pub fn parse_set(src: &str) -> Result<SetDesc, ParseError> {
    finish(src, |p| p.set())
}

pub fn parse_rational(src: &str) -> Result<Q, ParseError> {
    finish(src, |p| p.rational())
}

pub fn parse_value(src: &str) -> Result<Value, ParseError> {
    finish(src, |p| p.value())
}

// printing

fn print_ord_exp(a: &Ordinal) -> String {
    if a.is_finite() || *a == Ordinal::omega() {
        a.to_string()
    } else {
        format!("({a})")
    }
}

fn print_factor(t: &OrderTerm, right: bool) -> String {
    match t {
        OrderTerm::Sum(_) => format!("({})", print_term(t)),
        OrderTerm::Prod(..) if right => format!("({})", print_term(t)),
        OrderTerm::OmegaStar => "(w*)".to_string(),
        _ => print_term(t),
    }
}

pub fn print_term(t: &OrderTerm) -> String {
    use OrderTerm::*;
    match t {
        Fin(n) => n.to_string(),
        Omega => "w".into(),
        OmegaStar => "w*".into(),
        Zeta => "z".into(),
        Eta => "e".into(),
        Sum(parts) => parts
            .iter()
            .map(|p| match p {
                Sum(_) => format!("({})", print_term(p)),
                _ => print_term(p),
            })
            .collect::<Vec<_>>()
            .join(" + "),
        Prod(l, r) => format!("{}*{}", print_factor(l, false), print_factor(r, true)),
        Rev(inner) => format!("rev({})", print_term(inner)),
        ZPow(a) => format!("Z^{}", print_ord_exp(a)),
        ZPowOf(inner) => format!("Z^{{{}}}", print_term(inner)),
        Shuffle(s) => format!("shuffle{s}"),
        Ival(lo, hi) => format!("ival({lo},{hi})"),
        Ord(a) => format!("Ord({a})"),
        ZSum(z) => {
            let list = |v: &[OrderTerm]| v.iter().map(print_term).collect::<Vec<_>>().join(", ");
            format!("zsum({}; {}; {})", print_term(&z.neg), list(&z.prefix), list(&z.cycle))
        }
    }
}

pub fn print_atom(a: &ArcAtom) -> String {
    match a {
        ArcAtom::Trivial => "triv".into(),
        ArcAtom::Prime(i) => format!("p{i}"),
        ArcAtom::BSum { set, repeated: false } => format!("bsum{set}"),
        ArcAtom::BSum { set, repeated: true } => {
            format!("rep{{{}}}", set.least().expect("repeated sums name one prime"))
        }
        ArcAtom::ISum(s) => format!("isum{s}"),
        ArcAtom::OrderSing(t, s) => format!("sing({}; {s})", print_term(t)),
    }
}

pub fn print_pieces(atoms: &[ArcAtom]) -> String {
    atoms.iter().map(print_atom).collect::<Vec<_>>().join(" + ")
}

pub fn print_value(v: &Value) -> String {
    match v {
        Value::Term(t) => print_term(t),
        Value::Circ(c) => c.to_string(),
        Value::FinCirc(c) => c.to_string(),
        Value::Arc(a) => a.to_string(),
        Value::Knot(k) => k.to_string(),
    }
}

impl std::fmt::Display for KnotOrigin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KnotOrigin::Circularize => "circularize",
            KnotOrigin::KnotOfArc => "knot_of_arc",
            KnotOrigin::FKnot => "f_knot",
        })
    }
}
