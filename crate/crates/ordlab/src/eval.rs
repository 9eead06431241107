//! Computable presentations: every term is read as an order on (an initial
//! segment of) ℕ by decoding naturals into structured elements.

use std::cmp::Ordering;
use std::fmt;

use crate::ordinal::Ordinal;
use crate::rational::{self, Q};
use crate::setdesc::SetDesc;
use crate::term::OrderTerm;

/// Cantor pairing.
pub fn pair(a: u64, b: u64) -> u64 {
    let s = a + b;
    s * (s + 1) / 2 + b
}

pub fn unpair(z: u64) -> (u64, u64) {
    let w = (((8.0 * z as f64 + 1.0).sqrt() - 1.0) / 2.0).floor() as u64;
    // correct float rounding
    let mut w = w;
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let b = z - w * (w + 1) / 2;
    (w - b, b)
}

/// ℕ → ℤ: 0, -1, 1, -2, 2, ...
pub fn zigzag(n: u64) -> i64 {
    if n % 2 == 0 {
        (n / 2) as i64
    } else {
        -((n / 2) as i64) - 1
    }
}

pub fn unzigzag(z: i64) -> u64 {
    if z >= 0 {
        (z as u64) * 2
    } else {
        ((-z - 1) as u64) * 2 + 1
    }
}

/// ℕ → ℤ∖{0}: 1, -1, 2, -2, ...
fn nonzero_int(n: u64) -> i64 {
    if n % 2 == 0 {
        (n / 2) as i64 + 1
    } else {
        -((n / 2) as i64) - 1
    }
}

/// A decoded element, mirroring the constructor path through the term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Elem {
    Idx(u64),
    Int(i64),
    Rat(Q),
    Part(usize, Box<Elem>),
    /// Product element: (index in the right factor, position in the left copy).
    Pair(Box<Elem>, Box<Elem>),
    Rev(Box<Elem>),
    /// Point j of the block sitting at rational q.
    Block(Q, u64),
    Ordinal(Ordinal),
    /// Finitely supported map into ℤ, support listed from the top down.
    Supp(Vec<(Elem, i64)>),
    /// Element of summand n of a ℤ-indexed sum.
    ZPart(i64, Box<Elem>),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Idx(k) => write!(f, "{k}"),
            Elem::Int(z) => write!(f, "{z}"),
            Elem::Rat(q) => write!(f, "q{q}"),
            Elem::Part(i, e) => write!(f, "#{i}.{e}"),
            Elem::Pair(r, l) => write!(f, "({l}@{r})"),
            Elem::Rev(e) => write!(f, "rev.{e}"),
            Elem::Block(q, j) => write!(f, "{j}@q{q}"),
            Elem::Ordinal(a) => write!(f, "{a}"),
            Elem::Supp(v) => {
                write!(f, "{{")?;
                for (i, (k, z)) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{k}:{z}")?;
                }
                write!(f, "}}")
            }
            Elem::ZPart(n, e) => write!(f, "z{n}.{e}"),
        }
    }
}

/// Block size of the shuffle η_{f_S} at q.
///
/// Sizes are scheduled by the depth of q in the Stern–Brocot tree; every
/// depth class meets every open interval, so each size in S is dense.
pub fn shuffle_block(s: &SetDesc, q: Q) -> u64 {
    let level = level(q);
    if s.is_finite() {
        let elems: Vec<u64> = s.iter().collect();
        elems[(level % elems.len() as u64) as usize]
    } else {
        let (i, _) = unpair(level);
        s.nth(i as usize).expect("infinite set")
    }
}

fn level(q: Q) -> u64 {
    if q == Q::from_integer(0) {
        return 0;
    }
    let k = rational::calkin_wilf_index(if q < Q::from_integer(0) { -q } else { q }).expect("enumerated rationals are shallow");
    1 + (63 - k.leading_zeros()) as u64
}

fn ival_block(q: Q) -> u64 {
    rational::block_size(q).expect("enumerated rationals are shallow")
}

/// A computable copy of a term's denotation.
#[derive(Clone, Debug)]
pub struct Presentation {
    term: OrderTerm,
}

impl Presentation {
    pub fn new(term: OrderTerm) -> Self {
        Presentation { term }
    }

    pub fn term(&self) -> &OrderTerm {
        &self.term
    }

    /// Number of codes in use; None when every natural is a code.
    pub fn size(&self) -> Option<u64> {
        self.term.size()
    }

    pub fn decode(&self, code: u64) -> Option<Elem> {
        decode(&self.term, code)
    }

    pub fn compare(&self, i: u64, j: u64) -> Option<Ordering> {
        let a = self.decode(i)?;
        let b = self.decode(j)?;
        Some(compare(&self.term, &a, &b))
    }

    pub fn describe(&self, i: u64) -> Option<String> {
        self.decode(i).map(|e| e.to_string())
    }

    /// Codes below n that are in the domain.
    pub fn sample(&self, n: u64) -> Vec<u64> {
        let n = self.size().map_or(n, |s| s.min(n));
        (0..n).collect()
    }
}

/// Decodes ordinals below ω^e for e > 0.
fn decode_pow(e: &Ordinal, code: u64) -> Ordinal {
    debug_assert!(!e.is_zero());
    if e.finite_part() > 0 {
        let prev = e.limit_part().checked_add(&Ordinal::nat(e.finite_part() - 1)).unwrap();
        if prev.is_zero() {
            return Ordinal::nat(code);
        }
        let (n, local) = unpair(code);
        let base = Ordinal::omega_pow(prev.clone()).checked_mul(&Ordinal::nat(n)).unwrap();
        return base.checked_add(&decode_pow(&prev, local)).unwrap();
    }
    let (n, local) = unpair(code);
    let lam = |k: u64| fundamental(e, k);
    let start = if n == 0 { Ordinal::zero() } else { Ordinal::omega_pow(lam(n - 1)) };
    start.checked_add(&decode_pow(&lam(n), local)).unwrap()
}

/// Increasing sequence of successor ordinals ≥ 1 with supremum the limit e < ω^3.
fn fundamental(e: &Ordinal, n: u64) -> Ordinal {
    let coef = |k: u64| {
        e.terms().iter().find(|(x, _)| x.as_nat() == Some(k)).map_or(0, |(_, c)| *c)
    };
    let (a, b) = (coef(2), coef(1));
    let w = Ordinal::omega();
    let w2 = &w * &w;
    if b > 0 {
        let head = &(&w2 * &Ordinal::nat(a)) + &(&w * &Ordinal::nat(b - 1));
        &head + &Ordinal::nat(n + 1)
    } else {
        let head = &(&w2 * &Ordinal::nat(a - 1)) + &(&w * &Ordinal::nat(n));
        &head + &Ordinal::one()
    }
}

/// Decodes ordinals below α (bijective onto {β < α}).
pub fn decode_ordinal(alpha: &Ordinal, code: u64) -> Option<Ordinal> {
    let finite = alpha.finite_part();
    let lim = alpha.limit_part();
    let mut parts: Vec<Ordinal> = Vec::new();
    for (e, c) in lim.terms() {
        for _ in 0..*c {
            parts.push(e.clone());
        }
    }
    if code < finite {
        return Some(&lim + &Ordinal::nat(code));
    }
    if parts.is_empty() {
        return None;
    }
    let c = code - finite;
    let k = parts.len() as u64;
    let (idx, local) = ((c % k) as usize, c / k);
    let mut before = Ordinal::zero();
    for e in &parts[..idx] {
        before = &before + &Ordinal::omega_pow(e.clone());
    }
    Some(&before + &decode_pow(&parts[idx], local))
}

/// Decodes a finitely supported map from keys to ℤ∖{0}.
/// `key_count` bounds the number of keys when finite.
fn decode_support(code: u64, key_count: Option<u64>) -> Option<Vec<(u64, i64)>> {
    if code == 0 {
        return Some(vec![]);
    }
    let c = code - 1;
    let (a, b) = match key_count {
        Some(m) => {
            if m == 0 {
                return None;
            }
            if m >= 63 {
                unpair(c)
            } else {
                let width = (1u64 << m) - 1;
                (c % width, c / width)
            }
        }
        None => unpair(c),
    };
    let mask = a + 1;
    let keys: Vec<u64> = (0..64).filter(|i| (mask >> i) & 1 == 1).collect();
    let vals = untuple(b, keys.len());
    Some(keys.into_iter().zip(vals.into_iter().map(nonzero_int)).collect())
}

/// ℕ → ℕ^m by iterated pairing; m ≥ 1.
fn untuple(mut code: u64, m: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(m);
    for _ in 1..m {
        let (a, b) = unpair(code);
        out.push(a);
        code = b;
    }
    out.push(code);
    out
}

/// Sequential block decoding along an iterator of rationals.
fn decode_blocks(qs: impl Iterator<Item = Q>, size: impl Fn(Q) -> u64, mut code: u64) -> Elem {
    for q in qs {
        let s = size(q);
        if code < s {
            return Elem::Block(q, code);
        }
        code -= s;
    }
    unreachable!("rational enumeration is infinite")
}

pub fn decode(t: &OrderTerm, code: u64) -> Option<Elem> {
    use OrderTerm::*;
    match t {
        Fin(n) => (code < *n).then_some(Elem::Idx(code)),
        Omega | OmegaStar => Some(Elem::Idx(code)),
        Zeta => Some(Elem::Int(zigzag(code))),
        Eta => Some(Elem::Rat(rational::rational_at(code))),
        Sum(parts) => {
            let sizes: Vec<Option<u64>> = parts.iter().map(OrderTerm::size).collect();
            let mut c = code;
            for (i, s) in sizes.iter().enumerate() {
                if let Some(s) = s {
                    if c < *s {
                        return decode(&parts[i], c).map(|e| Elem::Part(i, Box::new(e)));
                    }
                    c -= s;
                }
            }
            let inf: Vec<usize> = (0..parts.len()).filter(|&i| sizes[i].is_none()).collect();
            if inf.is_empty() {
                return None;
            }
            let k = inf.len() as u64;
            let i = inf[(c % k) as usize];
            decode(&parts[i], c / k).map(|e| Elem::Part(i, Box::new(e)))
        }
        Prod(l, r) => {
            let (rc, lc) = match (l.size(), r.size()) {
                (Some(ls), Some(rs)) => {
                    if code >= ls.checked_mul(rs)? {
                        return None;
                    }
                    (code / ls, code % ls)
                }
                (Some(ls), None) => (code / ls, code % ls),
                (None, Some(rs)) => (code % rs, code / rs),
                (None, None) => {
                    let (a, b) = unpair(code);
                    (a, b)
                }
            };
            let re = decode(r, rc)?;
            let le = decode(l, lc)?;
            Some(Elem::Pair(Box::new(re), Box::new(le)))
        }
        Rev(inner) => decode(inner, code).map(|e| Elem::Rev(Box::new(e))),
        Ord(a) => decode_ordinal(a, code).map(Elem::Ordinal),
        ZPow(a) => {
            let keys = a.as_nat();
            let supp = decode_support(code, keys)?;
            let mut v: Vec<(Elem, i64)> = supp
                .into_iter()
                .map(|(k, z)| decode_ordinal(a, k).map(|o| (Elem::Ordinal(o), z)))
                .collect::<Option<_>>()?;
            v.sort_by(|x, y| compare(&Ord(a.clone()), &y.0, &x.0));
            Some(Elem::Supp(v))
        }
        ZPowOf(inner) => {
            let supp = decode_support(code, inner.size())?;
            let mut v: Vec<(Elem, i64)> = supp
                .into_iter()
                .map(|(k, z)| decode(inner, k).map(|e| (e, z)))
                .collect::<Option<_>>()?;
            v.sort_by(|x, y| compare(inner, &y.0, &x.0));
            Some(Elem::Supp(v))
        }
        Shuffle(s) => {
            Some(decode_blocks((0u64..).map(rational::rational_at), |q| shuffle_block(s, q), code))
        }
        Ival(lo, hi) => Some(decode_blocks(rational::rationals_in(*lo, *hi), ival_block, code)),
        ZSum(z) => {
            let (n, local) = unpair(code);
            let n = zigzag(n);
            let part = if n < 0 { &z.neg } else { z.seq(n as u64) };
            decode(part, local).map(|e| Elem::ZPart(n, Box::new(e)))
        }
    }
}

fn compare_supp(keys: &OrderTerm, a: &[(Elem, i64)], b: &[(Elem, i64)]) -> Ordering {
    // both lists sorted from the top key down; the first disagreement decides
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some((_, z)), None) => return z.cmp(&0),
            (None, Some((_, z))) => return 0.cmp(z),
            (Some((ka, za)), Some((kb, zb))) => match compare(keys, ka, kb) {
                Ordering::Greater => return za.cmp(&0),
                Ordering::Less => return 0.cmp(zb),
                Ordering::Equal => {
                    if za != zb {
                        return za.cmp(zb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

/// Compares two elements of the denotation of `t`.
pub fn compare(t: &OrderTerm, a: &Elem, b: &Elem) -> Ordering {
    use OrderTerm::*;
    match (t, a, b) {
        (Fin(_) | Omega, Elem::Idx(x), Elem::Idx(y)) => x.cmp(y),
        (OmegaStar, Elem::Idx(x), Elem::Idx(y)) => y.cmp(x),
        (Zeta, Elem::Int(x), Elem::Int(y)) => x.cmp(y),
        (Eta, Elem::Rat(x), Elem::Rat(y)) => x.cmp(y),
        (Sum(parts), Elem::Part(i, x), Elem::Part(j, y)) => {
            i.cmp(j).then_with(|| compare(&parts[*i], x, y))
        }
        (Prod(l, r), Elem::Pair(ra, la), Elem::Pair(rb, lb)) => {
            compare(r, ra, rb).then_with(|| compare(l, la, lb))
        }
        (Rev(inner), Elem::Rev(x), Elem::Rev(y)) => compare(inner, y, x),
        (Ord(_), Elem::Ordinal(x), Elem::Ordinal(y)) => x.cmp(y),
        (ZPow(al), Elem::Supp(x), Elem::Supp(y)) => compare_supp(&Ord(al.clone()), x, y),
        (ZPowOf(inner), Elem::Supp(x), Elem::Supp(y)) => compare_supp(inner, x, y),
        (Shuffle(_) | Ival(..), Elem::Block(q, i), Elem::Block(p, j)) => {
            q.cmp(p).then(i.cmp(j))
        }
        (ZSum(z), Elem::ZPart(n, x), Elem::ZPart(m, y)) => n.cmp(m).then_with(|| {
            let part = if *n < 0 { &z.neg } else { z.seq(*n as u64) };
            compare(part, x, y)
        }),
        _ => panic!("element does not belong to term {t}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_round_trip() {
        for z in 0..10_000 {
            let (a, b) = unpair(z);
            assert_eq!(pair(a, b), z);
        }
        for n in 0..100 {
            assert_eq!(unzigzag(zigzag(n)), n);
        }
    }

    #[test]
    fn omega_order() {
        let p = Presentation::new(OrderTerm::Omega);
        assert_eq!(p.compare(3, 5), Some(Ordering::Less));
    }

    #[test]
    fn sum_parts_ordered() {
        let p = Presentation::new(OrderTerm::Sum(vec![OrderTerm::Omega, OrderTerm::OmegaStar]));
        for i in 0..50 {
            for j in 0..50 {
                let (a, b) = (p.decode(i).unwrap(), p.decode(j).unwrap());
                if let (Elem::Part(0, _), Elem::Part(1, _)) = (&a, &b) {
                    assert_eq!(p.compare(i, j), Some(Ordering::Less));
                }
            }
        }
    }

    #[test]
    fn ordinal_decoding_is_injective_below_alpha() {
        let w = Ordinal::omega();
        let alpha = &(&(&w * &w) * &Ordinal::nat(2)) + &Ordinal::nat(3);
        let mut seen = std::collections::HashSet::new();
        for c in 0..2000 {
            let b = decode_ordinal(&alpha, c).unwrap();
            assert!(b < alpha);
            assert!(seen.insert(b));
        }
        let small = Ordinal::nat(4);
        assert_eq!(decode_ordinal(&small, 4), None);
        let wpw = Ordinal::omega_pow(w.clone());
        for c in 0..500 {
            assert!(decode_ordinal(&wpw, c).unwrap() < wpw);
        }
    }

    #[test]
    fn zpow_one_is_zeta_like() {
        let p = Presentation::new(OrderTerm::ZPow(Ordinal::one()));
        let e = p.decode(0).unwrap();
        assert_eq!(e, Elem::Supp(vec![]));
        // no minimum among samples: every sampled element has a smaller one
        let codes = p.sample(200);
        for &i in &codes[..20] {
            assert!(codes.iter().any(|&j| p.compare(j, i) == Some(Ordering::Less)));
        }
    }
}
