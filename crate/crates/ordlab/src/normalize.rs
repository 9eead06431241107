//! Term-level rewriting to a canonical shape.

use crate::error::TermError;
use crate::ordinal::Ordinal;
use crate::setdesc::SetDesc;
use crate::term::{OrderTerm, ZSumSpec};

/// Normalizes a term. The result denotes an isomorphic order and
/// `normalize(normalize(t)) == normalize(t)`.
pub fn normalize(t: &OrderTerm) -> Result<OrderTerm, TermError> {
    t.check()?;
    Ok(norm(t))
}

fn norm(t: &OrderTerm) -> OrderTerm {
    use OrderTerm::*;
    match t {
        Fin(_) | Omega | OmegaStar | Zeta | Eta | Ival(..) => t.clone(),
        Ord(a) => ord_term(a.clone()),
        ZPow(a) if a.is_zero() => Fin(1),
        ZPow(a) if *a == Ordinal::one() => Zeta,
        ZPow(_) => t.clone(),
        Shuffle(s) if *s == SetDesc::finite(&[1]) => Eta,
        Shuffle(_) => t.clone(),
        Rev(inner) => reverse(norm(inner)),
        Sum(parts) => merge_sum(parts.iter().map(norm).collect()),
        Prod(l, r) => product(norm(l), norm(r)),
        ZPowOf(inner) => OrderTerm::zpow_of(norm(inner)),
        ZSum(z) => ZSum(Box::new(ZSumSpec {
            neg: norm(&z.neg),
            prefix: z.prefix.iter().map(norm).collect(),
            cycle: z.cycle.iter().map(norm).collect(),
        })),
    }
}

/// Ord(n) is Fin(n) and Ord(ω) is Omega.
pub fn ord_term(a: Ordinal) -> OrderTerm {
    if let Some(n) = a.as_nat() {
        OrderTerm::Fin(n)
    } else if a == Ordinal::omega() {
        OrderTerm::Omega
    } else {
        OrderTerm::Ord(a)
    }
}

fn as_ordinal(t: &OrderTerm) -> Option<Ordinal> {
    match t {
        OrderTerm::Fin(n) => Some(Ordinal::nat(*n)),
        OrderTerm::Omega => Some(Ordinal::omega()),
        OrderTerm::Ord(a) => Some(a.clone()),
        _ => None,
    }
}

/// Reverses a normalized term, pushing the reversal toward atoms.
fn reverse(t: OrderTerm) -> OrderTerm {
    use OrderTerm::*;
    match t {
        Fin(_) | Zeta | Eta | ZPow(_) | ZPowOf(_) | Shuffle(_) => t,
        Omega => OmegaStar,
        OmegaStar => Omega,
        Rev(inner) => *inner,
        Sum(parts) => merge_sum(parts.into_iter().rev().map(reverse).collect()),
        Prod(l, r) => product(reverse(*l), reverse(*r)),
        Ord(_) | Ival(..) | ZSum(_) => Rev(Box::new(t)),
    }
}

fn product(l: OrderTerm, r: OrderTerm) -> OrderTerm {
    use OrderTerm::*;
    match (l, r) {
        (Fin(1), r) => r,
        (l, Fin(1)) => l,
        (Fin(a), Fin(b)) => Fin(a * b),
        (Fin(_), Omega) => Omega,
        (Fin(_), OmegaStar) => OmegaStar,
        (Fin(_), Zeta) => Zeta,
        (Fin(n), Eta) => Shuffle(SetDesc::finite(&[n])),
        (l, Sum(parts)) => merge_sum(parts.into_iter().map(|p| product(l.clone(), p)).collect()),
        (l, r) => match (as_ordinal(&l), as_ordinal(&r)) {
            (Some(a), Some(b)) if matches!(l, Ord(_)) || matches!(r, Ord(_)) => match a.checked_mul(&b) {
                Ok(p) => ord_term(p),
                Err(_) => OrderTerm::prod(l, r),
            },
            _ => OrderTerm::prod(l, r),
        },
    }
}

fn combine(a: &OrderTerm, b: &OrderTerm) -> Option<OrderTerm> {
    use OrderTerm::*;
    match (a, b) {
        (Fin(x), Fin(y)) => Some(Fin(x + y)),
        (Fin(_), Omega) => Some(Omega),
        (OmegaStar, Fin(_)) => Some(OmegaStar),
        (Eta, Eta) => Some(Eta),
        (Shuffle(s), Shuffle(t)) if s == t => Some(a.clone()),
        _ => {
            // ordinal arithmetic whenever an explicit Ord node takes part
            if !matches!(a, Ord(_)) && !matches!(b, Ord(_)) {
                return None;
            }
            let (x, y) = (as_ordinal(a)?, as_ordinal(b)?);
            x.checked_add(&y).ok().map(ord_term)
        }
    }
}

fn merge_sum(parts: Vec<OrderTerm>) -> OrderTerm {
    let mut stack: Vec<OrderTerm> = Vec::new();
    let mut queue: Vec<OrderTerm> = Vec::new();
    for p in parts.into_iter().rev() {
        queue.push(p);
    }
    while let Some(p) = queue.pop() {
        if let OrderTerm::Sum(inner) = p {
            for q in inner.into_iter().rev() {
                queue.push(q);
            }
            continue;
        }
        // X + k + X collapses for dense blocks X containing k as a block size
        if let [.., x, OrderTerm::Fin(k)] = stack.as_slice() {
            let absorbs = match (x, &p) {
                (OrderTerm::Eta, OrderTerm::Eta) => *k == 1,
                (OrderTerm::Shuffle(s), OrderTerm::Shuffle(t)) => s == t && s.contains(*k),
                _ => false,
            };
            if absorbs {
                stack.pop();
                continue;
            }
        }
        match stack.last().and_then(|top| combine(top, &p)) {
            Some(m) => {
                stack.pop();
                queue.push(m);
            }
            None => stack.push(p),
        }
    }
    OrderTerm::sum(stack)
}
