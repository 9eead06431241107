//! A fixed enumeration of ℚ and the block-size injection built on it.
//!
//! Rationals are listed as 0, cw(1), −cw(1), cw(2), −cw(2), ... where cw is
//! the Calkin–Wilf sequence 1, 1/2, 2, 1/3, 3/2, ... . The injection used by
//! interval shuffles sends q to its index plus 2, so every block has at least
//! two points.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;

use crate::error::TermError;

pub type Q = Rational64;

/// Calkin–Wilf value at 1-based position k.
pub fn calkin_wilf(k: u64) -> Q {
    assert!(k >= 1, "Calkin-Wilf positions start at 1");
    // walk the binary digits of k below the leading one
    let (mut a, mut b) = (1i64, 1i64);
    let bits = 63 - k.leading_zeros();
    for i in (0..bits).rev() {
        if (k >> i) & 1 == 0 {
            b += a;
        } else {
            a += b;
        }
    }
    Q::new(a, b)
}

/// Position of a positive rational in the Calkin–Wilf sequence.
pub fn calkin_wilf_index(q: Q) -> Result<u64, TermError> {
    let too_deep = || TermError::RationalTooDeep(q.to_string());
    if q <= Q::from_integer(0) {
        return Err(TermError::Shape(format!("{q} is not positive")));
    }
    let (mut a, mut b) = (*q.numer(), *q.denom());
    let mut path = Vec::new();
    while (a, b) != (1, 1) {
        if a < b {
            path.push(0u8);
            b -= a;
        } else {
            path.push(1u8);
            a -= b;
        }
        if path.len() > 62 {
            return Err(too_deep());
        }
    }
    let mut k = 1u64;
    for bit in path.into_iter().rev() {
        k = (k << 1) | bit as u64;
    }
    Ok(k)
}

/// The rational at enumeration index `i`.
pub fn rational_at(i: u64) -> Q {
    if i == 0 {
        return Q::from_integer(0);
    }
    let v = calkin_wilf(i.div_ceil(2));
    if i % 2 == 1 {
        v
    } else {
        -v
    }
}

/// Enumeration index of q.
pub fn rank(q: Q) -> Result<u64, TermError> {
    match q.cmp(&Q::from_integer(0)) {
        Ordering::Equal => Ok(0),
        Ordering::Greater => calkin_wilf_index(q)?
            .checked_mul(2)
            .map(|k| k - 1)
            .ok_or_else(|| TermError::RationalTooDeep(q.to_string())),
        Ordering::Less => calkin_wilf_index(-q)?
            .checked_mul(2)
            .ok_or_else(|| TermError::RationalTooDeep(q.to_string())),
    }
}

/// The canonical injection ℚ → {n ≥ 2}.
pub fn block_size(q: Q) -> Result<u64, TermError> {
    rank(q)?.checked_add(2).ok_or_else(|| TermError::RationalTooDeep(q.to_string()))
}

/// Inverse of [`block_size`].
pub fn rational_of_block_size(n: u64) -> Option<Q> {
    n.checked_sub(2).map(rational_at)
}

/// An endpoint of a rational interval.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Bound {
    NegInf,
    Q(Q),
    PosInf,
}

impl Bound {
    pub fn as_q(&self) -> Option<Q> {
        match self {
            Bound::Q(q) => Some(*q),
            _ => None,
        }
    }

    /// q lies strictly above this bound.
    pub fn below(&self, q: Q) -> bool {
        match self {
            Bound::NegInf => true,
            Bound::Q(b) => *b < q,
            Bound::PosInf => false,
        }
    }

    /// q lies strictly below this bound.
    pub fn above(&self, q: Q) -> bool {
        match self {
            Bound::NegInf => false,
            Bound::Q(b) => q < *b,
            Bound::PosInf => true,
        }
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        use Bound::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Q(a), Q(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::PosInf => write!(f, "inf"),
            Bound::Q(q) => write!(f, "{q}"),
        }
    }
}

/// Rationals of the open interval (lo, hi) in enumeration order.
pub fn rationals_in(lo: Bound, hi: Bound) -> impl Iterator<Item = Q> {
    (0u64..).map(rational_at).filter(move |&q| lo.below(q) && hi.above(q))
}
