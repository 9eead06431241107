//! Eventually periodic subsets of ℕ.

use std::fmt;

use num_integer::Integer;

use crate::error::TermError;

/// The set spelled by `pre` followed by `per` repeated forever.
///
/// Values are kept in a canonical form: the period is primitive and the
/// preperiod is as short as possible, so structural equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetDesc {
    pre: Vec<bool>,
    per: Vec<bool>,
}

impl SetDesc {
    pub fn new(pre: Vec<bool>, per: Vec<bool>) -> Result<Self, TermError> {
        if per.is_empty() {
            return Err(TermError::EmptyPeriod);
        }
        Ok(SetDesc { pre, per }.canonical())
    }

    pub fn empty() -> Self {
        SetDesc { pre: vec![], per: vec![false] }
    }

    pub fn finite(elems: &[u64]) -> Self {
        let len = elems.iter().max().map_or(0, |m| m + 1) as usize;
        let mut pre = vec![false; len];
        for &e in elems {
            pre[e as usize] = true;
        }
        SetDesc { pre, per: vec![false] }.canonical()
    }

    /// {n : n mod m ∈ residues}. Requires m ≥ 1.
    pub fn residues(residues: &[u64], m: u64) -> Result<Self, TermError> {
        if m == 0 {
            return Err(TermError::EmptyPeriod);
        }
        let mut per = vec![false; m as usize];
        for &r in residues {
            per[(r % m) as usize] = true;
        }
        Ok(SetDesc { pre: vec![], per }.canonical())
    }

    /// All naturals ≥ k.
    pub fn from(k: u64) -> Self {
        SetDesc { pre: vec![false; k as usize], per: vec![true] }.canonical()
    }

    pub fn preperiod(&self) -> &[bool] {
        &self.pre
    }

    pub fn period(&self) -> &[bool] {
        &self.per
    }

    fn canonical(mut self) -> Self {
        // primitive period
        let n = self.per.len();
        for d in 1..=n {
            if n % d == 0 && (0..n).all(|i| self.per[i] == self.per[i % d]) {
                self.per.truncate(d);
                break;
            }
        }
        // shortest preperiod: absorb trailing pre bits into a rotated period
        while let Some(&last) = self.pre.last() {
            if last == *self.per.last().unwrap() {
                self.pre.pop();
                self.per.rotate_right(1);
            } else {
                break;
            }
        }
        self
    }

    pub fn contains(&self, n: u64) -> bool {
        let n = n as usize;
        if n < self.pre.len() {
            self.pre[n]
        } else {
            self.per[(n - self.pre.len()) % self.per.len()]
        }
    }

    pub fn is_finite(&self) -> bool {
        self.per.iter().all(|b| !b)
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.pre.iter().all(|b| !b)
    }

    /// Elements in increasing order (infinite for infinite sets).
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let bound = if self.is_finite() { self.pre.len() as u64 } else { u64::MAX };
        (0..bound).filter(move |&n| self.contains(n))
    }

    pub fn least(&self) -> Option<u64> {
        self.iter().next()
    }

    /// Largest element of a finite set.
    pub fn greatest(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        (0..self.pre.len()).rev().find(|&i| self.pre[i]).map(|i| i as u64)
    }

    /// Elements below `n`.
    pub fn elements_below(&self, n: u64) -> Vec<u64> {
        (0..n).filter(|&k| self.contains(k)).collect()
    }

    /// The k-th element (0-based) in increasing order.
    pub fn nth(&self, k: usize) -> Option<u64> {
        self.iter().nth(k)
    }

    fn aligned(&self, other: &SetDesc) -> (usize, usize) {
        let p = self.pre.len().max(other.pre.len());
        let q = self.per.len().lcm(&other.per.len());
        (p, q)
    }

    fn combine(&self, other: &SetDesc, op: impl Fn(bool, bool) -> bool) -> SetDesc {
        let (p, q) = self.aligned(other);
        let bit = |i: usize| op(self.contains(i as u64), other.contains(i as u64));
        let pre = (0..p).map(bit).collect();
        let per = (p..p + q).map(bit).collect();
        SetDesc { pre, per }.canonical()
    }

    pub fn intersect(&self, other: &SetDesc) -> SetDesc {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &SetDesc) -> SetDesc {
        self.combine(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &SetDesc) -> SetDesc {
        self.combine(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &SetDesc) -> bool {
        self.difference(other).is_empty()
    }

    /// self ⊆ other up to finitely many exceptions.
    pub fn subset_mod_finite(&self, other: &SetDesc) -> bool {
        self.difference(other).is_finite()
    }

    /// self =* other.
    pub fn eq_mod_finite(&self, other: &SetDesc) -> bool {
        self.subset_mod_finite(other) && other.subset_mod_finite(self)
    }

    /// {n ∈ self : n ≥ k}.
    pub fn restrict_ge(&self, k: u64) -> SetDesc {
        self.intersect(&SetDesc::from(k))
    }

    /// {n·s : s ∈ self} for n ≥ 1.
    pub fn scale(&self, n: u64) -> SetDesc {
        let n = n as usize;
        let bit = |m: usize| m % n == 0 && self.contains((m / n) as u64);
        let p = self.pre.len() * n;
        let q = self.per.len() * n;
        let pre = (0..p).map(bit).collect();
        let per = (p..p + q).map(bit).collect();
        SetDesc { pre, per }.canonical()
    }

    /// True when self = other ∩ [k, ∞) for some k.
    pub fn is_tail_of(&self, other: &SetDesc) -> bool {
        if !self.is_subset(other) {
            return false;
        }
        match self.least() {
            None => true,
            Some(m) => *self == other.restrict_ge(m),
        }
    }
}

impl fmt::Display for SetDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<u64>| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        if self.is_finite() {
            return write!(f, "{{{}}}", join(self.iter().collect()));
        }
        if self.pre.is_empty() {
            let res: Vec<u64> =
                (0..self.per.len()).filter(|&i| self.per[i]).map(|i| i as u64).collect();
            if self.per.len() == 1 {
                return write!(f, "{{0 mod 1}}");
            }
            return write!(f, "{{{} mod {}}}", join(res), self.per.len());
        }
        let bits = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        write!(f, "{{bits {}|{}}}", bits(&self.pre), bits(&self.per))
    }
}

impl fmt::Debug for SetDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetDesc{self}")
    }
}
