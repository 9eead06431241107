//! Countable ordinals below ω^ω^3 in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;

use crate::error::OrdError;

/// An ordinal `ω^e1·c1 + ... + ω^ek·ck` with `e1 > ... > ek` and every `ci ≥ 1`.
///
/// Exponents are restricted to ordinals below ω^3, so every value lies below
/// ω^ω^3. The bound is closed under `+` and `·`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(Ordinal::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// ω^e.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal { terms: vec![(e, 1)] }
    }

    /// Builds from raw CNF terms, checking ordering, coefficients and the cap.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdError> {
        for w in terms.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(OrdError::NotDescending);
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(OrdError::ZeroCoefficient);
        }
        let o = Ordinal { terms };
        if !o.within_cap() {
            return Err(OrdError::AboveCap);
        }
        Ok(o)
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The natural number this ordinal equals, if finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    /// True for 0 and limit ordinals.
    pub fn is_limit_or_zero(&self) -> bool {
        self.terms.last().map_or(true, |(e, _)| !e.is_zero())
    }

    /// Finite part n in α = λ + n with λ a limit or zero.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => *c,
            _ => 0,
        }
    }

    /// Limit part λ in α = λ + n.
    pub fn limit_part(&self) -> Ordinal {
        let mut t = self.terms.clone();
        if t.last().map_or(false, |(e, _)| e.is_zero()) {
            t.pop();
        }
        Ordinal { terms: t }
    }

    /// Exponent of the leading term; zero for zero.
    pub fn leading_exponent(&self) -> Ordinal {
        self.terms.first().map(|(e, _)| e.clone()).unwrap_or_default()
    }

    fn within_cap(&self) -> bool {
        // exponents must be < ω^3: their own exponents are naturals below 3
        self.terms.iter().all(|(e, _)| {
            e.terms.iter().all(|(ee, _)| matches!(ee.as_nat(), Some(k) if k < 3))
        })
    }

    pub fn checked_add(&self, b: &Ordinal) -> Result<Ordinal, OrdError> {
        let Some((lead, _)) = b.terms.first() else {
            return Ok(self.clone());
        };
        let mut out: Vec<(Ordinal, u64)> =
            self.terms.iter().filter(|(e, _)| e >= lead).cloned().collect();
        let mut rest = b.terms.iter();
        if let Some(last) = out.last_mut() {
            if &last.0 == lead {
                let (_, c) = rest.next().expect("b nonempty");
                last.1 = last.1.checked_add(*c).ok_or(OrdError::Overflow)?;
            }
        }
        out.extend(rest.cloned());
        Ok(Ordinal { terms: out })
    }

    pub fn checked_mul(&self, b: &Ordinal) -> Result<Ordinal, OrdError> {
        if self.is_zero() || b.is_zero() {
            return Ok(Ordinal::zero());
        }
        let (a1, c1) = &self.terms[0];
        let mut acc = Ordinal::zero();
        for (e, d) in &b.terms {
            let piece = if e.is_zero() {
                let mut t = self.terms.clone();
                t[0].1 = c1.checked_mul(*d).ok_or(OrdError::Overflow)?;
                Ordinal { terms: t }
            } else {
                Ordinal { terms: vec![(a1.checked_add(e)?, *d)] }
            };
            acc = acc.checked_add(&piece)?;
        }
        if !acc.within_cap() {
            return Err(OrdError::AboveCap);
        }
        Ok(acc)
    }

    /// β with self = other + β, if other ≤ self.
    pub fn checked_sub_left(&self, other: &Ordinal) -> Option<Ordinal> {
        if other > self {
            return None;
        }
        // find first differing position
        let mut i = 0;
        while i < other.terms.len() && other.terms[i] == self.terms[i] {
            i += 1;
        }
        if i == other.terms.len() {
            return Some(Ordinal { terms: self.terms[i..].to_vec() });
        }
        let (oe, oc) = &other.terms[i];
        let (se, sc) = &self.terms[i];
        let mut rest = vec![(se.clone(), if oe == se { sc - oc } else { *sc })];
        rest.extend(self.terms[i + 1..].iter().cloned());
        Some(Ordinal { terms: rest })
    }

    /// Least ω^δ strictly greater than self.
    pub fn next_indecomposable(&self) -> Ordinal {
        if self.is_zero() {
            return Ordinal::one();
        }
        let e = self.leading_exponent();
        let next = e.checked_add(&Ordinal::one()).expect("exponent stays finite-coefficient");
        Ordinal::omega_pow(next)
    }

    /// True when β + γ < self for all β, γ < self.
    pub fn is_additively_indecomposable(&self) -> bool {
        matches!(self.terms.as_slice(), [(_, 1)])
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for &Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: &Ordinal) -> Ordinal {
        self.checked_add(rhs).expect("ordinal addition overflow")
    }
}

impl std::ops::Mul for &Ordinal {
    type Output = Ordinal;
    fn mul(self, rhs: &Ordinal) -> Ordinal {
        self.checked_mul(rhs).expect("ordinal multiplication out of range")
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

fn fmt_exp(e: &Ordinal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.is_finite() || *e == Ordinal::omega() {
        write!(f, "{e}")
    } else {
        write!(f, "({e})")
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "w")?;
            if *e != Ordinal::one() {
                write!(f, "^")?;
                fmt_exp(e, f)?;
            }
            if *c != 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Ordinal {
        Ordinal::omega()
    }

    #[test]
    fn left_absorption() {
        assert_eq!(&Ordinal::one() + &w(), w());
        assert_eq!((&w() + &Ordinal::one()).to_string(), "w+1");
    }

    #[test]
    fn omega_squared() {
        assert_eq!((&w() * &w()).to_string(), "w^2");
        let w2 = &w() * &Ordinal::nat(2);
        assert_eq!(w2.to_string(), "w*2");
        assert_eq!((&Ordinal::nat(2) * &w()).to_string(), "w");
    }

    #[test]
    fn compare() {
        let a = &(&w() * &Ordinal::nat(2)) + &Ordinal::one();
        assert!(a < &w() * &w());
    }

    #[test]
    fn indecomposable() {
        assert_eq!(Ordinal::zero().next_indecomposable(), Ordinal::one());
        let a = &w() + &Ordinal::nat(3);
        assert_eq!(a.next_indecomposable().to_string(), "w^2");
        assert_eq!((&w() * &w()).next_indecomposable().to_string(), "w^3");
        assert_eq!(Ordinal::nat(5).next_indecomposable(), w());
    }

    #[test]
    fn sub_left() {
        let a = &(&w() * &w()) + &Ordinal::nat(3);
        assert_eq!(a.checked_sub_left(&w()), Some(a.clone()));
        assert_eq!(a.checked_sub_left(&(&w() * &w())), Some(Ordinal::nat(3)));
        let b = &w() + &Ordinal::nat(2);
        assert_eq!(b.checked_sub_left(&Ordinal::one()), Some(b.clone()));
        assert_eq!(b.checked_sub_left(&(&w() + &Ordinal::one())), Some(Ordinal::one()));
    }

    #[test]
    fn cap_enforced() {
        let w3 = Ordinal::omega_pow(Ordinal::nat(3));
        assert!(Ordinal::from_terms(vec![(w3, 1)]).is_err());
        let big = Ordinal::from_terms(vec![(Ordinal::nat(2), 7), (Ordinal::zero(), 1)]).unwrap();
        assert!(Ordinal::from_terms(vec![(big, 1)]).is_ok());
    }
}
