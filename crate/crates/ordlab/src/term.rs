//! Terms denoting countable linear orders and circular orders.

use std::fmt;

use crate::error::TermError;
use crate::ordinal::Ordinal;
use crate::rational::Bound;
use crate::setdesc::SetDesc;

/// A term denoting a countable linear order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum OrderTerm {
    Fin(u64),
    Omega,
    OmegaStar,
    Zeta,
    Eta,
    Sum(Vec<OrderTerm>),
    /// Antilexicographic product: `Prod(l, r)` is the sum over `r` of copies of `l`.
    Prod(Box<OrderTerm>, Box<OrderTerm>),
    Rev(Box<OrderTerm>),
    ZPow(Ordinal),
    ZPowOf(Box<OrderTerm>),
    /// The shuffle η_{f_S}: a dense sum of finite blocks whose sizes run over S.
    Shuffle(SetDesc),
    /// Restriction of the canonical shuffle η_f to the rationals of (lo, hi).
    Ival(Bound, Bound),
    Ord(Ordinal),
    /// `Σ_{n<0} neg + Σ_{n≥0} seq_n`, with `seq` given as a finite prefix
    /// followed by a repeating cycle.
    ZSum(Box<ZSumSpec>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZSumSpec {
    pub neg: OrderTerm,
    pub prefix: Vec<OrderTerm>,
    pub cycle: Vec<OrderTerm>,
}

impl ZSumSpec {
    /// The summand at index n ≥ 0.
    pub fn seq(&self, n: u64) -> &OrderTerm {
        let n = n as usize;
        if n < self.prefix.len() {
            &self.prefix[n]
        } else {
            &self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }
}

/// The circular order C[base].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CircTerm(pub OrderTerm);

impl OrderTerm {
    pub fn one() -> Self {
        OrderTerm::Fin(1)
    }

    pub fn sum(parts: Vec<OrderTerm>) -> Self {
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            OrderTerm::Sum(parts)
        }
    }

    pub fn prod(l: OrderTerm, r: OrderTerm) -> Self {
        OrderTerm::Prod(Box::new(l), Box::new(r))
    }

    pub fn rev(t: OrderTerm) -> Self {
        OrderTerm::Rev(Box::new(t))
    }

    pub fn zpow_of(t: OrderTerm) -> Self {
        OrderTerm::ZPowOf(Box::new(t))
    }

    /// ζ·t
    pub fn lift(t: OrderTerm) -> Self {
        OrderTerm::prod(OrderTerm::Zeta, t)
    }

    /// Checks the structural invariants of every node.
    pub fn check(&self) -> Result<(), TermError> {
        use OrderTerm::*;
        match self {
            Fin(0) => Err(TermError::ZeroFin),
            Fin(_) | Omega | OmegaStar | Zeta | Eta | ZPow(_) => Ok(()),
            Sum(parts) => {
                if parts.is_empty() {
                    return Err(TermError::EmptySum);
                }
                parts.iter().try_for_each(OrderTerm::check)
            }
            Prod(l, r) => {
                l.check()?;
                r.check()
            }
            Rev(t) | ZPowOf(t) => t.check(),
            Shuffle(s) => {
                if s.is_empty() || s.contains(0) {
                    Err(TermError::BadShuffleSet(s.to_string()))
                } else {
                    Ok(())
                }
            }
            Ival(lo, hi) => {
                if lo < hi && *lo != Bound::PosInf && *hi != Bound::NegInf {
                    Ok(())
                } else {
                    Err(TermError::EmptyInterval)
                }
            }
            Ord(a) => {
                if a.is_zero() {
                    Err(TermError::Shape("Ord(0) is empty".into()))
                } else {
                    Ok(())
                }
            }
            ZSum(z) => {
                if z.cycle.is_empty() {
                    return Err(TermError::Shape("zsum cycle must be nonempty".into()));
                }
                z.neg.check()?;
                z.prefix.iter().chain(z.cycle.iter()).try_for_each(OrderTerm::check)
            }
        }
    }

    /// Number of atoms (leaves) in the term.
    pub fn atom_count(&self) -> usize {
        use OrderTerm::*;
        match self {
            Sum(p) => p.iter().map(OrderTerm::atom_count).sum(),
            Prod(l, r) => l.atom_count() + r.atom_count(),
            Rev(t) | ZPowOf(t) => t.atom_count(),
            ZSum(z) => {
                z.neg.atom_count()
                    + z.prefix.iter().chain(&z.cycle).map(OrderTerm::atom_count).sum::<usize>()
            }
            _ => 1,
        }
    }

    /// Finite cardinality, or None for infinite denotations.
    pub fn size(&self) -> Option<u64> {
        use OrderTerm::*;
        match self {
            Fin(n) => Some(*n),
            Sum(p) => p.iter().try_fold(0u64, |acc, t| t.size().and_then(|s| acc.checked_add(s))),
            Prod(l, r) => l.size()?.checked_mul(r.size()?),
            Rev(t) => t.size(),
            Ord(a) => a.as_nat(),
            ZPow(a) if a.is_zero() => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for OrderTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::print_term(self))
    }
}

impl fmt::Debug for OrderTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl fmt::Display for CircTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C[{}]", self.0)
    }
}

impl fmt::Debug for CircTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}
