//! Finite circular orders given by an explicit ternary table.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CircError;

/// A ternary relation on {0..n-1}. Construction does not check the axioms;
/// see [`FinCirc::validate`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinCirc {
    n: usize,
    rel: Vec<bool>,
}

/// A piecewise convex embedding between finite circular orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcvxWitness {
    /// Pieces of the source, each listed in cyclic order.
    pub pieces: Vec<Vec<usize>>,
    /// The embedding as a table: `map[x]` is the image of x.
    pub map: Vec<usize>,
}

impl FinCirc {
    pub fn from_fn(n: usize, c: impl Fn(usize, usize, usize) -> bool) -> Self {
        let mut rel = vec![false; n * n * n];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    rel[(x * n + y) * n + z] = c(x, y, z);
                }
            }
        }
        FinCirc { n, rel }
    }

    /// The circular order visiting `seq` in order. `seq` must be a
    /// permutation of 0..n.
    pub fn from_cycle(seq: &[usize]) -> Result<Self, CircError> {
        let n = seq.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &x) in seq.iter().enumerate() {
            if x >= n {
                return Err(CircError::OutOfRange(x, n));
            }
            if pos[x] != usize::MAX {
                return Err(CircError::BadWitness(format!("element {x} repeated in cycle")));
            }
            pos[x] = i;
        }
        Ok(Self::from_fn(n, |x, y, z| linear_c(pos[x], pos[y], pos[z])))
    }

    /// C[n]: the circular order induced by 0 < 1 < ... < n-1.
    pub fn standard(n: usize) -> Self {
        Self::from_fn(n, linear_c)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn c(&self, x: usize, y: usize, z: usize) -> bool {
        self.rel[(x * self.n + y) * self.n + z]
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, v: bool) {
        let n = self.n;
        self.rel[(x * n + y) * n + z] = v;
    }

    /// Checks cyclicity, antisymmetry/reflexivity, transitivity, totality and
    /// the reformulated transitivity, reporting the first violation.
    pub fn validate(&self) -> Result<(), CircError> {
        let n = self.n;
        let fail = |axiom, x, y, z| Err(CircError::Axiom { axiom, triple: [x, y, z] });
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let c = self.c(x, y, z);
                    if c && !self.c(y, z, x) {
                        return fail("cyclicity", x, y, z);
                    }
                    let degenerate = x == y || y == z || z == x;
                    if (c && self.c(y, x, z)) != degenerate {
                        return fail("antisymmetry", x, y, z);
                    }
                    if !c && !self.c(y, x, z) {
                        return fail("totality", x, y, z);
                    }
                    if c {
                        for w in 0..n {
                            if !self.c(x, y, w) && !self.c(w, y, z) {
                                return fail("transitivity", x, y, z);
                            }
                            if x != z && self.c(x, z, w) && !self.c(x, y, w) {
                                return fail("transitivity (reformulated)", x, y, z);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Successor of x in the cyclic order.
    pub fn next(&self, x: usize) -> usize {
        if self.n == 1 {
            return x;
        }
        (0..self.n)
            .find(|&y| y != x && (0..self.n).all(|z| z == x || z == y || !self.c(x, z, y)))
            .unwrap_or(x)
    }

    /// The elements in cyclic order starting at `base`: the linear order
    /// x ≤ y iff C(base, x, y).
    pub fn linearize(&self, base: usize) -> Result<Vec<usize>, CircError> {
        if base >= self.n {
            return Err(CircError::OutOfRange(base, self.n));
        }
        let mut out = vec![base];
        let mut x = self.next(base);
        while x != base && out.len() < self.n {
            out.push(x);
            x = self.next(x);
        }
        Ok(out)
    }

    /// The arc [x, y] = {t : C(x, t, y)}.
    pub fn arc(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.n).filter(|&t| self.c(x, t, y)).collect()
    }

    fn check_range(&self, a: &[usize]) -> Result<(), CircError> {
        match a.iter().find(|&&x| x >= self.n) {
            Some(&x) => Err(CircError::OutOfRange(x, self.n)),
            None => Ok(()),
        }
    }

    /// A is convex when for all distinct x, y ∈ A one of [x, y], [y, x] lies in A.
    pub fn is_convex(&self, a: &[usize]) -> bool {
        let mut mem = vec![false; self.n];
        for &x in a {
            if x >= self.n {
                return false;
            }
            mem[x] = true;
        }
        let inside = |arc: Vec<usize>| arc.iter().all(|&t| mem[t]);
        a.iter().all(|&x| a.iter().all(|&y| x == y || inside(self.arc(x, y)) || inside(self.arc(y, x))))
    }

    pub fn complement(&self, a: &[usize]) -> Vec<usize> {
        (0..self.n).filter(|x| !a.contains(x)).collect()
    }

    /// Writes A ∩ B as at most two convex subsets, splitting along a point
    /// of A∖B and a point of B∖A when the intersection is not convex.
    pub fn decompose_intersection(
        &self,
        a: &[usize],
        b: &[usize],
    ) -> Result<Vec<Vec<usize>>, CircError> {
        self.check_range(a)?;
        self.check_range(b)?;
        for s in [a, b] {
            if !self.is_convex(s) {
                return Err(CircError::NotConvex(sorted(s)));
            }
        }
        let inter: Vec<usize> = sorted(a).into_iter().filter(|x| b.contains(x)).collect();
        if inter.is_empty() {
            return Ok(vec![]);
        }
        if self.is_convex(&inter) {
            return Ok(vec![inter]);
        }
        let w = *a.iter().find(|x| !b.contains(x)).expect("A not inside B");
        let z = *b.iter().find(|x| !a.contains(x)).expect("B not inside A");
        let a1: Vec<usize> = inter.iter().copied().filter(|&x| self.c(w, x, z)).collect();
        let a2: Vec<usize> = inter.iter().copied().filter(|&x| self.c(z, x, w)).collect();
        let mut out: Vec<Vec<usize>> = [a1, a2].into_iter().filter(|p| !p.is_empty()).collect();
        out.sort();
        Ok(out)
    }

    /// True when `map` is an injective embedding of self into d.
    pub fn is_embedding(&self, d: &FinCirc, map: &[usize]) -> bool {
        if map.len() != self.n || map.iter().any(|&y| y >= d.n) {
            return false;
        }
        let mut seen = vec![false; d.n];
        for &y in map {
            if std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| self.c(x, y, z) == d.c(map[x], map[y], map[z])))
        })
    }

    /// Checks a piecewise convex embedding witness from self into d.
    pub fn validate_witness(&self, d: &FinCirc, w: &PcvxWitness) -> Result<(), CircError> {
        let bad = |m: String| Err(CircError::BadWitness(m));
        let mut owner = vec![usize::MAX; self.n];
        for (i, p) in w.pieces.iter().enumerate() {
            if p.is_empty() {
                return bad(format!("piece {i} is empty"));
            }
            for &x in p {
                if x >= self.n {
                    return bad(format!("element {x} out of range"));
                }
                if owner[x] != usize::MAX {
                    return bad(format!("element {x} lies in two pieces"));
                }
                owner[x] = i;
            }
            if !self.is_convex(p) {
                return bad(format!("piece {i} is not convex"));
            }
        }
        if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
            return bad(format!("element {x} is not covered"));
        }
        if !self.is_embedding(d, &w.map) {
            return bad("map is not an embedding".into());
        }
        for (i, p) in w.pieces.iter().enumerate() {
            let img: Vec<usize> = p.iter().map(|&x| w.map[x]).collect();
            if !d.is_convex(&img) {
                return bad(format!("image of piece {i} is not convex"));
            }
        }
        Ok(())
    }

    /// Splits self into the fewest pieces on which `map` has convex image.
    /// `map` must be an embedding into d.
    pub fn pieces_for(&self, d: &FinCirc, map: &[usize]) -> Vec<Vec<usize>> {
        let order = match self.linearize(0) {
            Ok(o) => o,
            Err(_) => return vec![],
        };
        let n = order.len();
        if n <= 1 {
            return vec![order];
        }
        let breaks: Vec<usize> = (0..n)
            .filter(|&i| map[order[(i + 1) % n]] != d.next(map[order[i]]))
            .collect();
        if breaks.is_empty() {
            return vec![order];
        }
        let mut out = Vec::new();
        for (k, &b) in breaks.iter().enumerate() {
            let end = breaks[(k + 1) % breaks.len()];
            let mut piece = Vec::new();
            let mut i = (b + 1) % n;
            loop {
                piece.push(order[i]);
                if i == end {
                    break;
                }
                i = (i + 1) % n;
            }
            out.push(piece);
        }
        out.sort();
        out
    }

    /// All embeddings of self into d, by backtracking with partial checks.
    pub fn embeddings(&self, d: &FinCirc) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut map = Vec::with_capacity(self.n);
        let mut used = vec![false; d.n];
        self.extend(d, &mut map, &mut used, &mut |m| {
            out.push(m.to_vec());
            true
        });
        out
    }

    fn extend(
        &self,
        d: &FinCirc,
        map: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let k = map.len();
        if k == self.n {
            return visit(map);
        }
        for y in 0..d.n {
            if used[y] {
                continue;
            }
            map.push(y);
            let ok = (0..=k).all(|a| {
                (0..=k).all(|b| self.c(a, b, k) == d.c(map[a], map[b], map[k]))
            });
            if ok {
                used[y] = true;
                let go_on = self.extend(d, map, used, visit);
                used[y] = false;
                if !go_on {
                    map.pop();
                    return false;
                }
            }
            map.pop();
        }
        true
    }

    /// Exhaustive search for a piecewise convex embedding with the fewest
    /// pieces. Ties break toward the lexicographically first map.
    pub fn pcvx_search(&self, d: &FinCirc) -> Option<PcvxWitness> {
        let mut best: Option<PcvxWitness> = None;
        let mut map = Vec::with_capacity(self.n);
        let mut used = vec![false; d.n];
        self.extend(d, &mut map, &mut used, &mut |m| {
            let pieces = self.pieces_for(d, m);
            if best.as_ref().map_or(true, |b| pieces.len() < b.pieces.len()) {
                let done = pieces.len() == 1;
                best = Some(PcvxWitness { pieces, map: m.to_vec() });
                return !done;
            }
            true
        });
        best
    }

    /// A convex embedding (one piece) if any.
    pub fn cvx_search(&self, d: &FinCirc) -> Option<Vec<usize>> {
        self.pcvx_search(d).filter(|w| w.pieces.len() == 1).map(|w| w.map)
    }

    pub fn embed_search(&self, d: &FinCirc) -> Option<Vec<usize>> {
        let mut found = None;
        let mut map = Vec::with_capacity(self.n);
        let mut used = vec![false; d.n];
        self.extend(d, &mut map, &mut used, &mut |m| {
            found = Some(m.to_vec());
            false
        });
        found
    }

    pub fn iso_search(&self, d: &FinCirc) -> Option<Vec<usize>> {
        if self.n != d.n {
            return None;
        }
        self.embed_search(d)
    }

    /// Composes witnesses C → D (`w1`) and D → E (`w2`). The composed map
    /// is an embedding; its pieces are the maximal runs of C whose images
    /// stay consecutive in E. Intersecting pieces directly is not enough: a
    /// convex part of a piece can straddle the seam where that piece's image
    /// starts.
    pub fn compose(
        &self,
        d: &FinCirc,
        e: &FinCirc,
        w1: &PcvxWitness,
        w2: &PcvxWitness,
    ) -> Result<PcvxWitness, CircError> {
        self.validate_witness(d, w1)?;
        d.validate_witness(e, w2)?;
        let map: Vec<usize> = (0..self.n).map(|x| w2.map[w1.map[x]]).collect();
        let w = PcvxWitness { pieces: self.pieces_for(e, &map), map };
        self.validate_witness(e, &w)?;
        Ok(w)
    }

    pub fn identity_witness(&self) -> PcvxWitness {
        PcvxWitness { pieces: vec![(0..self.n).collect()], map: (0..self.n).collect() }
    }

    /// The cyclic sequence from 0, if the table is a circular order.
    pub fn cycle(&self) -> Option<Vec<usize>> {
        self.validate().ok()?;
        if self.n == 0 {
            return Some(vec![]);
        }
        self.linearize(0).ok()
    }
}

/// C(x, y, z) in the circular order induced by the usual order on indices.
pub fn linear_c(x: usize, y: usize, z: usize) -> bool {
    (x <= y && y <= z) || (y <= z && z <= x) || (z <= x && x <= y)
}

fn sorted(a: &[usize]) -> Vec<usize> {
    let mut v = a.to_vec();
    v.sort();
    v.dedup();
    v
}

impl fmt::Display for FinCirc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cycle() {
            Some(c) => {
                let s: Vec<String> = c.iter().map(usize::to_string).collect();
                write!(f, "cyc({})", s.join(","))
            }
            None => write!(f, "<invalid circular table of size {}>", self.n),
        }
    }
}

impl fmt::Debug for FinCirc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_is_valid() {
        assert!(FinCirc::standard(3).validate().is_ok());
        assert!(FinCirc::standard(6).validate().is_ok());
    }

    #[test]
    fn antisymmetry_violation() {
        let mut c = FinCirc::standard(3);
        c.set(1, 0, 2, true);
        let err = c.validate().unwrap_err();
        assert!(matches!(err, CircError::Axiom { axiom: "antisymmetry", .. }), "{err}");
    }

    #[test]
    fn linearize_rotates() {
        assert_eq!(FinCirc::standard(4).linearize(2).unwrap(), vec![2, 3, 0, 1]);
    }

    #[test]
    fn intersection_of_two_arcs() {
        let c = FinCirc::standard(4);
        let parts = c.decompose_intersection(&[0, 1, 2], &[2, 3, 0]).unwrap();
        assert_eq!(parts, vec![vec![0], vec![2]]);
        assert_eq!(c.decompose_intersection(&[1], &[0, 1, 2]).unwrap(), vec![vec![1]]);
        assert!(c.decompose_intersection(&[0, 2], &[1]).is_err());
    }

    #[test]
    fn pcvx_minimal_pieces() {
        let c = FinCirc::standard(3);
        let d = FinCirc::from_cycle(&[0, 3, 1, 4, 2]).unwrap();
        let w = c.pcvx_search(&d).unwrap();
        assert!(c.validate_witness(&d, &w).is_ok());
        assert_eq!(w.pieces.len(), 1);
        assert!(FinCirc::standard(4).pcvx_search(&c).is_none());
    }

    #[test]
    fn display_cycle() {
        let d = FinCirc::from_cycle(&[0, 2, 1]).unwrap();
        assert_eq!(d.to_string(), "cyc(0,2,1)");
    }
}
