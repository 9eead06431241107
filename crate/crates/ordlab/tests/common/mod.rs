//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's decision procedures.

#![allow(dead_code)]

use std::collections::HashMap;

use ordlab::term::OrderTerm;

/// Atoms of a sum word. ζ is spelled ω* + ω.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum W {
    Fin(u64),
    Om,
    OmS,
    Eta,
}

pub fn word(t: &OrderTerm) -> Option<Vec<W>> {
    use OrderTerm as T;
    Some(match t {
        T::Fin(n) => vec![W::Fin(*n)],
        T::Omega => vec![W::Om],
        T::OmegaStar => vec![W::OmS],
        T::Zeta => vec![W::OmS, W::Om],
        T::Eta => vec![W::Eta],
        T::Sum(v) => {
            let mut out = Vec::new();
            for p in v {
                out.extend(word(p)?);
            }
            out
        }
        T::Prod(x, n) => match **n {
            T::Fin(n) => word(x)?.repeat(n as usize),
            _ => return None,
        },
        T::Rev(x) => {
            let mut w = word(x)?;
            w.reverse();
            w.into_iter()
                .map(|a| match a {
                    W::Om => W::OmS,
                    W::OmS => W::Om,
                    a => a,
                })
                .collect()
        }
        _ => return None,
    })
}

/// Isomorphism-preserving merges applied to a fixpoint.
pub fn squash(w: &[W]) -> Vec<W> {
    let mut v: Vec<W> = w.iter().copied().filter(|a| *a != W::Fin(0)).collect();
    loop {
        let mut changed = false;
        let mut out: Vec<W> = Vec::with_capacity(v.len());
        let mut i = 0;
        while i < v.len() {
            let a = v[i];
            let last = out.last().copied();
            match (last, a) {
                (Some(W::Fin(x)), W::Fin(y)) => {
                    *out.last_mut().unwrap() = W::Fin(x + y);
                    changed = true;
                }
                (Some(W::Fin(_)), W::Om) => {
                    *out.last_mut().unwrap() = W::Om;
                    changed = true;
                }
                (Some(W::OmS), W::Fin(_)) => changed = true,
                (Some(W::Eta), W::Eta) => changed = true,
                _ => out.push(a),
            }
            i += 1;
        }
        // η + 1 + η → η
        let mut j = 0;
        let mut out2 = Vec::with_capacity(out.len());
        while j < out.len() {
            if j + 2 < out.len() && out[j] == W::Eta && out[j + 1] == W::Fin(1) && out[j + 2] == W::Eta {
                out2.push(W::Eta);
                j += 3;
                changed = true;
            } else {
                out2.push(out[j]);
                j += 1;
            }
        }
        v = out2;
        if !changed {
            return v;
        }
    }
}

/// Ehrenfeucht–Fraïssé game on sums of atoms. Positions are reduced to a
/// pair of words per gap, by the composition theorem for sums; finite
/// atoms above 2^k - 1 are indistinguishable in k rounds and are capped.
pub struct Ef {
    memo: HashMap<(u32, Vec<W>, Vec<W>), bool>,
}

impl Default for Ef {
    fn default() -> Self {
        Ef { memo: HashMap::new() }
    }
}

fn cap(w: &[W], k: u32) -> Vec<W> {
    let c = (1u64 << k).saturating_sub(1).max(1);
    squash(w).into_iter().map(|a| if let W::Fin(n) = a { W::Fin(n.min(c)) } else { a }).collect()
}

/// Every way of picking one point: (left part, right part), up to k-round equivalence.
fn picks(w: &[W], k: u32) -> Vec<(Vec<W>, Vec<W>)> {
    let bound = 1u64 << k.saturating_sub(1);
    let mut out = Vec::new();
    for (i, a) in w.iter().enumerate() {
        let pre = &w[..i];
        let post = &w[i + 1..];
        let mk = |l: &[W], r: &[W]| {
            let mut x = pre.to_vec();
            x.extend_from_slice(l);
            let mut y = r.to_vec();
            y.extend_from_slice(post);
            (x, y)
        };
        match *a {
            W::Fin(n) => {
                for p in 0..n {
                    out.push(mk(&[W::Fin(p)], &[W::Fin(n - 1 - p)]));
                }
            }
            W::Om => {
                for p in 0..=bound {
                    out.push(mk(&[W::Fin(p)], &[W::Om]));
                }
            }
            W::OmS => {
                for p in 0..=bound {
                    out.push(mk(&[W::OmS], &[W::Fin(p)]));
                }
            }
            W::Eta => out.push(mk(&[W::Eta], &[W::Eta])),
        }
    }
    out
}

impl Ef {
    pub fn equiv(&mut self, k: u32, l: &[W], r: &[W]) -> bool {
        if k == 0 {
            return true;
        }
        let (l, r) = (cap(l, k), cap(r, k));
        if l.is_empty() || r.is_empty() {
            return l.is_empty() == r.is_empty();
        }
        if l == r {
            return true;
        }
        let key = if l <= r { (k, l.clone(), r.clone()) } else { (k, r.clone(), l.clone()) };
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = self.answers(k, &l, &r) && self.answers(k, &r, &l);
        self.memo.insert(key, v);
        v
    }

    fn answers(&mut self, k: u32, l: &[W], r: &[W]) -> bool {
        let rp = picks(r, k - 1);
        picks(l, k - 1)
            .into_iter()
            .all(|(a, b)| rp.iter().any(|(c, d)| self.equiv(k - 1, &a, c) && self.equiv(k - 1, &b, d)))
    }
}

fn fins(k: u64) -> Vec<Vec<W>> {
    (1..=k).map(|m| vec![W::Fin(m)]).collect()
}

/// Nonempty final segments of an atom, up to isomorphism.
fn suffixes(a: W, bound: u64) -> Vec<Vec<W>> {
    match a {
        W::Fin(n) => fins(n),
        W::Om => vec![vec![W::Om]],
        W::OmS => [vec![vec![W::OmS]], fins(bound)].concat(),
        W::Eta => vec![vec![W::Eta], vec![W::Fin(1), W::Eta]],
    }
}

fn prefixes(a: W, bound: u64) -> Vec<Vec<W>> {
    match a {
        W::Fin(n) => fins(n),
        W::Om => [vec![vec![W::Om]], fins(bound)].concat(),
        W::OmS => vec![vec![W::OmS]],
        W::Eta => vec![vec![W::Eta], vec![W::Eta, W::Fin(1)]],
    }
}

fn inner(a: W, bound: u64) -> Vec<Vec<W>> {
    match a {
        W::Fin(n) => fins(n),
        W::Om => [vec![vec![W::Om]], fins(bound)].concat(),
        W::OmS => [vec![vec![W::OmS]], fins(bound)].concat(),
        W::Eta => vec![
            vec![W::Eta],
            vec![W::Fin(1), W::Eta],
            vec![W::Eta, W::Fin(1)],
            vec![W::Fin(1), W::Eta, W::Fin(1)],
            vec![W::Fin(1)],
        ],
    }
}

/// Every nonempty convex subset of a word, as a squashed word, with finite
/// pieces of infinite atoms bounded by `bound`.
pub fn intervals(w: &[W], bound: u64) -> Vec<Vec<W>> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        for p in inner(w[i], bound) {
            out.push(squash(&p));
        }
        for j in i + 1..w.len() {
            for s in suffixes(w[i], bound) {
                for e in prefixes(w[j], bound) {
                    let mut x = s.clone();
                    x.extend_from_slice(&w[i + 1..j]);
                    x.extend(e);
                    out.push(squash(&x));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

// ---------------------------------------------------------------- finite circular orders

/// Cyclic order read off a cycle listing: (x, y, z) holds when the three
/// points occur in this rotation order, or when two of them coincide.
pub fn cyc_rel(seq: &[usize]) -> impl Fn(usize, usize, usize) -> bool + '_ {
    let mut pos = vec![0; seq.len()];
    for (i, &x) in seq.iter().enumerate() {
        pos[x] = i;
    }
    move |x, y, z| {
        if x == y || y == z || x == z {
            return true;
        }
        let (a, b, c) = (pos[x], pos[y], pos[z]);
        (a < b && b < c) || (b < c && c < a) || (c < a && a < b)
    }
}

/// A subset is convex when its points are consecutive along the cycle.
pub fn arc_convex(seq: &[usize], set: &[usize]) -> bool {
    let n = seq.len();
    let inside: Vec<bool> = seq.iter().map(|x| set.contains(x)).collect();
    let k = inside.iter().filter(|&&b| b).count();
    if k == 0 || k == n {
        return true;
    }
    // number of boundaries where membership changes, going around once
    (0..n).filter(|&i| inside[i] != inside[(i + 1) % n]).count() == 2
}

/// Checks a piecewise convex witness against cycle listings of source and target.
pub fn check_pieces(src: &[usize], tgt: &[usize], pieces: &[Vec<usize>], map: &[usize]) -> Result<(), String> {
    let n = src.len();
    if map.len() != n {
        return Err("map length".into());
    }
    let mut seen = vec![false; tgt.len()];
    for &y in map {
        if y >= tgt.len() || seen[y] {
            return Err("map not injective".into());
        }
        seen[y] = true;
    }
    let (cs, ct) = (cyc_rel(src), cyc_rel(tgt));
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if cs(x, y, z) != ct(map[x], map[y], map[z]) {
                    return Err(format!("orientation at {x},{y},{z}"));
                }
            }
        }
    }
    let mut cover = vec![0; n];
    for p in pieces {
        for &x in p {
            if x >= n {
                return Err("piece element out of range".into());
            }
            cover[x] += 1;
        }
        if !arc_convex(src, p) {
            return Err(format!("piece {p:?} not convex"));
        }
        let img: Vec<usize> = p.iter().map(|&x| map[x]).collect();
        if !arc_convex(tgt, &img) {
            return Err(format!("image of {p:?} not convex"));
        }
    }
    if cover.iter().any(|&c| c != 1) {
        return Err("pieces do not partition the source".into());
    }
    Ok(())
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

pub fn shuffled(n: usize, r: &mut impl rand::Rng) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(r);
    v
}

// ---------------------------------------------------------------- corpora

/// Distinct normalized sums of at most `max` atoms from 1, ω, ω*, ζ, η.
pub fn sum_corpus(max: usize) -> Vec<OrderTerm> {
    use std::collections::BTreeMap;
    let atoms = [OrderTerm::Fin(1), OrderTerm::Omega, OrderTerm::OmegaStar, OrderTerm::Zeta, OrderTerm::Eta];
    let mut terms: BTreeMap<String, OrderTerm> = BTreeMap::new();
    let mut cur: Vec<Vec<OrderTerm>> = vec![vec![]];
    for _ in 0..max {
        let mut next = vec![];
        for c in &cur {
            for a in &atoms {
                let mut v = c.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        for v in &next {
            let t = ordlab::normalize::normalize(&OrderTerm::sum(v.clone())).expect("sums normalize");
            terms.insert(t.to_string(), t);
        }
        cur = next;
    }
    terms.into_values().collect()
}

/// An isomorphic respelling: 1 + ω for ω and ω* + 1 for ω*.
pub fn respell(t: &OrderTerm) -> OrderTerm {
    let w = word(t).expect("sum term");
    let mut parts = Vec::new();
    for a in w {
        match a {
            W::Fin(n) => parts.push(OrderTerm::Fin(n)),
            W::Om => parts.extend([OrderTerm::Fin(1), OrderTerm::Omega]),
            W::OmS => parts.extend([OrderTerm::OmegaStar, OrderTerm::Fin(1)]),
            W::Eta => parts.push(OrderTerm::Eta),
        }
    }
    OrderTerm::sum(parts)
}
