//! Acceptance suite: one PASS/FAIL line per criterion, with pinned
//! tolerances and runtime limits. Runs without the test harness so the
//! lines always print.

mod common;

use std::time::{Duration, Instant};

use common::*;
use ordlab::arcknot::{classify_knot, decide_subarc, decide_subknot, ArcAtom, ArcDescriptor, KnotDescriptor, Tameness};
use ordlab::circular::fincirc::FinCirc;
use ordlab::circular::{decide_fin, decide_term, reduce_co, rule_pcvx_fin, CircRel, CoArg, CoMap, RatSeq};
use ordlab::cli::run_args;
use ordlab::condense::condense;
use ordlab::decision::{Certificate, Outcome, Refutation};
use ordlab::dsl::{parse_circ, parse_term, print_term};
use ordlab::embed::{compressibility, decide, is_well_order, reduce_lo, LoMap, Relation, WoAnswer};
use ordlab::rational::Q;
use ordlab::report::Report;
use ordlab::setdesc::SetDesc;
use ordlab::term::{CircTerm, OrderTerm};
use ordlab::verify::verify;
use rand::Rng;

type Res = Result<String, String>;

/// Reports kept for criterion 9.
#[derive(Default)]
struct Reports(Vec<Report>);

impl Reports {
    fn run(&mut self, args: &[&str]) -> Result<Report, String> {
        let r = run_args(args).map_err(|e| format!("{args:?}: {e}"))?;
        self.0.push(r.clone());
        Ok(r)
    }

    fn expect(&mut self, args: &[&str], want: &str) -> Result<(), String> {
        let r = self.run(args)?;
        let got = ordlab::corpus::summary(&r);
        if got == want {
            Ok(())
        } else {
            Err(format!("{args:?}: expected {want}, got {got}"))
        }
    }
}

fn t(s: &str) -> OrderTerm {
    parse_term(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn c(s: &str) -> CircTerm {
    parse_circ(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

// ---------------------------------------------------------------- 1

fn criterion1(rep: &mut Reports) -> Res {
    rep.expect(&["bicvx", "z*w", "w + z*w"], "yes")?;
    rep.expect(&["cvx", "z*w", "w + z*w"], "yes")?;
    rep.expect(&["cvx", "w + z*w", "z*w"], "yes")?;
    rep.expect(&["iso", "z*w", "w + z*w"], "no")?;
    let mut n = 4;
    for l in ["1", "e", "1 + e", "e + 1", "1 + e + 1"] {
        rep.expect(&["cvx", l, "e"], "yes")?;
        n += 1;
    }
    for l in ["2", "w", "w*", "z", "e + 2 + e"] {
        rep.expect(&["cvx", l, "e"], "no")?;
        n += 1;
    }
    for k in 1..=5 {
        for m in 1..=5 {
            if k != m {
                rep.expect(&["cvx", &format!("{k}*e"), &format!("{m}*e")], "no")?;
                n += 1;
            }
        }
    }
    rep.expect(&["circ", "iso", "C[w + 1]", "C[w]"], "yes")?;
    rep.expect(&["circ", "cvx", "C[z]", "C[z + 1]"], "yes")?;
    rep.expect(&["circ", "cvx", "C[z + 1]", "C[w + 1 + w* + e]"], "yes")?;
    rep.expect(&["circ", "cvx", "C[z]", "C[w + 1 + w* + e]"], "no")?;
    let r = rep.run(&["circ", "pcvx", "C[z]", "C[w + 1 + w* + e]"])?;
    match &r.certificate {
        Some(Certificate::CircPieces { pieces, .. }) if r.outcome == Some(Outcome::Yes) => {
            let mut p = pieces.clone();
            p.sort();
            if p != ["w", "w*"] {
                return Err(format!("repair pieces {p:?}"));
            }
        }
        other => return Err(format!("pcvx repair: {:?} {other:?}", r.outcome)),
    }
    rep.expect(&["circ", "intersect", "cyc(0,1,2,3)", "0,1,2", "2,3,0"], "[[0],[2]]")?;
    n += 6;
    let table = [
        ("w", "LeftOnly"),
        ("w*", "RightOnly"),
        ("z", "Incompressible"),
        ("e", "Bi"),
        ("w + w*", "Bi"),
        ("Z^1", "Incompressible"),
        ("Z^w", "Incompressible"),
        ("Z^(w^2)", "Incompressible"),
    ];
    for (x, class) in table {
        rep.expect(&["classify", x], class)?;
        n += 1;
    }
    for l in ["1", "w", "e", "z", "w + w*"] {
        for (map, class) in [("phi0", "Incompressible"), ("phi1", "LeftOnly"), ("phi2", "RightOnly"), ("phi3", "Bi")] {
            let img = rep.run(&["reduce", map, l])?.value.ok_or("reduce gave no value")?;
            rep.expect(&["classify", &img], class)?;
            n += 1;
        }
    }
    Ok(format!("{n} examples"))
}

// ---------------------------------------------------------------- 2

fn criterion2(rep: &mut Reports) -> Res {
    let corpus = sum_corpus(4);
    let small: Vec<&OrderTerm> = corpus.iter().filter(|x| x.atom_count() <= 2).collect();
    let mut pairs: Vec<(OrderTerm, OrderTerm)> = Vec::new();
    for a in &small {
        for b in &small {
            pairs.push(((*a).clone(), (*b).clone()));
        }
    }
    let mut r = rng(2);
    for _ in 0..3000 {
        let a = &corpus[r.gen_range(0..corpus.len())];
        let b = &corpus[r.gen_range(0..corpus.len())];
        pairs.push((a.clone(), b.clone()));
    }
    for a in corpus.iter().step_by(7) {
        pairs.push((respell(a), a.clone()));
    }
    let mut ef = Ef::default();
    let mut bad = Vec::new();
    for (i, (a, b)) in pairs.iter().enumerate() {
        let (wa, wb) = (word(a).unwrap(), word(b).unwrap());
        let iso = ef.equiv(6, &wa, &wb);
        let cvx = intervals(&squash(&wb), 4).contains(&squash(&wa));
        for (rel, want) in [(Relation::Iso, iso), (Relation::Cvx, cvx)] {
            let d = decide(rel, a, b);
            if d.outcome != Outcome::from_bool(want) {
                bad.push(format!("{rel} {a} | {b}: {} vs oracle {want}", d.outcome));
            }
        }
        if i % 50 == 0 {
            rep.run(&["iso", &a.to_string(), &b.to_string()])?;
            rep.run(&["cvx", &a.to_string(), &b.to_string()])?;
        }
    }
    if bad.is_empty() {
        Ok(format!("{} terms, {} pairs, 0 disagreements", corpus.len(), pairs.len()))
    } else {
        Err(format!("{} disagreements, first: {}", bad.len(), bad[0]))
    }
}

// ---------------------------------------------------------------- 3

fn fin(seq: &[usize]) -> FinCirc {
    FinCirc::from_fn(seq.len(), cyc_rel(seq))
}

fn criterion3(rep: &mut Reports) -> Res {
    let mut r = rng(3);
    let mut checked = 0;
    for n in 1..=7 {
        for m in 1..=7 {
            for _ in 0..3 {
                let (sa, sb) = (shuffled(n, &mut r), shuffled(m, &mut r));
                let (a, b) = (fin(&sa), fin(&sb));
                let search = decide_fin(CircRel::Pcvx, &a, &b).map_err(|e| e.to_string())?;
                let rule = rule_pcvx_fin(&a, &b).map_err(|e| e.to_string())?;
                if search.outcome != rule.outcome || search.outcome != Outcome::from_bool(n <= m) {
                    return Err(format!("{a} -> {b}: search {} rule {}", search.outcome, rule.outcome));
                }
                for d in [&search, &rule] {
                    if let Some(Certificate::FinPcvx(w)) = &d.certificate {
                        check_pieces(&sa, &sb, &w.pieces, &w.map).map_err(|e| format!("{a} -> {b}: {e}"))?;
                    }
                }
                checked += 1;
            }
            if n <= 4 && m <= 5 {
                let (a, b) = (fin(&shuffled(n, &mut r)), fin(&shuffled(m, &mut r)));
                rep.run(&["circ", "pcvx", &a.to_string(), &b.to_string()])?;
            }
        }
    }
    let mut composed = 0;
    while composed < 200 {
        let n = r.gen_range(1..=7);
        let m = r.gen_range(n..=7);
        let k = r.gen_range(m..=7);
        let (sc, sd, se) = (shuffled(n, &mut r), shuffled(m, &mut r), shuffled(k, &mut r));
        let (cc, dd, ee) = (fin(&sc), fin(&sd), fin(&se));
        let w1 = random_witness(&sc, &sd, &mut r);
        let w2 = random_witness(&sd, &se, &mut r);
        check_pieces(&sc, &sd, &w1.pieces, &w1.map)?;
        check_pieces(&sd, &se, &w2.pieces, &w2.map)?;
        let w = ordlab::circular::compose_fin(&cc, &dd, &ee, &w1, &w2).map_err(|e| e.to_string())?;
        check_pieces(&sc, &se, &w.pieces, &w.map).map_err(|e| format!("composed: {e}"))?;
        if composed < 10 {
            rep.run(&["circ", "compose", &cc.to_string(), &dd.to_string(), &ee.to_string()])?;
        }
        composed += 1;
    }
    Ok(format!("{checked} pairs, {composed} compositions"))
}

/// A random piecewise convex embedding: cut the source cycle into random
/// arcs and lay them, in order, onto random disjoint arcs of the target,
/// starting at a random rotation.
fn random_witness(src: &[usize], tgt: &[usize], r: &mut impl Rng) -> ordlab::circular::fincirc::PcvxWitness {
    let (n, m) = (src.len(), tgt.len());
    let start = r.gen_range(0..n);
    let rot: Vec<usize> = (0..n).map(|i| src[(start + i) % n]).collect();
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::new();
    for (i, &x) in rot.iter().enumerate() {
        cur.push(x);
        if i + 1 == n || r.gen_bool(0.3) {
            pieces.push(std::mem::take(&mut cur));
        }
    }
    // spread the spare target points as gaps after random pieces
    let mut gaps = vec![0; pieces.len()];
    for _ in 0..m - n {
        let g = r.gen_range(0..gaps.len());
        gaps[g] += 1;
    }
    let off = r.gen_range(0..m);
    let mut map = vec![0; n];
    let mut pos = off;
    for (p, g) in pieces.iter().zip(&gaps) {
        for &x in p {
            map[x] = tgt[pos % m];
            pos += 1;
        }
        pos += g;
    }
    for p in pieces.iter_mut() {
        p.sort();
    }
    pieces.sort();
    ordlab::circular::fincirc::PcvxWitness { pieces, map }
}

// ---------------------------------------------------------------- 4

fn random_arc(seq: &[usize], r: &mut impl Rng) -> Vec<usize> {
    let n = seq.len();
    let len = r.gen_range(1..=n);
    let s = r.gen_range(0..n);
    let mut v: Vec<usize> = (0..len).map(|i| seq[(s + i) % n]).collect();
    v.sort();
    v
}

/// Random partition of a cycle into consecutive arcs.
fn random_family(seq: &[usize], r: &mut impl Rng) -> Vec<Vec<usize>> {
    let n = seq.len();
    let s = r.gen_range(0..n);
    let mut out = vec![];
    let mut cur = vec![];
    for i in 0..n {
        cur.push(seq[(s + i) % n]);
        if i + 1 == n || r.gen_bool(0.35) {
            out.push(std::mem::take(&mut cur));
        }
    }
    out.retain(|_| r.gen_bool(0.8));
    out
}

fn criterion4(_: &mut Reports) -> Res {
    let mut r = rng(4);
    let mut violations = Vec::new();
    for i in 0..500 {
        let n = r.gen_range(1..=8);
        let seq = shuffled(n, &mut r);
        let c = fin(&seq);
        let a = random_arc(&seq, &mut r);
        let b = random_arc(&seq, &mut r);
        let comp = c.complement(&a);
        if !c.is_convex(&a) || !c.is_convex(&comp) || !arc_convex(&seq, &comp) {
            violations.push(format!("#{i}: complement of {a:?} in {c}"));
        }
        match c.decompose_intersection(&a, &b) {
            Ok(parts) => {
                let mut union: Vec<usize> = parts.concat();
                union.sort();
                let inter: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
                let covers_all = (0..n).all(|x| a.contains(&x) || b.contains(&x));
                if parts.len() > 2 || union != inter || parts.iter().any(|p| !arc_convex(&seq, p)) || (parts.len() == 2 && !covers_all) {
                    violations.push(format!("#{i}: {a:?} ∩ {b:?} in {c} gave {parts:?}"));
                }
            }
            Err(e) => violations.push(format!("#{i}: {e}")),
        }
        let (f, g) = (random_family(&seq, &mut r), random_family(&seq, &mut r));
        let bad = f
            .iter()
            .flat_map(|x| g.iter().map(move |y| (x, y)))
            .filter(|(x, y)| !arc_convex(&seq, &x.iter().copied().filter(|e| y.contains(e)).collect::<Vec<_>>()))
            .count();
        if bad > 1 {
            violations.push(format!("#{i}: {bad} non-convex intersections between {f:?} and {g:?}"));
        }
    }
    if violations.is_empty() {
        Ok("500 instances, 0 violations".into())
    } else {
        Err(format!("{} violations, first: {}", violations.len(), violations[0]))
    }
}

// ---------------------------------------------------------------- 5

fn criterion5(rep: &mut Reports) -> Res {
    let corpus = sum_corpus(3);
    let mut r = rng(5);
    let mut pairs = Vec::new();
    while pairs.len() < 70 {
        let a = corpus[r.gen_range(0..corpus.len())].clone();
        let b = corpus[r.gen_range(0..corpus.len())].clone();
        pairs.push((a, b));
    }
    while pairs.len() < 100 {
        let a = corpus[r.gen_range(0..corpus.len())].clone();
        pairs.push((respell(&a), a));
    }
    let mut bad = Vec::new();
    let (mut yes, mut checked) = (0, 0);
    for (a, b) in &pairs {
        let iso = decide(Relation::Iso, a, b).outcome;
        if iso == Outcome::Unknown {
            return Err(format!("iso undecided on {a} | {b}"));
        }
        yes += usize::from(iso == Outcome::Yes);
        for m in [LoMap::Phi0, LoMap::Phi1, LoMap::Phi2, LoMap::Phi3] {
            let (x, y) = (reduce_lo(m, &[a.clone()]).unwrap(), reduce_lo(m, &[b.clone()]).unwrap());
            for rel in [Relation::Iso, Relation::Cvx] {
                let o = decide(rel, &x, &y).outcome;
                if o != iso {
                    bad.push(format!("{m:?} {rel}: {x} | {y} gave {o}, iso {iso}"));
                }
                checked += 1;
            }
        }
        for (m, rel) in [(CoMap::CircIso, CircRel::IsoC), (CoMap::CircPcvx, CircRel::Pcvx)] {
            let x = reduce_co(m, CoArg::Term(a.clone())).unwrap();
            let y = reduce_co(m, CoArg::Term(b.clone())).unwrap();
            let o = decide_term(rel, &x, &y).outcome;
            if o != iso {
                bad.push(format!("{m:?}: {x} | {y} gave {o}, iso {iso}"));
            }
            checked += 1;
        }
    }
    let (x, y) = (&pairs[0].0, &pairs[0].1);
    rep.run(&["cvx", &print_term(&reduce_lo(LoMap::Phi1, &[x.clone()]).unwrap()), &print_term(&reduce_lo(LoMap::Phi1, &[y.clone()]).unwrap())])?;
    let wos = ["1", "w", "Ord(w^2)", "w + 3", "Ord(w^3 + w)"];
    let nons = ["e", "z", "w*", "w + w*", "1 + e"];
    let mut psi = 0;
    for l in ["w", "e", "1", "z"] {
        for u in wos.iter().chain(&nons) {
            if psi == 20 {
                break;
            }
            let wo = match is_well_order(&t(u)) {
                WoAnswer::Yes(_) => true,
                WoAnswer::No => false,
                WoAnswer::Unknown => return Err(format!("well-orderedness of {u} undecided")),
            };
            let img = reduce_lo(LoMap::Psi, &[t(l), t(u)]).unwrap();
            let left = compressibility(&img).left();
            if left != Some(!wo) {
                bad.push(format!("psi({l}, {u}) left compressible {left:?}, well order {wo}"));
            }
            psi += 1;
        }
    }
    if bad.is_empty() {
        Ok(format!("100 pairs ({yes} isomorphic), {checked} image checks, {psi} psi pairs"))
    } else {
        Err(format!("{} mismatches, first: {}", bad.len(), bad[0]))
    }
}

// ---------------------------------------------------------------- 6

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn label(z: &ordlab::term::ZSumSpec, n: u64) -> String {
    z.seq(n).to_string()
}

/// Brute-force shift search over small offsets on long windows.
fn shift_oracle(x: &CircTerm, y: &CircTerm) -> bool {
    let (OrderTerm::ZSum(a), OrderTerm::ZSum(b)) = (&x.0, &y.0) else { return false };
    (0..24).any(|n| (0..24).any(|m| (0..120).all(|k| label(a, n + k) == label(b, m + k))))
}

fn criterion6(rep: &mut Reports) -> Res {
    let mut r = rng(6);
    let mut bad = Vec::new();
    let labels: Vec<Q> = (0..8).map(|i| q(i, 2)).collect();
    let pick = |r: &mut rand_chacha::ChaCha8Rng, len: std::ops::RangeInclusive<usize>, from: &[Q]| -> Vec<Q> {
        let len = r.gen_range(len);
        (0..len).map(|_| from[r.gen_range(0..from.len())]).collect()
    };
    for i in 0..40 {
        let matching = i < 20;
        let cx = pick(&mut r, 1..=3, &labels[..4]);
        let cy = if matching {
            let rot = r.gen_range(0..cx.len());
            let mut v: Vec<Q> = (0..cx.len()).map(|j| cx[(j + rot) % cx.len()]).collect();
            if r.gen_bool(0.3) {
                v = [v.clone(), v].concat();
            }
            v
        } else {
            // labels from a disjoint range: the dense parts differ
            pick(&mut r, 1..=3, &labels[4..])
        };
        let px = pick(&mut r, 0..=3, &labels);
        let py = pick(&mut r, 0..=3, &labels);
        let x = reduce_co(CoMap::E1, CoArg::Seq(RatSeq { prefix: px, cycle: cx })).unwrap();
        let y = reduce_co(CoMap::E1, CoArg::Seq(RatSeq { prefix: py, cycle: cy })).unwrap();
        let oracle = shift_oracle(&x, &y) && shift_oracle(&y, &x);
        if oracle != matching {
            bad.push(format!("oracle disagrees with the construction on {x} | {y}"));
        }
        for (a, b) in [(&x, &y), (&y, &x)] {
            let d = decide_term(CircRel::Pcvx, a, b);
            if d.outcome != Outcome::from_bool(matching) {
                bad.push(format!("pcvx {a} | {b}: {}", d.outcome));
            }
            if matching && !matches!(d.certificate, Some(Certificate::E1Shift { .. })) {
                bad.push(format!("no shift certificate for {a} | {b}"));
            }
            if !matching && !matches!(d.certificate, Some(Certificate::Refuted(Refutation::E1Tail { .. }))) {
                bad.push(format!("no tail refutation for {a} | {b}"));
            }
        }
        if i % 5 == 0 {
            rep.run(&["circ", "pcvx", &x.to_string(), &y.to_string()])?;
        }
    }
    if bad.is_empty() {
        Ok("20 matching and 20 distinct tail pairs, both directions".into())
    } else {
        Err(format!("{} errors, first: {}", bad.len(), bad[0]))
    }
}

// ---------------------------------------------------------------- 7

fn shuffle_family() -> Vec<SetDesc> {
    vec![
        SetDesc::finite(&[1]),
        SetDesc::finite(&[2]),
        SetDesc::finite(&[3]),
        SetDesc::finite(&[1, 2]),
        SetDesc::finite(&[1, 3]),
        SetDesc::finite(&[2, 3]),
        SetDesc::finite(&[1, 2, 3]),
        SetDesc::residues(&[1], 2).unwrap(),
        SetDesc::residues(&[2], 3).unwrap(),
        SetDesc::residues(&[2], 4).unwrap(),
    ]
}

fn criterion7(rep: &mut Reports) -> Res {
    let corpus = sum_corpus(4);
    let mut r = rng(7);
    let mut bad = Vec::new();
    for _ in 0..50 {
        let l = &corpus[r.gen_range(0..corpus.len())];
        let lifted = OrderTerm::prod(OrderTerm::Zeta, l.clone());
        match condense(&lifted) {
            Ok(p) => {
                let sk = word(&p.skeleton_form().to_term());
                if sk.as_deref().map(squash) != Some(squash(&word(l).unwrap())) {
                    bad.push(format!("skeleton of z*({l}) is {}", p.skeleton_form()));
                }
            }
            Err(e) => bad.push(format!("condense z*({l}): {e}")),
        }
    }
    let fam = shuffle_family();
    let mut pairs = 0;
    for i in 0..fam.len() {
        for j in i + 1..fam.len() {
            let (a, b) = (OrderTerm::Shuffle(fam[i].clone()), OrderTerm::Shuffle(fam[j].clone()));
            for (x, y) in [(&a, &b), (&b, &a)] {
                let d = decide(Relation::Cvx, x, y);
                if d.outcome != Outcome::No || !matches!(d.certificate, Some(Certificate::Refuted(_))) {
                    bad.push(format!("{x} vs {y}: {} {:?}", d.outcome, d.certificate));
                }
            }
            if i == 0 || j == i + 1 {
                rep.run(&["cvx", &a.to_string(), &b.to_string()])?;
            }
            pairs += 1;
        }
    }
    if bad.is_empty() {
        Ok(format!("50 skeletons, {pairs} antichain pairs refuted both ways"))
    } else {
        Err(format!("{} errors, first: {}", bad.len(), bad[0]))
    }
}

// ---------------------------------------------------------------- 8

fn arc(atoms: Vec<ArcAtom>) -> ArcDescriptor {
    ArcDescriptor::new(atoms).expect("valid descriptor")
}

fn bsum(s: SetDesc) -> ArcAtom {
    ArcAtom::BSum { set: s, repeated: false }
}

/// Eventually periodic sets given by bit lists, with membership computed here.
fn bits_set(pre: &[u8], per: &[u8]) -> (SetDesc, impl Fn(u64) -> bool) {
    let (p, q): (Vec<bool>, Vec<bool>) = (pre.iter().map(|&b| b == 1).collect(), per.iter().map(|&b| b == 1).collect());
    let s = SetDesc::new(p.clone(), q.clone()).unwrap();
    (s, move |n: u64| if (n as usize) < p.len() { p[n as usize] } else { q[(n as usize - p.len()) % q.len()] })
}

fn criterion8(rep: &mut Reports) -> Res {
    let mut bad = Vec::new();
    let mut r = rng(8);
    // prime against boundary sums
    for i in 0..20 {
        let per: Vec<u8> = (0..r.gen_range(1..=4)).map(|_| r.gen_range(0..=1)).collect();
        let per = if per.contains(&1) { per } else { vec![1] };
        let pre: Vec<u8> = (0..r.gen_range(0..=3)).map(|_| r.gen_range(0..=1)).collect();
        let (s, member) = bits_set(&pre, &per);
        let p = r.gen_range(0..8u32);
        let d = decide_subarc(&arc(vec![ArcAtom::Prime(p)]), &arc(vec![bsum(s.clone())]));
        if d.outcome != Outcome::from_bool(member(p as u64)) {
            bad.push(format!("p{p} vs bsum{s}: {}", d.outcome));
        }
        if i < 3 {
            rep.run(&["arc", "sub", &format!("arc: p{p}"), &format!("arc: bsum{s}")])?;
        }
    }
    // strictly decreasing chain
    let g = |k: u64| arc(vec![bsum(SetDesc::from(k))]);
    for k in 0..=6 {
        for k2 in k + 1..=6 {
            if decide_subarc(&g(k2), &g(k)).outcome != Outcome::Yes || decide_subarc(&g(k), &g(k2)).outcome != Outcome::No {
                bad.push(format!("chain at {k} < {k2}"));
            }
        }
    }
    rep.run(&["arc", "sub", &format!("arc: bsum{}", SetDesc::from(3)), &format!("arc: bsum{}", SetDesc::from(1))])?;
    // K*_S pairs
    for i in 0..20 {
        let per: Vec<u8> = (0..r.gen_range(1..=3)).map(|_| r.gen_range(0..=1)).collect();
        let per = if per.contains(&1) { per } else { vec![0, 1] };
        let (pre0, pre1): (Vec<u8>, Vec<u8>) =
            ((0..r.gen_range(0..=3)).map(|_| r.gen_range(0..=1)).collect(), (0..r.gen_range(0..=3)).map(|_| r.gen_range(0..=1)).collect());
        let per1 = if i % 2 == 0 { per.clone() } else { per.iter().rev().cloned().collect() };
        let (s0, m0) = bits_set(&pre0, &per);
        let (s1, m1) = bits_set(&pre1, &per1);
        let star = (20..200).all(|n| m0(n) == m1(n));
        let (k0, k1) = (KnotDescriptor::k_star(s0.clone()).unwrap(), KnotDescriptor::k_star(s1.clone()).unwrap());
        let d = decide_subknot(&k0, &k1);
        if d.outcome != Outcome::from_bool(star) {
            bad.push(format!("K*{s0} vs K*{s1}: {} but =* is {star}", d.outcome));
        }
        if i < 3 {
            rep.run(&["knot", "sub", &format!("knot: isum{s0}"), &format!("knot: isum{s1}")])?;
        }
    }
    // tame iff below the trivial knot
    let pieces = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<ArcAtom> {
        (0..r.gen_range(1..=3))
            .map(|_| match r.gen_range(0..6) {
                0 => ArcAtom::Trivial,
                1 | 2 => ArcAtom::Prime(r.gen_range(0..5)),
                3 => bsum(SetDesc::residues(&[r.gen_range(0..2)], 2).unwrap()),
                4 => ArcAtom::ISum(SetDesc::from(r.gen_range(0..4))),
                _ => ArcAtom::OrderSing(OrderTerm::Eta, SetDesc::from(0)),
            })
            .collect()
    };
    let trivial = KnotDescriptor::trivial();
    for i in 0..30 {
        let a = arc(pieces(&mut r));
        let k = if i % 2 == 0 { KnotDescriptor::circularize(&a) } else { KnotDescriptor::knot_of_arc(&a) };
        let tame = classify_knot(&k) == Tameness::Tame;
        let below = decide_subknot(&k, &trivial).outcome == Outcome::Yes;
        if tame != below || tame != a.is_tame() {
            bad.push(format!("{k}: tame {tame}, below trivial {below}"));
        }
        if i < 3 {
            rep.run(&["knot", "sub", &k.to_string(), "knot: triv"])?;
        }
    }
    // f_knot delegation
    let circs = ["C[z]", "C[w + 1 + w* + e]", "C[w]", "C[w + 1]", "C[e]", "C[1 + z*w]", "C[z + 1]", "C[3]", "C[Ord(w^2)]", "C[w*]"];
    let mut n = 0;
    'outer: for a in circs {
        for b in circs {
            if a == b {
                continue;
            }
            if n == 30 {
                break 'outer;
            }
            let (x, y) = (c(a), c(b));
            let direct = decide_term(CircRel::Pcvx, &x, &y);
            let via = decide_subknot(&KnotDescriptor::f_knot(x), &KnotDescriptor::f_knot(y));
            if direct.outcome != via.outcome {
                bad.push(format!("f_knot {a} vs {b}: {} vs {}", via.outcome, direct.outcome));
            }
            if n < 3 {
                rep.run(&["knot", "sub", &format!("fknot: {a}"), &format!("fknot: {b}")])?;
            }
            n += 1;
        }
    }
    if bad.is_empty() {
        Ok("20 prime/sum, chain k <= 6, 20 K* pairs, 30 tameness, 30 delegation".into())
    } else {
        Err(format!("{} errors, first: {}", bad.len(), bad[0]))
    }
}

// ---------------------------------------------------------------- 9

fn mutate(r: &Report, f: impl FnOnce(&mut Certificate)) -> Report {
    let mut m = r.clone();
    f(m.certificate.as_mut().expect("certificate to mutate"));
    m
}

fn criterion9(rep: &mut Reports) -> Res {
    let mut extra = Reports::default();
    let probes_src: Vec<Vec<&str>> = vec![
        vec!["cvx", "z*w", "w + z*w"],
        vec!["iso", "w + 1", "1 + w + 1"],
        vec!["iso", "z*w", "w + z*w"],
        vec!["circ", "cvx", "cyc(0,1,2)", "cyc(0,1,2,3)"],
        vec!["circ", "pcvx", "cyc(0,2,1,3)", "cyc(0,1,2,3,4)"],
        vec!["circ", "pcvx", "C[z]", "C[w + 1 + w* + e]"],
        vec!["bicvx", "z*w", "w + z*w"],
        vec!["classify", "w"],
        vec!["embed", "w + w", "w + w* + w"],
        vec!["arc", "sub", "arc: p2", "arc: bsum{2 mod 3}"],
    ];
    let mut base = Vec::new();
    for p in &probes_src {
        base.push(extra.run(p)?);
    }
    let e1 = run_args(&["reduce", "e1", "1/2", "0,1"]).map_err(|e| e.to_string())?.value.unwrap();
    let e2 = run_args(&["reduce", "e1", "3", "1,0"]).map_err(|e| e.to_string())?.value.unwrap();
    base.push(extra.run(&["circ", "pcvx", &e1, &e2])?);
    let mut failures = Vec::new();
    let all: Vec<&Report> = rep.0.iter().chain(&extra.0).collect();
    let mut certified = 0;
    for r in &all {
        certified += usize::from(r.certificate.is_some());
        if let Err(e) = verify(r) {
            failures.push(format!("{:?}: {e}", r.command));
        }
    }
    let mutants: Vec<(&str, Report)> = vec![
        ("convex left", mutate(&base[0], |c| if let Certificate::Convex { left, .. } = c { *left = "w*".into() })),
        ("same form", mutate(&base[1], |c| if let Certificate::SameForm { form } = c { *form = "w + 2".into() })),
        ("distinct forms", mutate(&base[2], |c| if let Certificate::DistinctForms { target, .. } = c { *target = "z*w".into() })),
        ("finite map", mutate(&base[3], |c| if let Certificate::FinMap { map } = c { map.swap(0, 1) })),
        ("pcvx piece", mutate(&base[4], |c| if let Certificate::FinPcvx(w) = c { w.map.swap(0, 2) })),
        ("circular gap", mutate(&base[5], |c| if let Certificate::CircPieces { gaps, .. } = c { gaps[0] = "1".into() })),
        ("pair backward", mutate(&base[6], |c| if let Certificate::Pair { backward, .. } = c { **backward = Certificate::Convex { left: "w".into(), right: "0".into() } })),
        ("compression side", mutate(&base[7], |c| if let Certificate::Compressible { side, .. } = c { *side = "right".into() })),
        ("atom map", mutate(&base[8], |c| if let Certificate::AtomMap { assignment, .. } = c { assignment.reverse() })),
        ("rule evidence", mutate(&base[9], |c| if let Certificate::Rule { evidence, .. } = c { evidence.push('x') })),
        ("e1 shift", mutate(&base[10], |c| if let Certificate::E1Shift { n_bar, .. } = c { *n_bar += 1 })),
    ];
    let mut accepted = Vec::new();
    for (name, m) in &mutants {
        if Some(&m.certificate) == base.iter().find(|b| b.command == m.command).map(|b| &b.certificate) {
            accepted.push(format!("{name}: mutation did not apply"));
        } else if verify(m).is_ok() {
            accepted.push(format!("{name}: mutated certificate accepted"));
        }
    }
    if failures.is_empty() && accepted.is_empty() {
        Ok(format!("{} reports ({certified} certificates) verified, {} mutation probes rejected", all.len(), mutants.len()))
    } else {
        Err(format!("{} verify failures, {} probe problems; {}", failures.len(), accepted.len(), failures.iter().chain(&accepted).next().unwrap()))
    }
}

// ---------------------------------------------------------------- driver

fn main() {
    type Crit = fn(&mut Reports) -> Res;
    let criteria: [(u32, &str, Crit, u64); 9] = [
        (1, "worked examples", criterion1, 10),
        (2, "oracle agreement", criterion2, 60),
        (3, "finite circular brute force", criterion3, 120),
        (4, "circular convexity", criterion4, 30),
        (5, "reduction coherence", criterion5, 60),
        (6, "E1 construction", criterion6, 30),
        (7, "condensation", criterion7, 30),
        (8, "arc/knot calculus", criterion8, 30),
        (9, "witness validation", criterion9, 60),
    ];
    let mut reports = Reports::default();
    let mut ok = true;
    for (n, name, f, limit) in criteria {
        let start = Instant::now();
        let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| f(&mut reports)))
            .unwrap_or_else(|p| Err(format!("panic: {}", p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())));
        let took = start.elapsed();
        let (pass, detail) = match out {
            Ok(d) if took <= Duration::from_secs(limit) => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        ok &= pass;
        println!(
            "criterion {n} ({name}): {} [{:.2}s / limit {limit}s] {detail}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if !ok {
        std::process::exit(1);
    }
}
