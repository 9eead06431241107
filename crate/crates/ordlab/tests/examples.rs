//! Worked examples and structural properties checked through the library
//! API, each against a small independent computation.

mod common;

use common::*;
use ordlab::arcknot::{
    arc_sum, classify_knot, decide_subarc, decide_subknot, isolated_order, ArcAtom, ArcDescriptor, KnotDescriptor, Limit, Tameness,
};
use ordlab::circular::fincirc::FinCirc;
use ordlab::circular::{circ_unbounded_witness, decide_term, CircRel};
use ordlab::condense::refute_cvx;
use ordlab::decision::{Certificate, Outcome, Refutation};
use ordlab::dsl::{parse_circ, parse_term};
use ordlab::embed::{decide, infinite_intervals, wo_unbounded_witness, IntervalKind, Relation};
use ordlab::error::CircError;
use ordlab::eval::shuffle_block;
use ordlab::normalize::ord_term;
use ordlab::ordinal::Ordinal;
use ordlab::rational::{rationals_in, Bound, Q};
use ordlab::setdesc::SetDesc;
use ordlab::term::{CircTerm, OrderTerm};
use rand::Rng;

fn t(s: &str) -> OrderTerm {
    parse_term(s).unwrap()
}

fn c(s: &str) -> CircTerm {
    parse_circ(s).unwrap()
}

#[test]
fn shuffle_sizes_meet_every_window() {
    let s = SetDesc::finite(&[2, 3]);
    let mut r = rng(11);
    for _ in 0..100 {
        // enumeration is in Calkin-Wilf order, so windows stay near zero
        let a = Q::new(r.gen_range(-8..8), r.gen_range(1..4));
        let b = a + Q::new(1, r.gen_range(1..5));
        let sizes: Vec<u64> = rationals_in(Bound::Q(a), Bound::Q(b)).take(40).map(|q| shuffle_block(&s, q)).collect();
        assert!(sizes.contains(&2) && sizes.contains(&3), "window ({a}, {b}) has sizes {sizes:?}");
    }
}

#[test]
fn next_indecomposable_by_enumeration() {
    let nat = Ordinal::nat;
    let mut all = vec![];
    for a in 0..3 {
        for b in 0..3 {
            for k in 0..4 {
                let terms = [(2, a), (1, b), (0, k)].into_iter().filter(|(_, m)| *m > 0).map(|(e, m)| (nat(e), m)).collect();
                all.push(Ordinal::from_terms(terms).unwrap());
            }
        }
    }
    let powers: Vec<Ordinal> = (0..4).map(|e| Ordinal::omega_pow(nat(e))).collect();
    for a in &all {
        let least = powers.iter().find(|p| *p > a).unwrap();
        assert_eq!(&a.next_indecomposable(), least, "after {a}");
    }
}

#[test]
fn condensation_refutations() {
    let sh = |s: &[u64]| OrderTerm::Shuffle(SetDesc::finite(s));
    match refute_cvx(&sh(&[1, 2]), &sh(&[1])).unwrap() {
        Some(Refutation::MissingClassSize { class }) => assert_eq!(class, "2"),
        other => panic!("{other:?}"),
    }
    let r = refute_cvx(&t("ival(0,inf)"), &t("ival(5,inf)")).unwrap();
    assert!(matches!(r, Some(Refutation::MissingClassSize { .. })), "{r:?}");
    for x in sum_corpus(3) {
        assert_eq!(refute_cvx(&x, &x).unwrap(), None, "{x} refuted against itself");
    }
}

#[test]
fn interval_classes() {
    let closed = infinite_intervals(&t("w + w*"), IntervalKind::Closed).unwrap();
    assert_eq!(closed.len(), 1);
    assert_eq!(decide(Relation::Iso, &closed[0], &t("w + w*")).outcome, Outcome::Yes);
    assert_eq!(infinite_intervals(&t("w"), IntervalKind::Final).unwrap(), [OrderTerm::Omega]);
    assert!(infinite_intervals(&t("w"), IntervalKind::Initial).unwrap().is_empty());
}

#[test]
fn unbounded_witnesses_satisfy_their_contract() {
    for s in ["Ord(w*2)", "e", "z*w", "w + w*", "3", "Ord(w^2) + e", "w* + Ord(w^2 + 1)"] {
        let x = t(s);
        let a = wo_unbounded_witness(&x).unwrap();
        let longer = OrderTerm::sum(vec![ord_term(a.clone()), OrderTerm::Fin(1)]);
        assert_eq!(decide(Relation::Cvx, &longer, &x).outcome, Outcome::No, "{a} + 1 in {s}");
    }
    assert_eq!(wo_unbounded_witness(&t("Ord(w*2)")).unwrap().to_string(), "w*2");
    for s in ["C[Ord(w)]", "C[e]", "C[Ord(w^2)]", "C[z*w]", "C[w + 1 + w* + e]"] {
        let x = c(s);
        let a = circ_unbounded_witness(&x).unwrap();
        let ord = CircTerm(ord_term(a.clone()));
        assert_eq!(decide_term(CircRel::Pcvx, &ord, &x).outcome, Outcome::No, "C[{a}] into {s}");
    }
}

#[test]
fn circular_axioms_are_checked() {
    assert!(FinCirc::standard(3).validate().is_ok());
    let mut bad = FinCirc::standard(5);
    bad.set(0, 1, 2, false);
    bad.set(0, 2, 1, true);
    assert!(matches!(bad.validate(), Err(CircError::Axiom { .. })));
}

#[test]
fn linearization_round_trip() {
    let mut r = rng(12);
    for _ in 0..20 {
        let n = r.gen_range(1..=8);
        let seq = shuffled(n, &mut r);
        let circ = FinCirc::from_fn(n, cyc_rel(&seq));
        let base = r.gen_range(0..n);
        let line = circ.linearize(base).unwrap();
        assert_eq!(line[0], base);
        let back = FinCirc::from_cycle(&line).unwrap();
        assert!(back.iso_search(&circ).is_some());
        assert_eq!(FinCirc::from_fn(n, cyc_rel(&line)), circ);
    }
    assert_eq!(FinCirc::standard(4).linearize(2).unwrap(), [2, 3, 0, 1]);
}

#[test]
fn composing_with_the_identity() {
    let mut r = rng(13);
    for _ in 0..30 {
        let (n, m) = (r.gen_range(1..=5), r.gen_range(5..=7));
        let a = FinCirc::from_fn(n, cyc_rel(&shuffled(n, &mut r)));
        let b = FinCirc::from_fn(m, cyc_rel(&shuffled(m, &mut r)));
        let w = a.pcvx_search(&b).unwrap();
        let id = a.identity_witness();
        let composed = ordlab::circular::compose_fin(&a, &a, &b, &id, &w).unwrap();
        assert_eq!(composed.map, w.map);
        assert_eq!(composed.pieces, a.pieces_for(&b, &w.map));
    }
}

/// All convex subsets of a cycle, as sorted element lists.
fn convex_subsets(c: &FinCirc) -> Vec<Vec<usize>> {
    let n = c.len();
    let mut out = vec![];
    for x in 0..n {
        for y in 0..n {
            let mut a = c.arc(x, y);
            a.sort();
            out.push(a);
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn convex_images_are_inherited() {
    let mut r = rng(14);
    for _ in 0..60 {
        let (n, m) = (r.gen_range(1..=5), r.gen_range(1..=6));
        let a = FinCirc::from_fn(n, cyc_rel(&shuffled(n, &mut r)));
        let b = FinCirc::from_fn(m, cyc_rel(&shuffled(m, &mut r)));
        let subsets = convex_subsets(&a);
        if let Some(map) = a.cvx_search(&b) {
            let full: Vec<usize> = (0..n).map(|x| map[x]).collect();
            assert!(b.is_convex(&full));
            // arcs crossing the gap of a proper image arc are split, so only onto maps inherit
            for s in subsets.iter().filter(|_| n == m) {
                let img: Vec<usize> = s.iter().map(|&x| map[x]).collect();
                assert!(b.is_convex(&img), "{s:?} under {map:?}");
            }
        }
        if let Some(w) = a.pcvx_search(&b) {
            for p in w.pieces.iter().filter(|p| p.len() < n) {
                for s in subsets.iter().filter(|s| s.iter().all(|x| p.contains(x))) {
                    let img: Vec<usize> = s.iter().map(|&x| w.map[x]).collect();
                    assert!(b.is_convex(&img), "{s:?} inside piece {p:?}");
                }
            }
        }
    }
}

fn family() -> Vec<SetDesc> {
    let f = |v: &[u64]| SetDesc::finite(v);
    vec![
        f(&[1]),
        f(&[2]),
        f(&[3]),
        f(&[1, 2]),
        f(&[1, 3]),
        f(&[2, 3]),
        f(&[1, 2, 3]),
        SetDesc::residues(&[1], 2).unwrap(),
        SetDesc::residues(&[2], 3).unwrap(),
        SetDesc::residues(&[2], 4).unwrap(),
    ]
}

#[test]
fn circular_shuffles_form_an_antichain() {
    let fam = family();
    for (i, s) in fam.iter().enumerate() {
        for (j, u) in fam.iter().enumerate() {
            let (x, y) = (CircTerm(OrderTerm::Shuffle(s.clone())), CircTerm(OrderTerm::Shuffle(u.clone())));
            let d = decide_term(CircRel::Pcvx, &x, &y);
            if i == j {
                assert_eq!(d.outcome, Outcome::Yes);
            } else {
                assert!(matches!(d.certificate, Some(Certificate::Refuted(_))), "{x} into {y}: {:?}", d.certificate);
            }
        }
    }
}

// ---------------------------------------------------------------- arcs and knots

fn arc(v: Vec<ArcAtom>) -> ArcDescriptor {
    ArcDescriptor::new(v).unwrap()
}

fn bsum(s: SetDesc) -> ArcAtom {
    ArcAtom::BSum { set: s, repeated: false }
}

#[test]
fn arc_sums_and_absorption() {
    use ArcAtom::*;
    let s = SetDesc::residues(&[0], 2).unwrap();
    assert_eq!(arc_sum(&[arc(vec![Prime(0)]), arc(vec![Prime(1)])], Limit::None).unwrap().atoms(), [Prime(0), Prime(1)]);
    assert_eq!(arc_sum(&[], Limit::Boundary(s.clone())).unwrap().atoms(), [bsum(s)]);
    assert_eq!(arc(vec![Trivial, Prime(3)]).atoms(), [Prime(3)]);
}

#[test]
fn isolated_singularities() {
    let s = SetDesc::residues(&[1], 3).unwrap();
    let iso = |a: &ArcDescriptor, want: &OrderTerm| decide(Relation::Iso, &isolated_order(a).unwrap(), want).outcome;
    assert_eq!(iso(&arc(vec![bsum(s.clone())]), &OrderTerm::Fin(1)), Outcome::Yes);
    assert_eq!(iso(&arc(vec![ArcAtom::OrderSing(OrderTerm::Eta, s)]), &OrderTerm::Eta), Outcome::Yes);
    assert_eq!(isolated_order(&arc(vec![ArcAtom::Prime(0), ArcAtom::Prime(1)])), None);
}

#[test]
fn knot_constructions() {
    use ArcAtom::*;
    let p0 = arc(vec![Prime(0)]);
    assert_eq!(KnotDescriptor::knot_of_arc(&p0), KnotDescriptor::circularize(&arc(vec![Prime(0), Trivial])));
    let triv = KnotDescriptor::circularize(&ArcDescriptor::trivial());
    assert_eq!(classify_knot(&triv), Tameness::Tame);
    assert_eq!(decide_subknot(&triv, &KnotDescriptor::circularize(&p0)).outcome, Outcome::Yes);
    assert_eq!(classify_knot(&KnotDescriptor::circularize(&arc(vec![Prime(0), Prime(5)]))), Tameness::Tame);
    let wild = KnotDescriptor::circularize(&arc(vec![ISum(SetDesc::from(0))]));
    assert_eq!(classify_knot(&wild), Tameness::Wild);
}

fn arc_corpus() -> Vec<ArcDescriptor> {
    use ArcAtom::*;
    let s = |r: u64, m: u64| SetDesc::residues(&[r], m).unwrap();
    let mut out = vec![ArcDescriptor::trivial()];
    let atoms = vec![
        Prime(0),
        Prime(1),
        Prime(2),
        bsum(SetDesc::from(0)),
        bsum(s(0, 2)),
        bsum(s(1, 2)),
        bsum(s(0, 4)),
        ISum(SetDesc::from(0)),
        ISum(s(0, 2)),
        OrderSing(OrderTerm::Eta, SetDesc::from(0)),
        OrderSing(OrderTerm::Omega, SetDesc::from(0)),
    ];
    for a in &atoms {
        out.push(arc(vec![a.clone()]));
        for b in &atoms {
            out.push(arc(vec![a.clone(), b.clone()]));
        }
    }
    out.sort_by_key(|a| a.to_string());
    out.dedup();
    out
}

#[test]
fn subarc_is_a_quasi_order() {
    let arcs = arc_corpus();
    let yes = |a: &ArcDescriptor, b: &ArcDescriptor| decide_subarc(a, b).outcome == Outcome::Yes;
    for a in &arcs {
        assert!(yes(a, a), "{a} not below itself");
        for b in arcs.iter().filter(|b| yes(a, b)) {
            for c in arcs.iter().filter(|c| yes(b, c)) {
                assert_ne!(decide_subarc(a, c).outcome, Outcome::No, "{a} <= {b} <= {c}");
            }
        }
    }
}

#[test]
fn repeated_prime_sums_are_minimal() {
    let arcs = arc_corpus();
    for p in 0..3u32 {
        let rep = arc(vec![ArcAtom::BSum { set: SetDesc::finite(&[p as u64]), repeated: true }]);
        for a in arcs.iter().filter(|a| !a.is_tame() && *a != &rep) {
            let below = decide_subarc(a, &rep).outcome == Outcome::Yes;
            let above = decide_subarc(&rep, a).outcome == Outcome::Yes;
            assert!(!(below && !above), "{a} strictly below {rep}");
        }
    }
}

#[test]
fn almost_disjoint_sums_are_incomparable() {
    // x_k = numbers whose largest power-of-two divisor is 2^k: pairwise disjoint
    let fam: Vec<SetDesc> = (0..10).map(|k| SetDesc::residues(&[1 << k], 1 << (k + 1)).unwrap()).collect();
    for (i, a) in fam.iter().enumerate() {
        for (j, b) in fam.iter().enumerate() {
            assert!((0..4096).filter(|&n| a.contains(n) && b.contains(n)).count() == 0 || i == j);
            if i != j {
                let (x, y) = (arc(vec![bsum(a.clone())]), arc(vec![bsum(b.clone())]));
                assert_eq!(decide_subarc(&x, &y).outcome, Outcome::No, "{x} vs {y}");
            }
        }
    }
}
