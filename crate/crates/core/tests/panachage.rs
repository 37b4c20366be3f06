mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::*;
use panache::ext::{e_p_class, yoneda_compose, ExtBetween, ExtClass};
use panache::group::GroupPresentation;
use panache::lie::u_of;
use panache::linalg::{Mat, Rat};
use panache::panachage::*;
use panache::rep::{is_isomorphic, simple_character, unit_object, IsoVerdict};

fn pair(l: (i64, i64), n: (i64, i64)) -> CompatiblePair {
    let (l, n) = rank_two_pair(l, n);
    CompatiblePair::new(l, n).unwrap()
}

fn scaled(p: &CompatiblePair, sl: i64, sn: i64) -> CompatiblePair {
    let scale = |e: &ExtBetween, s: i64| -> BTreeMap<usize, Mat> {
        e.class.cocycle.keys().map(|&g| (g, e.block(g).scale(&Rat::from_int(s)))).collect()
    };
    CompatiblePair::new(ExtBetween::new(p.a(), p.b(), scale(&p.l, sl)).unwrap(), ExtBetween::new(p.c(), p.a(), scale(&p.n, sn)).unwrap()).unwrap()
}

#[test]
fn compatible_pair_blends_into_a_valid_diagram() {
    let out = blend(&pair((1, 0), (2, 0))).unwrap();
    let d = out.diagram().expect("pair is compatible");
    let check = d.validate();
    assert!(check.ok(), "{check:?}");
    assert!(d.graded_pieces().unwrap().iter().all(IsoVerdict::is_yes));
    assert_eq!(d.m().dim(), 3);
}

#[test]
fn obstructed_pair_carries_certificate_and_yoneda_class() {
    match blend(&pair((1, 0), (0, 1))).unwrap() {
        BlendOutcome::Obstructed { yoneda, system, rhs, certificate } => {
            assert!(!yoneda.vanishes());
            assert!(panache::linalg::verify_infeasibility(&system, &rhs, &certificate));
        }
        BlendOutcome::Blended(_) => panic!("expected obstruction"),
    }
}

#[test]
fn blend_succeeds_exactly_when_yoneda_vanishes() {
    for l0 in -1..=1 {
        for l1 in -1..=1 {
            for n0 in -1..=1 {
                for n1 in -1..=1 {
                    let p = pair((l0, l1), (n0, n1));
                    let y = yoneda_compose(&p.l, &p.n).unwrap();
                    let b = blend(&p).unwrap();
                    assert_eq!(y.vanishes(), b.diagram().is_some(), "L=({l0},{l1}) N=({n0},{n1})");
                    if let Some(d) = b.diagram() {
                        assert!(d.validate().ok());
                    }
                }
            }
        }
    }
}

#[test]
fn split_n_always_blends() {
    for l in [(1, 0), (0, 1), (3, -2)] {
        assert!(blend(&pair(l, (0, 0))).unwrap().diagram().is_some());
    }
}

#[test]
fn attached_object_is_unique_without_ext_between_ends() {
    let v = attached_unique(&pair((1, 1), (2, 2))).unwrap();
    assert_eq!(v.tag(), "unique");
    assert_eq!(attached_unique(&pair((1, 0), (0, 1))).unwrap().tag(), "not_compatible");
}

#[test]
fn attached_object_is_not_unique_when_corner_has_extensions() {
    // A degree-two generator makes Ext^1(Q(0), Q(2)) one-dimensional.
    let p = tate_abelian(&[1, 1, 2]);
    let (a, b, c) = (simple_character(&p, &[1]), simple_character(&p, &[2]), unit_object(&p));
    let one = |v: i64| Mat::from_i64(&[&[v]]);
    let l = ExtBetween::new(&a, &b, [(0, one(1))].into_iter().collect()).unwrap();
    let n = ExtBetween::new(&c, &a, [(0, one(1))].into_iter().collect()).unwrap();
    let v = attached_unique(&CompatiblePair::new(l, n).unwrap()).unwrap();
    match v {
        AttachedVerdict::NonUnique { m, other, .. } => assert_ne!(u_of(&m).dim(), u_of(&other).dim()),
        other => panic!("expected non_unique, got {}", other.tag()),
    }
}

#[test]
fn pair_must_be_weight_separated() {
    let p = tate_abelian(&[1]);
    let (a, b) = (simple_character(&p, &[1]), simple_character(&p, &[2]));
    let l = ExtBetween::new(&a, &b, [(0, Mat::from_i64(&[&[1]]))].into_iter().collect()).unwrap();
    // N goes from Q(1) to Q(1): not an extension of a higher weight piece.
    let n = ExtBetween::new(&a, &a, BTreeMap::new()).unwrap();
    assert!(CompatiblePair::new(l, n).is_err());
}

#[test]
fn scaled_pairs_are_equivalent_with_explicit_triple() {
    let p1 = pair((1, 1), (1, 1));
    let p2 = scaled(&p1, 2, 3);
    match pair_equivalent(&p1, &p2).unwrap() {
        EquivVerdict::Equivalent(t) => {
            let moved = apply_automorphisms(&p1, &t).unwrap();
            assert_eq!(moved.l.class.cocycle, p2.l.class.cocycle);
            assert_eq!(moved.n.class.cocycle, p2.n.class.cocycle);
            let (m1, m2) = (blend(&p1).unwrap(), blend(&p2).unwrap());
            assert!(is_isomorphic(m1.diagram().unwrap().m(), m2.diagram().unwrap().m()).unwrap().is_yes());
        }
        v => panic!("expected equivalent, got {}", v.tag()),
    }
}

#[test]
fn identical_pairs_are_equivalent() {
    let p1 = pair((2, -1), (1, 0));
    assert_eq!(pair_equivalent(&p1, &p1.clone()).unwrap().tag(), "equivalent");
}

#[test]
fn split_and_nonsplit_pairs_differ() {
    assert_eq!(pair_equivalent(&pair((1, 0), (1, 0)), &pair((0, 0), (1, 0))).unwrap().tag(), "not_equivalent");
}

#[test]
fn non_proportional_classes_are_not_equivalent() {
    assert_eq!(pair_equivalent(&pair((1, 1), (1, 0)), &pair((1, 2), (1, 0))).unwrap().tag(), "not_equivalent");
    // Negative scalings are allowed; ratio signs are solved modulo two.
    assert_eq!(pair_equivalent(&pair((1, 1), (1, 0)), &pair((-1, -1), (1, 0))).unwrap().tag(), "equivalent");
}

#[test]
fn pair_equivalence_rejects_mismatched_objects() {
    let p1 = pair((1, 0), (1, 0));
    let q = tate_abelian(&[1]);
    let (a, b, c) = (simple_character(&q, &[1]), simple_character(&q, &[2]), unit_object(&q));
    let one = Mat::from_i64(&[&[1]]);
    let p2 = CompatiblePair::new(
        ExtBetween::new(&a, &b, [(0, one.clone())].into_iter().collect()).unwrap(),
        ExtBetween::new(&c, &a, [(0, one)].into_iter().collect()).unwrap(),
    )
    .unwrap();
    assert!(pair_equivalent(&p1, &p2).is_err());
}

#[test]
fn equivalence_with_multiplicities_uses_search() {
    // A = Q(1)^2 is not multiplicity free.
    let p = tate_abelian(&[1]);
    let a = panache::rep::pure_object(&p, &[vec![1], vec![1]]);
    let (b, c) = (simple_character(&p, &[2]), unit_object(&p));
    let l = ExtBetween::new(&a, &b, [(0, Mat::from_i64(&[&[1, 0]]))].into_iter().collect()).unwrap();
    let n = ExtBetween::new(&c, &a, [(0, Mat::from_i64(&[&[0], &[1]]))].into_iter().collect()).unwrap();
    let p1 = CompatiblePair::new(l, n).unwrap();
    let p2 = scaled(&p1, 5, -1);
    assert_eq!(pair_equivalent(&p1, &p2).unwrap().tag(), "equivalent");
}

fn m_nr_shaped(n: i64) -> panache::rep::RepObject {
    // Q(n), Q(1), Q(0) with letters of degree 1 and n - 1; their bracket fills the corner.
    let p = tate_free(&[1, n - 1], -2 * n);
    free_object(&p, &[n, 1, 0], &[(0, &[(1, 2, 1)]), (1, &[(0, 1, 1)])])
}

#[test]
fn theorem3_on_mixed_tate_shapes() {
    for n in [4, 6, 8] {
        let m = m_nr_shaped(n);
        let rep = theorem3_verify(&m, -2).unwrap();
        assert!(rep.hypotheses_hold(), "n = {n}: {rep:?}");
        assert!(rep.conclusion_large);
        assert_eq!(rep.dim_u, 3);
        assert!(rep.consistent());
    }
}

#[test]
fn theorem3_semisimple_fails_quotient_hypothesis() {
    let p = tate_abelian(&[1]);
    let m = object(&p, &[2, 1, 0], &[]);
    let rep = theorem3_verify(&m, -2).unwrap();
    assert!(!rep.hyp_quotient_large);
    assert!(!rep.conclusion_large);
    assert!(rep.consistent());
}

#[test]
fn theorem3_preconditions() {
    let p = tate_abelian(&[1]);
    assert!(theorem3_verify(&kummer(), 0).is_err());
    assert!(theorem3_verify(&object(&p, &[1, 0, 0], &[]), -2).is_err());
    assert!(theorem3_verify(&object(&p, &[2, 0], &[]), -2).is_err());
    assert!(theorem3_verify(&kummer(), -2).is_ok());
}

#[test]
fn totally_nonsplit_examples() {
    let k = kummer();
    assert!(is_totally_nonsplit(&e_p_class(&k, -2).unwrap()).unwrap());
    let p = tate_abelian(&[1]);
    let m = object(&p, &[1, 1, 0], &[(0, &[(0, 2, 1)])]);
    let e = e_p_class(&m, -2).unwrap();
    assert!(!is_totally_nonsplit(&e).unwrap());
    assert!(!is_totally_nonsplit(&ExtClass::zero(e.target.clone())).unwrap());
    assert!(is_totally_nonsplit(&ExtClass::zero(k.clone())).is_err());
}

fn pattern(degrees: &[i64], chars: &[i64]) -> SearchPattern {
    SearchPattern { presentation: tate_abelian(degrees), characters: chars.iter().map(|&c| vec![c]).collect() }
}

#[test]
fn search_finds_nonsplit_quotients_with_valid_certificates() {
    let pat = pattern(&[1, 2], &[0, 1, 2]);
    let bounds = SearchBounds { seeds: 0..60, density: 0.8, max_found: 100, workers: 1 };
    match counterexample_search(&pat, &bounds).unwrap() {
        SearchOutcome::Found { instances, log } => {
            assert!(!instances.is_empty());
            assert_eq!(log.theorem_violations, 0);
            for f in &instances {
                assert!(f.certificate.verify());
                assert!(f.certificate.reverify(&f.object).unwrap());
                assert!(!f.ia1_all_q);
                assert!(!f.ia3);
            }
        }
        SearchOutcome::NotFound { log } => panic!("expected instances: {log:?}"),
    }
}

#[test]
fn search_with_ia3_pattern_finds_nothing() {
    let pat = pattern(&[1, 2, 3], &[0, 1, 3]);
    let bounds = SearchBounds { seeds: 0..200, density: 0.8, max_found: 10, workers: 2 };
    let out = counterexample_search(&pat, &bounds).unwrap();
    assert!(matches!(out, SearchOutcome::NotFound { .. }));
    assert_eq!(out.log().ia3_instances, out.log().instances);
    assert!(out.log().split > 0);
}

#[test]
fn search_with_no_seeds_is_trivially_not_found() {
    let bounds = SearchBounds { seeds: 5..5, ..SearchBounds::default() };
    let out = counterexample_search(&pattern(&[1], &[0, 1, 2]), &bounds).unwrap();
    assert!(matches!(out, SearchOutcome::NotFound { .. }));
    assert_eq!(out.log().seeds_tried, 0);
}

#[test]
fn search_is_independent_of_worker_count() {
    let pat = pattern(&[1, 2], &[0, 1, 2]);
    let run = |w| {
        let out = counterexample_search(&pat, &SearchBounds { seeds: 10..70, density: 0.6, max_found: 5, workers: w }).unwrap();
        (out.log().clone(), out.instances().iter().map(|f| (f.seed, f.certificate.p)).collect::<Vec<_>>())
    };
    let base = run(1);
    for w in [2, 3, 7] {
        assert_eq!(run(w), base);
    }
}

#[test]
fn search_over_truncated_free_pattern() {
    let pres: Arc<GroupPresentation> = tate_free(&[1, 2], -4);
    let pat = SearchPattern { presentation: pres, characters: vec![vec![0], vec![1], vec![2]] };
    let out = counterexample_search(&pat, &SearchBounds { seeds: 0..40, density: 0.7, max_found: 40, workers: 2 }).unwrap();
    assert_eq!(out.log().theorem_violations, 0);
    assert!(out.instances().iter().all(|f| f.certificate.verify()));
}
