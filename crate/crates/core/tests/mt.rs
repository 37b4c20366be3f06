use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use panache::ext::{h1_dim, h2_dim, ExtBetween};
use panache::lie::{galois_dim, is_large_u, u_of};
use panache::linalg::Rat;
use panache::mt::*;
use panache::panachage::{pair_equivalent, CompatiblePair};

fn opts() -> ClassifyOptions {
    ClassifyOptions::default()
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

#[test]
fn ext_dimension_rule_table() {
    assert_eq!(ext_dim_rule(3), ExtDimRule::One);
    assert_eq!(ext_dim_rule(2), ExtDimRule::Zero);
    assert_eq!(ext_dim_rule(1), ExtDimRule::KummerInfinite);
    assert_eq!(ext_dim_rule(0), ExtDimRule::Zero);
    assert_eq!(ext_dim_rule(-3), ExtDimRule::Zero);
    assert_eq!(ext_dim_rule(9), ExtDimRule::One);
}

#[test]
fn model_cohomology_matches_rule() {
    for (t, s) in [(3, 1), (5, 3), (6, 2)] {
        let model = build_mt_model(t, s).unwrap();
        for n in -1..=t {
            let x = model.tate(n);
            assert_eq!(h1_dim(&x), ext_dim_rule(n).model_dim(s), "H^1(Q({n})) in model ({t}, {s})");
            assert_eq!(h2_dim(&x), 0, "H^2(Q({n})) in model ({t}, {s})");
        }
    }
}

#[test]
fn model_parameters_are_checked() {
    assert!(build_mt_model(2, 1).is_err());
    assert!(build_mt_model(5, 0).is_err());
    assert!(build_mt_model(5, 9).is_err());
}

#[test]
fn kummer_canonical_examples() {
    assert_eq!(kummer_canonical(&r(8, 1)).unwrap().value(), r(2, 1));
    assert_eq!(kummer_canonical(&r(4, 9)).unwrap().value(), r(3, 2));
    assert_eq!(kummer_canonical(&r(5, 1)).unwrap().value(), r(5, 1));
    assert_eq!(kummer_canonical(&r(1, 2)).unwrap().value(), r(2, 1));
    assert_eq!(kummer_canonical(&r(12, 1)).unwrap().value(), r(12, 1));
    assert!(kummer_canonical(&r(1, 1)).is_err());
    assert!(kummer_canonical(&r(-2, 1)).is_err());
    assert!(kummer_canonical(&r(0, 1)).is_err());
}

proptest! {
    #[test]
    fn kummer_canonical_is_idempotent(n in 1i64..5000, d in 1i64..5000) {
        prop_assume!(n != d);
        let c = kummer_canonical(&r(n, d)).unwrap();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(kummer_canonical(&c.value()).unwrap(), c);
    }

    #[test]
    fn kummer_canonical_is_constant_on_power_orbits(n in 2i64..60, d in 1i64..60, a in -3i32..=3) {
        prop_assume!(n != d && a != 0);
        let x = r(n, d);
        prop_assert_eq!(kummer_canonical(&x.pow(a)).unwrap(), kummer_canonical(&x).unwrap());
    }
}

#[test]
fn classification_cases() {
    let c = classify_three_dim(4, 1, &opts()).unwrap();
    assert_eq!(c.case, MtCase::I);
    assert_eq!(c.name, "M_{4,2}");
    let c = classify_three_dim(8, 3, &opts()).unwrap();
    assert_eq!(c.case, MtCase::II);
    assert_eq!(c.attached, Some("unique"));
    // n = 2k with both pieces nonsplit: the two letters coincide and their
    // bracket vanishes, so no representative can have large u.
    assert_eq!(classify_three_dim(6, 3, &opts()).unwrap().case, MtCase::Rejected("n = 2k".into()));
    assert_eq!(classify_three_dim(6, 5, &opts()).unwrap().case, MtCase::III);
    assert_eq!(classify_three_dim(4, 2, &opts()).unwrap().case, MtCase::Rejected("n = 2k".into()));
    assert!(matches!(classify_three_dim(5, 1, &opts()).unwrap().case, MtCase::Rejected(_)));
    assert!(matches!(classify_three_dim(5, 3, &opts()).unwrap().case, MtCase::Rejected(_)));
    assert!(classify_three_dim(3, 3, &opts()).is_err());
    assert!(classify_three_dim(3, 0, &opts()).is_err());
}

#[test]
fn representatives_have_large_u_and_galois_dimension_four() {
    for (n, k) in [(4, 1), (6, 1), (8, 3), (8, 5), (6, 5), (8, 7)] {
        let c = classify_three_dim(n, k, &opts()).unwrap();
        let m = c.representative.as_ref().unwrap();
        assert!(is_large_u(m), "({n}, {k})");
        assert_eq!(u_of(m).dim(), 3);
        assert_eq!(galois_dim(m), 4);
        let rep = period_matrix_report(&c).unwrap();
        assert_eq!(rep.galois_dim, 4);
        assert_eq!(rep.independent.len(), 4, "{:?}", rep.independent);
        assert!(rep.matrix.is_upper_triangular());
    }
}

#[test]
fn m_4_2_period_matrix() {
    let c = classify_three_dim(4, 1, &opts()).unwrap();
    let rep = period_matrix_report(&c).unwrap();
    let expected: BTreeSet<String> = ["(2πi)^-4", "(2πi)^-4 ζ(3)", "*", "(2πi)^-1", "(2πi)^-1 log 2", "1"].iter().map(|s| s.to_string()).collect();
    assert_eq!(rep.matrix.nonzero_entries(), expected);
    assert_eq!(rep.matrix.entry_text(0, 0), "(2πi)^-4");
    assert_eq!(rep.matrix.entry_text(2, 2), "1");
    assert!(rep.notes.iter().any(|n| n.contains("Euler")));
    let other = classify_three_dim(4, 1, &ClassifyOptions { r: r(3, 1), ..opts() }).unwrap();
    assert!(!period_matrix_report(&other).unwrap().notes.iter().any(|n| n.contains("Euler")));
}

#[test]
fn z_8_3_period_matrix() {
    let rep = period_matrix_report(&classify_three_dim(8, 3, &opts()).unwrap()).unwrap();
    let e = rep.matrix.nonzero_entries();
    assert!(e.contains("(2πi)^-8 ζ(5)"));
    assert!(e.contains("(2πi)^-3 ζ(3)"));
    assert!(e.contains("*"));
}

#[test]
fn rejected_classification_has_no_period_matrix() {
    assert!(period_matrix_report(&classify_three_dim(4, 2, &opts()).unwrap()).is_err());
}

#[test]
fn case_three_is_dual_to_case_one() {
    for x in [r(2, 1), r(3, 1), r(3, 2)] {
        assert!(duality_check(6, &x, 2).unwrap(), "r = {x}");
    }
    assert!(duality_check(4, &r(5, 1), 3).unwrap());
    assert!(duality_check(5, &r(2, 1), 2).is_err());
}

#[test]
fn kummer_outside_model_rank_is_an_error() {
    assert!(classify_three_dim(4, 1, &ClassifyOptions { r: r(7, 1), ..opts() }).is_err());
    assert!(classify_three_dim(4, 1, &ClassifyOptions { r: r(7, 1), kummer_rank: 4, ..opts() }).is_ok());
}

fn case_one_pair(model: &MtModel, k: &KummerClass, scale: i64) -> CompatiblePair {
    let (b, a, c) = (model.tate(4), model.tate(1), model.tate(0));
    let nb: BTreeMap<_, _> = model.kummer_blocks(k).unwrap().into_iter().map(|(g, m)| (g, m.scale(&Rat::from_int(scale)))).collect();
    CompatiblePair::new(ExtBetween::new(&a, &b, model.zeta_blocks(3).unwrap()).unwrap(), ExtBetween::new(&c, &a, nb).unwrap()).unwrap()
}

#[test]
fn case_one_orbits_match_canonical_classes() {
    let model = build_mt_model(4, 2).unwrap();
    let two = KummerClass::from_exponents([(2, 1)]);
    let three = KummerClass::from_exponents([(3, 1)]);
    let six = KummerClass::from_exponents([(2, 1), (3, 1)]);
    // [4] = 2 [2] and [1/2] = -[2] lie in the orbit of [2].
    assert_eq!(pair_equivalent(&case_one_pair(&model, &two, 1), &case_one_pair(&model, &two, 2)).unwrap().tag(), "equivalent");
    assert_eq!(pair_equivalent(&case_one_pair(&model, &two, 1), &case_one_pair(&model, &two, -1)).unwrap().tag(), "equivalent");
    assert_eq!(pair_equivalent(&case_one_pair(&model, &two, 1), &case_one_pair(&model, &three, 1)).unwrap().tag(), "not_equivalent");
    assert_eq!(pair_equivalent(&case_one_pair(&model, &two, 1), &case_one_pair(&model, &six, 1)).unwrap().tag(), "not_equivalent");
}

#[test]
fn four_dimensional_example() {
    let ex = build_four_dim_example(&r(2, 1), 2).unwrap();
    let ws: BTreeSet<i64> = ex.object.weights().into_iter().collect();
    assert_eq!(ws, [0, -10, -12, -18].into_iter().collect());
    assert!(ex.ia3);
    assert!(ex.large);
    assert_eq!(ex.dim_u, 6);
    assert_eq!(ex.galois_dim, 7);
    assert!(ex.quotient_vs_m_prime.is_yes());
    assert_eq!(ex.smallest_twist, Some(5));
    let rep = report_for(&ex.model, &ex.object, "M~").unwrap();
    assert!(rep.matrix.is_upper_triangular());
    assert_eq!(rep.galois_dim, 7);
    assert_eq!(rep.independent.len(), 7);
}
