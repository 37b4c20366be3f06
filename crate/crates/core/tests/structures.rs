//! Presentations, representation objects and the Lie algebra `u`, checked
//! against closed-form counts and against each other on the seeded corpus.

mod common;

use common::*;
use panache::group::{free_graded_lie, necklace_count, BracketTable, validate_presentation, Generator, GroupPresentation, Letter};
use panache::io::corpus::{corpus_instance, CorpusConfig};
use panache::lie::{character_lattice, galois_dim, is_large_u, relative_kernel_lie, u_geq_of, u_of, u_p_of, w_minus1_end};
use panache::linalg::{Mat, Rat};
use panache::rep::*;
use proptest::prelude::*;

fn corpus_object(seed: u64) -> Option<RepObject> {
    corpus_instance(seed, &CorpusConfig::default()).ok()
}

#[test]
fn witt_counts() {
    let expected = [2, 1, 2, 3, 6, 9, 18];
    for (d, &e) in expected.iter().enumerate() {
        assert_eq!(necklace_count(2, d as u64 + 1), e, "degree {}", d + 1);
    }
    assert_eq!(necklace_count(3, 4), 18);
}

#[test]
fn free_lie_dimensions_match_witt_formula() {
    for g in 1..=3u64 {
        let letters: Vec<Letter> = (0..g).map(|i| Letter::new(format!("x{i}"), vec![1])).collect();
        let p = free_graded_lie(&[-2], &letters, -10).unwrap();
        validate_presentation(&p).unwrap();
        for d in 1..=5 {
            assert_eq!(p.generators_of_degree(&[d]).len() as u64, necklace_count(g, d as u64), "g = {g}, degree {d}");
        }
        assert!(p.generators_of_degree(&[6]).is_empty());
    }
}

#[test]
fn graded_free_lie_counts_mixed_degrees() {
    // Letters in degrees 1 and 2: degree 3 is spanned by [x,y] and [x,[x,x]] = 0, degree 4 by [x,[x,y]].
    let p = free_graded_lie(&[-1], &[Letter::new("x", vec![1]), Letter::new("y", vec![2])], -4).unwrap();
    assert_eq!(p.generators_of_degree(&[3]).len(), 1);
    assert_eq!(p.generators_of_degree(&[4]).len(), 1);
    validate_presentation(&p).unwrap();
}

#[test]
fn jacobi_violation_is_rejected() {
    let gen = |n: &str, d: i64| Generator { name: n.into(), degree: vec![d] };
    let gens = vec![gen("a", 1), gen("b", 1), gen("c", 1), gen("ab", 2), gen("bc", 2), gen("top", 3)];
    let mut br = BracketTable::new();
    br.insert((0, 1), vec![(3, Rat::one())]);
    br.insert((1, 2), vec![(4, Rat::one())]);
    br.insert((2, 3), vec![(5, Rat::one())]);
    br.insert((0, 4), vec![(5, Rat::one())]);
    // [a,[b,c]] + [b,[c,a]] + [c,[a,b]] = top + 0 + top, which is nonzero.
    let err = GroupPresentation::new(1, vec![-2], gens, br).unwrap_err().to_string();
    assert!(err.to_lowercase().contains("jacobi"), "{err}");
}

#[test]
fn kummer_object_facts() {
    let m = kummer();
    assert_eq!(u_of(&m).dim(), 1);
    assert!(is_large_u(&m));
    assert_eq!(galois_dim(&m), 2);
    assert_eq!(w_sub(&m, -1).dim(), 1);
    assert_eq!(w_quotient(&m, -1).dim(), 1);
    assert!(!is_isomorphic(&m, &gr_object(&m)).unwrap().is_yes());
}

#[test]
fn operations_on_tate_objects() {
    let p = tate_abelian(&[1]);
    let a = simple_character(&p, &[1]);
    let b = simple_character(&p, &[2]);
    let t = tensor_product(&a, &a).unwrap();
    assert!(is_isomorphic(&t, &b).unwrap().is_yes());
    let h = internal_hom(&a, &b).unwrap();
    assert!(is_isomorphic(&h, &a).unwrap().is_yes());
    assert_eq!(dual(&a).character(0), &[-1]);
    assert!(is_isomorphic(&twist(&unit_object(&p), &[1]), &a).unwrap().is_yes());
    assert_eq!(morphism_space(&a, &b).unwrap().dim(), 0);
    assert_eq!(morphism_space(&a, &a).unwrap().dim(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn corpus_objects_are_valid_and_filtered(seed in 0u64..5000) {
        let Some(m) = corpus_object(seed) else { return Ok(()) };
        prop_assert!(m.validate().is_ok());
        let p = m.presentation();
        prop_assert!(validate_presentation(p).is_ok());
        prop_assert!(m.dim() <= 6 && p.torus_rank() <= 2 && p.n_generators() <= 5);
        for w in m.distinct_weights() {
            prop_assert_eq!(w_sub(&m, w).dim() + w_quotient(&m, w).dim(), m.dim());
            prop_assert!(weight_filtration(&m, w).unwrap().validate().is_ok());
        }
        let g = gr_object(&m);
        prop_assert!(g.is_pure());
        prop_assert_eq!(u_of(&g).dim(), 0);
    }

    #[test]
    fn tensor_dual_and_hom(seed in 0u64..5000) {
        let Some(m) = corpus_object(seed) else { return Ok(()) };
        if m.dim() > 4 {
            return Ok(());
        }
        let d = dual(&m);
        prop_assert!(d.validate().is_ok());
        prop_assert!(is_isomorphic(&dual(&d), &m).unwrap().is_yes());
        let t = tensor_product(&m, &d).unwrap();
        prop_assert_eq!(t.dim(), m.dim() * m.dim());
        prop_assert!(t.validate().is_ok());
        let h = internal_hom(&m, &m).unwrap();
        prop_assert!(is_isomorphic(&h, &t).unwrap().is_yes());
        let s = direct_sum(&m, &d).unwrap();
        prop_assert_eq!(s.dim(), 2 * m.dim());
        prop_assert!(s.validate().is_ok());
    }

    #[test]
    fn endomorphisms_contain_identity(seed in 0u64..5000) {
        let Some(m) = corpus_object(seed) else { return Ok(()) };
        let id = Morphism::identity(&m);
        prop_assert!(id.validate().is_ok());
        let ends = morphism_space(&m, &m).unwrap();
        prop_assert!(ends.contains(id.matrix.flat()));
        // Every endomorphism commutes with the action.
        for v in ends.basis() {
            let f = Mat::from_flat(m.dim(), m.dim(), v.clone());
            prop_assert!(Morphism::new(m.clone(), m.clone(), f).is_ok());
        }
    }

    #[test]
    fn generated_subobjects_are_stable(seed in 0u64..5000, pick in 0usize..6) {
        let Some(m) = corpus_object(seed) else { return Ok(()) };
        let mut v = vec![Rat::zero(); m.dim()];
        v[pick % m.dim()] = Rat::one();
        let s = generated_subobject(&m, &[v.clone()]);
        prop_assert!(is_stable(&m, &s) && is_homogeneous(&m, &s));
        prop_assert!(s.contains(&v));
        let sq = subquotient(&m, &s).unwrap();
        prop_assert_eq!(sq.sub.dim() + sq.quotient.dim(), m.dim());
        prop_assert!(sq.inclusion.validate().is_ok() && sq.projection.validate().is_ok());
        prop_assert!(sq.inclusion.compose(&sq.projection).unwrap().matrix.is_zero());
    }

    #[test]
    fn u_is_a_lowering_lie_subalgebra(seed in 0u64..5000) {
        let Some(m) = corpus_object(seed) else { return Ok(()) };
        let u = u_of(&m);
        prop_assert!(w_minus1_end(&m).contains_space(&u.space));
        let mats = u.matrices();
        for a in &mats {
            for b in &mats {
                prop_assert!(u.contains(&a.commutator(b)));
            }
        }
        prop_assert_eq!(galois_dim(&m), u.dim() + character_lattice(&m).rank());
        prop_assert_eq!(is_large_u(&m), u.space == w_minus1_end(&m));
    }

    #[test]
    fn filtration_pieces_of_u(seed in 0u64..5000) {
        let Some(m) = corpus_object(seed) else { return Ok(()) };
        let u = u_of(&m);
        let ws = m.distinct_weights();
        let mut prev: Option<usize> = None;
        for &q in &ws {
            let g = u_geq_of(&m, q);
            prop_assert!(u.space.contains_space(&g.space));
            if let Some(d) = prev {
                prop_assert!(g.dim() <= d, "u_geq must shrink as q grows");
            }
            prev = Some(g.dim());
            prop_assert!(u.space.contains_space(&u_p_of(&m, q).space));
        }
        let trivial = relative_kernel_lie(&m, &m).unwrap();
        prop_assert_eq!(trivial.dim(), 0);
        let unit = unit_object(m.pres_arc());
        let k = relative_kernel_lie(&m, &unit).unwrap();
        prop_assert!(k.space.contains_space(&u.space));
    }
}

#[test]
fn relative_kernel_of_a_pure_quotient_is_u_for_kummer() {
    let m = kummer();
    let g = gr_object(&m);
    let k = relative_kernel_lie(&m, &g).unwrap();
    assert_eq!(k.space, u_of(&m).space);
}
