use num_bigint::BigInt;
use panache::linalg::{factor_u64, solve_integer, solve_linear, verify_infeasibility, IntLattice, Mat, Rat, Solution, SparseMatrix, Subspace};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rat::new(n, d))
}

fn mat(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(rat(), rows * cols).prop_map(move |v| Mat::from_flat(rows, cols, v))
}

fn sized_mat() -> impl Strategy<Value = Mat> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| mat(r, c))
}

/// Sparse-ish integer matrix so that rank deficiency is common.
fn sparse_int_mat() -> impl Strategy<Value = Mat> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(prop_oneof![3 => Just(0i64), 2 => -2i64..=2], r * c)
            .prop_map(move |v| Mat::from_flat(r, c, v.into_iter().map(Rat::from_int).collect()))
    })
}

#[test]
fn rational_parsing_and_display() {
    assert_eq!("6/4".parse::<Rat>().unwrap(), Rat::new(3, 2));
    assert_eq!("-7".parse::<Rat>().unwrap(), Rat::from_int(-7));
    assert_eq!(Rat::new(3, -6).to_string(), "-1/2");
    assert!("1/0".parse::<Rat>().is_err());
    assert!("x".parse::<Rat>().is_err());
}

#[test]
fn big_rationals_stay_exact() {
    let mut x = Rat::new(1, 3);
    for _ in 0..6 {
        x = &x * &x;
    }
    assert_eq!(x.denom(), BigInt::from(3u64).pow(64));
    assert_eq!(&x * &x.recip(), Rat::one());
}

#[test]
fn known_determinant_and_inverse() {
    let a = Mat::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
    assert_eq!(a.determinant(), Rat::from_int(18));
    let inv = a.inverse().unwrap();
    assert_eq!(a.mul(&inv), Mat::identity(3));
    assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
}

#[test]
fn infeasible_system_has_checkable_certificate() {
    let a = Mat::from_i64(&[&[1, 1], &[2, 2]]);
    let b = vec![Rat::one(), Rat::one()];
    match solve_linear(&a, &b).unwrap() {
        Solution::Infeasible { certificate } => assert!(verify_infeasibility(&a, &b, &certificate)),
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn integer_solutions_and_factoring() {
    let x = solve_integer(&[vec![2, 4], vec![0, 3]], &[6, 3], 2).unwrap();
    assert_eq!(x, vec![BigInt::from(1), BigInt::from(1)]);
    assert!(solve_integer(&[vec![2]], &[3], 1).is_none());
    assert_eq!(factor_u64(360).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
}

#[test]
fn lattice_membership_and_invariant_factors() {
    let l = IntLattice::new(2, &[vec![2, 0], vec![0, 3]]);
    assert!(l.contains(&[4, -3]));
    assert!(!l.contains(&[1, 0]));
    let prod: BigInt = l.invariant_factors().iter().product();
    assert_eq!(prod, BigInt::from(6));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_axioms(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.recip(), Rat::one());
        }
        prop_assert_eq!(a.to_string().parse::<Rat>().unwrap(), a);
    }

    #[test]
    fn rank_nullity_and_kernel(a in sparse_int_mat()) {
        let k = a.kernel();
        prop_assert_eq!(a.rank() + k.len(), a.cols());
        for v in &k {
            prop_assert!(a.mul_vec(v).iter().all(Rat::is_zero));
        }
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn rref_is_idempotent_and_preserves_row_space(a in sparse_int_mat()) {
        let (r, piv) = a.rref();
        prop_assert_eq!(r.rref().0, r.clone());
        prop_assert_eq!(piv.len(), a.rank());
        let rows = |m: &Mat| Subspace::span(m.cols(), &m.row_list());
        prop_assert_eq!(rows(&r), rows(&a));
    }

    #[test]
    fn sparse_rank_matches_dense(a in sparse_int_mat()) {
        let mut s = SparseMatrix::<Rat>::new(a.cols());
        for i in 0..a.rows() {
            s.push_terms(a.row(i).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect());
        }
        prop_assert_eq!(s.rank(), a.rank());
    }

    #[test]
    fn determinant_is_multiplicative(n in 1usize..=4, seed in any::<u64>()) {
        let gen = |k: u64| -> Mat {
            let mut state = seed.wrapping_add(k);
            let v: Vec<Rat> = (0..n * n).map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                Rat::from_int(((state >> 33) % 7) as i64 - 3)
            }).collect();
            Mat::from_flat(n, n, v)
        };
        let (a, b) = (gen(1), gen(2));
        prop_assert_eq!(a.mul(&b).determinant(), &a.determinant() * &b.determinant());
        match a.inverse() {
            Some(inv) => prop_assert_eq!(a.mul(&inv), Mat::identity(n)),
            None => prop_assert!(a.determinant().is_zero()),
        }
    }

    #[test]
    fn solve_linear_agrees_with_membership(a in sized_mat(), x0 in proptest::collection::vec(rat(), 5), extra in proptest::collection::vec(rat(), 5)) {
        let x0 = &x0[..a.cols()];
        let b = a.mul_vec(x0);
        match solve_linear(&a, &b).unwrap() {
            Solution::Feasible { particular, kernel } => {
                prop_assert_eq!(a.mul_vec(&particular), b.clone());
                prop_assert_eq!(kernel.len(), a.cols() - a.rank());
            }
            Solution::Infeasible { .. } => prop_assert!(false, "consistent system reported infeasible"),
        }
        let c = &extra[..a.rows()];
        let in_image = Subspace::span(a.rows(), &a.transpose().row_list()).contains(c);
        match solve_linear(&a, c).unwrap() {
            Solution::Feasible { particular, .. } => {
                prop_assert!(in_image);
                prop_assert_eq!(a.mul_vec(&particular), c.to_vec());
            }
            Solution::Infeasible { certificate } => {
                prop_assert!(!in_image);
                prop_assert!(verify_infeasibility(&a, c, &certificate));
            }
        }
    }

    #[test]
    fn subspace_dimension_formula(a in sparse_int_mat(), b in sparse_int_mat()) {
        let n = 5;
        let pad = |m: &Mat| -> Vec<Vec<Rat>> {
            m.row_list().into_iter().map(|mut r| { r.resize(n, Rat::zero()); r }).collect()
        };
        let u = Subspace::span(n, &pad(&a));
        let v = Subspace::span(n, &pad(&b));
        let s = u.sum(&v);
        let i = u.intersect(&v);
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(s.contains_space(&u) && s.contains_space(&v));
        prop_assert!(u.contains_space(&i) && v.contains_space(&i));
        for w in u.basis() {
            prop_assert!(u.reduce(w).iter().all(Rat::is_zero));
            let coords = u.coordinates(w).unwrap();
            prop_assert_eq!(coords.len(), u.dim());
        }
    }

    #[test]
    fn lattice_contains_integer_combinations(g in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 1..=3), c in proptest::collection::vec(-3i64..=3, 3)) {
        let l = IntLattice::new(3, &g);
        let v: Vec<i64> = (0..3).map(|j| g.iter().zip(&c).map(|(row, k)| row[j] * k).sum()).collect();
        prop_assert!(l.contains(&v));
        if let Some(w) = l.member_witness(&v) {
            prop_assert_eq!(w.len(), l.rank());
        }
    }

    #[test]
    fn factoring_reconstructs(n in 1u64..1_000_000) {
        let f = factor_u64(n).unwrap();
        let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
        prop_assert_eq!(back, n);
    }
}
