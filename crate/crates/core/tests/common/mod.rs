#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use panache::group::GroupPresentation;
use panache::linalg::{Mat, Rat};
use panache::rep::{BasisVector, RepObject};

/// Tate convention: rank-one torus, weight `-2`, abelian `n` with the given degrees.
pub fn tate_abelian(degrees: &[i64]) -> Arc<GroupPresentation> {
    let ds: Vec<Vec<i64>> = degrees.iter().map(|&d| vec![d]).collect();
    Arc::new(GroupPresentation::abelian(vec![-2], &ds).unwrap())
}

/// Sparse integer matrix entries `(row, column, value)`.
pub type Entries<'a> = &'a [(usize, usize, i64)];

pub fn object(p: &Arc<GroupPresentation>, chars: &[i64], actions: &[(usize, Entries<'_>)]) -> RepObject {
    let basis = chars.iter().enumerate().map(|(i, &c)| BasisVector::new(format!("b{i}"), vec![c])).collect();
    let n = chars.len();
    let acts: BTreeMap<usize, Mat> = actions
        .iter()
        .map(|(g, entries)| {
            let mut m = Mat::zeros(n, n);
            for &(r, c, v) in entries.iter() {
                m.set(r, c, Rat::from_int(v));
            }
            (*g, m)
        })
        .collect();
    RepObject::new(p.clone(), basis, acts).unwrap()
}

/// The Kummer-type object: `b0` of character 1, `b1` of character 0, and the
/// degree-one generator sends `b1` to `b0`.
pub fn kummer() -> RepObject {
    let p = tate_abelian(&[1]);
    object(&p, &[1, 0], &[(0, &[(0, 1, 1)])])
}

pub fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_int(x)).collect()
}

/// Pair on `B = Q(2)`, `A = Q(1)`, `C = Q(0)` over two commuting degree-one
/// generators, with `L` and `N` given by their two scalar components.
pub fn rank_two_pair(l: (i64, i64), n: (i64, i64)) -> (panache::ext::ExtBetween, panache::ext::ExtBetween) {
    use panache::rep::{simple_character, unit_object};
    let p = tate_abelian(&[1, 1]);
    let a = simple_character(&p, &[1]);
    let b = simple_character(&p, &[2]);
    let c = unit_object(&p);
    let one = |v: i64| Mat::from_i64(&[&[v]]);
    let lb: BTreeMap<usize, Mat> = [(0, one(l.0)), (1, one(l.1))].into_iter().collect();
    let nb: BTreeMap<usize, Mat> = [(0, one(n.0)), (1, one(n.1))].into_iter().collect();
    (panache::ext::ExtBetween::new(&a, &b, lb).unwrap(), panache::ext::ExtBetween::new(&c, &a, nb).unwrap())
}

/// Tate-convention truncated free presentation on letters of the given degrees.
pub fn tate_free(degrees: &[i64], weight_bound: i64) -> Arc<GroupPresentation> {
    use panache::group::{free_graded_lie, Letter};
    let letters: Vec<Letter> = degrees.iter().enumerate().map(|(i, &d)| Letter::new(format!("x{i}"), vec![d])).collect();
    Arc::new(free_graded_lie(&[-2], &letters, weight_bound).unwrap())
}

/// Object over a truncated free presentation: letters act as given, every
/// bracket element acts by the commutator of its factors.
pub fn free_object(p: &Arc<GroupPresentation>, chars: &[i64], letters: &[(usize, Entries<'_>)]) -> RepObject {
    let n = chars.len();
    let free = p.free_structure().unwrap().clone();
    let mut acts: BTreeMap<usize, Mat> = BTreeMap::new();
    for (k, entries) in letters {
        let mut m = Mat::zeros(n, n);
        for &(r, c, v) in entries.iter() {
            m.set(r, c, Rat::from_int(v));
        }
        acts.insert(free.letters()[*k], m);
    }
    for k in 0..p.n_generators() {
        if let Some((l, r)) = free.factors[k] {
            let m = match (acts.get(&l), acts.get(&r)) {
                (Some(x), Some(y)) => x.commutator(y),
                _ => continue,
            };
            if !m.is_zero() {
                acts.insert(k, m);
            }
        }
    }
    let basis = chars.iter().enumerate().map(|(i, &c)| BasisVector::new(format!("b{i}"), vec![c])).collect();
    RepObject::new(p.clone(), basis, acts).unwrap()
}
