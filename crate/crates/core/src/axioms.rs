//! Region sets of weight pairs and the independence axioms.
//!
//! A pair `(i, j)` stands for `Hom(Gr_j M, Gr_i M)`. In the model every simple
//! pure object is a character, so "no isomorphic subobjects" between two sums of
//! such Hom objects means their character sets are disjoint.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::end_block;
use crate::linalg::Subspace;
use crate::rep::RepObject;

/// The regions for `q <= p`.
pub fn in_j1(p: i64, i: i64, j: i64) -> bool {
    i <= p && p < j
}

pub fn in_j2(p: i64, q: i64, i: i64, j: i64) -> bool {
    i < j && ((q < j && j <= p) || i > p)
}

/// The regions for `q > p`, indexed `0, 1, 2`.
pub fn in_j_prime(p: i64, q: i64, k: usize, i: i64, j: i64) -> bool {
    match k {
        0 => i <= p && j > q,
        1 => p < i && i <= q && q < j,
        _ => q < i && i < j,
    }
}

fn region_pred(p: i64, q: i64, k: usize) -> Box<dyn Fn(i64, i64) -> bool> {
    if q <= p {
        if k == 0 {
            Box::new(move |i, j| in_j1(p, i, j))
        } else {
            Box::new(move |i, j| in_j2(p, q, i, j))
        }
    } else {
        Box::new(move |i, j| in_j_prime(p, q, k, i, j))
    }
}

fn region_count(p: i64, q: i64) -> usize {
    if q <= p {
        2
    } else {
        3
    }
}

/// Weight differences `i - j` over occurring weights in each region.
pub fn j_sets(m: &RepObject, p: i64, q: i64) -> Result<Vec<BTreeSet<i64>>> {
    if q > p {
        return Err(Error::Precondition("unprimed sets need q <= p".into()));
    }
    Ok(weight_sets(m, p, q))
}

pub fn j_sets_prime(m: &RepObject, p: i64, q: i64) -> Result<Vec<BTreeSet<i64>>> {
    if q <= p {
        return Err(Error::Precondition("primed sets need q > p".into()));
    }
    Ok(weight_sets(m, p, q))
}

fn weight_sets(m: &RepObject, p: i64, q: i64) -> Vec<BTreeSet<i64>> {
    let ws = m.distinct_weights();
    (0..region_count(p, q))
        .map(|k| {
            let pred = region_pred(p, q, k);
            let mut s = BTreeSet::new();
            for &i in &ws {
                for &j in &ws {
                    if pred(i, j) {
                        s.insert(i - j);
                    }
                }
            }
            s
        })
        .collect()
}

/// Characters `chi_a - chi_b` of the Hom objects in each region.
fn character_sets(m: &RepObject, p: i64, q: i64) -> Vec<BTreeSet<Vec<i64>>> {
    (0..region_count(p, q))
        .map(|k| {
            let pred = region_pred(p, q, k);
            let mut s = BTreeSet::new();
            for a in 0..m.dim() {
                for b in 0..m.dim() {
                    if pred(m.weight(a), m.weight(b)) {
                        s.insert(m.character(a).iter().zip(m.character(b)).map(|(x, y)| x - y).collect());
                    }
                }
            }
            s
        })
        .collect()
}

/// The coordinate block of `End(ωM)` for region `k`.
pub fn region_block(m: &RepObject, p: i64, q: i64, k: usize) -> Subspace {
    let pred = region_pred(p, q, k);
    end_block(m, pred)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub axiom: String,
    pub regions: (usize, usize),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub p: i64,
    pub q: i64,
    pub primed: bool,
    /// `J_1(M), J_2(M)` or `J'_1(M), J'_2(M), J'_3(M)`.
    pub j_weights: Vec<BTreeSet<i64>>,
    /// IA1 (or IA1' when primed).
    pub ia1: bool,
    /// IA2 (or IA2' when primed).
    pub ia2: bool,
    pub ia3: bool,
    pub witnesses: Vec<Witness>,
}

fn first_overlap<T: Ord + Clone>(sets: &[BTreeSet<T>]) -> Option<((usize, usize), T)> {
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            if let Some(x) = sets[a].intersection(&sets[b]).next() {
                return Some(((a, b), x.clone()));
            }
        }
    }
    None
}

/// IA3: all differences of distinct occurring weights are distinct.
pub fn ia3(m: &RepObject) -> (bool, Option<i64>) {
    let ws = m.distinct_weights();
    let mut seen = BTreeSet::new();
    for (x, &j) in ws.iter().enumerate() {
        for &i in &ws[..x] {
            if !seen.insert(i - j) {
                return (false, Some(i - j));
            }
        }
    }
    (true, None)
}

pub fn check_axioms(m: &RepObject, p: i64, q: i64) -> AxiomReport {
    let primed = q > p;
    let j_weights = weight_sets(m, p, q);
    let chars = character_sets(m, p, q);
    let mut witnesses = Vec::new();
    let suffix = if primed { "'" } else { "" };
    let ia1 = match first_overlap(&chars) {
        None => true,
        Some((regions, c)) => {
            witnesses.push(Witness { axiom: format!("IA1{suffix}"), regions, character: Some(c), weight: None });
            false
        }
    };
    let ia2 = match first_overlap(&j_weights) {
        None => true,
        Some((regions, w)) => {
            witnesses.push(Witness { axiom: format!("IA2{suffix}"), regions, character: None, weight: Some(w) });
            false
        }
    };
    let (ia3, rep) = ia3(m);
    if let Some(w) = rep {
        witnesses.push(Witness { axiom: "IA3".into(), regions: (0, 0), character: None, weight: Some(w) });
    }
    AxiomReport { p, q, primed, j_weights, ia1, ia2, ia3, witnesses }
}

/// The `q <= p` that can give distinct region sets: every occurring weight
/// below `p`, plus one value below all of them.
pub fn relevant_q(m: &RepObject, p: i64) -> Vec<i64> {
    let ws = m.distinct_weights();
    let mut qs: BTreeSet<i64> = ws.iter().copied().filter(|&w| w <= p).collect();
    qs.insert(p);
    qs.insert(ws.first().map_or(p, |&w| w.min(p)) - 1);
    qs.into_iter().collect()
}

pub fn ia1_for_all_q(m: &RepObject, p: i64) -> bool {
    relevant_q(m, p).into_iter().all(|q| check_axioms(m, p, q).ia1)
}

pub fn ia2_for_all_q(m: &RepObject, p: i64) -> bool {
    relevant_q(m, p).into_iter().all(|q| check_axioms(m, p, q).ia2)
}
