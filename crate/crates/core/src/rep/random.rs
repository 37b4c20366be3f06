use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::object::{BasisVector, RepObject};
use crate::error::{Error, Result};
use crate::group::GroupPresentation;
use crate::linalg::{Mat, Rat};

fn random_entry(rng: &mut ChaCha8Rng) -> Rat {
    let v = rng.gen_range(1..=3);
    Rat::from_int(if rng.gen_bool(0.5) { v } else { -v })
}

fn basis_for(chars: &[Vec<i64>]) -> Vec<BasisVector> {
    chars.iter().enumerate().map(|(i, c)| BasisVector::new(format!("v{i}"), c.clone())).collect()
}

/// Random representation of a truncated free Lie algebra: letters get random
/// equivariant matrices and bracket elements are forced by their factorisation.
/// Requires the weight spread of `chars` to be at most `-weight_bound`, which
/// makes every truncated bracket act by zero.
pub fn random_object(p: &Arc<GroupPresentation>, chars: &[Vec<i64>], density: f64, seed: u64) -> Result<RepObject> {
    let free = p
        .free_structure()
        .ok_or_else(|| Error::Precondition("random_object needs a truncated free presentation".into()))?;
    let weights: Vec<i64> = chars.iter().map(|c| p.weight_of(c)).collect();
    if let (Some(lo), Some(hi)) = (weights.iter().min(), weights.iter().max()) {
        if hi - lo > -free.weight_bound {
            return Err(Error::Precondition(format!(
                "weight spread {} exceeds the truncation depth {}",
                hi - lo,
                -free.weight_bound
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = chars.len();
    let mut actions: BTreeMap<usize, Mat> = BTreeMap::new();
    for k in 0..p.n_generators() {
        let m = match free.factors[k] {
            None => {
                let d = p.degree(k);
                let mut m = Mat::zeros(n, n);
                for a in 0..n {
                    for b in 0..n {
                        let fits = chars[a].iter().zip(&chars[b]).zip(d).all(|((x, y), z)| *x == y + z);
                        if fits && rng.gen_bool(density.clamp(0.0, 1.0)) {
                            m.set(a, b, random_entry(&mut rng));
                        }
                    }
                }
                m
            }
            Some((l, r)) => match (actions.get(&l), actions.get(&r)) {
                (Some(x), Some(y)) => x.commutator(y),
                _ => continue,
            },
        };
        if !m.is_zero() {
            actions.insert(k, m);
        }
    }
    RepObject::new(p.clone(), basis_for(chars), actions)
}

/// Random representation of an abelian `n`: each generator is drawn from the
/// equivariant commutant of the ones already chosen.
pub fn random_abelian_object(p: &Arc<GroupPresentation>, chars: &[Vec<i64>], density: f64, seed: u64) -> Result<RepObject> {
    if !p.brackets().is_empty() {
        return Err(Error::Precondition("presentation is not abelian".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = chars.len();
    let mut actions: BTreeMap<usize, Mat> = BTreeMap::new();
    for k in 0..p.n_generators() {
        let d = p.degree(k);
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| chars[a].iter().zip(&chars[b]).zip(d).all(|((x, y), z)| *x == y + z))
            .collect();
        if slots.is_empty() {
            continue;
        }
        // Linear conditions [X, A_j] = 0 on the slot variables of X.
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for a_j in actions.values() {
            for r in 0..n {
                for c in 0..n {
                    let mut row = vec![Rat::zero(); slots.len()];
                    for (s, &(a, b)) in slots.iter().enumerate() {
                        // (X A)[r,c] has X[a,b] A[b,c] when a == r.
                        if a == r {
                            row[s] += a_j.get(b, c);
                        }
                        // (A X)[r,c] has A[r,a] X[a,b] when b == c.
                        if b == c {
                            row[s] -= a_j.get(r, a);
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let basis: Vec<Vec<Rat>> = if rows.is_empty() {
            (0..slots.len())
                .map(|s| {
                    let mut v = vec![Rat::zero(); slots.len()];
                    v[s] = Rat::one();
                    v
                })
                .collect()
        } else {
            Mat::from_rows(rows).kernel()
        };
        let mut x = vec![Rat::zero(); slots.len()];
        for v in &basis {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                let c = random_entry(&mut rng);
                crate::linalg::mat::axpy(&mut x, &c, v);
            }
        }
        let mut m = Mat::zeros(n, n);
        for (s, &(a, b)) in slots.iter().enumerate() {
            m.set(a, b, x[s].clone());
        }
        if !m.is_zero() {
            actions.insert(k, m);
        }
    }
    RepObject::new(p.clone(), basis_for(chars), actions)
}
