use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::blend::CompatiblePair;
use crate::error::{Error, Result};
use crate::ext::ExtBetween;
use crate::linalg::{factor_u64, solve_integer, solve_linear, Mat, Rat, Solution};
use crate::rep::{morphism_space, RepObject};

/// Automorphisms of `B`, `A` and `C` acting by `(L, N) -> (g_B L g_A, g_A^-1 N g_C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutTriple {
    pub g_b: Mat,
    pub g_a: Mat,
    pub g_c: Mat,
}

#[derive(Clone, Debug)]
pub enum EquivVerdict {
    Equivalent(AutTriple),
    NotEquivalent(String),
    Unknown(String),
}

impl EquivVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            EquivVerdict::Equivalent(_) => "equivalent",
            EquivVerdict::NotEquivalent(_) => "not_equivalent",
            EquivVerdict::Unknown(_) => "unknown",
        }
    }
}

fn blocks(e: &ExtBetween) -> BTreeMap<usize, Mat> {
    e.class.cocycle.keys().map(|&g| (g, e.block(g))).collect()
}

pub fn apply_automorphisms(pair: &CompatiblePair, t: &AutTriple) -> Result<CompatiblePair> {
    let inv = t.g_a.inverse().ok_or_else(|| Error::Precondition("g_A is not invertible".into()))?;
    let l: BTreeMap<usize, Mat> = blocks(&pair.l).into_iter().map(|(g, m)| (g, t.g_b.mul(&m).mul(&t.g_a))).collect();
    let n: BTreeMap<usize, Mat> = blocks(&pair.n).into_iter().map(|(g, m)| (g, inv.mul(&m).mul(&t.g_c))).collect();
    CompatiblePair::new(ExtBetween::new(pair.a(), pair.b(), l)?, ExtBetween::new(pair.c(), pair.a(), n)?)
}

fn same_cocycles(x: &ExtBetween, y: &ExtBetween) -> bool {
    x.class.cocycle == y.class.cocycle
}

fn verify(p1: &CompatiblePair, p2: &CompatiblePair, t: &AutTriple) -> bool {
    apply_automorphisms(p1, t).map(|q| same_cocycles(&q.l, &p2.l) && same_cocycles(&q.n, &p2.n)).unwrap_or(false)
}

fn same_object(x: &RepObject, y: &RepObject) -> bool {
    x.same_group(y) && x.basis() == y.basis() && x.actions() == y.actions()
}

/// Decides whether two pairs on the same `B`, `A`, `C` lie in one orbit.
///
/// Under weight separation `Hom(A, B)` and `Hom(C, A)` have no weight-zero
/// part, so classes are cocycles and the action is a plain matrix action. When
/// every character has multiplicity one, automorphisms are diagonal and
/// constant on connected components of the action graph, so orbit membership
/// becomes a system of multiplicative equations that is solved prime by prime.
pub fn pair_equivalent(p1: &CompatiblePair, p2: &CompatiblePair) -> Result<EquivVerdict> {
    if !same_object(p1.a(), p2.a()) || !same_object(p1.b(), p2.b()) || !same_object(p1.c(), p2.c()) {
        return Err(Error::Precondition("pairs are on different objects".into()));
    }
    for (x, y, name) in [(&p1.l, &p2.l, "L"), (&p1.n, &p2.n, "N")] {
        if x.class.is_zero_cochain() != y.class.is_zero_cochain() {
            return Ok(EquivVerdict::NotEquivalent(format!("{name} splits in exactly one of the pairs")));
        }
    }
    let mf = |m: &RepObject| m.distinct_characters().len() == m.dim();
    if mf(p1.a()) && mf(p1.b()) && mf(p1.c()) {
        if let Some(v) = scaling_decision(p1, p2)? {
            return Ok(v);
        }
    }
    random_search(p1, p2)
}

struct Components {
    of: Vec<usize>,
    count: usize,
}

fn components(m: &RepObject) -> Components {
    let n = m.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in m.actions().values() {
        for (r, c, _) in a.nonzeros() {
            let (x, y) = (find(&mut parent, r), find(&mut parent, c));
            parent[x] = y;
        }
    }
    let mut ids = BTreeMap::new();
    let of = (0..n)
        .map(|a| {
            let r = find(&mut parent, a);
            let k = ids.len();
            *ids.entry(r).or_insert(k)
        })
        .collect();
    Components { of, count: ids.len() }
}

fn valuations(r: &Rat) -> Option<BTreeMap<u64, i64>> {
    let (n, d) = (r.numer().magnitude().to_u64()?, r.denom().magnitude().to_u64()?);
    let mut out = BTreeMap::new();
    for (p, e) in factor_u64(n)? {
        *out.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in factor_u64(d)? {
        *out.entry(p).or_insert(0) -= e as i64;
    }
    Some(out)
}

/// Solves `E x = s` over GF(2).
fn solve_gf2(rows: &[Vec<i64>], rhs: &[bool], nvars: usize) -> Option<Vec<bool>> {
    let mut m: Vec<(Vec<bool>, bool)> = rows.iter().zip(rhs).map(|(r, &b)| (r.iter().map(|&x| x.rem_euclid(2) == 1).collect(), b)).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..nvars {
        let Some(p) = (row..m.len()).find(|&r| m[r].0[col]) else { continue };
        m.swap(row, p);
        for r in 0..m.len() {
            if r != row && m[r].0[col] {
                let (src, b) = (m[row].0.clone(), m[row].1);
                for (x, y) in m[r].0.iter_mut().zip(&src) {
                    *x ^= *y;
                }
                m[r].1 ^= b;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|(_, b)| *b) {
        return None;
    }
    let mut x = vec![false; nvars];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r].1;
    }
    Some(x)
}

fn scaling_decision(p1: &CompatiblePair, p2: &CompatiblePair) -> Result<Option<EquivVerdict>> {
    let (cb, ca, cc) = (components(p1.b()), components(p1.a()), components(p1.c()));
    let (ob, oa, oc) = (0, cb.count, cb.count + ca.count);
    let nvars = oc + cc.count;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut ratios: Vec<Rat> = Vec::new();
    let mut gather = |x: &ExtBetween, y: &ExtBetween, left: (&Components, usize, i64), right: (&Components, usize, i64)| -> Option<String> {
        let gens: BTreeSet<usize> = x.class.cocycle.keys().chain(y.class.cocycle.keys()).copied().collect();
        for g in gens {
            let (mx, my) = (x.block(g), y.block(g));
            for r in 0..mx.rows() {
                for c in 0..mx.cols() {
                    let (u, v) = (mx.get(r, c), my.get(r, c));
                    match (u.is_zero(), v.is_zero()) {
                        (true, true) => continue,
                        (true, false) | (false, true) => {
                            return Some(format!("entry ({r},{c}) of generator {g} vanishes in exactly one pair"));
                        }
                        _ => {}
                    }
                    let mut row = vec![0i64; nvars];
                    row[left.1 + left.0.of[r]] += left.2;
                    row[right.1 + right.0.of[c]] += right.2;
                    rows.push(row);
                    ratios.push(v / u);
                }
            }
        }
        None
    };
    if let Some(reason) = gather(&p1.l, &p2.l, (&cb, ob, 1), (&ca, oa, 1)) {
        return Ok(Some(EquivVerdict::NotEquivalent(reason)));
    }
    if let Some(reason) = gather(&p1.n, &p2.n, (&ca, oa, -1), (&cc, oc, 1)) {
        return Ok(Some(EquivVerdict::NotEquivalent(reason)));
    }
    let mut vals = Vec::new();
    for r in &ratios {
        match valuations(r) {
            Some(v) => vals.push(v),
            None => return Ok(None),
        }
    }
    let primes: BTreeSet<u64> = vals.iter().flat_map(|v| v.keys().copied()).collect();
    let mut t: Vec<Rat> = vec![Rat::one(); nvars];
    for &p in &primes {
        let rhs: Vec<i64> = vals.iter().map(|v| v.get(&p).copied().unwrap_or(0)).collect();
        match solve_integer(&rows, &rhs, nvars) {
            Some(x) => {
                for (tj, e) in t.iter_mut().zip(x) {
                    let e = e.to_i32().ok_or_else(|| Error::TooLarge("scaling exponent".into()))?;
                    *tj = &*tj * &Rat::from_int(p as i64).pow(e);
                }
            }
            None => {
                return Ok(Some(EquivVerdict::NotEquivalent(format!("the valuations at {p} admit no integer scaling"))));
            }
        }
    }
    let signs: Vec<bool> = ratios.iter().map(|r| r.is_negative()).collect();
    match solve_gf2(&rows, &signs, nvars) {
        Some(s) => {
            for (tj, neg) in t.iter_mut().zip(s) {
                if neg {
                    *tj = -&*tj;
                }
            }
        }
        None => return Ok(Some(EquivVerdict::NotEquivalent("the sign pattern admits no scaling".into()))),
    }
    let diag = |comp: &Components, off: usize| {
        let n = comp.of.len();
        let mut m = Mat::zeros(n, n);
        for (a, &k) in comp.of.iter().enumerate() {
            m.set(a, a, t[off + k].clone());
        }
        m
    };
    let triple = AutTriple { g_b: diag(&cb, ob), g_a: diag(&ca, oa), g_c: diag(&cc, oc) };
    if !verify(p1, p2, &triple) {
        return Err(Error::Precondition("scaling solution failed verification".into()));
    }
    Ok(Some(EquivVerdict::Equivalent(triple)))
}

const SEARCH_SEED: u64 = 0x0e9_u64;

fn random_element(space: &crate::linalg::Subspace, n: usize, rng: &mut ChaCha8Rng) -> Mat {
    let mut m = Mat::zeros(n, n);
    for v in space.basis() {
        let c = Rat::from_int(rng.gen_range(-3..=3));
        m.add_scaled(&Mat::from_flat(n, n, v.clone()), &c);
    }
    m
}

/// Solves `sum_k y_k lhs_k(E_k) = target` for `y` and returns candidate matrices.
fn solve_factor(basis: &[Mat], apply: impl Fn(&Mat) -> Vec<Rat>, target: &[Rat], rng: &mut ChaCha8Rng) -> Result<Option<Mat>> {
    let cols: Vec<Vec<Rat>> = basis.iter().map(&apply).collect();
    let n = basis.first().map_or(0, |m| m.rows());
    if basis.is_empty() {
        return Ok(None);
    }
    let mut a = Mat::zeros(target.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            if !v.is_zero() {
                a.set(i, j, v.clone());
            }
        }
    }
    let Solution::Feasible { particular, kernel } = solve_linear(&a, target)? else {
        return Ok(None);
    };
    for attempt in 0..8 {
        let mut y = particular.clone();
        if attempt > 0 {
            for k in &kernel {
                let c = Rat::from_int(rng.gen_range(-5..=5));
                for (yi, ki) in y.iter_mut().zip(k) {
                    *yi = &*yi + &(ki * &c);
                }
            }
        }
        let mut m = Mat::zeros(n, n);
        for (c, e) in y.iter().zip(basis) {
            m.add_scaled(e, c);
        }
        if !m.determinant().is_zero() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn random_search(p1: &CompatiblePair, p2: &CompatiblePair) -> Result<EquivVerdict> {
    let (a, b, c) = (p1.a(), p1.b(), p1.c());
    let end = |m: &RepObject| -> Result<Vec<Mat>> {
        let s = morphism_space(m, m)?;
        Ok(s.basis().iter().map(|v| Mat::from_flat(m.dim(), m.dim(), v.clone())).collect())
    };
    let (eb, ec) = (end(b)?, end(c)?);
    let ea = morphism_space(a, a)?;
    let gens: BTreeSet<usize> = p1.l.class.cocycle.keys().chain(p2.l.class.cocycle.keys()).chain(p1.n.class.cocycle.keys()).chain(p2.n.class.cocycle.keys()).copied().collect();
    let flat = |bl: &dyn Fn(usize) -> Mat| -> Vec<Rat> { gens.iter().flat_map(|&g| bl(g).into_flat()).collect() };
    let target_l = flat(&|g| p2.l.block(g));
    let target_n = flat(&|g| p2.n.block(g));
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    for attempt in 0..64 {
        let g_a = if attempt == 0 { Mat::identity(a.dim()) } else { random_element(&ea, a.dim(), &mut rng) };
        let Some(inv) = g_a.inverse() else { continue };
        let Some(g_b) = solve_factor(&eb, |e| flat(&|g| e.mul(&p1.l.block(g)).mul(&g_a)), &target_l, &mut rng)? else { continue };
        let Some(g_c) = solve_factor(&ec, |e| flat(&|g| inv.mul(&p1.n.block(g)).mul(e)), &target_n, &mut rng)? else { continue };
        let t = AutTriple { g_b, g_a, g_c };
        if verify(p1, p2, &t) {
            return Ok(EquivVerdict::Equivalent(t));
        }
    }
    Ok(EquivVerdict::Unknown("no automorphism triple found by the seeded search".into()))
}
