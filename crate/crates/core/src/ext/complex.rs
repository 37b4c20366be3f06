//! The torus-invariant Chevalley-Eilenberg complex of `n` with coefficients in
//! a representation `X`. Cochains of degree `k` assign to each increasing
//! `k`-tuple of generators a vector of `X` whose character is the sum of
//! their degrees.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{Rat, SparseMatrix};
use crate::rep::RepObject;

pub struct CeComplex<'a> {
    x: &'a RepObject,
    pub c0: Vec<usize>,
    pub c1: Vec<(usize, usize)>,
    pub c2: Vec<(usize, usize, usize)>,
    idx0: HashMap<usize, usize>,
    idx1: HashMap<(usize, usize), usize>,
    idx2: HashMap<(usize, usize, usize), usize>,
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl<'a> CeComplex<'a> {
    pub fn new(x: &'a RepObject) -> CeComplex<'a> {
        let p = x.presentation();
        let zero = vec![0; p.torus_rank()];
        let c0 = x.isotypic(&zero);
        let mut c1 = Vec::new();
        let mut c2 = Vec::new();
        let chars = x.distinct_characters();
        let degrees: Vec<Vec<i64>> = {
            let mut d: Vec<Vec<i64>> = p.degrees().cloned().collect();
            d.sort();
            d
        };
        for chi in &chars {
            let iso = x.isotypic(chi);
            for &g in p.generators_of_degree(chi) {
                for &a in &iso {
                    c1.push((g, a));
                }
            }
            for d1 in &degrees {
                let d2 = sub(chi, d1);
                let g2 = p.generators_of_degree(&d2);
                if g2.is_empty() {
                    continue;
                }
                for &i in p.generators_of_degree(d1) {
                    for &j in g2 {
                        if i < j {
                            for &a in &iso {
                                c2.push((i, j, a));
                            }
                        }
                    }
                }
            }
        }
        c1.sort_unstable();
        c2.sort_unstable();
        let idx0 = c0.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let idx1 = c1.iter().enumerate().map(|(k, &t)| (t, k)).collect();
        let idx2 = c2.iter().enumerate().map(|(k, &t)| (t, k)).collect();
        CeComplex { x, c0, c1, c2, idx0, idx1, idx2 }
    }

    pub fn object(&self) -> &RepObject {
        self.x
    }

    /// `(d0 v)_g = A_g v`.
    pub fn d0(&self) -> SparseMatrix<Rat> {
        let mut m = SparseMatrix::new(self.c0.len());
        for &(g, a) in &self.c1 {
            let mut terms = Vec::new();
            if let Some(ag) = self.x.action(g) {
                for (k, &b) in self.c0.iter().enumerate() {
                    let v = ag.get(a, b);
                    if !v.is_zero() {
                        terms.push((k, v.clone()));
                    }
                }
            }
            m.push_terms(terms);
        }
        m
    }

    /// `(d1 c)_{ij} = A_i c_j - A_j c_i - c([b_i, b_j])`.
    pub fn d1(&self) -> SparseMatrix<Rat> {
        let p = self.x.presentation();
        let mut m = SparseMatrix::new(self.c1.len());
        for &(i, j, a) in &self.c2 {
            let mut terms = Vec::new();
            self.push_action_terms(&mut terms, i, j, a, &Rat::one());
            self.push_action_terms(&mut terms, j, i, a, &-Rat::one());
            if let Some(br) = p.bracket_ref(i, j) {
                for (k, c) in br {
                    if let Some(&col) = self.idx1.get(&(*k, a)) {
                        terms.push((col, -c));
                    }
                }
            }
            m.push_terms(terms);
        }
        m
    }

    // Adds s * (A_i c_j)_a.
    fn push_action_terms(&self, terms: &mut Vec<(usize, Rat)>, i: usize, j: usize, a: usize, s: &Rat) {
        if let Some(ai) = self.x.action(i) {
            for b in 0..self.x.dim() {
                let v = ai.get(a, b);
                if v.is_zero() {
                    continue;
                }
                if let Some(&col) = self.idx1.get(&(j, b)) {
                    terms.push((col, v * s));
                }
            }
        }
    }

    /// Increasing triples with their coefficient index, generated on demand.
    pub fn c3(&self) -> Vec<(usize, usize, usize, usize)> {
        let p = self.x.presentation();
        let mut degrees: Vec<Vec<i64>> = p.degrees().cloned().collect();
        degrees.sort();
        let mut out = Vec::new();
        for chi in self.x.distinct_characters() {
            let iso = self.x.isotypic(&chi);
            for d1 in &degrees {
                for d2 in &degrees {
                    let d3 = sub(&sub(&chi, d1), d2);
                    let g3 = p.generators_of_degree(&d3);
                    if g3.is_empty() {
                        continue;
                    }
                    let g2 = p.generators_of_degree(d2);
                    for &i in p.generators_of_degree(d1) {
                        let start2 = g2.partition_point(|&j| j <= i);
                        for &j in &g2[start2..] {
                            let start3 = g3.partition_point(|&k| k <= j);
                            for &k in &g3[start3..] {
                                for &a in &iso {
                                    out.push((i, j, k, a));
                                }
                            }
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Column and sign of `omega(l, m)` at coefficient `a`.
    fn omega_col(&self, l: usize, m: usize, a: usize) -> Option<(usize, bool)> {
        use std::cmp::Ordering::*;
        match l.cmp(&m) {
            Equal => None,
            Less => self.idx2.get(&(l, m, a)).map(|&c| (c, false)),
            Greater => self.idx2.get(&(m, l, a)).map(|&c| (c, true)),
        }
    }

    /// `(d2 w)(x,y,z) = x.w(y,z) - y.w(x,z) + z.w(x,y) - w([x,y],z) + w([x,z],y) - w([y,z],x)`.
    pub fn d2(&self) -> SparseMatrix<Rat> {
        let p = self.x.presentation();
        let mut m = SparseMatrix::new(self.c2.len());
        for (i, j, k, a) in self.c3() {
            let mut terms: Vec<(usize, Rat)> = Vec::new();
            for (act, l, r, s) in [(i, j, k, 1i64), (j, i, k, -1), (k, i, j, 1)] {
                if let Some(ax) = self.x.action(act) {
                    for b in 0..self.x.dim() {
                        let v = ax.get(a, b);
                        if v.is_zero() {
                            continue;
                        }
                        if let Some(&col) = self.idx2.get(&(l, r, b)) {
                            terms.push((col, v * &Rat::from_int(s)));
                        }
                    }
                }
            }
            for (l, r, other, s) in [(i, j, k, -1i64), (i, k, j, 1), (j, k, i, -1)] {
                if let Some(br) = p.bracket_ref(l, r) {
                    for (t, c) in br {
                        if let Some((col, flip)) = self.omega_col(*t, other, a) {
                            let sign = if flip { -s } else { s };
                            terms.push((col, c * &Rat::from_int(sign)));
                        }
                    }
                }
            }
            m.push_terms(terms);
        }
        m
    }

    pub fn flatten1(&self, c: &BTreeMap<usize, Vec<Rat>>) -> Result<Vec<Rat>> {
        let mut v = vec![Rat::zero(); self.c1.len()];
        for (&g, vec) in c {
            for (a, x) in vec.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                match self.idx1.get(&(g, a)) {
                    Some(&k) => v[k] = x.clone(),
                    None => {
                        return Err(Error::Cocycle(format!(
                            "value on {} has a component of the wrong character",
                            self.x.presentation().name(g)
                        )))
                    }
                }
            }
        }
        Ok(v)
    }

    pub fn unflatten1(&self, v: &[Rat]) -> BTreeMap<usize, Vec<Rat>> {
        let mut out: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (g, a) = self.c1[k];
            out.entry(g).or_insert_with(|| vec![Rat::zero(); self.x.dim()])[a] = x.clone();
        }
        out
    }

    pub fn flatten2(&self, w: &BTreeMap<(usize, usize), Vec<Rat>>) -> Result<Vec<Rat>> {
        let mut v = vec![Rat::zero(); self.c2.len()];
        for (&(i, j), vec) in w {
            for (a, x) in vec.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                match self.omega_col(i, j, a) {
                    Some((k, flip)) => v[k] = if flip { -x } else { x.clone() },
                    None => return Err(Error::Cocycle("2-cochain has a component of the wrong character".into())),
                }
            }
        }
        Ok(v)
    }

    pub fn unflatten2(&self, v: &[Rat]) -> BTreeMap<(usize, usize), Vec<Rat>> {
        let mut out: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (i, j, a) = self.c2[k];
            out.entry((i, j)).or_insert_with(|| vec![Rat::zero(); self.x.dim()])[a] = x.clone();
        }
        out
    }

    pub fn c0_index(&self, a: usize) -> Option<usize> {
        self.idx0.get(&a).copied()
    }
}
