use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::GroupPresentation;
use crate::linalg::{Mat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisVector {
    pub label: String,
    pub character: Vec<i64>,
}

impl BasisVector {
    pub fn new(label: impl Into<String>, character: Vec<i64>) -> BasisVector {
        BasisVector { label: label.into(), character }
    }
}

/// A finite-dimensional representation with a basis of torus eigenvectors.
///
/// Only nonzero action matrices are stored.
#[derive(Clone, Debug)]
pub struct RepObject {
    pres: Arc<GroupPresentation>,
    basis: Vec<BasisVector>,
    actions: BTreeMap<usize, Mat>,
}

impl PartialEq for RepObject {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.pres, &o.pres) || *self.pres == *o.pres)
            && self.basis == o.basis
            && self.actions == o.actions
    }
}

impl RepObject {
    pub fn new(pres: Arc<GroupPresentation>, basis: Vec<BasisVector>, actions: BTreeMap<usize, Mat>) -> Result<RepObject> {
        let m = RepObject::new_unchecked(pres, basis, actions);
        m.validate()?;
        Ok(m)
    }

    /// Skips validation; for constructions that are correct by design.
    pub fn new_unchecked(pres: Arc<GroupPresentation>, basis: Vec<BasisVector>, mut actions: BTreeMap<usize, Mat>) -> RepObject {
        actions.retain(|_, a| !a.is_zero());
        RepObject { pres, basis, actions }
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.pres
    }

    pub fn pres_arc(&self) -> &Arc<GroupPresentation> {
        &self.pres
    }

    pub fn same_group(&self, o: &RepObject) -> bool {
        Arc::ptr_eq(&self.pres, &o.pres) || *self.pres == *o.pres
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn character(&self, a: usize) -> &[i64] {
        &self.basis[a].character
    }

    pub fn weight(&self, a: usize) -> i64 {
        self.pres.weight_of(&self.basis[a].character)
    }

    pub fn weights(&self) -> Vec<i64> {
        (0..self.dim()).map(|a| self.weight(a)).collect()
    }

    /// Occurring weights in increasing order.
    pub fn distinct_weights(&self) -> Vec<i64> {
        let s: BTreeSet<i64> = self.weights().into_iter().collect();
        s.into_iter().collect()
    }

    pub fn distinct_characters(&self) -> Vec<Vec<i64>> {
        let s: BTreeSet<Vec<i64>> = self.basis.iter().map(|b| b.character.clone()).collect();
        s.into_iter().collect()
    }

    /// Indices of basis vectors with the given character.
    pub fn isotypic(&self, chi: &[i64]) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.character(a) == chi).collect()
    }

    pub fn action(&self, i: usize) -> Option<&Mat> {
        self.actions.get(&i)
    }

    pub fn action_or_zero(&self, i: usize) -> Cow<'_, Mat> {
        match self.actions.get(&i) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(Mat::zeros(self.dim(), self.dim())),
        }
    }

    pub fn actions(&self) -> &BTreeMap<usize, Mat> {
        &self.actions
    }

    pub fn active_generators(&self) -> Vec<usize> {
        self.actions.keys().copied().collect()
    }

    pub fn is_pure(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn with_actions(&self, actions: BTreeMap<usize, Mat>) -> RepObject {
        RepObject::new_unchecked(self.pres.clone(), self.basis.clone(), actions)
    }

    pub fn relabel(mut self, f: impl Fn(usize, &str) -> String) -> RepObject {
        for (i, b) in self.basis.iter_mut().enumerate() {
            b.label = f(i, &b.label);
        }
        self
    }

    /// Checks equivariance and that the actions define a Lie algebra map.
    pub fn validate(&self) -> Result<()> {
        let p = &*self.pres;
        let n = self.dim();
        for b in &self.basis {
            if b.character.len() != p.torus_rank() {
                return Err(Error::Representation(format!("character of {} has wrong length", b.label)));
            }
        }
        for (&i, a) in &self.actions {
            if i >= p.n_generators() {
                return Err(Error::Representation(format!("action for unknown generator index {i}")));
            }
            if a.rows() != n || a.cols() != n {
                return Err(Error::Representation(format!("action of {} has wrong size", p.name(i))));
            }
            let d = p.degree(i);
            for (r, c, _) in a.nonzeros() {
                let ok = self.character(r).iter().zip(self.character(c)).zip(d).all(|((x, y), z)| *x == y + z);
                if !ok {
                    return Err(Error::Representation(format!(
                        "action of {} maps {} to {} against the torus grading",
                        p.name(i),
                        self.basis[c].label,
                        self.basis[r].label
                    )));
                }
            }
        }
        let active: Vec<usize> = self.active_generators();
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (x, &i) in active.iter().enumerate() {
            for &j in &active[x + 1..] {
                pairs.insert((i, j));
            }
        }
        if !active.is_empty() && !p.brackets().is_empty() {
            let prod = p.producers();
            for &k in &active {
                pairs.extend(prod[k].iter().copied());
            }
        }
        for (i, j) in pairs {
            let lhs = match (self.actions.get(&i), self.actions.get(&j)) {
                (Some(a), Some(b)) => a.commutator(b),
                _ => Mat::zeros(n, n),
            };
            let mut rhs = Mat::zeros(n, n);
            for (k, c) in p.bracket(i, j) {
                if let Some(a) = self.actions.get(&k) {
                    rhs.add_scaled(a, &c);
                }
            }
            if lhs != rhs {
                return Err(Error::Representation(format!(
                    "actions of {} and {} violate the bracket relation",
                    p.name(i),
                    p.name(j)
                )));
            }
        }
        Ok(())
    }

    /// Action of a Lie algebra element given as coefficients on generators.
    pub fn action_of_combination(&self, x: &[(usize, Rat)]) -> Mat {
        let mut m = Mat::zeros(self.dim(), self.dim());
        for (i, c) in x {
            if let Some(a) = self.actions.get(i) {
                m.add_scaled(a, c);
            }
        }
        m
    }
}
