use std::collections::{BTreeMap, BTreeSet};

use super::complex::CeComplex;
use crate::error::{Error, Result};
use crate::lie::w_minus1_end;
use crate::linalg::mat::{axpy, is_zero_vec};
use crate::linalg::{solve_linear, IntLattice, Mat, Rat, Solution, Subspace};
use crate::rep::{internal_hom, subquotient, unit_object, w_quotient, w_sub, BasisVector, Morphism, RepObject};

/// A class in `Ext^1(1, X)` represented by a 1-cocycle: for each generator
/// with nonzero value, a vector of `X` of the generator's character.
#[derive(Clone, Debug)]
pub struct ExtClass {
    pub target: RepObject,
    pub cocycle: BTreeMap<usize, Vec<Rat>>,
}

/// A class in `Ext^2(1, X)` represented by a 2-cocycle on pairs `i < j`.
#[derive(Clone, Debug)]
pub struct Ext2Class {
    pub target: RepObject,
    pub cochain: BTreeMap<(usize, usize), Vec<Rat>>,
}

fn sparse_vec(v: &[Rat]) -> Vec<(usize, Rat)> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

impl ExtClass {
    /// Validates character support and the cocycle condition.
    pub fn new(target: RepObject, cocycle: BTreeMap<usize, Vec<Rat>>) -> Result<ExtClass> {
        let e = ExtClass::new_unchecked(target, cocycle);
        e.check()?;
        Ok(e)
    }

    pub fn new_unchecked(target: RepObject, mut cocycle: BTreeMap<usize, Vec<Rat>>) -> ExtClass {
        cocycle.retain(|_, v| !is_zero_vec(v));
        ExtClass { target, cocycle }
    }

    pub fn zero(target: RepObject) -> ExtClass {
        ExtClass { target, cocycle: BTreeMap::new() }
    }

    pub fn value(&self, g: usize) -> Vec<Rat> {
        self.cocycle.get(&g).cloned().unwrap_or_else(|| vec![Rat::zero(); self.target.dim()])
    }

    pub fn is_zero_cochain(&self) -> bool {
        self.cocycle.is_empty()
    }

    fn check(&self) -> Result<()> {
        let x = &self.target;
        let p = x.presentation();
        for (&g, v) in &self.cocycle {
            if g >= p.n_generators() || v.len() != x.dim() {
                return Err(Error::Cocycle("cochain has the wrong shape".into()));
            }
            for (a, c) in v.iter().enumerate() {
                if !c.is_zero() && x.character(a) != p.degree(g) {
                    return Err(Error::Cocycle(format!(
                        "value on {} has a component of the wrong character",
                        p.name(g)
                    )));
                }
            }
        }
        // Pairs that can violate c([i,j]) = A_i c_j - A_j c_i.
        let support: Vec<usize> = self.cocycle.keys().copied().collect();
        let active = x.active_generators();
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &s in &support {
            for &t in &active {
                if s != t {
                    pairs.insert((s.min(t), s.max(t)));
                }
            }
            if !p.brackets().is_empty() {
                pairs.extend(p.producers()[s].iter().copied());
            }
        }
        for (i, j) in pairs {
            let mut lhs = vec![Rat::zero(); x.dim()];
            for (k, c) in p.bracket(i, j) {
                if let Some(v) = self.cocycle.get(&k) {
                    axpy(&mut lhs, &c, v);
                }
            }
            let mut rhs = vec![Rat::zero(); x.dim()];
            if let (Some(a), Some(v)) = (x.action(i), self.cocycle.get(&j)) {
                axpy(&mut rhs, &Rat::one(), &a.mul_vec(v));
            }
            if let (Some(a), Some(v)) = (x.action(j), self.cocycle.get(&i)) {
                axpy(&mut rhs, &-Rat::one(), &a.mul_vec(v));
            }
            if lhs != rhs {
                return Err(Error::Cocycle(format!(
                    "cocycle condition fails on ({}, {})",
                    p.name(i),
                    p.name(j)
                )));
            }
        }
        Ok(())
    }

    pub fn add(&self, o: &ExtClass) -> Result<ExtClass> {
        self.combine(o, &Rat::one())
    }

    pub fn scale(&self, s: &Rat) -> ExtClass {
        let c = self.cocycle.iter().map(|(&g, v)| (g, v.iter().map(|x| x * s).collect())).collect();
        ExtClass::new_unchecked(self.target.clone(), c)
    }

    /// `self + s * o`.
    pub fn combine(&self, o: &ExtClass, s: &Rat) -> Result<ExtClass> {
        if self.target.dim() != o.target.dim() {
            return Err(Error::Precondition("classes have different targets".into()));
        }
        let mut c = self.cocycle.clone();
        for (&g, v) in &o.cocycle {
            let e = c.entry(g).or_insert_with(|| vec![Rat::zero(); self.target.dim()]);
            axpy(e, s, v);
        }
        Ok(ExtClass::new_unchecked(self.target.clone(), c))
    }

    /// The extension `0 -> X -> E -> 1 -> 0`; the lift of `1` is the last basis vector.
    pub fn extension_object(&self) -> RepObject {
        let x = &self.target;
        let n = x.dim();
        let mut basis = x.basis().to_vec();
        basis.push(BasisVector::new("lift", vec![0; x.presentation().torus_rank()]));
        let keys: BTreeSet<usize> = x.actions().keys().chain(self.cocycle.keys()).copied().collect();
        let actions = keys
            .into_iter()
            .map(|g| {
                let mut m = Mat::zeros(n + 1, n + 1);
                if let Some(a) = x.action(g) {
                    for (r, c, v) in a.nonzeros() {
                        m.set(r, c, v.clone());
                    }
                }
                if let Some(v) = self.cocycle.get(&g) {
                    for (r, val) in v.iter().enumerate() {
                        m.set(r, n, val.clone());
                    }
                }
                (g, m)
            })
            .collect();
        RepObject::new_unchecked(x.pres_arc().clone(), basis, actions)
    }

    /// Canonical representative modulo coboundaries.
    pub fn normal_form(&self) -> Result<BTreeMap<usize, Vec<Rat>>> {
        let cx = CeComplex::new(&self.target);
        let v = cx.flatten1(&self.cocycle)?;
        let b1 = coboundary_space1(&cx);
        Ok(cx.unflatten1(&b1.reduce(&v)))
    }
}

fn coboundary_space1(cx: &CeComplex) -> Subspace {
    let d0 = cx.d0();
    let n0 = cx.c0.len();
    let cols: Vec<Vec<Rat>> = (0..n0)
        .map(|k| {
            let mut e = vec![Rat::zero(); n0];
            e[k] = Rat::one();
            d0.apply(&e)
        })
        .collect();
    Subspace::span(cx.c1.len(), &cols)
}

impl Ext2Class {
    pub fn is_zero_cochain(&self) -> bool {
        self.cochain.values().all(|v| is_zero_vec(v))
    }
}

pub fn h1_dim(x: &RepObject) -> usize {
    let cx = CeComplex::new(x);
    let r0 = cx.d0().rank();
    let r1 = cx.d1().rank();
    cx.c1.len() - r1 - r0
}

pub fn h2_dim(x: &RepObject) -> usize {
    let cx = CeComplex::new(x);
    let r1 = cx.d1().rank();
    let r2 = cx.d2().rank();
    cx.c2.len() - r2 - r1
}

/// Representatives of a basis of `H^1`, normalised modulo coboundaries and
/// put in echelon form, so the output is canonical.
pub fn h1_basis(x: &RepObject) -> Vec<ExtClass> {
    let cx = CeComplex::new(x);
    let z1 = cx.d1().echelon().kernel_basis();
    let b1 = coboundary_space1(&cx);
    if z1.len() == b1.dim() {
        return Vec::new();
    }
    let reduced: Vec<Vec<Rat>> = z1.iter().map(|z| b1.reduce(z)).collect();
    let h = Subspace::span(cx.c1.len(), &reduced);
    h.basis().iter().map(|v| ExtClass::new_unchecked(x.clone(), cx.unflatten1(v))).collect()
}

/// Representatives of a basis of `H^2`. The full kernel is only computed when
/// the cohomology is nonzero, which keeps vanishing checks cheap on large models.
pub fn h2_basis(x: &RepObject) -> Result<Vec<Ext2Class>> {
    let cx = CeComplex::new(x);
    let d1 = cx.d1();
    let d2 = cx.d2();
    let r1 = d1.rank();
    let e2 = d2.echelon();
    if cx.c2.len() == e2.rank() + r1 {
        return Ok(Vec::new());
    }
    if cx.c2.len() > 4000 {
        return Err(Error::TooLarge(format!("H^2 basis over {} cochain coordinates", cx.c2.len())));
    }
    let z2 = e2.kernel_basis();
    let b2 = image_space(&d1, cx.c1.len(), cx.c2.len());
    let reduced: Vec<Vec<Rat>> = z2.iter().map(|z| b2.reduce(z)).collect();
    let h = Subspace::span(cx.c2.len(), &reduced);
    Ok(h.basis().iter().map(|v| Ext2Class { target: x.clone(), cochain: cx.unflatten2(v) }).collect())
}

fn image_space(d: &crate::linalg::SparseMatrix<Rat>, ncols: usize, nrows: usize) -> Subspace {
    let cols: Vec<Vec<Rat>> = (0..ncols)
        .map(|k| {
            let mut e = vec![Rat::zero(); ncols];
            e[k] = Rat::one();
            d.apply(&e)
        })
        .collect();
    Subspace::span(nrows, &cols)
}

/// Whether a 2-cocycle is a coboundary; returns a primitive when it is.
pub fn ext2_primitive(w: &Ext2Class) -> Result<Option<ExtClass>> {
    let cx = CeComplex::new(&w.target);
    let rhs = cx.flatten2(&w.cochain)?;
    if is_zero_vec(&rhs) {
        return Ok(Some(ExtClass::zero(w.target.clone())));
    }
    let d1 = cx.d1();
    let mut a = Mat::zeros(cx.c2.len(), cx.c1.len());
    for (r, row) in d1.rows.iter().enumerate() {
        for (c, v) in row {
            a.set(r, *c, v.clone());
        }
    }
    match solve_linear(&a, &rhs)? {
        Solution::Feasible { particular, .. } => Ok(Some(ExtClass::new_unchecked(w.target.clone(), cx.unflatten1(&particular)))),
        Solution::Infeasible { .. } => Ok(None),
    }
}

/// The class of `0 -> Hom(M/W_p M, W_p M) -> ... -> 1 -> 0`: its cocycle is the
/// block of each action matrix mapping the top part into `W_p M`.
pub fn e_p_class(m: &RepObject, p: i64) -> Result<ExtClass> {
    let low: Vec<usize> = (0..m.dim()).filter(|&a| m.weight(a) <= p).collect();
    let high: Vec<usize> = (0..m.dim()).filter(|&a| m.weight(a) > p).collect();
    let target = internal_hom(&w_quotient(m, p), &w_sub(m, p))?;
    let mut cocycle = BTreeMap::new();
    for (&g, a) in m.actions() {
        let mut v = vec![Rat::zero(); low.len() * high.len()];
        for (x, &r) in low.iter().enumerate() {
            for (y, &c) in high.iter().enumerate() {
                v[x * high.len() + y] = a.get(r, c).clone();
            }
        }
        cocycle.insert(g, v);
    }
    Ok(ExtClass::new_unchecked(target, cocycle))
}

/// The extension `M_p^dagger` of `1` by `Hom(M/W_p M, W_p M)`, realised as the
/// subobject of `Hom(M/W_p M, M)` generated by that block and the identity lift.
/// Returns the object and the index of the lift in its basis.
pub fn dagger_object(m: &RepObject, p: i64) -> Result<(RepObject, usize)> {
    let q = w_quotient(m, p);
    if q.dim() == 0 {
        return Ok((unit_object(m.pres_arc()), 0));
    }
    let hom = internal_hom(&q, m)?;
    let dq = q.dim();
    let high: Vec<usize> = (0..m.dim()).filter(|&a| m.weight(a) > p).collect();
    let mut vecs: Vec<Vec<Rat>> = Vec::new();
    for a in (0..m.dim()).filter(|&a| m.weight(a) <= p) {
        for b in 0..dq {
            let mut v = vec![Rat::zero(); hom.dim()];
            v[a * dq + b] = Rat::one();
            vecs.push(v);
        }
    }
    let mut lift = vec![Rat::zero(); hom.dim()];
    for (b, &a) in high.iter().enumerate() {
        lift[a * dq + b] = Rat::one();
    }
    vecs.push(lift.clone());
    let s = Subspace::span(hom.dim(), &vecs);
    let sq = subquotient(&hom, &s)?;
    let idx = s.basis().iter().position(|v| *v == lift).expect("lift is an echelon row");
    Ok((sq.sub, idx))
}

/// Reads off the class of an extension of `1` by a subobject, given the
/// index of a character-zero lift of `1`.
pub fn class_of_extension(e: &RepObject, lift: usize) -> ExtClass {
    let keep: Vec<usize> = (0..e.dim()).filter(|&a| a != lift).collect();
    let basis: Vec<BasisVector> = keep.iter().map(|&a| e.basis()[a].clone()).collect();
    let mut actions = BTreeMap::new();
    let mut cocycle = BTreeMap::new();
    for (&g, a) in e.actions() {
        actions.insert(g, a.submatrix(&keep, &keep));
        cocycle.insert(g, keep.iter().map(|&r| a.get(r, lift).clone()).collect());
    }
    let x = RepObject::new_unchecked(e.pres_arc().clone(), basis, actions);
    ExtClass::new_unchecked(x, cocycle)
}

/// `W_{-1} End(ωM)` as an object; its basis is the strictly lowering `E_ab`
/// in row-major order.
pub fn w_minus1_end_object(m: &RepObject) -> Result<RepObject> {
    let end = internal_hom(m, m)?;
    Ok(subquotient(&end, &w_minus1_end(m))?.sub)
}

/// Deligne's total class `sum_p E_p(M)` pushed into `W_{-1} End(ωM)`, the sum
/// running over every integer `p`. Each entry of `A_i` is counted once for every
/// integer step it crosses, so the cocycle is `(-w.deg_i) A_i`.
pub fn total_class(m: &RepObject) -> Result<ExtClass> {
    let target = w_minus1_end_object(m)?;
    let n = m.dim();
    let coords: Vec<usize> = w_minus1_end(m).pivots().to_vec();
    let pos: std::collections::HashMap<usize, usize> = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut total = ExtClass::zero(target.clone());
    let ws = m.distinct_weights();
    let (Some(&lo), Some(&hi)) = (ws.first(), ws.last()) else {
        return Ok(total);
    };
    for p in lo..hi {
        let e = e_p_class(m, p)?;
        let low: Vec<usize> = (0..n).filter(|&a| m.weight(a) <= p).collect();
        let high: Vec<usize> = (0..n).filter(|&a| m.weight(a) > p).collect();
        let mut f = Mat::zeros(target.dim(), e.target.dim());
        for (x, &r) in low.iter().enumerate() {
            for (y, &c) in high.iter().enumerate() {
                f.set(pos[&(r * n + c)], x * high.len() + y, Rat::one());
            }
        }
        let iota = Morphism::new_unchecked(e.target.clone(), target.clone(), f);
        total = total.add(&pushforward_class(&e, &iota)?)?;
    }
    Ok(total)
}

pub fn pushforward_class(e: &ExtClass, f: &Morphism) -> Result<ExtClass> {
    if f.source.dim() != e.target.dim() {
        return Err(Error::Precondition("morphism source is not the class target".into()));
    }
    let c = e.cocycle.iter().map(|(&g, v)| (g, f.matrix.mul_vec(v))).collect();
    Ok(ExtClass::new_unchecked(f.target.clone(), c))
}

/// Image of the class in `Ext^1(1, X/A)` for a subobject `A` of `X`.
pub fn quotient_class(e: &ExtClass, a: &Subspace) -> Result<ExtClass> {
    let sq = subquotient(&e.target, a)?;
    pushforward_class(e, &sq.projection)
}

#[derive(Clone, Debug)]
pub enum SplitVerdict {
    /// `c_i = A_i v` for the given `v` in the character-zero part.
    Split { v: Vec<Rat> },
    /// The linear system `A v = c` and a row combination killing `A` but not `c`.
    NonSplit { system: Mat, rhs: Vec<Rat>, certificate: Vec<Rat> },
}

impl SplitVerdict {
    pub fn is_split(&self) -> bool {
        matches!(self, SplitVerdict::Split { .. })
    }
}

pub fn is_split(e: &ExtClass) -> Result<SplitVerdict> {
    let x = &e.target;
    let zero = vec![0; x.presentation().torus_rank()];
    let c0 = x.isotypic(&zero);
    let gens: BTreeSet<usize> = e.cocycle.keys().chain(x.actions().keys()).copied().collect();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs = Vec::new();
    for g in gens {
        let a = x.action(g);
        let c = e.cocycle.get(&g);
        for r in 0..x.dim() {
            let row: Vec<Rat> = c0.iter().map(|&b| a.map_or(Rat::zero(), |m| m.get(r, b).clone())).collect();
            let val = c.map_or(Rat::zero(), |v| v[r].clone());
            if is_zero_vec(&row) && val.is_zero() {
                continue;
            }
            rows.push(row);
            rhs.push(val);
        }
    }
    let system = if rows.is_empty() { Mat::zeros(0, c0.len()) } else { Mat::from_rows(rows) };
    if system.rows() == 0 {
        return Ok(SplitVerdict::Split { v: vec![Rat::zero(); x.dim()] });
    }
    match solve_linear(&system, &rhs)? {
        Solution::Feasible { particular, .. } => {
            let mut v = vec![Rat::zero(); x.dim()];
            for (k, &b) in c0.iter().enumerate() {
                v[b] = particular[k].clone();
            }
            Ok(SplitVerdict::Split { v })
        }
        Solution::Infeasible { certificate } => Ok(SplitVerdict::NonSplit { system, rhs, certificate }),
    }
}

/// `{x in n : x acts by zero on S}`, restricted to the generators that act on
/// one of the listed objects, as coefficient vectors over `gens`.
fn annihilator(s: &RepObject, gens: &[usize]) -> Vec<Vec<Rat>> {
    let d = s.dim();
    if d == 0 || gens.is_empty() {
        return (0..gens.len())
            .map(|k| {
                let mut v = vec![Rat::zero(); gens.len()];
                v[k] = Rat::one();
                v
            })
            .collect();
    }
    let mut sys = Mat::zeros(d * d, gens.len());
    for (j, &g) in gens.iter().enumerate() {
        if let Some(a) = s.action(g) {
            for (k, v) in a.flat().iter().enumerate() {
                if !v.is_zero() {
                    sys.set(k, j, v.clone());
                }
            }
        }
    }
    sys.kernel()
}

fn char_lattice(s: &RepObject) -> IntLattice {
    let gens: Vec<Vec<i64>> = s.basis().iter().map(|b| b.character.clone()).collect();
    IntLattice::new(s.presentation().torus_rank(), &gens)
}

#[derive(Clone, Debug)]
pub enum OriginVerdict {
    /// An invariant lift `u + lift` of `1` under the kernel of `G -> G(S)`.
    Originates { u: Vec<Rat> },
    NotOriginating { system: Mat, rhs: Vec<Rat>, certificate: Vec<Rat> },
}

impl OriginVerdict {
    pub fn originates(&self) -> bool {
        matches!(self, OriginVerdict::Originates { .. })
    }
}

/// Decides whether the extension comes from the subcategory generated by `s`,
/// i.e. whether `1` lifts to a vector fixed by `H = ker(G -> G(S))`.
pub fn originates_from(e: &ExtClass, s: &RepObject) -> Result<OriginVerdict> {
    let x = &e.target;
    if !x.same_group(s) {
        return Err(Error::Precondition("objects over different presentations".into()));
    }
    let gens: Vec<usize> = x
        .actions()
        .keys()
        .chain(s.actions().keys())
        .chain(e.cocycle.keys())
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let lattice = char_lattice(s);
    let allowed: Vec<usize> = (0..x.dim()).filter(|&a| lattice.contains(x.character(a))).collect();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for y in annihilator(s, &gens) {
        let mut act = Mat::zeros(x.dim(), x.dim());
        let mut c = vec![Rat::zero(); x.dim()];
        for (k, &g) in gens.iter().enumerate() {
            if y[k].is_zero() {
                continue;
            }
            if let Some(a) = x.action(g) {
                act.add_scaled(a, &y[k]);
            }
            if let Some(v) = e.cocycle.get(&g) {
                axpy(&mut c, &y[k], v);
            }
        }
        // act u + c = 0
        for (r, cr) in c.iter().enumerate() {
            let row: Vec<Rat> = allowed.iter().map(|&b| act.get(r, b).clone()).collect();
            if is_zero_vec(&row) && cr.is_zero() {
                continue;
            }
            rows.push(row);
            rhs.push(-cr);
        }
    }
    if rows.is_empty() {
        return Ok(OriginVerdict::Originates { u: vec![Rat::zero(); x.dim()] });
    }
    let system = Mat::from_rows(rows);
    match solve_linear(&system, &rhs)? {
        Solution::Feasible { particular, .. } => {
            let mut u = vec![Rat::zero(); x.dim()];
            for (k, &b) in allowed.iter().enumerate() {
                u[b] = particular[k].clone();
            }
            Ok(OriginVerdict::Originates { u })
        }
        Solution::Infeasible { certificate } => Ok(OriginVerdict::NotOriginating { system, rhs, certificate }),
    }
}

/// Whether `m` lies in the full tensor subcategory generated by `s`.
pub fn in_subcategory(m: &RepObject, s: &RepObject) -> Result<bool> {
    if !m.same_group(s) {
        return Err(Error::Precondition("objects over different presentations".into()));
    }
    let lattice = char_lattice(s);
    if !m.basis().iter().all(|b| lattice.contains(&b.character)) {
        return Ok(false);
    }
    let gens: Vec<usize> = m.actions().keys().chain(s.actions().keys()).copied().collect::<BTreeSet<_>>().into_iter().collect();
    for y in annihilator(s, &gens) {
        let act = m.action_of_combination(&gens.iter().zip(&y).map(|(&g, c)| (g, c.clone())).collect::<Vec<_>>());
        if !act.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a semisimple target, the smallest subobject `A` with `E/A` split: the
/// span of the cocycle values.
pub fn min_split_support(e: &ExtClass) -> Result<Subspace> {
    if !e.target.is_pure() {
        return Err(Error::Precondition("target must be semisimple".into()));
    }
    let vs: Vec<Vec<Rat>> = e.cocycle.values().cloned().collect();
    Ok(Subspace::span(e.target.dim(), &vs))
}

/// `Hom(M/W_p M, W_p M)` inside `End(ωM)` matched to the basis of the
/// target of `e_p_class`.
pub fn block_to_hom_coords(m: &RepObject, p: i64, s: &Subspace) -> Subspace {
    let n = m.dim();
    let low: Vec<usize> = (0..n).filter(|&a| m.weight(a) <= p).collect();
    let high: Vec<usize> = (0..n).filter(|&a| m.weight(a) > p).collect();
    let vs: Vec<Vec<Rat>> = s
        .basis()
        .iter()
        .map(|v| {
            let mut out = vec![Rat::zero(); low.len() * high.len()];
            for (x, &r) in low.iter().enumerate() {
                for (y, &c) in high.iter().enumerate() {
                    out[x * high.len() + y] = v[r * n + c].clone();
                }
            }
            out
        })
        .collect();
    Subspace::span(low.len() * high.len(), &vs)
}

/// Same as [`block_to_hom_coords`] for `W_{-1} End(ωM)`.
pub fn end_to_wm1_coords(m: &RepObject, s: &Subspace) -> Subspace {
    let coords = w_minus1_end(m).pivots().to_vec();
    let vs: Vec<Vec<Rat>> = s.basis().iter().map(|v| coords.iter().map(|&c| v[c].clone()).collect()).collect();
    Subspace::span(coords.len(), &vs)
}

/// Embeds a subspace given in `Hom(M/W_p, W_p)` coordinates back into `End(ωM)`.
pub fn hom_coords_to_end(m: &RepObject, p: i64, s: &Subspace) -> Subspace {
    let n = m.dim();
    let low: Vec<usize> = (0..n).filter(|&a| m.weight(a) <= p).collect();
    let high: Vec<usize> = (0..n).filter(|&a| m.weight(a) > p).collect();
    let vs: Vec<Vec<Rat>> = s
        .basis()
        .iter()
        .map(|v| {
            let mut out = vec![Rat::zero(); n * n];
            for (x, &r) in low.iter().enumerate() {
                for (y, &c) in high.iter().enumerate() {
                    out[r * n + c] = v[x * high.len() + y].clone();
                }
            }
            out
        })
        .collect();
    Subspace::span(n * n, &vs)
}

/// `E_p(M)` pushed forward along `Hom(M/W_p M, W_p M) -> W_{-1} End(M)`.
pub fn e_p_in_w_minus1_end(m: &RepObject, p: i64) -> Result<ExtClass> {
    let e = e_p_class(m, p)?;
    let target = w_minus1_end_object(m)?;
    let n = m.dim();
    let pos: std::collections::HashMap<usize, usize> = w_minus1_end(m).pivots().iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let low: Vec<usize> = (0..n).filter(|&a| m.weight(a) <= p).collect();
    let high: Vec<usize> = (0..n).filter(|&a| m.weight(a) > p).collect();
    let mut cocycle = BTreeMap::new();
    for (&g, v) in &e.cocycle {
        let mut out = vec![Rat::zero(); target.dim()];
        for (x, &r) in low.iter().enumerate() {
            for (y, &c) in high.iter().enumerate() {
                out[pos[&(r * n + c)]] = v[x * high.len() + y].clone();
            }
        }
        cocycle.insert(g, out);
    }
    Ok(ExtClass::new_unchecked(target, cocycle))
}

/// Sparse view used when reporting cocycles.
pub fn cocycle_terms(e: &ExtClass) -> Vec<(usize, Vec<(usize, Rat)>)> {
    e.cocycle.iter().map(|(&g, v)| (g, sparse_vec(v))).collect()
}
