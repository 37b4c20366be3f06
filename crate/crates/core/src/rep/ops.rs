use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::morphism::Morphism;
use super::object::{BasisVector, RepObject};
use crate::error::{Error, Result};
use crate::group::GroupPresentation;
use crate::linalg::{Mat, Rat, Subspace};

pub fn unit_object(p: &Arc<GroupPresentation>) -> RepObject {
    simple_character(p, &vec![0; p.torus_rank()])
}

pub fn simple_character(p: &Arc<GroupPresentation>, chi: &[i64]) -> RepObject {
    let label = format!("e{chi:?}");
    RepObject::new_unchecked(p.clone(), vec![BasisVector::new(label, chi.to_vec())], BTreeMap::new())
}

/// A semisimple object with one basis vector per listed character.
pub fn pure_object(p: &Arc<GroupPresentation>, chars: &[Vec<i64>]) -> RepObject {
    let basis = chars.iter().enumerate().map(|(i, c)| BasisVector::new(format!("v{i}"), c.clone())).collect();
    RepObject::new_unchecked(p.clone(), basis, BTreeMap::new())
}

fn check_same(a: &RepObject, b: &RepObject) -> Result<()> {
    if a.same_group(b) {
        Ok(())
    } else {
        Err(Error::Precondition("objects live over different presentations".into()))
    }
}

pub fn direct_sum(a: &RepObject, b: &RepObject) -> Result<RepObject> {
    check_same(a, b)?;
    let mut basis = a.basis().to_vec();
    basis.extend(b.basis().iter().cloned());
    let keys: BTreeSet<usize> = a.actions().keys().chain(b.actions().keys()).copied().collect();
    let actions = keys
        .into_iter()
        .map(|i| (i, Mat::block_diag(&a.action_or_zero(i), &b.action_or_zero(i))))
        .collect();
    Ok(RepObject::new_unchecked(a.pres_arc().clone(), basis, actions))
}

pub fn tensor_product(a: &RepObject, b: &RepObject) -> Result<RepObject> {
    check_same(a, b)?;
    let mut basis = Vec::with_capacity(a.dim() * b.dim());
    for x in a.basis() {
        for y in b.basis() {
            let chi = x.character.iter().zip(&y.character).map(|(u, v)| u + v).collect();
            basis.push(BasisVector::new(format!("{}⊗{}", x.label, y.label), chi));
        }
    }
    let ia = Mat::identity(a.dim());
    let ib = Mat::identity(b.dim());
    let keys: BTreeSet<usize> = a.actions().keys().chain(b.actions().keys()).copied().collect();
    let actions = keys
        .into_iter()
        .map(|i| {
            let mut m = Mat::zeros(a.dim() * b.dim(), a.dim() * b.dim());
            if let Some(x) = a.action(i) {
                m = m.add(&Mat::kron(x, &ib));
            }
            if let Some(y) = b.action(i) {
                m = m.add(&Mat::kron(&ia, y));
            }
            (i, m)
        })
        .collect();
    Ok(RepObject::new_unchecked(a.pres_arc().clone(), basis, actions))
}

pub fn dual(a: &RepObject) -> RepObject {
    let basis = a
        .basis()
        .iter()
        .map(|b| BasisVector::new(format!("{}*", b.label), b.character.iter().map(|x| -x).collect()))
        .collect();
    let actions = a.actions().iter().map(|(&i, m)| (i, m.transpose().scale(&-Rat::one()))).collect();
    RepObject::new_unchecked(a.pres_arc().clone(), basis, actions)
}

/// `Hom(M, N)` with basis `E_ab` (from `M`'s `b` to `N`'s `a`) in row-major order,
/// so coordinates are the entries of a `dim N x dim M` matrix.
pub fn internal_hom(m: &RepObject, n: &RepObject) -> Result<RepObject> {
    check_same(m, n)?;
    let mut basis = Vec::with_capacity(m.dim() * n.dim());
    for y in n.basis() {
        for x in m.basis() {
            let chi = y.character.iter().zip(&x.character).map(|(u, v)| u - v).collect();
            basis.push(BasisVector::new(format!("Hom({},{})", x.label, y.label), chi));
        }
    }
    let im = Mat::identity(m.dim());
    let inn = Mat::identity(n.dim());
    let keys: BTreeSet<usize> = m.actions().keys().chain(n.actions().keys()).copied().collect();
    let actions = keys
        .into_iter()
        .map(|i| {
            let dim = m.dim() * n.dim();
            let mut a = Mat::zeros(dim, dim);
            if let Some(y) = n.action(i) {
                a = a.add(&Mat::kron(y, &im));
            }
            if let Some(x) = m.action(i) {
                a = a.sub(&Mat::kron(&inn, &x.transpose()));
            }
            (i, a)
        })
        .collect();
    Ok(RepObject::new_unchecked(m.pres_arc().clone(), basis, actions))
}

/// `M ⊗ Q(k)` in the single-rank Tate convention, or a general character twist.
pub fn twist(m: &RepObject, chi: &[i64]) -> RepObject {
    let basis = m
        .basis()
        .iter()
        .map(|b| BasisVector::new(b.label.clone(), b.character.iter().zip(chi).map(|(x, y)| x + y).collect()))
        .collect();
    RepObject::new_unchecked(m.pres_arc().clone(), basis, m.actions().clone())
}

pub fn gr_object(m: &RepObject) -> RepObject {
    RepObject::new_unchecked(m.pres_arc().clone(), m.basis().to_vec(), BTreeMap::new())
}

/// Coordinate subspace `W_n` spanned by basis vectors of weight at most `n`.
pub fn weight_subspace(m: &RepObject, n: i64) -> Subspace {
    Subspace::coordinate(m.dim(), (0..m.dim()).filter(|&a| m.weight(a) <= n))
}

/// The inclusion `W_n M -> M`.
pub fn weight_filtration(m: &RepObject, n: i64) -> Result<Morphism> {
    Ok(subquotient(m, &weight_subspace(m, n))?.inclusion)
}

pub fn w_sub(m: &RepObject, n: i64) -> RepObject {
    subquotient(m, &weight_subspace(m, n)).expect("weight filtration is stable").sub
}

pub fn w_quotient(m: &RepObject, n: i64) -> RepObject {
    subquotient(m, &weight_subspace(m, n)).expect("weight filtration is stable").quotient
}

#[derive(Clone, Debug)]
pub struct SubQuotient {
    pub sub: RepObject,
    pub quotient: RepObject,
    pub inclusion: Morphism,
    pub projection: Morphism,
}

/// Checks that `s` is spanned by torus eigenvectors.
pub fn is_homogeneous(m: &RepObject, s: &Subspace) -> bool {
    s.basis().iter().all(|v| {
        m.distinct_characters().iter().all(|chi| {
            let proj: Vec<Rat> =
                (0..m.dim()).map(|a| if m.character(a) == chi.as_slice() { v[a].clone() } else { Rat::zero() }).collect();
            s.contains(&proj)
        })
    })
}

pub fn is_stable(m: &RepObject, s: &Subspace) -> bool {
    m.actions().values().all(|a| s.basis().iter().all(|v| s.contains(&a.mul_vec(v))))
}

pub fn subquotient(m: &RepObject, s: &Subspace) -> Result<SubQuotient> {
    if s.ambient() != m.dim() {
        return Err(Error::Dimension(format!("subspace of ambient {} in object of dim {}", s.ambient(), m.dim())));
    }
    if !is_homogeneous(m, s) {
        return Err(Error::NotSubobject("subspace is not spanned by torus eigenvectors".into()));
    }
    let k = s.dim();
    let comp = s.complement_coordinates();
    let n = m.dim();
    let mut p = Mat::zeros(n, n);
    let mut sub_basis = Vec::with_capacity(k);
    for (j, v) in s.basis().iter().enumerate() {
        let a = v.iter().position(|x| !x.is_zero()).expect("nonzero basis vector");
        let unit = v.iter().filter(|x| !x.is_zero()).count() == 1 && v[a].is_one();
        let label = if unit { m.basis()[a].label.clone() } else { format!("s{j}") };
        sub_basis.push(BasisVector::new(label, m.character(a).to_vec()));
        for (i, x) in v.iter().enumerate() {
            p.set(i, j, x.clone());
        }
    }
    let mut q_basis = Vec::with_capacity(comp.len());
    for (j, &c) in comp.iter().enumerate() {
        p.set(c, k + j, Rat::one());
        q_basis.push(m.basis()[c].clone());
    }
    let pinv = p.inverse().expect("completed basis is invertible");
    let top: Vec<usize> = (0..k).collect();
    let bottom: Vec<usize> = (k..n).collect();
    let mut sub_actions = BTreeMap::new();
    let mut q_actions = BTreeMap::new();
    for (&i, a) in m.actions() {
        let conj = pinv.mul(a).mul(&p);
        if !conj.submatrix(&bottom, &top).is_zero() {
            return Err(Error::NotSubobject(format!(
                "subspace is not stable under {}",
                m.presentation().name(i)
            )));
        }
        sub_actions.insert(i, conj.submatrix(&top, &top));
        q_actions.insert(i, conj.submatrix(&bottom, &bottom));
    }
    let pres = m.pres_arc().clone();
    let sub = RepObject::new_unchecked(pres.clone(), sub_basis, sub_actions);
    let quotient = RepObject::new_unchecked(pres, q_basis, q_actions);
    let all: Vec<usize> = (0..n).collect();
    let inclusion = Morphism::new_unchecked(sub.clone(), m.clone(), p.submatrix(&all, &top));
    let projection = Morphism::new_unchecked(m.clone(), quotient.clone(), pinv.submatrix(&bottom, &all));
    Ok(SubQuotient { sub, quotient, inclusion, projection })
}

/// `Hom(M, N)` as a subspace of `dim N x dim M` matrices (row-major coordinates).
pub fn morphism_space(m: &RepObject, n: &RepObject) -> Result<Subspace> {
    check_same(m, n)?;
    let (dm, dn) = (m.dim(), n.dim());
    let vars: Vec<(usize, usize)> = (0..dn)
        .flat_map(|a| (0..dm).map(move |b| (a, b)))
        .filter(|&(a, b)| n.character(a) == m.character(b))
        .collect();
    let var_index: HashMap<(usize, usize), usize> = vars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let keys: BTreeSet<usize> = m.actions().keys().chain(n.actions().keys()).copied().collect();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for i in keys {
        let am = m.action_or_zero(i);
        let an = n.action_or_zero(i);
        // (F A^M - A^N F)[a, c] = 0
        for a in 0..dn {
            for c in 0..dm {
                let mut row = vec![Rat::zero(); vars.len()];
                let mut any = false;
                for b in 0..dm {
                    let x = am.get(b, c);
                    if !x.is_zero() {
                        if let Some(&k) = var_index.get(&(a, b)) {
                            row[k] += x;
                            any = true;
                        }
                    }
                }
                for b in 0..dn {
                    let x = an.get(a, b);
                    if !x.is_zero() {
                        if let Some(&k) = var_index.get(&(b, c)) {
                            row[k] -= x;
                            any = true;
                        }
                    }
                }
                if any {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..vars.len())
            .map(|k| {
                let mut v = vec![Rat::zero(); vars.len()];
                v[k] = Rat::one();
                v
            })
            .collect()
    } else {
        Mat::from_rows(rows).kernel()
    };
    let full: Vec<Vec<Rat>> = kernel
        .into_iter()
        .map(|k| {
            let mut v = vec![Rat::zero(); dn * dm];
            for (idx, &(a, b)) in vars.iter().enumerate() {
                v[a * dm + b] = k[idx].clone();
            }
            v
        })
        .collect();
    Ok(Subspace::span(dn * dm, &full))
}

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Yes(Morphism),
    No(String),
    Unknown(String),
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }
    pub fn is_no(&self) -> bool {
        matches!(self, IsoVerdict::No(_))
    }
    pub fn as_str(&self) -> &'static str {
        match self {
            IsoVerdict::Yes(_) => "yes",
            IsoVerdict::No(_) => "no",
            IsoVerdict::Unknown(_) => "unknown",
        }
    }
}

/// Decides isomorphism. Exact when the morphism space has dimension at most
/// three (the determinant is tested on a grid large enough to certify
/// vanishing); otherwise a seeded random search that may answer `Unknown`.
pub fn is_isomorphic(m: &RepObject, n: &RepObject) -> Result<IsoVerdict> {
    check_same(m, n)?;
    if m.dim() != n.dim() {
        return Ok(IsoVerdict::No("dimensions differ".into()));
    }
    let mut cm: Vec<Vec<i64>> = m.basis().iter().map(|b| b.character.clone()).collect();
    let mut cn: Vec<Vec<i64>> = n.basis().iter().map(|b| b.character.clone()).collect();
    cm.sort();
    cn.sort();
    if cm != cn {
        return Ok(IsoVerdict::No("character multisets differ".into()));
    }
    let span_dim = |x: &RepObject| {
        let vs: Vec<Vec<Rat>> = x.actions().values().map(|a| a.flat().to_vec()).collect();
        Subspace::span(x.dim() * x.dim(), &vs).dim()
    };
    if span_dim(m) != span_dim(n) {
        return Ok(IsoVerdict::No("unipotent images have different dimensions".into()));
    }
    let d = m.dim();
    let hom = morphism_space(m, n)?;
    let k = hom.dim();
    if d == 0 {
        return Ok(IsoVerdict::Yes(Morphism::new_unchecked(m.clone(), n.clone(), Mat::zeros(0, 0))));
    }
    if k == 0 {
        return Ok(IsoVerdict::No("no nonzero morphisms".into()));
    }
    let as_mat = |coeffs: &[Rat]| {
        let mut f = Mat::zeros(d, d);
        for (c, v) in coeffs.iter().zip(hom.basis()) {
            if !c.is_zero() {
                f.add_scaled(&Mat::from_flat(d, d, v.clone()), c);
            }
        }
        f
    };
    let try_point = |coeffs: &[Rat]| -> Option<Morphism> {
        let f = as_mat(coeffs);
        (!f.determinant().is_zero()).then(|| Morphism::new_unchecked(m.clone(), n.clone(), f))
    };
    if k <= 3 {
        let side = d as i64 + 1;
        let total = side.pow(k as u32);
        for idx in 0..total {
            let mut t = idx;
            let coeffs: Vec<Rat> = (0..k)
                .map(|_| {
                    let v = t % side;
                    t /= side;
                    Rat::from_int(v)
                })
                .collect();
            if let Some(f) = try_point(&coeffs) {
                return Ok(IsoVerdict::Yes(f));
            }
        }
        return Ok(IsoVerdict::No("every morphism is singular".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ISO_SEED);
    for _ in 0..64 {
        let coeffs: Vec<Rat> = (0..k).map(|_| Rat::from_int(rng.gen_range(-1000..=1000))).collect();
        if let Some(f) = try_point(&coeffs) {
            return Ok(IsoVerdict::Yes(f));
        }
    }
    Ok(IsoVerdict::Unknown(format!("no invertible morphism found in a {k}-dimensional space")))
}

const ISO_SEED: u64 = 0x5eed_0150;

/// Smallest subobject containing the given vectors: their isotypic components
/// closed under every action matrix.
pub fn generated_subobject(m: &RepObject, vectors: &[Vec<Rat>]) -> Subspace {
    let chars = m.distinct_characters();
    let mut frontier: Vec<Vec<Rat>> = Vec::new();
    for v in vectors {
        for chi in &chars {
            let proj: Vec<Rat> = (0..m.dim()).map(|a| if m.character(a) == chi.as_slice() { v[a].clone() } else { Rat::zero() }).collect();
            if proj.iter().any(|x| !x.is_zero()) {
                frontier.push(proj);
            }
        }
    }
    let mut s = Subspace::zero(m.dim());
    while let Some(v) = frontier.pop() {
        if s.contains(&v) {
            continue;
        }
        s = s.sum(&Subspace::span(m.dim(), std::slice::from_ref(&v)));
        for a in m.actions().values() {
            let w = a.mul_vec(&v);
            if !s.contains(&w) {
                frontier.push(w);
            }
        }
    }
    s
}
