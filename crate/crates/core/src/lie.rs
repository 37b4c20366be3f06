//! Lie algebras attached to an object inside `End(ωM)`.
//!
//! Endomorphisms are flattened row-major, so the coordinate `a * dim + b`
//! is the matrix entry sending basis vector `b` to basis vector `a`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg::{IntLattice, Mat, Rat, Subspace};
use crate::rep::RepObject;

/// A subspace of `End(ωM)` with a record of whether it is closed under brackets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSubspace {
    pub dim_m: usize,
    pub space: Subspace,
    pub bracket_closed: bool,
}

impl LieSubspace {
    pub fn new(dim_m: usize, space: Subspace) -> LieSubspace {
        let bracket_closed = is_bracket_closed(dim_m, &space);
        LieSubspace { dim_m, space, bracket_closed }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn matrices(&self) -> Vec<Mat> {
        self.space.basis().iter().map(|v| Mat::from_flat(self.dim_m, self.dim_m, v.clone())).collect()
    }

    pub fn contains(&self, m: &Mat) -> bool {
        self.space.contains(m.flat())
    }
}

fn is_bracket_closed(n: usize, s: &Subspace) -> bool {
    let mats: Vec<Mat> = s.basis().iter().map(|v| Mat::from_flat(n, n, v.clone())).collect();
    for (i, x) in mats.iter().enumerate() {
        for y in &mats[i + 1..] {
            if !s.contains(x.commutator(y).flat()) {
                return false;
            }
        }
    }
    true
}

/// Coordinate subspace of `End(ωM)` spanned by `E_ab` with `keep(wt a, wt b)`.
pub fn end_block(m: &RepObject, keep: impl Fn(i64, i64) -> bool) -> Subspace {
    let n = m.dim();
    let w = m.weights();
    Subspace::coordinate(n * n, (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| keep(w[a], w[b])).map(|(a, b)| a * n + b))
}

/// `W_{-1} End(ωM)`: strictly weight-lowering endomorphisms.
pub fn w_minus1_end(m: &RepObject) -> Subspace {
    end_block(m, |wa, wb| wa < wb)
}

/// `Hom(M / W_p M, W_p M)` inside `End(ωM)`.
pub fn hom_block(m: &RepObject, p: i64) -> Subspace {
    end_block(m, |wa, wb| wa <= p && p < wb)
}

/// Strictly lowering endomorphisms that vanish on `W_q M`.
pub fn vanishing_on_w(m: &RepObject, q: i64) -> Subspace {
    end_block(m, |wa, wb| wa < wb && wb > q)
}

pub fn u_of(m: &RepObject) -> LieSubspace {
    let n = m.dim();
    let vs: Vec<Vec<Rat>> = m.actions().values().map(|a| a.flat().to_vec()).collect();
    LieSubspace::new(n, Subspace::span(n * n, &vs))
}

pub fn u_p_of(m: &RepObject, p: i64) -> LieSubspace {
    let u = u_of(m);
    LieSubspace::new(m.dim(), u.space.intersect(&hom_block(m, p)))
}

pub fn u_geq_of(m: &RepObject, q: i64) -> LieSubspace {
    let u = u_of(m);
    LieSubspace::new(m.dim(), u.space.intersect(&vanishing_on_w(m, q)))
}

pub fn is_large_u(m: &RepObject) -> bool {
    u_of(m).space == w_minus1_end(m)
}

pub fn is_large_u_p(m: &RepObject, p: i64) -> bool {
    u_p_of(m, p).space == hom_block(m, p)
}

pub fn character_lattice(m: &RepObject) -> IntLattice {
    let gens: Vec<Vec<i64>> = m.basis().iter().map(|b| b.character.clone()).collect();
    IntLattice::new(m.presentation().torus_rank(), &gens)
}

/// Dimension of the image of `G` in `GL(ωM)`: the unipotent part plus the torus
/// acting through the characters of `M`.
pub fn galois_dim(m: &RepObject) -> usize {
    u_of(m).dim() + character_lattice(m).rank()
}

/// Image in `End(ωM)` of the Lie algebra of `ker(G(M) -> G(N))`, where `N` lies
/// in the tensor category generated by `M`.
pub fn relative_kernel_lie(m: &RepObject, n: &RepObject) -> Result<LieSubspace> {
    if !m.same_group(n) {
        return Err(Error::Precondition("objects over different presentations".into()));
    }
    let p = m.presentation();
    let r = p.torus_rank();
    let gens: Vec<usize> = m.actions().keys().chain(n.actions().keys()).copied().collect::<BTreeSet<_>>().into_iter().collect();
    let (dm, dn) = (m.dim(), n.dim());
    let nvars = r + gens.len();
    // Columns: torus coordinates h_1..h_r, then one per active generator.
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(nvars);
    let diag = |obj: &RepObject, t: usize| -> Vec<Rat> {
        let d = obj.dim();
        let mut v = vec![Rat::zero(); d * d];
        for a in 0..d {
            v[a * d + a] = Rat::from_int(obj.character(a)[t]);
        }
        v
    };
    for t in 0..r {
        cols.push(diag(n, t));
    }
    for &g in &gens {
        cols.push(n.action_or_zero(g).flat().to_vec());
    }
    let mut sys = Mat::zeros(dn * dn, nvars);
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            if !x.is_zero() {
                sys.set(i, j, x.clone());
            }
        }
    }
    let kernel = if dn == 0 {
        (0..nvars)
            .map(|k| {
                let mut v = vec![Rat::zero(); nvars];
                v[k] = Rat::one();
                v
            })
            .collect()
    } else {
        sys.kernel()
    };
    let images: Vec<Vec<Rat>> = kernel
        .iter()
        .map(|k| {
            let mut img = vec![Rat::zero(); dm * dm];
            for (t, kt) in k.iter().enumerate().take(r) {
                crate::linalg::mat::axpy(&mut img, kt, &diag(m, t));
            }
            for (idx, &g) in gens.iter().enumerate() {
                if let Some(a) = m.action(g) {
                    crate::linalg::mat::axpy(&mut img, &k[r + idx], a.flat());
                }
            }
            img
        })
        .collect();
    Ok(LieSubspace::new(dm, Subspace::span(dm * dm, &images)))
}

/// Associated graded of `s` for the filtration of `End(ωM)` by weight,
/// realised inside `End(ωM)` through leading components.
pub fn gr_leading_span(m: &RepObject, s: &Subspace) -> Subspace {
    let n = m.dim();
    let w = m.weights();
    let ew = |k: usize| w[k / n] - w[k % n];
    // Order coordinates by decreasing weight so each echelon row leads with
    // its top graded piece.
    let mut order: Vec<usize> = (0..n * n).collect();
    order.sort_by_key(|&k| (std::cmp::Reverse(ew(k)), k));
    let permuted: Vec<Vec<Rat>> = s.basis().iter().map(|v| order.iter().map(|&k| v[k].clone()).collect()).collect();
    let ech = Subspace::span(n * n, &permuted);
    let leads: Vec<Vec<Rat>> = ech
        .basis()
        .iter()
        .zip(ech.pivots())
        .map(|(row, &piv)| {
            let top = ew(order[piv]);
            let mut out = vec![Rat::zero(); n * n];
            for (pos, x) in row.iter().enumerate() {
                if !x.is_zero() && ew(order[pos]) == top {
                    out[order[pos]] = x.clone();
                }
            }
            out
        })
        .collect();
    Subspace::span(n * n, &leads)
}
