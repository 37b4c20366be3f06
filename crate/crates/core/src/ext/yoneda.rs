use std::collections::BTreeMap;

use super::classes::{ext2_primitive, Ext2Class, ExtClass};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Rat};
use crate::rep::{internal_hom, RepObject};

/// A class in `Ext^1(A, B)`, stored as a class in `Ext^1(1, Hom(A, B))`.
/// Values are matrices `dim B x dim A`, flattened row-major.
#[derive(Clone, Debug)]
pub struct ExtBetween {
    pub from: RepObject,
    pub to: RepObject,
    pub class: ExtClass,
}

impl ExtBetween {
    pub fn new(from: &RepObject, to: &RepObject, blocks: BTreeMap<usize, Mat>) -> Result<ExtBetween> {
        let hom = internal_hom(from, to)?;
        let mut cocycle = BTreeMap::new();
        for (g, m) in blocks {
            if m.rows() != to.dim() || m.cols() != from.dim() {
                return Err(Error::Dimension("extension block has the wrong shape".into()));
            }
            cocycle.insert(g, m.into_flat());
        }
        Ok(ExtBetween { from: from.clone(), to: to.clone(), class: ExtClass::new(hom, cocycle)? })
    }

    pub fn from_class(from: &RepObject, to: &RepObject, class: ExtClass) -> Result<ExtBetween> {
        if class.target.dim() != from.dim() * to.dim() {
            return Err(Error::Dimension("class target is not Hom(from, to)".into()));
        }
        Ok(ExtBetween { from: from.clone(), to: to.clone(), class })
    }

    pub fn block(&self, g: usize) -> Mat {
        Mat::from_flat(self.to.dim(), self.from.dim(), self.class.value(g))
    }
}

/// The Yoneda product `L o N` with its cup-product cochain, and, when it
/// vanishes, a corner family `m` with `d m = -omega`.
#[derive(Clone, Debug)]
pub struct YonedaClass {
    pub cochain: Ext2Class,
    pub primitive: Option<ExtClass>,
}

impl YonedaClass {
    pub fn vanishes(&self) -> bool {
        self.primitive.is_some()
    }
}

/// `omega_ij = L_i N_j - L_j N_i` in `Hom(C, B)` for `L in Ext^1(A,B)` and `N in Ext^1(C,A)`.
pub fn yoneda_compose(l: &ExtBetween, n: &ExtBetween) -> Result<YonedaClass> {
    if !n.to.same_group(&l.from) || n.to.basis() != l.from.basis() || n.to.actions() != l.from.actions() {
        return Err(Error::Precondition("the middle objects of the pair differ".into()));
    }
    let target = internal_hom(&n.from, &l.to)?;
    let gens: Vec<usize> = l.class.cocycle.keys().chain(n.class.cocycle.keys()).copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let mut cochain = BTreeMap::new();
    for (x, &i) in gens.iter().enumerate() {
        for &j in &gens[x + 1..] {
            let w = l.block(i).mul(&n.block(j)).sub(&l.block(j).mul(&n.block(i)));
            if !w.is_zero() {
                cochain.insert((i, j), w.into_flat());
            }
        }
    }
    let omega = Ext2Class { target, cochain };
    let primitive = ext2_primitive(&omega)?.map(|m| m.scale(&-Rat::one()));
    Ok(YonedaClass { cochain: omega, primitive })
}
