use super::mat::{axpy, is_zero_vec, Mat};
use super::rat::Rat;
use crate::error::{Error, Result};

/// A linear subspace of `Q^n` stored by its reduced row echelon basis.
///
/// The echelon basis is unique, so derived `PartialEq` is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![Rat::zero(); ambient];
                v[i] = Rat::one();
                v
            })
            .collect();
        Subspace { ambient, basis, pivots: (0..ambient).collect() }
    }

    /// Span of the given coordinate vectors `e_i`.
    pub fn coordinate(ambient: usize, idx: impl IntoIterator<Item = usize>) -> Subspace {
        let mut idx: Vec<usize> = idx.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        let basis = idx
            .iter()
            .map(|&i| {
                let mut v = vec![Rat::zero(); ambient];
                v[i] = Rat::one();
                v
            })
            .collect();
        Subspace { ambient, basis, pivots: idx }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Rat>]) -> Subspace {
        rref_basis(ambient, vectors).expect("vector length mismatch")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> Mat {
        if self.basis.is_empty() {
            return Mat::zeros(0, self.ambient);
        }
        Mat::from_rows(self.basis.clone())
    }

    /// Normal form of `v` modulo the subspace: the unique representative
    /// vanishing on every pivot column.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.ambient);
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let f = out[p].clone();
            if !f.is_zero() {
                axpy(&mut out, &-f, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &all)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        intersect_subspaces(self, other).expect("ambient mismatch")
    }

    /// Indices of standard basis vectors completing the echelon basis.
    pub fn complement_coordinates(&self) -> Vec<usize> {
        let mut is_p = vec![false; self.ambient];
        for &p in &self.pivots {
            is_p[p] = true;
        }
        (0..self.ambient).filter(|&i| !is_p[i]).collect()
    }

    /// Image under a linear map given by a matrix acting on column vectors.
    pub fn image(&self, m: &Mat) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        let imgs: Vec<Vec<Rat>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(m.rows(), &imgs)
    }
}

/// Echelon basis of the span of `vectors` in `Q^ambient`.
pub fn rref_basis(ambient: usize, vectors: &[Vec<Rat>]) -> Result<Subspace> {
    if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
        return Err(Error::Dimension(format!("vector of length {} in ambient {}", v.len(), ambient)));
    }
    if vectors.is_empty() {
        return Ok(Subspace::zero(ambient));
    }
    let m = Mat::from_rows(vectors.to_vec());
    let (r, pivots) = m.rref();
    let basis = (0..pivots.len()).map(|i| r.row_vec(i)).collect();
    Ok(Subspace { ambient, basis, pivots })
}

pub fn intersect_subspaces(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.ambient != b.ambient {
        return Err(Error::Dimension(format!("ambient {} vs {}", a.ambient, b.ambient)));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(Subspace::zero(a.ambient));
    }
    // Solve sum_i x_i a_i = sum_j y_j b_j.
    let (da, db) = (a.dim(), b.dim());
    let mut m = Mat::zeros(a.ambient, da + db);
    for (i, v) in a.basis.iter().enumerate() {
        for (k, x) in v.iter().enumerate() {
            m.set(k, i, x.clone());
        }
    }
    for (j, v) in b.basis.iter().enumerate() {
        for (k, x) in v.iter().enumerate() {
            m.set(k, da + j, -x);
        }
    }
    let vecs: Vec<Vec<Rat>> = m
        .kernel()
        .into_iter()
        .map(|k| {
            let mut v = vec![Rat::zero(); a.ambient];
            for (i, x) in k[..da].iter().enumerate() {
                axpy(&mut v, x, &a.basis[i]);
            }
            v
        })
        .collect();
    rref_basis(a.ambient, &vecs)
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Feasible { particular: Vec<Rat>, kernel: Vec<Vec<Rat>> },
    /// A row vector `y` with `y A = 0` and `y b = 1`.
    Infeasible { certificate: Vec<Rat> },
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Solution::Feasible { .. })
    }

    pub fn particular(&self) -> Option<&[Rat]> {
        match self {
            Solution::Feasible { particular, .. } => Some(particular),
            Solution::Infeasible { .. } => None,
        }
    }
}

pub fn solve_linear(a: &Mat, b: &[Rat]) -> Result<Solution> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!("rhs of length {} for {} rows", b.len(), a.rows())));
    }
    let (m, n) = (a.rows(), a.cols());
    // Augment with the identity so the row operations are recorded.
    let mut aug = Mat::zeros(m, n + 1 + m);
    for (i, j, v) in a.nonzeros() {
        aug.set(i, j, v.clone());
    }
    for (i, x) in b.iter().enumerate() {
        aug.set(i, n, x.clone());
        aug.set(i, n + 1 + i, Rat::one());
    }
    let pivots = aug.rref_in_place(n + 1);
    if let Some(pos) = pivots.iter().position(|&c| c == n) {
        let certificate = (0..m).map(|k| aug.get(pos, n + 1 + k).clone()).collect();
        return Ok(Solution::Infeasible { certificate });
    }
    let mut particular = vec![Rat::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = aug.get(i, n).clone();
    }
    Ok(Solution::Feasible { particular, kernel: a.kernel() })
}

/// Checks an infeasibility certificate independently of how it was produced.
pub fn verify_infeasibility(a: &Mat, b: &[Rat], y: &[Rat]) -> bool {
    if y.len() != a.rows() || b.len() != a.rows() {
        return false;
    }
    let ya = a.transpose().mul_vec(y);
    is_zero_vec(&ya) && !super::mat::dot(y, b).is_zero()
}
