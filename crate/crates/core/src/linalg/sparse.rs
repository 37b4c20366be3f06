use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::rat::Rat;

/// The Mersenne prime `2^61 - 1`, used for modular rank certificates.
pub const PRIME: u64 = (1u64 << 61) - 1;

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn invmod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Field operations needed by sparse elimination.
pub trait Field: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
    fn neg(&self) -> Self;
}

impl Field for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Element of `Z/PRIME`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp(pub u64);

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= PRIME { s - PRIME } else { s })
    }
    fn sub(&self, o: &Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + PRIME - o.0 })
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(mulmod(self.0, o.0, PRIME))
    }
    fn inv(&self) -> Self {
        Fp(invmod(self.0, PRIME))
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { PRIME - self.0 })
    }
}

pub type SparseRow<F> = Vec<(usize, F)>;

/// Row-sparse matrix; each row is sorted by column.
#[derive(Clone, Debug)]
pub struct SparseMatrix<F> {
    pub ncols: usize,
    pub rows: Vec<SparseRow<F>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    /// Adds a row given as unsorted `(col, value)` terms; repeated columns are summed.
    pub fn push_terms(&mut self, mut terms: Vec<(usize, F)>) {
        terms.sort_by_key(|t| t.0);
        let mut row: SparseRow<F> = Vec::with_capacity(terms.len());
        for (c, v) in terms {
            debug_assert!(c < self.ncols);
            match row.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = lv.add(&v),
                _ => row.push((c, v)),
            }
        }
        row.retain(|(_, v)| !v.is_zero());
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn echelon(&self) -> Echelon<F> {
        let mut e = Echelon::new(self.ncols);
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.rows[i].len());
        for i in order {
            e.insert(&self.rows[i]);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Applies the matrix to a dense column vector.
    pub fn apply(&self, x: &[F]) -> Vec<F> {
        self.rows
            .iter()
            .map(|r| r.iter().fold(F::zero(), |acc, (c, v)| acc.add(&v.mul(&x[*c]))))
            .collect()
    }
}

impl SparseMatrix<Rat> {
    /// Image modulo `PRIME`; `None` if some denominator vanishes there.
    pub fn to_mod_p(&self) -> Option<SparseMatrix<Fp>> {
        let mut out = SparseMatrix::new(self.ncols);
        for r in &self.rows {
            let mut row = Vec::with_capacity(r.len());
            for (c, v) in r {
                let x = v.mod_p(PRIME)?;
                if x != 0 {
                    row.push((*c, Fp(x)));
                }
            }
            out.rows.push(row);
        }
        Some(out)
    }
}

/// Incremental row echelon form with unit leading coefficients.
pub struct Echelon<F> {
    ncols: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<SparseRow<F>>,
    scratch: Vec<F>,
    touched: Vec<bool>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            pivot_row: vec![None; ncols],
            rows: Vec::new(),
            scratch: vec![F::zero(); ncols],
            touched: vec![false; ncols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_some()).collect()
    }

    /// Reduces `row` against the stored pivots; returns `true` when it was
    /// independent (and is now stored).
    pub fn insert(&mut self, row: &[(usize, F)]) -> bool {
        let mut heap: BinaryHeap<Reverse<usize>> = BinaryHeap::with_capacity(row.len() * 2);
        let mut live: Vec<usize> = Vec::with_capacity(row.len() * 2);
        for (c, v) in row {
            if v.is_zero() {
                continue;
            }
            if !self.touched[*c] {
                self.touched[*c] = true;
                live.push(*c);
                heap.push(Reverse(*c));
            }
            self.scratch[*c] = self.scratch[*c].add(v);
        }
        let mut lead = None;
        while let Some(Reverse(c)) = heap.pop() {
            if self.scratch[c].is_zero() {
                continue;
            }
            match self.pivot_row[c] {
                Some(pr) => {
                    let f = std::mem::replace(&mut self.scratch[c], F::zero());
                    for (j, v) in self.rows[pr].iter().skip(1) {
                        if !self.touched[*j] {
                            self.touched[*j] = true;
                            live.push(*j);
                            heap.push(Reverse(*j));
                        } else if self.scratch[*j].is_zero() {
                            heap.push(Reverse(*j));
                        }
                        self.scratch[*j] = self.scratch[*j].sub(&f.mul(v));
                    }
                }
                None => {
                    lead = Some(c);
                    break;
                }
            }
        }
        let independent = if let Some(c) = lead {
            let inv = self.scratch[c].inv();
            let mut new_row: SparseRow<F> = live
                .iter()
                .filter(|&&j| j >= c && !self.scratch[j].is_zero())
                .map(|&j| (j, self.scratch[j].mul(&inv)))
                .collect();
            new_row.sort_by_key(|t| t.0);
            self.pivot_row[c] = Some(self.rows.len());
            self.rows.push(new_row);
            true
        } else {
            false
        };
        for j in live {
            self.touched[j] = false;
            self.scratch[j] = F::zero();
        }
        independent
    }

    /// Basis of the right kernel, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let pivots: Vec<usize> = self.pivot_columns();
        (0..self.ncols)
            .filter(|&f| self.pivot_row[f].is_none())
            .map(|f| {
                let mut x = vec![F::zero(); self.ncols];
                x[f] = F::one();
                for &c in pivots.iter().rev() {
                    if c > f {
                        continue;
                    }
                    let row = &self.rows[self.pivot_row[c].unwrap()];
                    let mut acc = F::zero();
                    for (j, v) in row.iter().skip(1) {
                        if !x[*j].is_zero() {
                            acc = acc.add(&v.mul(&x[*j]));
                        }
                    }
                    x[c] = acc.neg();
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat::Mat;

    fn to_sparse(m: &Mat) -> SparseMatrix<Rat> {
        let mut s = SparseMatrix::new(m.cols());
        for i in 0..m.rows() {
            s.push_terms(m.row(i).iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect());
        }
        s
    }

    #[test]
    fn matches_dense_rank_and_kernel() {
        let m = Mat::from_i64(&[&[1, 2, 0, 1], &[0, 0, 1, 1], &[1, 2, 1, 2], &[2, 4, 0, 2]]);
        let s = to_sparse(&m);
        let e = s.echelon();
        assert_eq!(e.rank(), m.rank());
        for k in e.kernel_basis() {
            assert!(m.mul_vec(&k).iter().all(|x| x.is_zero()));
        }
        assert_eq!(e.kernel_basis().len(), 4 - m.rank());
        assert_eq!(s.to_mod_p().unwrap().rank(), 2);
    }

    #[test]
    fn fp_inverse() {
        let x = Fp(12345);
        assert_eq!(x.mul(&x.inv()), Fp(1));
    }
}
