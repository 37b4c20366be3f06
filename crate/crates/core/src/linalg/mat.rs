use std::fmt;

use super::rat::Rat;

/// Dense row-major matrix over `Rat`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    /// Rows built from small integers, for literals in tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rat::from_int(x)).collect()).collect())
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Rat>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Rat) {
        let k = i * self.cols + j;
        self.data[k] = &self.data[k] + v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Rat> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn flat(&self) -> &[Rat] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<Rat> {
        self.data
    }

    pub fn row_list(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &Rat)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for (i, j, v) in self.nonzeros() {
            t.set(j, i, v.clone());
        }
        t
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add_scaled(&mut self, o: &Mat, s: &Rat) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a = &*a + &(b * s);
            }
        }
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// `[self, o] = self*o - o*self`.
    pub fn commutator(&self, o: &Mat) -> Mat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn block_diag(a: &Mat, b: &Mat) -> Mat {
        let mut m = Mat::zeros(a.rows + b.rows, a.cols + b.cols);
        for (i, j, v) in a.nonzeros() {
            m.set(i, j, v.clone());
        }
        for (i, j, v) in b.nonzeros() {
            m.set(a.rows + i, a.cols + j, v.clone());
        }
        m
    }

    /// Kronecker product.
    pub fn kron(a: &Mat, b: &Mat) -> Mat {
        let mut m = Mat::zeros(a.rows * b.rows, a.cols * b.cols);
        for (i, j, x) in a.nonzeros() {
            for (k, l, y) in b.nonzeros() {
                m.set(i * b.rows + k, j * b.cols + l, x * y);
            }
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    /// Row reduces in place, choosing pivots only among the first `pivot_cols`
    /// columns. Returns the pivot columns; rows past the last pivot are zero on
    /// those columns.
    pub fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols.min(self.cols) {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).recip();
            if !inv.is_one() {
                for j in c..self.cols {
                    let k = r * self.cols + j;
                    if !self.data[k].is_zero() {
                        self.data[k] = &self.data[k] * &inv;
                    }
                }
            }
            let pivot_row: Vec<(usize, Rat)> = (c..self.cols)
                .filter_map(|j| {
                    let v = self.get(r, j);
                    (!v.is_zero()).then(|| (j, v.clone()))
                })
                .collect();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (j, v) in &pivot_row {
                    let k = i * self.cols + j;
                    self.data[k] = &self.data[k] - &(&f * v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(i);
        }
        let mut out = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f].is_some() {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -r.get(i, f);
            }
            out.push(v);
        }
        out
    }

    pub fn determinant(&self) -> Rat {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.recip();
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(c, j) * &f;
                    if !v.is_zero() {
                        let k = i * n + j;
                        m.data[k] = &m.data[k] - &v;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for (i, j, v) in self.nonzeros() {
            aug.set(i, j, v.clone());
        }
        for i in 0..n {
            aug.set(i, n + i, Rat::one());
        }
        let piv = aug.rref_in_place(n);
        if piv.len() < n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(aug.submatrix(&rows, &cols))
    }

    pub fn pow(&self, e: u32) -> Mat {
        let mut acc = Mat::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn axpy(y: &mut [Rat], a: &Rat, x: &[Rat]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = &*yi + &(a * xi);
        }
    }
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn zero_vec(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

impl serde::Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&self.row_list(), s)
    }
}

impl<'de> serde::Deserialize<'de> for Mat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Mat, D::Error> {
        let rows: Vec<Vec<Rat>> = serde::Deserialize::deserialize(d)?;
        if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(Mat::from_rows(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank() {
        let a = Mat::from_i64(&[&[1, 1], &[2, 2]]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&a.mul_vec(&k[0])));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Mat::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(3));
        assert_eq!(a.determinant(), Rat::from_int(18));
        assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
