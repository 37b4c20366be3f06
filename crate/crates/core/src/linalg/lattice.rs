use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Subgroup of `Z^n` kept in row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    ambient: usize,
    hnf: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl IntLattice {
    pub fn new(ambient: usize, generators: &[Vec<i64>]) -> IntLattice {
        let rows = generators
            .iter()
            .map(|g| {
                assert_eq!(g.len(), ambient, "generator length");
                g.iter().map(|&x| BigInt::from(x)).collect()
            })
            .collect();
        IntLattice::from_big(ambient, rows)
    }

    pub fn from_big(ambient: usize, rows: Vec<Vec<BigInt>>) -> IntLattice {
        let (hnf, pivots) = hermite(rows, ambient);
        IntLattice { ambient, hnf, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    pub fn hermite_rows(&self) -> &[Vec<BigInt>] {
        &self.hnf
    }

    /// Integer coefficients expressing `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn member_witness(&self, v: &[i64]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient);
        let mut r: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let mut coeffs = Vec::with_capacity(self.hnf.len());
        for (row, &p) in self.hnf.iter().zip(&self.pivots) {
            let (q, rem) = r[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, y) in r.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
            coeffs.push(q);
        }
        r.iter().all(|x| x.is_zero()).then_some(coeffs)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.member_witness(v).is_some()
    }

    /// Invariant factors of `Z^n / L` restricted to the saturation of `L`;
    /// entries greater than one describe the torsion.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        smith_diagonal(self.hnf.clone())
    }
}

pub fn lattice_member(lattice: &IntLattice, v: &[i64]) -> bool {
    lattice.contains(v)
}

/// An integer solution of `a x = b`, if one exists. Works on the lattice of
/// columns of `a` augmented with the identity, so the coefficients can be read
/// off the tail after reducing the head.
pub fn solve_integer(a: &[Vec<i64>], b: &[i64], nvars: usize) -> Option<Vec<BigInt>> {
    let k = a.len();
    assert_eq!(b.len(), k);
    let gens: Vec<Vec<BigInt>> = (0..nvars)
        .map(|j| {
            let mut g: Vec<BigInt> = a.iter().map(|row| BigInt::from(row[j])).collect();
            g.extend((0..nvars).map(|t| BigInt::from((t == j) as i64)));
            g
        })
        .collect();
    let lat = IntLattice::from_big(k + nvars, gens);
    let mut r: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).chain((0..nvars).map(|_| BigInt::zero())).collect();
    for (row, &p) in lat.hnf.iter().zip(&lat.pivots) {
        if p >= k {
            break;
        }
        let (q, rem) = r[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (x, y) in r.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
    }
    if !r[..k].iter().all(|x| x.is_zero()) {
        return None;
    }
    Some(r[k..].iter().map(|x| -x).collect())
}

/// Prime factorization of `|n|` by trial division; `None` if a cofactor
/// above `10^12` survives division by all primes below `10^6`.
pub fn factor_u64(mut n: u64) -> Option<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n && d < 1_000_000 {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if d < 1_000_000 || n < 1_000_000_000_000 {
            out.push((n, 1));
        } else {
            return None;
        }
    }
    Some(out)
}

fn hermite(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        // Euclid on column c among rows r.. until a single nonzero remains.
        loop {
            let nz: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let m = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            for &i in &nz {
                if i == m {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[m][c]);
                let pivot_row = rows[m].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        // Reduce entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = rows[i][c].div_floor(&rows[r][c]);
            if !q.is_zero() {
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    out.extend(rows);
    (out, pivots)
}

fn smith_diagonal(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows && t < cols {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = m[i][t].div_floor(&m[t][t]);
            let pr = m[t].clone();
            for (x, y) in m[i].iter_mut().zip(&pr) {
                *x -= &q * y;
            }
            clean &= m[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = m[t][j].div_floor(&m[t][t]);
            for row in m.iter_mut() {
                let y = row[t].clone();
                row[j] -= &q * y;
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // Enforce divisibility of the remaining block.
        let piv = m[t][t].clone();
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &piv).is_zero())) {
            let ri = m[i].clone();
            for (x, y) in m[t].iter_mut().zip(&ri) {
                *x += y;
            }
            continue;
        }
        diag.push(piv.abs());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_membership() {
        let l = IntLattice::new(2, &[vec![2, 0], vec![0, 3]]);
        assert!(l.contains(&[4, -3]));
        assert!(!l.contains(&[1, 0]));
        let l = IntLattice::new(2, &[vec![5, 3], vec![3, 2]]);
        assert!(l.contains(&[1, 0]));
        assert_eq!(l.rank(), 2);
    }

    #[test]
    fn invariant_factors_of_index_six() {
        let l = IntLattice::new(2, &[vec![2, 0], vec![0, 3]]);
        let f: Vec<i64> = l.invariant_factors().iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(f.iter().product::<i64>(), 6);
        assert_eq!(f, vec![1, 6]);
    }

    #[test]
    fn integer_systems() {
        // x + y = 3, x - y = 1
        let x = solve_integer(&[vec![1, 1], vec![1, -1]], &[3, 1], 2).unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(1)]);
        // x + y = 2, x - y = 1 has only the rational solution (3/2, 1/2)
        assert!(solve_integer(&[vec![1, 1], vec![1, -1]], &[2, 1], 2).is_none());
        // 2x = 4 with a free second variable
        let x = solve_integer(&[vec![2, 0]], &[4], 2).unwrap();
        assert_eq!(x[0], BigInt::from(2));
    }

    #[test]
    fn trial_division() {
        assert_eq!(factor_u64(360).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1).unwrap(), vec![]);
        assert_eq!(factor_u64(999_983).unwrap(), vec![(999_983, 1)]);
        assert_eq!(factor_u64(999_983 * 999_979).unwrap(), vec![(999_979, 1), (999_983, 1)]);
    }
}
