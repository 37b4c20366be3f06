use crate::error::{Error, Result};
use crate::linalg::{Mat, Rat};

/// Terms `x^0, x^1, ..., x^{k}` up to the last nonzero power.
fn powers(x: &Mat) -> Result<Vec<Mat>> {
    if !x.is_square() {
        return Err(Error::Dimension("nilpotent series need a square matrix".into()));
    }
    let n = x.rows();
    let mut out = vec![Mat::identity(n)];
    let mut cur = x.clone();
    for _ in 0..n {
        if cur.is_zero() {
            return Ok(out);
        }
        let next = cur.mul(x);
        out.push(cur);
        cur = next;
    }
    if cur.is_zero() {
        Ok(out)
    } else {
        Err(Error::NotNilpotent)
    }
}

fn factorial(k: usize) -> Rat {
    (1..=k as i64).fold(Rat::one(), |acc, i| acc * Rat::from_int(i))
}

/// `exp(x)` for nilpotent `x`; the series is finite.
pub fn nilpotent_exp(x: &Mat) -> Result<Mat> {
    let pw = powers(x)?;
    let mut out = Mat::zeros(x.rows(), x.cols());
    for (k, p) in pw.iter().enumerate() {
        out.add_scaled(p, &factorial(k).recip());
    }
    Ok(out)
}

/// `log(u)` for unipotent `u`.
pub fn nilpotent_log(u: &Mat) -> Result<Mat> {
    if !u.is_square() {
        return Err(Error::Dimension("log needs a square matrix".into()));
    }
    let y = u.sub(&Mat::identity(u.rows()));
    let pw = powers(&y)?;
    let mut out = Mat::zeros(u.rows(), u.cols());
    for (k, p) in pw.iter().enumerate().skip(1) {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out.add_scaled(p, &Rat::new(sign, k as i64));
    }
    Ok(out)
}

/// `(exp(x) - 1) / x := sum_n x^n / (n+1)!`.
pub fn exp_minus_one_over(x: &Mat) -> Result<Mat> {
    let pw = powers(x)?;
    let mut out = Mat::zeros(x.rows(), x.cols());
    for (k, p) in pw.iter().enumerate() {
        out.add_scaled(p, &factorial(k + 1).recip());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_goes_to_identity() {
        assert_eq!(nilpotent_exp(&Mat::zeros(3, 3)).unwrap(), Mat::identity(3));
    }

    #[test]
    fn strictly_lower_three_by_three() {
        let x = Mat::from_i64(&[&[0, 0, 0], &[2, 0, 0], &[1, 3, 0]]);
        let e = nilpotent_exp(&x).unwrap();
        let x2 = x.mul(&x);
        let mut want = Mat::identity(3).add(&x);
        want.add_scaled(&x2, &Rat::new(1, 2));
        assert_eq!(e, want);
        assert_eq!(nilpotent_log(&e).unwrap(), x);
    }

    #[test]
    fn square_zero_is_linear() {
        let x = Mat::from_i64(&[&[0, 5], &[0, 0]]);
        assert_eq!(nilpotent_exp(&x).unwrap(), Mat::identity(2).add(&x));
        assert_eq!(exp_minus_one_over(&x).unwrap(), Mat::identity(2).add(&x.scale(&Rat::new(1, 2))));
    }

    #[test]
    fn rejects_non_nilpotent() {
        assert!(nilpotent_exp(&Mat::identity(2)).is_err());
        assert!(nilpotent_log(&Mat::zeros(2, 2)).is_err());
    }
}
