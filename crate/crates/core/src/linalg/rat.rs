use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
///
/// Values whose reduced numerator and denominator fit in an `i64` are kept
/// inline; everything else falls back to a heap-allocated `BigRational`.
/// The representation is canonical, so structural equality is value equality.
#[derive(Clone)]
pub enum Rat {
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rat {
    pub fn zero() -> Rat {
        Rat::Small(0, 1)
    }

    pub fn one() -> Rat {
        Rat::Small(1, 1)
    }

    pub fn from_int(n: i64) -> Rat {
        Rat::Small(n, 1)
    }

    /// `n / d`; panics on a zero denominator.
    pub fn new(n: i64, d: i64) -> Rat {
        assert!(d != 0, "zero denominator");
        Rat::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Rat {
        debug_assert!(d != 0);
        let g = n.gcd(&d);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat::Small(n, d),
            _ => Rat::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn from_big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(Box::new(r)),
        }
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat::from_big(BigRational::from_integer(n))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rat::Small(n, _) => BigInt::from(*n),
            Rat::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rat::Small(_, d) => BigInt::from(*d),
            Rat::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n > 0,
            Rat::Big(b) => b.is_positive(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Rat::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn recip(&self) -> Rat {
        match self {
            Rat::Small(0, _) => panic!("reciprocal of zero"),
            Rat::Small(n, d) => Rat::from_i128(*d as i128, *n as i128),
            Rat::Big(b) => Rat::from_big(b.recip()),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, e: i32) -> Rat {
        if e < 0 {
            return self.recip().pow(-e);
        }
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Reduction into `Z/pZ`; `None` when the denominator is divisible by `p`.
    pub fn mod_p(&self, p: u64) -> Option<u64> {
        let (n, d) = match self {
            Rat::Small(n, d) => (
                (*n as i128).rem_euclid(p as i128) as u64,
                (*d as i128).rem_euclid(p as i128) as u64,
            ),
            Rat::Big(b) => {
                let pb = BigInt::from(p);
                let n = b.numer().mod_floor(&pb).to_u64().unwrap();
                let d = b.denom().mod_floor(&pb).to_u64().unwrap();
                (n, d)
            }
        };
        if d == 0 {
            return None;
        }
        Some(crate::linalg::sparse::mulmod(n, crate::linalg::sparse::invmod(d, p), p))
    }
}

fn big_op(a: &Rat, b: &Rat, f: impl Fn(BigRational, BigRational) -> BigRational) -> Rat {
    Rat::from_big(f(a.to_big(), b.to_big()))
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(0, _), _) => o.clone(),
            (_, Rat::Small(0, _)) => self.clone(),
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if b == d {
                    Rat::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                    Rat::from_i128(a * d + c * b, b * d)
                }
            }
            _ => big_op(self, o, |x, y| x + y),
        }
    }
}

impl<'a> Sub<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn sub(self, o: &Rat) -> Rat {
        match (self, o) {
            (_, Rat::Small(0, _)) => self.clone(),
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rat::from_i128(a * d - c * b, b * d)
            }
            _ => big_op(self, o, |x, y| x - y),
        }
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(0, _), _) | (_, Rat::Small(0, _)) => Rat::zero(),
            (Rat::Small(1, 1), _) => o.clone(),
            (_, Rat::Small(1, 1)) => self.clone(),
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => big_op(self, o, |x, y| x * y),
        }
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, o: &Rat) -> Rat {
        assert!(!o.is_zero(), "division by zero");
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                Rat::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => big_op(self, o, |x, y| x / y),
        }
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::Small(n, d) => match n.checked_neg() {
                Some(m) => Rat::Small(m, *d),
                None => Rat::from_i128(-(*n as i128), *d as i128),
            },
            Rat::Big(b) => Rat::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                self.$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, o: &Rat) {
        *self = &*self + o;
    }
}
impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, o: Rat) {
        *self = &*self + &o;
    }
}
impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, o: &Rat) {
        *self = &*self - o;
    }
}
impl SubAssign<Rat> for Rat {
    fn sub_assign(&mut self, o: Rat) {
        *self = &*self - &o;
    }
}
impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, o: &Rat) {
        *self = &*self * o;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl Zero for Rat {
    fn zero() -> Rat {
        Rat::zero()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
}

impl One for Rat {
    fn one() -> Rat {
        Rat::one()
    }
}

impl PartialEq for Rat {
    fn eq(&self, o: &Rat) -> bool {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d,
            (Rat::Big(x), Rat::Big(y)) => x == y,
            _ => false,
        }
    }
}
impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, h: &mut H) {
        match self {
            Rat::Small(n, d) => {
                0u8.hash(h);
                n.hash(h);
                d.hash(h);
            }
            Rat::Big(b) => {
                1u8.hash(h);
                b.hash(h);
            }
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, o: &Rat) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Rat {
    fn cmp(&self, o: &Rat) -> Ordering {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Rat {
        Rat::from_int(n as i64)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, d) => write!(f, "{}/{}", n, d),
            Rat::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.plain())
    }
}

impl Rat {
    /// Integers without the `/1`; used for human-facing text.
    pub fn plain(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            self.to_string()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}")]
pub struct ParseRatError(pub String);

impl FromStr for Rat {
    type Err = ParseRatError;
    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let err = || ParseRatError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Rat::from_int(n)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_reduces() {
        let a = Rat::new(2, 4);
        assert_eq!(a, Rat::new(1, 2));
        assert_eq!(&a + &Rat::new(1, 3), Rat::new(5, 6));
        assert_eq!(Rat::new(-3, -6), Rat::new(1, 2));
        assert_eq!(Rat::new(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rat::from_int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Rat::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back, Rat::Small(..)));
        assert_eq!(-Rat::from_int(i64::MIN), &Rat::from_int(i64::MAX) + &Rat::one());
    }

    #[test]
    fn parsing() {
        assert_eq!("3/6".parse::<Rat>().unwrap(), Rat::new(1, 2));
        assert_eq!("-7".parse::<Rat>().unwrap(), Rat::from_int(-7));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn mod_p_reduction() {
        let p = 101;
        assert_eq!(Rat::new(1, 2).mod_p(p), Some(51));
        assert_eq!(Rat::new(1, 101).mod_p(p), None);
    }
}
