use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{factor_u64, Rat};

/// A positive rational `r = prod p^e_p`, stored by its exponents. As a Kummer
/// class `[r]` it is the vector `(e_p)` in the stand-in for `Q^x ⊗ Q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KummerClass {
    exponents: BTreeMap<u64, i64>,
}

impl KummerClass {
    pub fn from_exponents(exponents: impl IntoIterator<Item = (u64, i64)>) -> KummerClass {
        let mut e = BTreeMap::new();
        for (p, x) in exponents {
            *e.entry(p).or_insert(0) += x;
        }
        e.retain(|_, x| *x != 0);
        KummerClass { exponents: e }
    }

    pub fn from_rational(r: &Rat) -> Result<KummerClass> {
        if !r.is_positive() {
            return Err(Error::Input(format!("Kummer classes need r > 0, got {r}")));
        }
        let part = |n: num_bigint::BigInt| -> Result<Vec<(u64, u32)>> {
            let n = n.to_u64().ok_or_else(|| Error::TooLarge(format!("{r} does not fit in 64 bits")))?;
            factor_u64(n).ok_or_else(|| Error::TooLarge(format!("cannot factor {n}")))
        };
        let num = part(r.numer())?;
        let den = part(r.denom())?;
        Ok(KummerClass::from_exponents(
            num.into_iter().map(|(p, e)| (p, e as i64)).chain(den.into_iter().map(|(p, e)| (p, -(e as i64)))),
        ))
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn value(&self) -> Rat {
        self.exponents.iter().fold(Rat::one(), |acc, (&p, &e)| &acc * &Rat::from_int(p as i64).pow(e as i32))
    }

    pub fn exponent(&self, p: u64) -> i64 {
        self.exponents.get(&p).copied().unwrap_or(0)
    }

    pub fn is_canonical(&self) -> bool {
        !self.is_trivial() && self.content() == 1 && self.value() > Rat::one()
    }

    fn content(&self) -> i64 {
        self.exponents.values().fold(0i64, |g, &e| g.gcd(&e))
    }
}

impl fmt::Display for KummerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.value().plain())
    }
}

impl Serialize for KummerClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The representative of the `Q^*`-orbit of `[r]`: exponents divided by their
/// gcd, then inverted if the value lies below one.
pub fn kummer_canonical(r: &Rat) -> Result<KummerClass> {
    let k = KummerClass::from_rational(r)?;
    if k.is_trivial() {
        return Err(Error::Input("r = 1 gives the zero class".into()));
    }
    let g = k.content();
    let mut c = KummerClass::from_exponents(k.exponents.iter().map(|(&p, &e)| (p, e / g)));
    if c.value() < Rat::one() {
        c = KummerClass::from_exponents(c.exponents.iter().map(|(&p, &e)| (p, -e)));
    }
    Ok(c)
}
