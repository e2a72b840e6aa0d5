use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primes the library accepts for positive characteristic.
pub const SUPPORTED_PRIMES: [u32; 4] = [2, 3, 5, 7];

/// Coefficient field: either `Q` or a prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

/// A field element. Which variant is legal is decided by the owning [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coef {
    Mod(u32),
    Rat(BigRational),
}

impl Field {
    /// `0` means `Q`; otherwise one of [`SUPPORTED_PRIMES`].
    pub fn from_characteristic(c: u32) -> Result<Field> {
        match c {
            0 => Ok(Field::Rational),
            p if SUPPORTED_PRIMES.contains(&p) => Ok(Field::Prime(p)),
            other => Err(Error::UnsupportedCharacteristic(other)),
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Coef {
        match self {
            Field::Rational => Coef::Rat(BigRational::zero()),
            Field::Prime(_) => Coef::Mod(0),
        }
    }

    pub fn one(self) -> Coef {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Coef {
        match self {
            Field::Rational => Coef::Rat(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Coef::Mod(v.rem_euclid(p as i64) as u32),
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Coef {
        match self {
            Field::Rational => Coef::Rat(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v % BigInt::from(p);
                let r = if r.is_negative() { r + BigInt::from(p) } else { r };
                Coef::Mod(u32::try_from(&r).expect("residue fits in u32"))
            }
        }
    }

    /// Reduce a rational with integral value; fails if the denominator is not 1.
    pub fn from_integral_rational(self, v: &BigRational) -> Result<Coef> {
        if !v.is_integer() {
            return Err(Error::NonIntegral(v.to_string()));
        }
        Ok(self.from_bigint(v.numer()))
    }

    pub fn is_zero(self, a: &Coef) -> bool {
        match a {
            Coef::Mod(v) => *v == 0,
            Coef::Rat(r) => r.is_zero(),
        }
    }

    pub fn add(self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (Field::Prime(p), Coef::Mod(x), Coef::Mod(y)) => Coef::Mod((x + y) % p),
            (Field::Rational, Coef::Rat(x), Coef::Rat(y)) => Coef::Rat(x + y),
            _ => mismatch(self),
        }
    }

    pub fn neg(self, a: &Coef) -> Coef {
        match (self, a) {
            (Field::Prime(p), Coef::Mod(x)) => Coef::Mod((p - x) % p),
            (Field::Rational, Coef::Rat(x)) => Coef::Rat(-x),
            _ => mismatch(self),
        }
    }

    pub fn sub(self, a: &Coef, b: &Coef) -> Coef {
        self.add(a, &self.neg(b))
    }

    pub fn mul(self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (Field::Prime(p), Coef::Mod(x), Coef::Mod(y)) => {
                Coef::Mod(((*x as u64 * *y as u64) % p as u64) as u32)
            }
            (Field::Rational, Coef::Rat(x), Coef::Rat(y)) => Coef::Rat(x * y),
            _ => mismatch(self),
        }
    }

    pub fn inv(self, a: &Coef) -> Result<Coef> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, a) {
            (Field::Prime(p), Coef::Mod(x)) => Coef::Mod(pow_mod(*x, p - 2, p)),
            (Field::Rational, Coef::Rat(x)) => Coef::Rat(x.recip()),
            _ => mismatch(self),
        })
    }

    pub fn pow(self, a: &Coef, e: u64) -> Coef {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiply by an integer (the image of `n` in the field).
    pub fn scale_int(self, a: &Coef, n: i64) -> Coef {
        self.mul(a, &self.from_i64(n))
    }

    /// Integer representative used by the JSON codec: `0..p` for `F_p`.
    pub fn to_i64(self, a: &Coef) -> Option<i64> {
        match a {
            Coef::Mod(v) => Some(*v as i64),
            Coef::Rat(r) if r.is_integer() => i64::try_from(r.numer()).ok(),
            Coef::Rat(_) => None,
        }
    }

    pub fn is_one(self, a: &Coef) -> bool {
        match a {
            Coef::Mod(v) => *v == 1,
            Coef::Rat(r) => r.is_one(),
        }
    }
}

fn pow_mod(x: u32, mut e: u32, p: u32) -> u32 {
    let (mut acc, mut base, p) = (1u64, x as u64 % p as u64, p as u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc as u32
}

fn mismatch(f: Field) -> ! {
    panic!("coefficient does not belong to {f}")
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::Mod(v) => write!(f, "{v}"),
            Coef::Rat(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = Field::Prime(7);
        for v in 1..7 {
            let a = f.from_i64(v);
            assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
        assert!(f.inv(&f.zero()).is_err());
    }

    #[test]
    fn negative_integers_reduce() {
        assert_eq!(Field::Prime(5).from_i64(-2), Coef::Mod(3));
        assert_eq!(Field::Prime(3).from_bigint(&BigInt::from(-7)), Coef::Mod(2));
    }

    #[test]
    fn unsupported_characteristic() {
        assert!(Field::from_characteristic(11).is_err());
        assert_eq!(Field::from_characteristic(0).unwrap(), Field::Rational);
    }
}
