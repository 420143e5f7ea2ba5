//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! A [`FieldElement`] is a bare exact value; which field it lives in is
//! recorded once at the [`Field`] level. Over `F_p` every element is kept as
//! its canonical residue in `[0, p)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The Mersenne prime `2^61 - 1`, used as the default modulus for randomized work.
pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator of {0} vanishes modulo {1}")]
    DenominatorVanishes(String, u64),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(Field, Field),
}

/// A prime modulus. Only constructible through a primality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(Prime),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Ok(Field::Prime(Prime::new(p)?))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p.0),
        }
    }

    /// Number of elements, `None` for infinite fields.
    pub fn order(&self) -> Option<u64> {
        self.modulus()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(BigRational::zero())
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(BigRational::one())
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.reduce_int(BigInt::from(v))
    }

    pub fn from_u64(&self, v: u64) -> FieldElement {
        self.reduce_int(BigInt::from(v))
    }

    fn reduce_int(&self, v: BigInt) -> FieldElement {
        match self {
            Field::Rational => FieldElement(BigRational::from_integer(v)),
            Field::Prime(p) => {
                let m = BigInt::from(p.0);
                FieldElement(BigRational::from_integer(v.mod_floor(&m)))
            }
        }
    }

    /// Maps an arbitrary rational into this field.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement, FieldError> {
        match self {
            Field::Rational => Ok(FieldElement(q.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(p.0);
                let den = q.denom().mod_floor(&m);
                if den.is_zero() {
                    return Err(FieldError::DenominatorVanishes(q.to_string(), p.0));
                }
                let num = q.numer().mod_floor(&m).to_u64().unwrap();
                let den = den.to_u64().unwrap();
                let v = mul_mod(num, inv_mod(den, p.0), p.0);
                Ok(FieldElement(BigRational::from_integer(BigInt::from(v))))
            }
        }
    }

    /// Parses `a`, `-a` or `a/b` and maps the value into this field.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.canon(&a.0 + &b.0)
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.canon(&a.0 - &b.0)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.canon(&a.0 * &b.0)
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.canon(-&a.0)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        match self {
            Field::Rational => Ok(FieldElement(a.0.recip())),
            Field::Prime(p) => {
                let v = a.0.numer().to_u64().unwrap();
                Ok(FieldElement(BigRational::from_integer(BigInt::from(inv_mod(v, p.0)))))
            }
        }
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, e: u32) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Reduces a value produced by ring operations on canonical inputs.
    pub(crate) fn canon(&self, q: BigRational) -> FieldElement {
        match self {
            Field::Rational => FieldElement(q),
            Field::Prime(p) => {
                debug_assert!(q.is_integer());
                let m = BigInt::from(p.0);
                FieldElement(BigRational::from_integer(q.to_integer().mod_floor(&m)))
            }
        }
    }

    /// Residue of an element modulo `p`, for evaluation over a prime field.
    pub fn residue_mod(&self, a: &FieldElement, p: u64) -> Result<u64, FieldError> {
        let m = BigInt::from(p);
        let den = a.0.denom().mod_floor(&m);
        if den.is_zero() {
            return Err(FieldError::DenominatorVanishes(a.to_string(), p));
        }
        let num = a.0.numer().mod_floor(&m).to_u64().unwrap();
        Ok(mul_mod(num, inv_mod(den.to_u64().unwrap(), p), p))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "prime:{}", p.0),
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    /// Accepts `rational`, `q`, `prime` (default modulus) or `prime:<p>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "rational" | "q" | "Q" => Ok(Field::Rational),
            "prime" => Field::prime(DEFAULT_PRIME),
            _ => {
                let p = s
                    .strip_prefix("prime:")
                    .or_else(|| s.strip_prefix("p:"))
                    .ok_or_else(|| FieldError::Parse(s.to_string()))?;
                let p: u64 = p.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
                Field::prime(p)
            }
        }
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact field value. Rationals are always reduced with positive
/// denominator; prime-field values are integers in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(BigRational);

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    /// True when the printed form needs a leading minus sign.
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub(crate) fn abs_display(&self) -> String {
        self.0.abs().to_string()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || FieldError::Parse(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (t.as_str(), None),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = match den {
        Some(d) => d.parse().map_err(|_| err())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(FieldError::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime via Fermat. `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rational;
        let a = q.parse_element("6/4").unwrap();
        assert_eq!(a.to_string(), "3/2");
        let b = q.parse_element("-3/2").unwrap();
        assert!(q.add(&a, &b).is_zero());
        let c = q.parse_element("2/-4").unwrap();
        assert_eq!(c.to_string(), "-1/2");
    }

    #[test]
    fn prime_residues_are_canonical() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(-1);
        assert_eq!(a.to_string(), "6");
        let half = f.parse_element("1/2").unwrap();
        assert_eq!(half.to_string(), "4");
        assert!(f.mul(&half, &f.from_i64(2)).is_one());
        assert!(matches!(f.parse_element("1/7"), Err(FieldError::DenominatorVanishes(..))));
    }

    #[test]
    fn primality_is_checked() {
        assert!(Field::prime(DEFAULT_PRIME).is_ok());
        assert_eq!(Field::prime(91), Err(FieldError::NotPrime(91)));
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn field_names_round_trip() {
        for s in ["rational", "prime:101", "prime:2305843009213693951"] {
            assert_eq!(s.parse::<Field>().unwrap().to_string(), s);
        }
        assert!("prime:100".parse::<Field>().is_err());
    }

    #[test]
    fn inverse_of_zero_fails() {
        let q = Field::Rational;
        assert_eq!(q.inv(&q.zero()), Err(FieldError::DivisionByZero));
    }
}
