//! Exact scalars: arbitrary-precision rationals and residues modulo a prime.

use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest modulus accepted for prime fields, so residue products fit in `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

/// Errors raised when building fields or scalars.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported maximum")]
    ModulusTooLarge(u64),
    #[error("cannot parse field descriptor {0:?}")]
    BadField(String),
    #[error("cannot parse scalar {text:?} over {field}")]
    BadScalar { text: String, field: Field },
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("division by zero")]
    DivisionByZero,
}

/// A field descriptor: the rationals or GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// GF(p), validating that `p` is a prime within range.
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if p > MAX_PRIME {
            return Err(ScalarError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => {
                let r = v.rem_euclid(*p as i64) as u64;
                Scalar::Residue {
                    value: r,
                    modulus: *p,
                }
            }
        }
    }

    /// `num/den` as a field element.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        self.from_i64(num)
            .checked_div(&self.from_i64(den))
            .ok_or(ScalarError::DivisionByZero)
    }

    /// Reduce an arbitrary rational into this field.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, ScalarError> {
        match self {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(*p);
                let num = q.numer().mod_floor(&m).to_u64().unwrap_or(0);
                let den = q.denom().mod_floor(&m).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(ScalarError::DivisionByZero);
                }
                let n = Scalar::Residue {
                    value: num,
                    modulus: *p,
                };
                let d = Scalar::Residue {
                    value: den,
                    modulus: *p,
                };
                n.checked_div(&d).ok_or(ScalarError::DivisionByZero)
            }
        }
    }

    /// The `i`-th element in the canonical enumeration `0, 1, ..., p-1` of GF(p).
    pub fn element(&self, i: u64) -> Option<Scalar> {
        match self {
            Field::Prime(p) if i < *p => Some(Scalar::Residue {
                value: i,
                modulus: *p,
            }),
            _ => None,
        }
    }

    /// Parse a scalar in the text encoding: `a` or `a/b`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, ScalarError> {
        let bad = || ScalarError::BadScalar {
            text: text.to_string(),
            field: *self,
        };
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (t, None),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = match den {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        self.from_rational(&BigRational::new(num, den))
            .map_err(|_| bad())
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        s.field() == *self
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for Field {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" {
            return Ok(Field::Rational);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ScalarError::BadField(s.to_string()))?;
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| ScalarError::BadField(s.to_string()))?;
        Field::prime(p)
    }
}

/// An exact field element. Residues carry their modulus so that mixing
/// fields is always detectable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Residue value for GF(p) elements.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<(), ScalarError> {
        let (l, r) = (self.field(), other.field());
        if l == r {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch { left: l, right: r })
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: (a + b) % modulus,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: a * b % modulus,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        })
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: mod_pow(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Division; `None` when dividing by zero. Panics on field mismatch.
    pub fn checked_div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self * &i)
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Whether the value is a negative rational (always false for residues).
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let q = Field::Rational;
        let a = q.parse_scalar("6/-4").unwrap();
        assert_eq!(a.to_string(), "-3/2");
        assert_eq!(q.parse_scalar("4/2").unwrap().to_string(), "2");
    }

    #[test]
    fn prime_validation() {
        assert!(Field::prime(5).is_ok());
        assert_eq!(Field::prime(6), Err(ScalarError::NotPrime(6)));
        assert_eq!(Field::prime(1), Err(ScalarError::NotPrime(1)));
        assert!(matches!(
            Field::prime(1 << 40),
            Err(ScalarError::ModulusTooLarge(_))
        ));
    }

    #[test]
    fn field_descriptor_text() {
        assert_eq!("GF(7)".parse::<Field>().unwrap(), Field::Prime(7));
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert!("GF(8)".parse::<Field>().is_err());
        assert!("R".parse::<Field>().is_err());
        assert_eq!(Field::Prime(11).to_string(), "GF(11)");
    }

    #[test]
    fn residue_arithmetic() {
        let f = Field::Prime(5);
        let two = f.from_i64(2);
        let three = f.from_i64(3);
        assert!((&two * &three).is_one());
        assert_eq!(two.inv().unwrap(), three);
        assert_eq!(f.from_i64(-1).residue(), Some(4));
        assert_eq!(f.parse_scalar("1/2").unwrap(), three);
        assert_eq!(two.pow(4), f.one());
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = Field::Rational.one();
        let b = Field::Prime(3).one();
        assert!(matches!(
            a.try_add(&b),
            Err(ScalarError::FieldMismatch { .. })
        ));
        assert!(Field::Prime(3)
            .one()
            .try_mul(&Field::Prime(5).one())
            .is_err());
    }
}
