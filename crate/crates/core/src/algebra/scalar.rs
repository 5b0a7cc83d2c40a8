//! Exact coefficient fields: arbitrary-precision rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// The coefficient field of a base ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, AlgebraError> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
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
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Fp(v.rem_euclid(*p as i64) as u64, *p),
        }
    }

    /// `num / den`; `den` must be nonzero in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        match self {
            Field::Rational => {
                if den.is_zero() {
                    None
                } else {
                    Some(Scalar::Q(BigRational::new(num.clone(), den.clone())))
                }
            }
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &pb) + &pb) % &pb;
                    u64::try_from(r).unwrap()
                };
                let d = reduce(den);
                if d == 0 {
                    return None;
                }
                Some(Scalar::Fp(reduce(num), *p).mul(&Scalar::Fp(d, *p).inv()))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp {p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element. Mixing elements of different fields is a logic error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp(u64, u64),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp(v, _) => *v == 1,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp(a, p), Scalar::Fp(b, _)) => Scalar::Fp((a + b) % p, *p),
            _ => panic!("field mismatch"),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp(a, p), Scalar::Fp(b, _)) => Scalar::Fp((a + p - b) % p, *p),
            _ => panic!("field mismatch"),
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp(a, p), Scalar::Fp(b, _)) => {
                Scalar::Fp(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp(a, p) => Scalar::Fp((p - a) % p, *p),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp(a, p) => Scalar::Fp(pow_mod(*a, p - 2, *p), *p),
        }
    }

    pub fn div(&self, o: &Scalar) -> Scalar {
        self.mul(&o.inv())
    }

    /// Sign of a `(-1)^e` factor applied to this scalar.
    pub fn signed(&self, negative: bool) -> Scalar {
        if negative {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn is_negative_literal(&self) -> bool {
        match self {
            Scalar::Q(a) => a.is_negative(),
            Scalar::Fp(..) => false,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u128;
    let m = p as u128;
    let mut bb = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % m;
        }
        bb = bb * bb % m;
        e >>= 1;
    }
    b = r as u64;
    b
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(a) => {
                if a.denom().is_one() {
                    write!(f, "{}", a.numer())
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())
                }
            }
            Scalar::Fp(v, _) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        let a = f.from_i64(3);
        assert_eq!(a.mul(&a.inv()), f.one());
        assert_eq!(f.from_i64(-1), f.from_i64(4));
        assert!(Field::prime(6).is_err());
    }

    #[test]
    fn rational_fractions() {
        let f = Field::Rational;
        let half = f.from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(half.add(&half), f.one());
        assert_eq!(format!("{}", half.neg()), "-1/2");
    }

    #[test]
    fn prime_field_fraction() {
        let f = Field::prime(5).unwrap();
        let x = f.from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(x, f.from_i64(3));
        assert!(f.from_fraction(&BigInt::from(1), &BigInt::from(5)).is_none());
    }
}
