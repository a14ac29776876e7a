use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinAlgError;

/// Coefficient field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    kind: FieldKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Prime(u32),
}

/// A single field element. Only meaningful together with the `FieldSpec` it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod(u32),
    Rat(BigRational),
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec {
            kind: FieldKind::Rationals,
        }
    }

    /// Prime field `F_p`. Primes are limited to 31 bits so products fit in `u64`.
    pub fn prime(p: u32) -> Result<Self, LinAlgError> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(LinAlgError::NotPrime(p));
        }
        Ok(FieldSpec {
            kind: FieldKind::Prime(p),
        })
    }

    /// Parses `Q`/`QQ`/`0` or a prime such as `2`, `F3`.
    pub fn parse(s: &str) -> Result<Self, LinAlgError> {
        let t = s.trim();
        match t {
            "Q" | "QQ" | "q" | "0" | "rationals" => Ok(Self::rationals()),
            _ => {
                let digits = t.trim_start_matches(['F', 'f', 'p']);
                digits
                    .parse::<u32>()
                    .map_err(|_| LinAlgError::BadField(s.to_string()))
                    .and_then(Self::prime)
            }
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u32 {
        match self.kind {
            FieldKind::Rationals => 0,
            FieldKind::Prime(p) => p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self.kind {
            FieldKind::Rationals => Scalar::Rat(BigRational::zero()),
            FieldKind::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self.kind {
            FieldKind::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldKind::Prime(p) => Scalar::Mod(reduce_i64(v, p)),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self.kind {
            FieldKind::Rationals => Scalar::Rat(BigRational::from_integer(v.clone())),
            FieldKind::Prime(p) => {
                let r = v % BigInt::from(p);
                let r = if r.is_negative() {
                    r + BigInt::from(p)
                } else {
                    r
                };
                Scalar::Mod(r.try_into().expect("residue fits in u32"))
            }
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        match self.kind {
            FieldKind::Rationals => Scalar::Rat(BigRational::new(num.into(), den.into())),
            FieldKind::Prime(_) => {
                let d = self.from_i64(den);
                self.mul(&self.from_i64(num), &self.inv(&d))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(v) => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self.kind, a, b) {
            (FieldKind::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u64 + *y as u64) % p as u64) as u32)
            }
            (FieldKind::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self.kind, a) {
            (FieldKind::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            (FieldKind::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self.kind, a, b) {
            (FieldKind::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u64 * *y as u64) % p as u64) as u32)
            }
            (FieldKind::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!self.is_zero(a), "inverse of zero");
        match (self.kind, a) {
            (FieldKind::Prime(p), Scalar::Mod(x)) => Scalar::Mod(inv_mod(*x, p)),
            (FieldKind::Rationals, Scalar::Rat(x)) => Scalar::Rat(x.recip()),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(v) => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Rat(r) => write!(f, "{r}"),
        }
    }
}

pub(crate) fn reduce_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

pub(crate) fn inv_mod(x: u32, p: u32) -> u32 {
    // Fermat: x^(p-2)
    let mut base = x as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}
