use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficients are stored as rationals. Elements of `Fp` are kept as
/// integers in `[0, p)` and elements of `Z` as integers.
pub type Coefficient = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Rationals,
    PrimeField(u64),
    Integers,
}

impl CoeffRing {
    pub fn parse(label: &str) -> Result<Self> {
        let label = label.trim();
        match label {
            "Q" => Ok(CoeffRing::Rationals),
            "Z" => Ok(CoeffRing::Integers),
            _ => {
                let p = label
                    .strip_prefix("Fp:")
                    .and_then(|s| s.trim().parse::<u64>().ok())
                    .ok_or_else(|| Error::UnsupportedRing(label.to_string()))?;
                if !is_prime(p) {
                    return Err(Error::UnsupportedRing(format!("{p} is not prime")));
                }
                Ok(CoeffRing::PrimeField(p))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            CoeffRing::Rationals => "Q".into(),
            CoeffRing::PrimeField(p) => format!("Fp:{p}"),
            CoeffRing::Integers => "Z".into(),
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, CoeffRing::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoeffRing::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// Brings a rational into canonical form for this ring.
    pub fn normalize(&self, c: &BigRational) -> Result<Coefficient> {
        match self {
            CoeffRing::Rationals => Ok(c.clone()),
            CoeffRing::Integers => {
                if c.is_integer() {
                    Ok(c.clone())
                } else {
                    Err(Error::UnsupportedRing(format!("{c} is not an integer")))
                }
            }
            CoeffRing::PrimeField(p) => {
                let p = BigInt::from(*p);
                let den = c.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::Invalid(format!("denominator of {c} vanishes mod {p}")));
                }
                let inv = mod_inverse(&den, &p);
                let v = (c.numer().mod_floor(&p) * inv).mod_floor(&p);
                Ok(BigRational::from_integer(v))
            }
        }
    }

    pub(crate) fn reduce(&self, c: BigRational) -> Coefficient {
        match self {
            CoeffRing::PrimeField(_) => self.normalize(&c).expect("operands are canonical"),
            _ => c,
        }
    }

    pub fn from_int(&self, n: i64) -> Coefficient {
        self.reduce(BigRational::from_integer(n.into()))
    }

    pub fn add(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Coefficient) -> Coefficient {
        self.reduce(-a)
    }

    pub fn is_unit(&self, a: &Coefficient) -> bool {
        match self {
            CoeffRing::Integers => a.abs().is_one(),
            _ => !a.is_zero(),
        }
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(&self, a: &Coefficient) -> Option<Coefficient> {
        if !self.is_unit(a) {
            return None;
        }
        Some(self.reduce(a.recip()))
    }

    pub fn format(&self, c: &Coefficient) -> String {
        c.to_string()
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    e.x.mod_floor(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn labels_round_trip() {
        for l in ["Q", "Z", "Fp:5", "Fp:2"] {
            assert_eq!(CoeffRing::parse(l).unwrap().label(), l);
        }
        assert!(CoeffRing::parse("Fp:4").is_err());
        assert!(CoeffRing::parse("R").is_err());
    }

    #[test]
    fn prime_field_normalizes_fractions() {
        let f5 = CoeffRing::PrimeField(5);
        assert_eq!(f5.normalize(&q(1, 2)).unwrap(), q(3, 1));
        assert_eq!(f5.normalize(&q(-1, 1)).unwrap(), q(4, 1));
        assert!(f5.normalize(&q(1, 5)).is_err());
        assert_eq!(f5.inv(&q(2, 1)).unwrap(), q(3, 1));
    }

    #[test]
    fn integer_units() {
        let z = CoeffRing::Integers;
        assert!(z.is_unit(&q(-1, 1)));
        assert!(!z.is_unit(&q(2, 1)));
        assert!(z.inv(&q(2, 1)).is_none());
        assert!(z.normalize(&q(1, 2)).is_err());
    }
}
