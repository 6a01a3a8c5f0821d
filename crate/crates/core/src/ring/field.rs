use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact coefficient domain of a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientField {
    Rationals,
    /// Prime field with `p < 2^16`.
    Prime(u32),
}

pub type Coeff = BigRational;

impl CoefficientField {
    pub fn prime(p: u32) -> Result<Self> {
        if p < 2 || p >= 1 << 16 || !is_prime(u64::from(p)) {
            return Err(Error::UnsupportedField(format!("GF({p})")));
        }
        Ok(CoefficientField::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            CoefficientField::Rationals => 0,
            CoefficientField::Prime(p) => *p,
        }
    }

    /// Maps an arbitrary rational into the field (reduces mod p for prime fields).
    pub fn normalize(&self, c: Coeff) -> Coeff {
        match self {
            CoefficientField::Rationals => c,
            CoefficientField::Prime(p) => {
                let p = BigInt::from(*p);
                let num = c.numer().mod_floor(&p);
                if c.denom().is_one() {
                    return Coeff::from_integer(num);
                }
                let den = c.denom().mod_floor(&p);
                let inv = mod_inverse(&den, &p).expect("denominator divisible by the characteristic");
                Coeff::from_integer((num * inv).mod_floor(&p))
            }
        }
    }

    pub fn from_int(&self, n: i64) -> Coeff {
        self.normalize(Coeff::from_integer(BigInt::from(n)))
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.reduce_sum(a + b)
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.reduce_sum(a - b)
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.reduce_sum(a * b)
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.reduce_sum(-a)
    }

    pub fn inv(&self, a: &Coeff) -> Coeff {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            CoefficientField::Rationals => a.recip(),
            CoefficientField::Prime(p) => {
                let p = BigInt::from(*p);
                Coeff::from_integer(mod_inverse(a.numer(), &p).expect("nonzero residue"))
            }
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.mul(a, &self.inv(b))
    }

    // Integer inputs stay integral under +,-,* so a plain mod suffices.
    fn reduce_sum(&self, c: Coeff) -> Coeff {
        match self {
            CoefficientField::Rationals => c,
            CoefficientField::Prime(p) => Coeff::from_integer(c.numer().mod_floor(&BigInt::from(*p))),
        }
    }

    /// Enumerates small field elements in the order 0, 1, -1, 2, -2, ...
    /// (deduplicated modulo p).
    pub fn small_elements(&self, count: usize) -> Vec<Coeff> {
        let mut out: Vec<Coeff> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut k: i64 = 0;
        let cap = match self {
            CoefficientField::Rationals => count,
            CoefficientField::Prime(p) => count.min(*p as usize),
        };
        while out.len() < cap {
            for cand in if k == 0 { vec![0] } else { vec![k, -k] } {
                let c = self.from_int(cand);
                if out.len() < cap && seen.insert(c.clone()) {
                    out.push(c);
                }
            }
            k += 1;
        }
        out
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Rationals => write!(f, "QQ"),
            CoefficientField::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.abs().is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, ascending primes with exponents.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_normalizes_fractions() {
        let f = CoefficientField::prime(7).unwrap();
        let half = f.normalize(Coeff::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(half, Coeff::from_integer(BigInt::from(4)));
        assert_eq!(f.mul(&half, &f.from_int(2)), f.from_int(1));
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(CoefficientField::prime(15).is_err());
        assert!(CoefficientField::prime(65537).is_err());
    }

    #[test]
    fn small_elements_order() {
        let q = CoefficientField::Rationals.small_elements(5);
        let ints: Vec<i64> = q.iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        assert_eq!(ints, vec![0, 1, -1, 2, -2]);
        assert_eq!(CoefficientField::Prime(3).small_elements(10).len(), 3);
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(1), vec![]);
    }
}
