//! Modules over tiny finite rings `Z/m` and `F_p[x]/(f)` handled by full
//! element enumeration.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::field::{factorize, is_prime};

use super::subgroups::ENUMERATION_BUDGET;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteRing {
    /// `Z/m`, elements `0..m`.
    IntegersMod(u64),
    /// `F_p[x]/(f)` with `f` monic, coefficients lowest degree first;
    /// element `k` has base-`p` digits as coefficients.
    PolynomialsMod { p: u64, modulus: Vec<u64> },
}

impl FiniteRing {
    pub fn integers_mod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument("modulus must be at least 2".into()));
        }
        Ok(FiniteRing::IntegersMod(m))
    }

    pub fn polynomials_mod(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        let mut f: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        while f.last() == Some(&0) {
            f.pop();
        }
        if f.len() < 2 || f.last() != Some(&1) {
            return Err(Error::InvalidArgument("modulus must be monic of positive degree".into()));
        }
        Ok(FiniteRing::PolynomialsMod { p, modulus: f })
    }

    pub fn size(&self) -> usize {
        match self {
            FiniteRing::IntegersMod(m) => *m as usize,
            FiniteRing::PolynomialsMod { p, modulus } => (*p as usize).pow((modulus.len() - 1) as u32),
        }
    }

    fn degree(&self) -> usize {
        match self {
            FiniteRing::IntegersMod(_) => 0,
            FiniteRing::PolynomialsMod { modulus, .. } => modulus.len() - 1,
        }
    }

    fn digits(&self, x: usize) -> Vec<u64> {
        let FiniteRing::PolynomialsMod { p, .. } = self else { unreachable!() };
        let mut x = x as u64;
        (0..self.degree())
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    fn undigits(&self, v: &[u64]) -> usize {
        let FiniteRing::PolynomialsMod { p, .. } = self else { unreachable!() };
        v.iter().rev().fold(0u64, |acc, &d| acc * p + d) as usize
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        match self {
            FiniteRing::IntegersMod(m) => (a + b) % *m as usize,
            FiniteRing::PolynomialsMod { p, .. } => {
                let s: Vec<u64> = self.digits(a).iter().zip(self.digits(b)).map(|(x, y)| (x + y) % p).collect();
                self.undigits(&s)
            }
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self {
            FiniteRing::IntegersMod(m) => ((a as u64 * b as u64) % m) as usize,
            FiniteRing::PolynomialsMod { p, modulus } => {
                let (x, y) = (self.digits(a), self.digits(b));
                let mut prod = vec![0u64; x.len() + y.len()];
                for (i, &u) in x.iter().enumerate() {
                    for (j, &v) in y.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + u * v) % p;
                    }
                }
                poly_rem(&mut prod, modulus, *p);
                prod.truncate(self.degree());
                prod.resize(self.degree(), 0);
                self.undigits(&prod)
            }
        }
    }

    /// Maximal ideals as membership masks, with a printable generator.
    pub fn prime_ideals(&self) -> Vec<(String, Vec<bool>)> {
        let n = self.size();
        match self {
            FiniteRing::IntegersMod(m) => {
                factorize(*m).into_iter().map(|(q, _)| (q.to_string(), (0..n).map(|x| x as u64 % q == 0).collect())).collect()
            }
            FiniteRing::PolynomialsMod { p, modulus } => irreducible_factors(modulus, *p)
                .into_iter()
                .map(|g| {
                    let mask = (0..n)
                        .map(|x| {
                            let mut d = self.digits(x);
                            poly_rem(&mut d, &g, *p);
                            d.iter().all(|&c| c == 0)
                        })
                        .collect();
                    (format_poly(&g), mask)
                })
                .collect(),
        }
    }
}

// in place remainder by a monic polynomial
fn poly_rem(a: &mut Vec<u64>, f: &[u64], p: u64) {
    let df = f.len() - 1;
    while a.len() > df {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let k = a.len() - df;
            for (i, &c) in f[..df].iter().enumerate() {
                a[k + i] = (a[k + i] + p - (lead * c) % p) % p;
            }
        }
    }
}

fn divides(g: &[u64], f: &[u64], p: u64) -> bool {
    let mut r = f.to_vec();
    poly_rem(&mut r, g, p);
    r.iter().all(|&c| c == 0)
}

fn monic_of_degree(d: usize, p: u64) -> impl Iterator<Item = Vec<u64>> {
    (0..p.pow(d as u32)).map(move |mut k| {
        let mut v: Vec<u64> = (0..d)
            .map(|_| {
                let c = k % p;
                k /= p;
                c
            })
            .collect();
        v.push(1);
        v
    })
}

fn irreducible_factors(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let deg = f.len() - 1;
    let mut out: Vec<Vec<u64>> = Vec::new();
    for d in 1..=deg {
        for g in monic_of_degree(d, p) {
            if divides(&g, f, p) && !out.iter().any(|h| divides(h, &g, p)) {
                out.push(g);
            }
        }
    }
    out
}

fn format_poly(g: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in g.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, mono.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    terms.join(" + ")
}

/// `R^n / <relations>` with every element enumerated.
#[derive(Clone, Debug)]
pub struct FiniteRingModule {
    ring: FiniteRing,
    rank: usize,
    relations: Vec<Vec<usize>>,
    submodule: Vec<bool>,
}

impl FiniteRingModule {
    pub fn new(ring: FiniteRing, rank: usize, relations: Vec<Vec<usize>>) -> Result<Self> {
        let q = ring.size();
        let total = q.checked_pow(rank as u32).filter(|&t| t <= ENUMERATION_BUDGET).ok_or_else(|| {
            Error::EnumerationBudget(format!("{q}^{rank} elements exceed {ENUMERATION_BUDGET}"))
        })?;
        if relations.iter().any(|r| r.len() != rank || r.iter().any(|&c| c >= q)) {
            return Err(Error::InvalidArgument("relation rows must have one ring element per generator".into()));
        }
        let mut m = FiniteRingModule { ring, rank, relations, submodule: vec![false; total] };
        m.submodule[0] = true;
        let mut members = vec![0usize];
        for r in m.relations.clone() {
            let multiples: HashSet<usize> = (0..q).map(|c| m.encode(&r.iter().map(|&x| m.ring.mul(c, x)).collect::<Vec<_>>())).collect();
            let mut next: HashSet<usize> = HashSet::new();
            for &s in &members {
                for &t in &multiples {
                    next.insert(m.add(s, t));
                }
            }
            members = next.into_iter().collect();
        }
        for s in members {
            m.submodule[s] = true;
        }
        Ok(m)
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    fn encode(&self, v: &[usize]) -> usize {
        let q = self.ring.size();
        v.iter().rev().fold(0, |acc, &c| acc * q + c)
    }

    fn decode(&self, mut x: usize) -> Vec<usize> {
        let q = self.ring.size();
        (0..self.rank)
            .map(|_| {
                let c = x % q;
                x /= q;
                c
            })
            .collect()
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let s: Vec<usize> = self.decode(a).iter().zip(self.decode(b)).map(|(&x, y)| self.ring.add(x, y)).collect();
        self.encode(&s)
    }

    fn scale(&self, c: usize, a: usize) -> usize {
        let s: Vec<usize> = self.decode(a).iter().map(|&x| self.ring.mul(c, x)).collect();
        self.encode(&s)
    }

    /// Number of elements of the quotient module.
    pub fn size(&self) -> usize {
        self.submodule.len() / self.submodule.iter().filter(|&&b| b).count()
    }

    /// `Ann(v)` as a ring-element mask.
    pub fn element_annihilator(&self, v: usize) -> Vec<bool> {
        (0..self.ring.size()).map(|c| self.submodule[self.scale(c, v)]).collect()
    }

    /// Primes realized as annihilators of single elements.
    pub fn associated_primes(&self) -> Vec<String> {
        let primes = self.ring.prime_ideals();
        let mut found = vec![false; primes.len()];
        for v in 0..self.submodule.len() {
            if self.submodule[v] {
                continue;
            }
            let ann = self.element_annihilator(v);
            for (k, (_, mask)) in primes.iter().enumerate() {
                found[k] |= *mask == ann;
            }
        }
        primes.into_iter().zip(found).filter(|(_, f)| *f).map(|((g, _), _)| g).collect()
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteRing::IntegersMod(m) => write!(f, "Z/{m}"),
            FiniteRing::PolynomialsMod { p, modulus } => write!(f, "F_{p}[x]/({})", format_poly(modulus)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_mod() {
        let r = FiniteRing::integers_mod(12).unwrap();
        // Z/12 as a module over itself: Ass = {(2), (3)}
        let m = FiniteRingModule::new(r.clone(), 1, vec![]).unwrap();
        assert_eq!(m.associated_primes(), vec!["2", "3"]);
        // (Z/12)/(4) = Z/4
        let m = FiniteRingModule::new(r, 1, vec![vec![4]]).unwrap();
        assert_eq!(m.size(), 4);
        assert_eq!(m.associated_primes(), vec!["2"]);
    }

    #[test]
    fn polynomial_quotient() {
        // F_2[x]/(x^2 (x+1)): primes (x) and (x+1)
        let r = FiniteRing::polynomials_mod(2, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(r.prime_ideals().len(), 2);
        let m = FiniteRingModule::new(r.clone(), 1, vec![]).unwrap();
        assert_eq!(m.associated_primes(), vec!["x", "x + 1"]);
        // R/(x) has only (x)
        let m = FiniteRingModule::new(r, 1, vec![vec![2]]).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.associated_primes(), vec!["x"]);
    }
}
