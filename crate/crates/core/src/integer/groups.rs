//! Canonical forms of finitely generated abelian groups and of Artinian
//! abelian groups (finite part plus Prüfer groups), with closed-form
//! colon, quotient, Tor, annihilator, attached primes and length.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homalg::Length;
use crate::ring::field::{factorize, is_prime};

use super::snf::{cokernel, IntMatrix};

fn as_strings<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// `v_p(n)` for `n != 0`.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    if n.is_zero() {
        return u32::MAX;
    }
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

fn prime_factors(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let m = n.abs().to_u64().ok_or_else(|| Error::InvalidArgument(format!("{n} is too large to factor")))?;
    Ok(factorize(m))
}

/// `Z^free_rank (+) Z/d_1 (+) ... (+) Z/d_k` with `1 < d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "as_strings")]
    pub invariant_factors: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        AbelianGroup { free_rank: 0, invariant_factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, invariant_factors: Vec::new() }
    }

    pub fn cyclic(n: i64) -> Self {
        Self::from_cyclic_orders(0, &[BigInt::from(n)])
    }

    pub fn cyclic_big(n: BigInt) -> Self {
        Self::from_cyclic_orders(0, &[n])
    }

    /// Normalizes any list of cyclic orders (0 = infinite cyclic).
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let mut free = free_rank;
        let mut rows: IntMatrix = Vec::new();
        let finite: Vec<&BigInt> = orders
            .iter()
            .filter(|o| {
                if o.is_zero() {
                    free += 1;
                    false
                } else {
                    true
                }
            })
            .collect();
        let k = finite.len();
        for (i, o) in finite.iter().enumerate() {
            let mut r = vec![BigInt::zero(); k];
            r[i] = o.abs();
            rows.push(r);
        }
        let (_, inv) = cokernel(&rows, k);
        AbelianGroup { free_rank: free, invariant_factors: inv }
    }

    /// `Z^ngens / rowspan(relations)`.
    pub fn from_relations(ngens: usize, relations: &IntMatrix) -> Self {
        let (free, inv) = cokernel(relations, ngens);
        AbelianGroup { free_rank: free, invariant_factors: inv }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Prime-power cyclic orders of the torsion part, sorted.
    pub fn elementary_divisors(&self) -> Result<Vec<(u64, u32)>> {
        let mut out = Vec::new();
        for d in &self.invariant_factors {
            out.extend(prime_factors(d)?);
        }
        out.sort();
        Ok(out)
    }

    /// Generator of the annihilator ideal (0 when there is a free part).
    pub fn annihilator(&self) -> BigInt {
        if self.free_rank > 0 {
            BigInt::zero()
        } else {
            self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
        }
    }

    /// `Ass`: `(0)` for a free part, `(p)` for primes dividing the torsion.
    pub fn associated_primes(&self) -> Result<Vec<u64>> {
        let mut s: BTreeSet<u64> = self.elementary_divisors()?.into_iter().map(|(p, _)| p).collect();
        if self.free_rank > 0 {
            s.insert(0);
        }
        Ok(s.into_iter().collect())
    }

    pub fn length(&self) -> Length {
        if self.free_rank > 0 {
            return Length::Infinite;
        }
        let total: u32 = self.elementary_divisors().map(|v| v.iter().map(|(_, e)| *e).sum()).unwrap_or(0);
        Length::Finite(total as u64)
    }

    /// Cyclic orders of a decomposition: `free_rank` zeros then invariant factors.
    fn cyclic_orders(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.free_rank];
        v.extend(self.invariant_factors.iter().cloned());
        v
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Finite part `(+) Z/p^e` plus Prüfer part `(+) Z(p^inf)^k`, both sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ArtinianGroup {
    pub finite: Vec<(u64, u32)>,
    pub prufer: Vec<(u64, u32)>,
}

impl ArtinianGroup {
    pub fn zero() -> Self {
        ArtinianGroup { finite: Vec::new(), prufer: Vec::new() }
    }

    pub fn new(mut finite: Vec<(u64, u32)>, prufer: Vec<(u64, u32)>) -> Result<Self> {
        for &(p, _) in finite.iter().chain(&prufer) {
            if !is_prime(p) {
                return Err(Error::InvalidArgument(format!("{p} is not prime")));
            }
        }
        finite.retain(|&(_, e)| e > 0);
        finite.sort();
        let mut merged: BTreeMap<u64, u32> = BTreeMap::new();
        for (p, k) in prufer {
            if k > 0 {
                *merged.entry(p).or_default() += k;
            }
        }
        Ok(ArtinianGroup { finite, prufer: merged.into_iter().collect() })
    }

    /// `Z(p^inf)`.
    pub fn prufer(p: u64) -> Self {
        Self::new(Vec::new(), vec![(p, 1)]).expect("prime")
    }

    /// A finite abelian group given by cyclic orders.
    pub fn finite_cyclic(orders: &[u64]) -> Result<Self> {
        let mut parts = Vec::new();
        for &n in orders {
            if n == 0 {
                return Err(Error::InvalidArgument("a finite part needs positive orders".into()));
            }
            parts.extend(factorize(n));
        }
        Self::new(parts, Vec::new())
    }

    pub fn from_finite_group(g: &AbelianGroup) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InvalidArgument(format!("{g} is not finite, hence not Artinian over Z")));
        }
        Self::new(g.elementary_divisors()?, Vec::new())
    }

    pub fn direct_sum(&self, other: &ArtinianGroup) -> Self {
        let mut f = self.finite.clone();
        f.extend(other.finite.iter().copied());
        let mut p = self.prufer.clone();
        p.extend(other.prufer.iter().copied());
        Self::new(f, p).expect("primes already checked")
    }

    pub fn is_zero(&self) -> bool {
        self.finite.is_empty() && self.prufer.is_empty()
    }

    pub fn has_prufer(&self) -> bool {
        !self.prufer.is_empty()
    }

    /// Finite-part size, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.has_prufer() {
            return None;
        }
        Some(self.finite.iter().map(|&(p, e)| BigInt::from(p).pow(e)).product())
    }

    pub fn length(&self) -> Length {
        if self.has_prufer() {
            Length::Infinite
        } else {
            Length::Finite(self.finite.iter().map(|&(_, e)| e as u64).sum())
        }
    }

    /// Generator of `Ann`: 0 with a Prüfer part, else the exponent.
    pub fn annihilator(&self) -> BigInt {
        if self.has_prufer() {
            return BigInt::zero();
        }
        let mut by_prime: BTreeMap<u64, u32> = BTreeMap::new();
        for &(p, e) in &self.finite {
            let x = by_prime.entry(p).or_default();
            *x = (*x).max(e);
        }
        by_prime.into_iter().map(|(p, e)| BigInt::from(p).pow(e)).product()
    }

    /// `Att`: `(p)` for each prime of the finite part, `(0)` for a Prüfer part.
    /// The zero ideal is encoded as 0.
    pub fn attached_primes(&self) -> Vec<u64> {
        let mut s: BTreeSet<u64> = self.finite.iter().map(|&(p, _)| p).collect();
        if self.has_prufer() {
            s.insert(0);
        }
        s.into_iter().collect()
    }

    pub fn cosupport(&self) -> ZCosupport {
        ZCosupport::of_annihilator(&self.annihilator())
    }

    /// `(0 :_N n)`.
    pub fn colon(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return self.clone();
        }
        let finite = self
            .finite
            .iter()
            .map(|&(p, e)| (p, e.min(valuation(n, p))))
            .chain(self.prufer.iter().flat_map(|&(p, k)| std::iter::repeat_n((p, valuation(n, p)), k as usize)))
            .collect();
        Self::new(finite, Vec::new()).expect("primes already checked")
    }

    /// `N / nN`.
    pub fn quotient_by(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return self.clone();
        }
        let finite = self.finite.iter().map(|&(p, e)| (p, e.min(valuation(n, p)))).collect();
        Self::new(finite, Vec::new()).expect("primes already checked")
    }

    /// `|N[p^k]|` as an exponent of `p`.
    pub fn torsion_exponent(&self, p: u64, k: u32) -> u64 {
        let fin: u64 = self.finite.iter().filter(|(q, _)| *q == p).map(|&(_, e)| e.min(k) as u64).sum();
        let pr: u64 = self.prufer.iter().filter(|(q, _)| *q == p).map(|&(_, m)| m as u64 * k as u64).sum();
        fin + pr
    }

    /// Largest exponent in the finite part.
    pub fn max_finite_exponent(&self) -> u32 {
        self.finite.iter().map(|&(_, e)| e).max().unwrap_or(0)
    }

    pub fn primes(&self) -> BTreeSet<u64> {
        self.finite.iter().chain(&self.prufer).map(|&(p, _)| p).collect()
    }

    /// Components in a fixed order: finite parts, then each Prüfer copy.
    pub fn components(&self) -> Vec<Component> {
        let mut out: Vec<Component> = self.finite.iter().map(|&(p, e)| Component::Cyclic { p, e }).collect();
        for &(p, k) in &self.prufer {
            for _ in 0..k {
                out.push(Component::Prufer { p });
            }
        }
        out
    }
}

impl fmt::Display for ArtinianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.finite.iter().map(|&(p, e)| format!("Z/{}", BigInt::from(p).pow(e))).collect();
        for &(p, k) in &self.prufer {
            parts.push(if k == 1 { format!("Z({p}^inf)") } else { format!("Z({p}^inf)^{k}") });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Cyclic { p: u64, e: u32 },
    Prufer { p: u64 },
}

impl Component {
    pub fn prime(&self) -> u64 {
        match *self {
            Component::Cyclic { p, .. } | Component::Prufer { p } => p,
        }
    }
}

/// `V(Ann)` over `Z`: everything, a finite set of maximal ideals, or empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZCosupport {
    pub whole_spectrum: bool,
    pub primes: BTreeSet<u64>,
}

impl ZCosupport {
    pub fn of_annihilator(a: &BigInt) -> Self {
        if a.is_zero() {
            return ZCosupport { whole_spectrum: true, primes: BTreeSet::new() };
        }
        let primes = prime_factors(a).map(|v| v.into_iter().map(|(p, _)| p).collect()).unwrap_or_default();
        ZCosupport { whole_spectrum: false, primes }
    }

    pub fn union(&self, other: &ZCosupport) -> Self {
        ZCosupport {
            whole_spectrum: self.whole_spectrum || other.whole_spectrum,
            primes: self.primes.union(&other.primes).copied().collect(),
        }
    }

    /// Contained in `Max(Z)`: every member is a nonzero prime.
    pub fn inside_max(&self) -> bool {
        !self.whole_spectrum
    }

    /// `self ⊆ other ∪ Max`.
    pub fn inside_up_to_max(&self, other: &ZCosupport) -> bool {
        !self.whole_spectrum || other.whole_spectrum
    }

    /// `self ⊆ other`; returns an offending prime (0 for the zero ideal).
    pub fn witness_outside(&self, other: &ZCosupport) -> Option<u64> {
        if other.whole_spectrum {
            return None;
        }
        if self.whole_spectrum {
            return Some(0);
        }
        self.primes.difference(&other.primes).next().copied()
    }
}

/// Either canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum AbelianCanonical {
    FinitelyGenerated(AbelianGroup),
    Artinian(ArtinianGroup),
}

impl AbelianCanonical {
    pub fn is_zero(&self) -> bool {
        match self {
            AbelianCanonical::FinitelyGenerated(g) => g.is_zero(),
            AbelianCanonical::Artinian(a) => a.is_zero(),
        }
    }

    pub fn length(&self) -> Length {
        match self {
            AbelianCanonical::FinitelyGenerated(g) => g.length(),
            AbelianCanonical::Artinian(a) => a.length(),
        }
    }

    /// Same group up to isomorphism (a finite group has both forms).
    pub fn isomorphic(&self, other: &AbelianCanonical) -> bool {
        let norm = |x: &AbelianCanonical| match x {
            AbelianCanonical::FinitelyGenerated(g) if g.is_finite() => {
                ArtinianGroup::from_finite_group(g).ok().map(AbelianCanonical::Artinian).unwrap_or_else(|| x.clone())
            }
            _ => x.clone(),
        };
        norm(self) == norm(other)
    }
}

impl fmt::Display for AbelianCanonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbelianCanonical::FinitelyGenerated(g) => g.fmt(f),
            AbelianCanonical::Artinian(a) => a.fmt(f),
        }
    }
}

/// `Tor_i` over `Z` by closed forms on cyclic summands. `i >= 2` gives 0.
pub fn oracle_tor(a: &AbelianCanonical, b: &AbelianCanonical, i: usize) -> Result<AbelianCanonical> {
    use AbelianCanonical::*;
    match (a, b) {
        (FinitelyGenerated(x), FinitelyGenerated(y)) => {
            if i >= 2 {
                return Ok(FinitelyGenerated(AbelianGroup::zero()));
            }
            let mut free = 0;
            let mut orders: Vec<BigInt> = Vec::new();
            for s in x.cyclic_orders() {
                for t in y.cyclic_orders() {
                    match (i, s.is_zero(), t.is_zero()) {
                        (0, true, true) => free += 1,
                        (0, true, false) => orders.push(t.clone()),
                        (0, false, true) => orders.push(s.clone()),
                        (0, false, false) => orders.push(s.gcd(&t)),
                        (_, false, false) => orders.push(s.gcd(&t)),
                        _ => {}
                    }
                }
            }
            Ok(FinitelyGenerated(AbelianGroup::from_cyclic_orders(free, &orders)))
        }
        (FinitelyGenerated(x), Artinian(n)) | (Artinian(n), FinitelyGenerated(x)) => Ok(Artinian(tor_fg_artinian(x, n, i))),
        (Artinian(x), Artinian(y)) => {
            if i >= 2 {
                return Ok(Artinian(ArtinianGroup::zero()));
            }
            let mut finite = Vec::new();
            let mut prufer = Vec::new();
            for c in x.components() {
                for d in y.components() {
                    if c.prime() != d.prime() {
                        continue;
                    }
                    let p = c.prime();
                    match (c, d, i) {
                        (Component::Cyclic { e, .. }, Component::Cyclic { e: f, .. }, _) => finite.push((p, e.min(f))),
                        (Component::Cyclic { e, .. }, Component::Prufer { .. }, 1)
                        | (Component::Prufer { .. }, Component::Cyclic { e, .. }, 1) => finite.push((p, e)),
                        (Component::Prufer { .. }, Component::Prufer { .. }, 1) => prufer.push((p, 1)),
                        _ => {}
                    }
                }
            }
            Ok(Artinian(ArtinianGroup::new(finite, prufer)?))
        }
    }
}

/// `Tor_i(M, N)` for finitely generated `M` and Artinian `N`.
pub fn tor_fg_artinian(m: &AbelianGroup, n: &ArtinianGroup, i: usize) -> ArtinianGroup {
    let mut acc = ArtinianGroup::zero();
    match i {
        0 => {
            for _ in 0..m.free_rank {
                acc = acc.direct_sum(n);
            }
            for d in &m.invariant_factors {
                acc = acc.direct_sum(&n.quotient_by(d));
            }
        }
        1 => {
            for d in &m.invariant_factors {
                acc = acc.direct_sum(&n.colon(d));
            }
        }
        _ => {}
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fg(n: i64) -> AbelianCanonical {
        AbelianCanonical::FinitelyGenerated(AbelianGroup::cyclic(n))
    }

    #[test]
    fn canonical_forms() {
        let g = AbelianGroup::from_cyclic_orders(1, &[BigInt::from(4), BigInt::from(6)]);
        assert_eq!(g.invariant_factors, vec![BigInt::from(2), BigInt::from(12)]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(g.associated_primes().unwrap(), vec![0, 2, 3]);
        let a = ArtinianGroup::new(vec![(3, 2)], vec![(2, 1)]).unwrap();
        assert_eq!(a.attached_primes(), vec![0, 3]);
        assert_eq!(a.length(), Length::Infinite);
        assert_eq!(a.to_string(), "Z/9 + Z(2^inf)");
    }

    #[test]
    fn tor_closed_forms() {
        let t = oracle_tor(&fg(12), &fg(8), 1).unwrap();
        assert!(t.isomorphic(&fg(4)));
        let p2 = AbelianCanonical::Artinian(ArtinianGroup::prufer(2));
        assert!(oracle_tor(&fg(12), &p2, 1).unwrap().isomorphic(&fg(4)));
        assert!(oracle_tor(&fg(12), &p2, 0).unwrap().is_zero());
        assert!(oracle_tor(&fg(12), &fg(8), 2).unwrap().is_zero());
        for (x, y) in [(fg(12), p2.clone()), (fg(6), fg(10))] {
            for i in 0..2 {
                assert!(oracle_tor(&x, &y, i).unwrap().isomorphic(&oracle_tor(&y, &x, i).unwrap()));
            }
        }
    }

    #[test]
    fn colon_and_quotient() {
        let p2 = ArtinianGroup::prufer(2);
        assert_eq!(p2.colon(&BigInt::from(4)), ArtinianGroup::finite_cyclic(&[4]).unwrap());
        assert!(p2.quotient_by(&BigInt::from(2)).is_zero());
        assert_eq!(p2.colon(&BigInt::zero()), p2);
        let z6 = ArtinianGroup::finite_cyclic(&[6]).unwrap();
        assert_eq!(z6.annihilator(), BigInt::from(6));
        assert_eq!(z6.attached_primes(), vec![2, 3]);
    }
}
