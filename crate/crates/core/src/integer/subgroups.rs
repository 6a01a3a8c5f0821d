//! Brute-force attached primes of Artinian abelian groups: every subgroup
//! of the finite part is enumerated and the quotient annihilators are
//! collected.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::ring::field::is_prime;

use super::groups::ArtinianGroup;

/// Largest finite part handled by enumeration.
pub const ENUMERATION_BUDGET: usize = 1 << 12;
/// Subgroup count cap for the lattice walk.
pub const SUBGROUP_BUDGET: usize = 1 << 14;

/// Finite abelian group `(+) Z/n_i` with elements indexed in mixed radix.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    orders: Vec<u64>,
    size: usize,
}

impl FiniteGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        let mut size: usize = 1;
        for &n in &orders {
            size = size.checked_mul(n as usize).filter(|&s| s <= ENUMERATION_BUDGET).ok_or_else(|| Error::EnumerationBudget(format!("finite part exceeds {ENUMERATION_BUDGET} elements")))?;
        }
        Ok(FiniteGroup { orders, size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn add(&self, mut a: usize, mut b: usize) -> usize {
        let (mut out, mut radix) = (0usize, 1usize);
        for &n in &self.orders {
            let n = n as usize;
            out += ((a % n + b % n) % n) * radix;
            radix *= n;
            a /= n;
            b /= n;
        }
        out
    }

    pub fn scale(&self, k: u64, mut a: usize) -> usize {
        let (mut out, mut radix) = (0usize, 1usize);
        for &n in &self.orders {
            let n = n as usize;
            out += ((a % n) * (k as usize % n) % n) * radix;
            radix *= n;
            a /= n;
        }
        out
    }

    /// `K + <g>` for a subgroup given as a membership mask: cosets `K + m g`
    /// until `m g` falls back into `K`.
    fn extend(&self, k: &[bool], members: &[usize], g: usize) -> Vec<bool> {
        let mut out = k.to_vec();
        let mut shift = g;
        while !k[shift] {
            for &x in members {
                out[self.add(x, shift)] = true;
            }
            shift = self.add(shift, g);
        }
        out
    }

    /// Smallest `n > 0` with `n G ⊆ K`.
    pub fn quotient_exponent(&self, k: &[bool]) -> u64 {
        let exponent = self.orders.iter().fold(1u64, |acc, &n| num_integer::lcm(acc, n));
        (1..=exponent).filter(|d| exponent % d == 0).find(|&d| (0..self.size).all(|x| k[self.scale(d, x)])).unwrap_or(exponent)
    }

    /// All subgroups as membership masks.
    pub fn subgroups(&self) -> Result<Vec<Vec<bool>>> {
        let mut zero = vec![false; self.size];
        zero[0] = true;
        let mut seen: HashSet<Vec<bool>> = HashSet::new();
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(k) = frontier.pop() {
            let members: Vec<usize> = (0..self.size).filter(|&x| k[x]).collect();
            // K + <g> depends only on the coset of g and on g up to units
            // modulo its order over K
            let mut tried = k.clone();
            for g in 0..self.size {
                if tried[g] {
                    continue;
                }
                let bigger = self.extend(&k, &members, g);
                // u g for u = 1, 2, ... until it lands in K
                let mut multiples = vec![g];
                while !k[*multiples.last().unwrap()] {
                    multiples.push(self.add(*multiples.last().unwrap(), g));
                }
                let order = multiples.len() as u64;
                for (u, &h) in (1u64..).zip(&multiples) {
                    if num_integer::gcd(u, order) == 1 {
                        for &x in &members {
                            tried[self.add(x, h)] = true;
                        }
                    }
                }
                if seen.insert(bigger.clone()) {
                    if seen.len() > SUBGROUP_BUDGET {
                        return Err(Error::EnumerationBudget(format!("more than {SUBGROUP_BUDGET} subgroups")));
                    }
                    frontier.push(bigger);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

/// Attached primes by enumeration, encoding the zero ideal as 0.
pub fn oracle_attached_primes(n: &ArtinianGroup) -> Result<Vec<u64>> {
    let mut out = BTreeSet::new();
    if !n.finite.is_empty() {
        let orders = n.finite.iter().map(|&(p, e)| p.pow(e)).collect();
        let g = FiniteGroup::new(orders)?;
        for k in g.subgroups()? {
            if k.iter().all(|&b| b) {
                continue;
            }
            let e = g.quotient_exponent(&k);
            if is_prime(e) {
                out.insert(e);
            }
        }
    }
    // a Prüfer group has only itself and 0 as quotients (it is divisible and
    // every proper subgroup is finite), and its annihilator is (0)
    if n.has_prufer() {
        out.insert(0);
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(oracle_attached_primes(&ArtinianGroup::finite_cyclic(&[6]).unwrap()).unwrap(), vec![2, 3]);
        assert_eq!(oracle_attached_primes(&ArtinianGroup::prufer(2)).unwrap(), vec![0]);
        assert!(oracle_attached_primes(&ArtinianGroup::zero()).unwrap().is_empty());
    }

    #[test]
    fn subgroup_counts() {
        // Z/2 + Z/2 has 5 subgroups, Z/12 has 6
        assert_eq!(FiniteGroup::new(vec![2, 2]).unwrap().subgroups().unwrap().len(), 5);
        assert_eq!(FiniteGroup::new(vec![12]).unwrap().subgroups().unwrap().len(), 6);
        assert!(FiniteGroup::new(vec![4096, 2]).is_err());
    }
}
