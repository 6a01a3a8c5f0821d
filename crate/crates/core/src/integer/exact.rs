//! Exactness of explicit sequences of Artinian abelian groups and the
//! cosupport identity along them.
//!
//! A map `A -> B` is an integer matrix with one row per component of `A`
//! and one column per component of `B` (in `ArtinianGroup::components`
//! order). Components are viewed inside `Q/Z` (the generator of `Z/p^e` is
//! `1/p^e`, a Prüfer component is the `p`-part of `Q/Z`) and entry `m_ij`
//! multiplies component `i` into component `j`.
//!
//! Exactness is decided prime by prime on the `p^K`-torsion subgroups, which
//! are finite lattices modulo `p^L`. Every group here is co-Hopfian on its
//! `p`-part, so the torsion checks stabilize once `K` passes the finite
//! exponents plus the `p`-valuations of the matrix entries.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

use super::groups::{valuation, ArtinianGroup, Component, ZCosupport};
use super::snf::{cokernel, left_kernel, mat_mul, row_lattice_basis, solve_left, IntMatrix};

#[derive(Clone, Debug)]
pub struct GroupMap {
    pub source: ArtinianGroup,
    pub target: ArtinianGroup,
    pub matrix: IntMatrix,
}

impl GroupMap {
    pub fn new(source: ArtinianGroup, target: ArtinianGroup, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let matrix = super::snf::from_i64(&matrix);
        let (sc, tc) = (source.components(), target.components());
        if matrix.len() != sc.len() || matrix.iter().any(|r| r.len() != tc.len()) {
            return Err(Error::InvalidArgument(format!("map matrix must be {} x {}", sc.len(), tc.len())));
        }
        for (i, s) in sc.iter().enumerate() {
            for (j, t) in tc.iter().enumerate() {
                let m = &matrix[i][j];
                if m.is_zero() {
                    continue;
                }
                let ok = match (*s, *t) {
                    (Component::Prufer { .. }, Component::Cyclic { .. }) => false,
                    (Component::Prufer { p }, Component::Prufer { p: q }) => p == q,
                    (Component::Cyclic { p, e }, Component::Prufer { p: q }) => p == q || valuation(m, p) >= e,
                    (Component::Cyclic { p, e }, Component::Cyclic { p: q, e: f }) => {
                        let needed = if p == q { e.saturating_sub(f) } else { e };
                        valuation(m, p) >= needed
                    }
                };
                if !ok {
                    return Err(Error::InvalidArgument(format!("entry ({i}, {j}) = {m} does not define a homomorphism")));
                }
            }
        }
        Ok(GroupMap { source, target, matrix })
    }

    fn restricted(&self, p: u64) -> (Vec<u32>, Vec<u32>, IntMatrix) {
        let pick = |g: &ArtinianGroup| -> Vec<(usize, u32)> {
            g.components()
                .iter()
                .enumerate()
                .filter(|(_, c)| c.prime() == p)
                .map(|(i, c)| (i, if let Component::Cyclic { e, .. } = c { *e } else { u32::MAX }))
                .collect()
        };
        let (rows, cols) = (pick(&self.source), pick(&self.target));
        let m = rows.iter().map(|&(i, _)| cols.iter().map(|&(j, _)| self.matrix[i][j].clone()).collect()).collect();
        (rows.into_iter().map(|x| x.1).collect(), cols.into_iter().map(|x| x.1).collect(), m)
    }
}

/// `0 -> A -f-> B -g-> C -> 0` when `short`, otherwise just `A -f-> B -g-> C`.
#[derive(Clone, Debug)]
pub struct GroupSequence {
    pub f: GroupMap,
    pub g: GroupMap,
    pub short: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub short: bool,
    pub cosupport_left: ZCosupport,
    pub cosupport_middle: ZCosupport,
    pub cosupport_right: ZCosupport,
    /// `cosupp(B) = cosupp(A) ∪ cosupp(C)` (short) or `⊆` otherwise.
    pub passes: bool,
    /// A prime in the symmetric difference, 0 standing for the zero ideal.
    pub witness: Option<u64>,
}

// rows p^{L - min(e_i, K)} e_i spanning X[p^K] scaled to level L
fn torsion_lattice(exps: &[u32], k: u32, l: u32, p: u64) -> IntMatrix {
    let n = exps.len();
    let mut rows = Vec::with_capacity(2 * n);
    for (i, &e) in exps.iter().enumerate() {
        let mut r = vec![BigInt::zero(); n];
        r[i] = BigInt::from(p).pow(l - e.min(k));
        rows.push(r);
    }
    rows
}

fn with_modulus(mut gens: IntMatrix, n: usize, modulus: &BigInt) -> IntMatrix {
    for i in 0..n {
        let mut r = vec![BigInt::zero(); n];
        r[i] = modulus.clone();
        gens.push(r);
    }
    gens
}

/// Index of a full-rank lattice.
fn index(gens: &IntMatrix, n: usize) -> BigInt {
    let (free, inv) = cokernel(gens, n);
    assert_eq!(free, 0, "lattice is not of full rank");
    inv.into_iter().product()
}

fn intersect(a: &IntMatrix, b: &IntMatrix, n: usize) -> IntMatrix {
    let mut stacked = a.clone();
    stacked.extend(b.iter().cloned());
    let ker = left_kernel(&stacked, stacked.len(), n);
    let coeffs: IntMatrix = ker.into_iter().map(|r| r[..a.len()].to_vec()).collect();
    if coeffs.is_empty() {
        return Vec::new();
    }
    mat_mul(&coeffs, a, a.len(), n)
}

fn contains(lattice: &IntMatrix, n: usize, v: &[BigInt]) -> bool {
    let basis = row_lattice_basis(lattice, lattice.len(), n);
    basis.is_empty() && v.iter().all(Zero::is_zero) || solve_left(&basis, basis.len(), n, v).is_some()
}

fn scaled(gens: &IntMatrix, m: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    if gens.is_empty() {
        return Vec::new();
    }
    mat_mul(gens, m, inner, cols)
}

struct PrimeCheck<'a> {
    p: u64,
    a: &'a [u32],
    b: &'a [u32],
    c: &'a [u32],
    f: &'a IntMatrix,
    g: &'a IntMatrix,
}

impl PrimeCheck<'_> {
    fn stable_bound(&self) -> u32 {
        let finite = self.a.iter().chain(self.b).chain(self.c).filter(|&&e| e != u32::MAX).max().copied().unwrap_or(0);
        let entries: u32 = self.f.iter().chain(self.g).flatten().filter(|x| !x.is_zero()).map(|x| valuation(x, self.p)).sum();
        finite + entries + 2
    }

    // exactness at level K with slack s for preimages
    fn check(&self, k: u32, s: u32, short: bool) -> std::result::Result<(), String> {
        let (na, nb, nc) = (self.a.len(), self.b.len(), self.c.len());
        let l = k + s;
        let pl = BigInt::from(self.p).pow(l);
        let ta = torsion_lattice(self.a, l, l, self.p);
        let tb = with_modulus(torsion_lattice(self.b, k, l, self.p), nb, &pl);
        // composite vanishes on A[p^L]
        let fg = scaled(&scaled(&ta, self.f, na, nb), self.g, nb, nc);
        if fg.iter().flatten().any(|x| !(x % &pl).is_zero()) {
            return Err(format!("g . f is nonzero on the {}-torsion", self.p));
        }
        if short {
            // f injective on A[p^K]: |f(A[p^K])| = |A[p^K]|
            let tak = with_modulus(torsion_lattice(self.a, k, l, self.p), na, &pl);
            let img = with_modulus(scaled(&torsion_lattice(self.a, k, l, self.p), self.f, na, nb), nb, &pl);
            let size_a = pl.pow(na as u32) / index(&tak, na);
            let size_img = if nb == 0 { BigInt::one() } else { pl.pow(nb as u32) / index(&img, nb) };
            if size_a != size_img {
                return Err(format!("f is not injective on the {}^{k}-torsion", self.p));
            }
            // g(B[p^L]) contains C[p^K]
            let tbl = torsion_lattice(self.b, l, l, self.p);
            let gimg = with_modulus(scaled(&tbl, self.g, nb, nc), nc, &pl);
            for row in torsion_lattice(self.c, k, l, self.p) {
                if !contains(&gimg, nc, &row) {
                    return Err(format!("g misses part of the {}^{k}-torsion of the target", self.p));
                }
            }
        }
        if nb == 0 {
            return Ok(());
        }
        // (ker g)[p^K] versus (im f)[p^K] inside B[p^K], all at level L
        let kernel = {
            let gb = scaled(&tb, self.g, nb, nc);
            let stacked = with_modulus(gb, nc, &pl);
            let ker = left_kernel(&stacked, stacked.len(), nc);
            let coeffs: IntMatrix = ker.into_iter().map(|r| r[..tb.len()].to_vec()).collect();
            with_modulus(scaled(&coeffs, &tb, tb.len(), nb), nb, &pl)
        };
        let image = {
            let fa = with_modulus(scaled(&ta, self.f, na, nb), nb, &pl);
            with_modulus(intersect(&fa, &tb, nb), nb, &pl)
        };
        if index(&kernel, nb) != index(&image, nb) {
            return Err(format!("ker g differs from im f on the {}^{k}-torsion", self.p));
        }
        Ok(())
    }
}

/// Verifies exactness, then compares cosupports.
pub fn oracle_exactness_check(seq: &GroupSequence) -> Result<ExactnessReport> {
    let (a, b, c) = (&seq.f.source, &seq.f.target, &seq.g.target);
    if seq.g.source != *b {
        return Err(Error::InvalidArgument("maps do not compose".into()));
    }
    let primes: std::collections::BTreeSet<u64> = a.primes().union(&b.primes()).copied().chain(c.primes()).collect();
    for p in primes {
        let (ea, eb, f) = seq.f.restricted(p);
        let (_, ec, g) = seq.g.restricted(p);
        let check = PrimeCheck { p, a: &ea, b: &eb, c: &ec, f: &f, g: &g };
        let bound = check.stable_bound();
        for k in 1..=bound {
            check.check(k, bound, seq.short).map_err(Error::NotExact)?;
        }
    }
    let (ca, cb, cc) = (a.cosupport(), b.cosupport(), c.cosupport());
    let union = ca.union(&cc);
    let witness = if seq.short {
        cb.witness_outside(&union).or_else(|| union.witness_outside(&cb))
    } else {
        cb.witness_outside(&union)
    };
    Ok(ExactnessReport { short: seq.short, cosupport_left: ca, cosupport_middle: cb, cosupport_right: cc, passes: witness.is_none(), witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(a: ArtinianGroup, b: ArtinianGroup, c: ArtinianGroup, f: Vec<Vec<i64>>, g: Vec<Vec<i64>>) -> GroupSequence {
        GroupSequence { f: GroupMap::new(a, b.clone(), f).unwrap(), g: GroupMap::new(b, c, g).unwrap(), short: true }
    }

    fn cyc(n: &[u64]) -> ArtinianGroup {
        ArtinianGroup::finite_cyclic(n).unwrap()
    }

    #[test]
    fn spec_sequences_pass() {
        let r = oracle_exactness_check(&seq(cyc(&[2]), cyc(&[4]), cyc(&[2]), vec![vec![1]], vec![vec![2]])).unwrap();
        assert!(r.passes);
        let r = oracle_exactness_check(&seq(cyc(&[2]), cyc(&[6]), cyc(&[3]), vec![vec![1, 0]], vec![vec![0], vec![1]])).unwrap();
        assert!(r.passes);
        assert_eq!(r.cosupport_middle.primes.iter().copied().collect::<Vec<_>>(), vec![2, 3]);
        let p = ArtinianGroup::prufer(2);
        let r = oracle_exactness_check(&seq(p.clone(), p.direct_sum(&cyc(&[3])), cyc(&[3]), vec![vec![0, 1]], vec![vec![1], vec![0]])).unwrap();
        assert!(r.passes && r.cosupport_middle.whole_spectrum);
    }

    #[test]
    fn non_exact_sequences_are_rejected() {
        // Z/2 -> Z/4 by 1/2 -> 1/2, then Z/4 -> Z/2 by zero
        let bad = seq(cyc(&[2]), cyc(&[4]), cyc(&[2]), vec![vec![1]], vec![vec![0]]);
        assert!(matches!(oracle_exactness_check(&bad), Err(Error::NotExact(_))));
        // multiplication by 2 on Z(2^inf) is onto but not injective
        let p = ArtinianGroup::prufer(2);
        let bad = seq(p.clone(), p.clone(), ArtinianGroup::zero(), vec![vec![2]], vec![vec![]]);
        assert!(matches!(oracle_exactness_check(&bad), Err(Error::NotExact(_))));
        // Z/2 -> Z(2^inf) -> Z(2^inf) with multiplication by 2 is short exact
        let ok = seq(cyc(&[2]), p.clone(), p.clone(), vec![vec![1]], vec![vec![2]]);
        assert!(oracle_exactness_check(&ok).unwrap().passes);
        assert!(GroupMap::new(p, cyc(&[2]), vec![vec![1]]).is_err());
    }
}
