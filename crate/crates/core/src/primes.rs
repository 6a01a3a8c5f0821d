//! Minimal and associated primes for the supported ideal and module classes,
//! and deterministic prime avoidance.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homalg::{ext, FGModule};
use crate::ring::{Coeff, CoefficientField, Ideal, Monomial, Poly, PolyRing, RingRef};

// Nesting bound for the splitting recursion in `minimal_primes`.
const MAX_SPLIT_DEPTH: usize = 64;
// Largest integer coefficient whose divisors are enumerated for rational roots.
const ROOT_BOUND: u64 = 1_000_000_000_000;

#[derive(Clone)]
pub struct PrimeIdeal {
    ideal: Ideal,
    maximal: bool,
}

impl PrimeIdeal {
    /// Wraps an ideal the caller knows to be prime; maximality is computed
    /// and the generators are replaced by the reduced Gröbner basis.
    pub fn new(ideal: Ideal) -> Self {
        let ideal = Ideal::new(ideal.ring(), ideal.basis_in_ring()).unwrap_or(ideal);
        let maximal = ideal.is_zero_dimensional();
        PrimeIdeal { ideal, maximal }
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.ideal.contains(f)
    }

    pub fn same(&self, other: &PrimeIdeal) -> bool {
        self.ideal.same_ideal(&other.ideal)
    }
}

impl fmt::Debug for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ideal.format(), if self.maximal { " (maximal)" } else { "" })
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ideal.format())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Computed,
    OracleSupplied,
    UserSupplied,
}

/// Pairwise distinct primes with a provenance tag.
#[derive(Clone, Debug)]
pub struct PrimeList {
    primes: Vec<PrimeIdeal>,
    provenance: Provenance,
}

impl PrimeList {
    pub fn new(provenance: Provenance) -> Self {
        PrimeList { primes: Vec::new(), provenance }
    }

    pub fn from_primes(primes: Vec<PrimeIdeal>, provenance: Provenance) -> Self {
        let mut list = Self::new(provenance);
        for p in primes {
            list.push(p);
        }
        list
    }

    /// Adds `p` unless an equal prime is present.
    pub fn push(&mut self, p: PrimeIdeal) {
        if !self.primes.iter().any(|q| q.same(&p)) {
            self.primes.push(p);
        }
    }

    pub fn primes(&self) -> &[PrimeIdeal] {
        &self.primes
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn non_maximal(&self) -> Vec<&PrimeIdeal> {
        self.primes.iter().filter(|p| !p.maximal).collect()
    }

    pub fn all_maximal(&self) -> bool {
        self.primes.iter().all(|p| p.maximal)
    }

    pub fn contains_prime(&self, p: &PrimeIdeal) -> bool {
        self.primes.iter().any(|q| q.same(p))
    }

    /// Same set of primes, ignoring order and provenance.
    pub fn same_set(&self, other: &PrimeList) -> bool {
        self.len() == other.len() && self.primes.iter().all(|p| other.contains_prime(p))
    }

    /// Sorted display strings, for reports.
    pub fn formatted(&self) -> Vec<String> {
        let mut v: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        v.sort();
        v
    }
}

// ---------------------------------------------------------------------------
// univariate factoring helpers (coefficients indexed by degree)

fn trim(c: &mut Vec<Coeff>) {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
}

fn horner(c: &[Coeff], x: &Coeff, f: &CoefficientField) -> Coeff {
    c.iter().rev().fold(Coeff::zero(), |acc, a| f.add(&f.mul(&acc, x), a))
}

/// Quotient of `c` by `(t - r)`; assumes `r` is a root.
fn deflate(c: &[Coeff], r: &Coeff, f: &CoefficientField) -> Vec<Coeff> {
    let n = c.len() - 1;
    let mut q = vec![Coeff::zero(); n];
    let mut carry = Coeff::zero();
    for k in (1..=n).rev() {
        carry = f.add(&c[k], &f.mul(&carry, r));
        q[k - 1] = carry.clone();
    }
    q
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Distinct roots in the coefficient field and the cofactor left after
/// removing them with multiplicity.
fn roots_and_cofactor(coeffs: &[Coeff], f: &CoefficientField) -> Result<(Vec<Coeff>, Vec<Coeff>)> {
    let mut c = coeffs.to_vec();
    trim(&mut c);
    let mut roots = Vec::new();
    let take = |r: Coeff, c: &mut Vec<Coeff>, roots: &mut Vec<Coeff>| {
        let mut hit = false;
        while c.len() > 1 && horner(c, &r, f).is_zero() {
            *c = deflate(c, &r, f);
            hit = true;
        }
        if hit {
            roots.push(r);
        }
    };
    match f {
        CoefficientField::Prime(p) => {
            for r in 0..*p {
                if c.len() <= 1 {
                    break;
                }
                take(f.from_int(r as i64), &mut c, &mut roots);
            }
        }
        CoefficientField::Rationals => {
            take(Coeff::zero(), &mut c, &mut roots);
            if c.len() > 1 {
                let lcm = c.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
                let ints: Vec<BigInt> = c.iter().map(|a| (a * Coeff::from_integer(lcm.clone())).to_integer()).collect();
                let a0 = ints[0].abs().to_u64().filter(|v| *v <= ROOT_BOUND);
                let an = ints[ints.len() - 1].abs().to_u64().filter(|v| *v <= ROOT_BOUND);
                let (Some(a0), Some(an)) = (a0, an) else {
                    return Err(Error::UnsupportedIdealClass("coefficients too large for rational root search".into()));
                };
                for p in divisors(a0) {
                    for q in divisors(an) {
                        for s in [1i64, -1] {
                            if c.len() <= 1 {
                                break;
                            }
                            let r = Coeff::new(BigInt::from(p) * s, BigInt::from(q));
                            if !roots.contains(&r) {
                                take(r, &mut c, &mut roots);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((roots, c))
}

/// Factors `g` as far as the supported classes allow. `complete` means every
/// returned factor is known to be irreducible.
struct Factored {
    factors: Vec<Poly>,
    complete: bool,
}

fn monomial_content(g: &Poly) -> Monomial {
    let n = g.nvars();
    let mut m = vec![u32::MAX; n];
    for (t, _) in g.terms() {
        for (i, e) in t.0.iter().enumerate() {
            m[i] = m[i].min(*e);
        }
    }
    Monomial(m.into_iter().map(|e| if e == u32::MAX { 0 } else { e }).collect())
}

fn divide_by_monomial(g: &Poly, m: &Monomial, f: &CoefficientField) -> Poly {
    Poly::from_terms(g.nvars(), g.terms().iter().map(|(t, c)| (t.div(m), c.clone())).collect(), f)
}

fn factor_known(g: &Poly, f: &CoefficientField) -> Result<Factored> {
    let n = g.nvars();
    let content = monomial_content(g);
    let mut factors: Vec<Poly> = content.support().into_iter().map(|i| Poly::var(n, i)).collect();
    let h = divide_by_monomial(g, &content, f);
    if h.is_constant() {
        return Ok(Factored { factors, complete: true });
    }
    if h.total_degree() == Some(1) {
        factors.push(h.make_monic(f));
        return Ok(Factored { factors, complete: true });
    }
    let vars = h.variables();
    let mut complete = false;
    if vars.len() == 1 {
        let v = vars[0];
        let coeffs = h.univariate_coeffs(v).expect("univariate");
        let (roots, rest) = roots_and_cofactor(&coeffs, f)?;
        for r in roots {
            factors.push(Poly::var(n, v).sub(&Poly::constant(n, r), f));
        }
        if rest.len() > 1 {
            complete = rest.len() <= 4;
            factors.push(Poly::from_univariate(n, v, &rest, f).make_monic(f));
        } else {
            complete = true;
        }
    } else if vars.len() == 2 && h.is_homogeneous() {
        // binary form: dehomogenize at the second variable
        let (u, w) = (vars[0], vars[1]);
        let d = h.total_degree().unwrap() as usize;
        let mut coeffs = vec![Coeff::zero(); d + 1];
        for (t, c) in h.terms() {
            coeffs[t.0[u] as usize] = c.clone();
        }
        let (roots, rest) = roots_and_cofactor(&coeffs, f)?;
        for r in roots {
            factors.push(Poly::var(n, u).sub(&Poly::var(n, w).scale(&r, f), f));
        }
        if rest.len() > 1 {
            complete = rest.len() <= 4;
            let k = rest.len() - 1;
            let terms = rest
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| {
                    let mut e = vec![0; n];
                    e[u] = i as u32;
                    e[w] = (k - i) as u32;
                    (Monomial(e), c.clone())
                })
                .collect();
            factors.push(Poly::from_terms(n, terms, f).make_monic(f));
        } else {
            complete = true;
        }
    } else {
        factors.push(h.make_monic(f));
    }
    Ok(Factored { factors, complete })
}

// ---------------------------------------------------------------------------
// minimal primes

fn is_linear_ideal(i: &Ideal) -> bool {
    i.groebner().iter().all(|g| g.total_degree() == Some(1))
}

fn plus(i: &Ideal, g: Poly) -> Result<Ideal> {
    i.sum(&Ideal::principal(i.ring(), g)?)
}

/// Minimal polynomial of `x_v` modulo a zero-dimensional ideal.
fn min_poly(i: &Ideal, v: usize) -> Vec<Coeff> {
    let f = i.ring().field();
    let n = i.ring().nvars();
    let std = i.standard_monomials().expect("zero-dimensional");
    let index: HashMap<Monomial, usize> = std.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    let dim = std.len();
    let coords = |p: &Poly| {
        let mut v = vec![Coeff::zero(); dim];
        for (m, c) in p.terms() {
            v[index[m]] = c.clone();
        }
        v
    };
    let mut rows: Vec<(usize, Vec<Coeff>, Vec<Coeff>)> = Vec::new();
    let mut power = i.normal_form(&Poly::one(n)).unwrap();
    for k in 0..=dim {
        let mut vec = coords(&power);
        let mut comb = vec![Coeff::zero(); dim + 1];
        comb[k] = Coeff::one();
        for (pivot, row, rc) in &rows {
            if vec[*pivot].is_zero() {
                continue;
            }
            let factor = f.div(&vec[*pivot], &row[*pivot]);
            for (a, b) in vec.iter_mut().zip(row) {
                *a = f.sub(a, &f.mul(&factor, b));
            }
            for (a, b) in comb.iter_mut().zip(rc) {
                *a = f.sub(a, &f.mul(&factor, b));
            }
        }
        match vec.iter().position(|c| !c.is_zero()) {
            None => {
                comb.truncate(k + 1);
                return comb;
            }
            Some(p) => rows.push((p, vec, comb)),
        }
        power = i.normal_form(&power.mul(&Poly::var(n, v), f)).unwrap();
    }
    unreachable!("the powers of a variable are dependent in a finite dimensional quotient")
}

fn decompose(i: &Ideal, depth: usize) -> Result<Vec<Ideal>> {
    if depth > MAX_SPLIT_DEPTH {
        return Err(Error::UnsupportedIdealClass(format!("splitting of {} did not terminate", i.format())));
    }
    if i.is_unit() {
        return Ok(Vec::new());
    }
    if is_linear_ideal(i) {
        return Ok(vec![i.clone()]);
    }
    let f = i.ring().field().clone();
    let gb: Vec<Poly> = i.groebner().to_vec();
    let mut irreducible = Vec::new();
    for g in &gb {
        let fz = factor_known(g, &f)?;
        let proper = !(fz.factors.len() == 1 && fz.factors[0] == g.make_monic(&f));
        if proper {
            let mut out = Vec::new();
            for h in fz.factors {
                out.extend(decompose(&plus(i, h)?, depth + 1)?);
            }
            return Ok(out);
        }
        irreducible.push(fz.complete);
    }
    if gb.len() == 1 && irreducible[0] {
        return Ok(vec![i.clone()]);
    }
    if i.is_zero_dimensional() {
        let n = i.ring().nvars();
        let mut all_linear = true;
        for v in 0..n {
            let mu = min_poly(i, v);
            if mu.len() <= 2 {
                continue;
            }
            all_linear = false;
            let (roots, rest) = roots_and_cofactor(&mu, &f)?;
            if rest.len() > 1 {
                continue;
            }
            let mut out = Vec::new();
            for r in roots {
                let h = Poly::var(n, v).sub(&Poly::constant(n, r), &f);
                out.extend(decompose(&plus(i, h)?, depth + 1)?);
            }
            return Ok(out);
        }
        if all_linear {
            return Ok(vec![i.clone()]);
        }
        return Err(Error::UnsupportedIdealClass(format!(
            "zero-dimensional ideal {} has points outside the coefficient field",
            i.format()
        )));
    }
    Err(Error::UnsupportedIdealClass(format!("no supported decomposition for {}", i.format())))
}

/// Minimal primes over `ideal`. In a local ring only primes inside the
/// irrelevant ideal are kept.
pub fn minimal_primes(ideal: &Ideal) -> Result<PrimeList> {
    let mut cands = decompose(ideal, 0)?;
    if ideal.ring().is_local() {
        cands.retain(|p| p.inside_irrelevant());
    }
    let mut out: Vec<Ideal> = Vec::new();
    for (k, p) in cands.iter().enumerate() {
        let dominated = cands.iter().enumerate().any(|(j, q)| {
            j != k && p.contains_ideal(q) && (!q.contains_ideal(p) || j < k)
        });
        if !dominated {
            out.push(p.clone());
        }
    }
    let mut list = PrimeList::new(Provenance::Computed);
    for p in out {
        list.push(PrimeIdeal::new(p));
    }
    Ok(list)
}

/// Intersection of the minimal primes.
pub fn radical(ideal: &Ideal) -> Result<Ideal> {
    let mins = minimal_primes(ideal)?;
    let mut acc = Ideal::unit(ideal.ring());
    for p in mins.primes() {
        acc = acc.intersect(p.ideal())?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// associated primes

/// `p` is associated to `m` iff `Ann(0 :_M p) = p`.
pub fn is_associated(m: &FGModule, p: &Ideal) -> Result<bool> {
    let sub = m.colon_submodule(p)?.presentation();
    if sub.is_zero() {
        return Ok(false);
    }
    Ok(sub.annihilator().same_ideal(p))
}

/// The module over the ambient polynomial ring, ring relations written as rows.
fn over_ambient(m: &FGModule) -> Result<(RingRef, FGModule)> {
    let s = m.ring().ambient();
    let mut rows = m.relations().to_vec();
    rows.extend(m.ring().relation_vectors(m.ngens()));
    Ok((s.clone(), FGModule::new(&s, m.ngens(), rows)?))
}

fn to_ring(ring: &RingRef, p: &Ideal) -> Result<Ideal> {
    Ideal::new(ring, p.gens().to_vec())
}

/// `Ass(M)`; candidates are the minimal primes of `Ann Ext^i(M, S)` over the
/// ambient polynomial ring, each verified by `is_associated`.
pub fn associated_primes(m: &FGModule) -> Result<PrimeList> {
    let unsupported = |e: Error| match e {
        Error::UnsupportedIdealClass(s) => Error::UnsupportedModuleClass(s),
        e => e,
    };
    let ring = m.ring().clone();
    if m.is_zero() {
        return Ok(PrimeList::new(Provenance::Computed));
    }
    if m.length().is_finite() {
        return minimal_primes(&m.annihilator()).map_err(unsupported);
    }
    let (s, ms) = over_ambient(m)?;
    let free = FGModule::free(&s, 1);
    let mut cands: Vec<Ideal> = Vec::new();
    for i in 0..=s.nvars() {
        let e = ext(&ms, &free, i)?;
        if e.is_zero() {
            continue;
        }
        for p in minimal_primes(&e.annihilator()).map_err(unsupported)?.primes() {
            if !cands.iter().any(|q| q.same_ideal(p.ideal())) {
                cands.push(p.ideal().clone());
            }
        }
    }
    let mut list = PrimeList::new(Provenance::Computed);
    for p in cands {
        if ring.is_local() && !p.inside_irrelevant() {
            continue;
        }
        if is_associated(&ms, &p)? {
            list.push(PrimeIdeal::new(to_ring(&ring, &p)?));
        }
    }
    Ok(list)
}

// ---------------------------------------------------------------------------
// prime avoidance

#[derive(Clone, Debug)]
pub enum Avoidance {
    /// `element = sum coefficients[i] * gens[i]` avoids every non-maximal prime.
    Element { element: Poly, coefficients: Vec<Poly>, candidates_tried: usize },
    /// The ideal lies inside this non-maximal prime.
    Contained(PrimeIdeal),
}

/// Coefficient candidates in the fixed order 0, 1, -1, 2, -2, ...; over a
/// finite field the variables and their pairwise products follow.
fn coefficient_sequence(ring: &PolyRing, len: usize) -> Vec<Poly> {
    let n = ring.nvars();
    let f = ring.field();
    let mut out: Vec<Poly> = f.small_elements(len).into_iter().map(|c| Poly::constant(n, c)).collect();
    if matches!(f, CoefficientField::Prime(_)) {
        for i in 0..n {
            out.push(Poly::var(n, i));
        }
        for i in 0..n {
            for j in i..n {
                out.push(Poly::var(n, i).mul(&Poly::var(n, j), f));
            }
        }
    }
    out.truncate(len);
    out
}

/// Rank vectors of length `k` in the order: maximum entry first, then lexicographic.
struct TupleOrder {
    k: usize,
    max_rank: usize,
    cur: Vec<usize>,
    limit: usize,
    done: bool,
}

impl TupleOrder {
    fn new(k: usize, limit: usize) -> Self {
        TupleOrder { k, max_rank: 1, cur: vec![0; k], limit, done: k == 0 || limit < 2 }
    }

    fn advance(&mut self) {
        // odometer within [0, max_rank]^k; bump max_rank when it wraps
        for pos in (0..self.k).rev() {
            if self.cur[pos] < self.max_rank {
                self.cur[pos] += 1;
                for later in self.cur.iter_mut().skip(pos + 1) {
                    *later = 0;
                }
                return;
            }
        }
        self.max_rank += 1;
        if self.max_rank >= self.limit {
            self.done = true;
        }
        self.cur = vec![0; self.k];
    }
}

impl Iterator for TupleOrder {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            if self.done {
                return None;
            }
            self.advance();
            if self.done {
                return None;
            }
            if self.cur.iter().any(|&r| r == self.max_rank) {
                return Some(self.cur.clone());
            }
        }
    }
}

/// Element of `a` outside every non-maximal prime of `primes`, or a
/// containment certificate. Skips the first `skip` avoiding candidates.
pub fn prime_avoid_nth(a: &Ideal, primes: &PrimeList, budget: usize, skip: usize) -> Result<Avoidance> {
    let ring = a.ring().clone();
    let bad: Vec<&PrimeIdeal> = primes.non_maximal();
    for p in &bad {
        p.ideal().ring().ensure_same(&ring)?;
        if p.ideal().contains_ideal(a) {
            return Ok(Avoidance::Contained((*p).clone()));
        }
    }
    let gens: Vec<Poly> = a.gens().iter().filter(|g| !g.is_zero()).cloned().collect();
    let f = ring.field();
    let n = ring.nvars();
    if gens.is_empty() {
        return Ok(Avoidance::Element { element: Poly::zero(n), coefficients: Vec::new(), candidates_tried: 0 });
    }
    let seq = coefficient_sequence(&ring, budget.max(2));
    let mut tried = 0;
    let mut found = 0;
    for tuple in TupleOrder::new(gens.len(), seq.len()) {
        if tried >= budget {
            break;
        }
        tried += 1;
        let coeffs: Vec<Poly> = tuple.iter().map(|&r| seq[r].clone()).collect();
        let mut e = Poly::zero(n);
        for (c, g) in coeffs.iter().zip(&gens) {
            e = e.add(&c.mul(g, f), f);
        }
        let e = ring.reduce(&e);
        if e.is_zero() || bad.iter().any(|p| p.contains(&e)) {
            continue;
        }
        if found == skip {
            return Ok(Avoidance::Element { element: e, coefficients: coeffs, candidates_tried: tried });
        }
        found += 1;
    }
    Err(Error::SearchBudgetExceeded { budget })
}

pub fn prime_avoid(a: &Ideal, primes: &PrimeList, budget: usize) -> Result<Avoidance> {
    prime_avoid_nth(a, primes, budget, 0)
}

pub const DEFAULT_AVOID_BUDGET: usize = 10_000;

#[cfg(test)]
mod tests {
    use super::*;

    fn qxy() -> RingRef {
        PolyRing::new(CoefficientField::Rationals, &["x", "y"]).unwrap()
    }

    fn ideal(r: &RingRef, g: &[&str]) -> Ideal {
        Ideal::parse(r, g).unwrap()
    }

    fn has(list: &PrimeList, r: &RingRef, g: &[&str]) -> bool {
        list.contains_prime(&PrimeIdeal::new(ideal(r, g)))
    }

    #[test]
    fn minimal_primes_of_monomial_ideals() {
        let r = qxy();
        let l = minimal_primes(&ideal(&r, &["x^2*y"])).unwrap();
        assert_eq!(l.len(), 2);
        assert!(has(&l, &r, &["x"]) && has(&l, &r, &["y"]));
        assert!(l.non_maximal().len() == 2);
        let l = minimal_primes(&ideal(&r, &["x^2", "x*y", "y^2"])).unwrap();
        assert_eq!(l.len(), 1);
        assert!(has(&l, &r, &["x", "y"]) && l.all_maximal());
        let l = minimal_primes(&Ideal::zero(&r)).unwrap();
        assert_eq!(l.len(), 1);
        assert!(l.primes()[0].ideal().is_zero());
    }

    #[test]
    fn minimal_primes_of_factorable_principal_ideals() {
        let r = qxy();
        let l = minimal_primes(&ideal(&r, &["x^3 - x*y^2"])).unwrap();
        assert_eq!(l.len(), 3);
        assert!(has(&l, &r, &["x"]) && has(&l, &r, &["x - y"]) && has(&l, &r, &["x + y"]));
        let l = minimal_primes(&ideal(&r, &["x^2 + 1"])).unwrap();
        assert_eq!(l.len(), 1);
        let l = minimal_primes(&ideal(&r, &["x^2 - 2*x + 1"])).unwrap();
        assert!(has(&l, &r, &["x - 1"]));
    }

    #[test]
    fn minimal_primes_of_points() {
        let r = qxy();
        let l = minimal_primes(&ideal(&r, &["x^2 - 1", "y - x"])).unwrap();
        assert_eq!(l.len(), 2);
        assert!(has(&l, &r, &["x - 1", "y - 1"]) && has(&l, &r, &["x + 1", "y + 1"]));
        assert!(l.all_maximal());
        let l = minimal_primes(&ideal(&r, &["x^2 - 2", "y"]));
        assert!(matches!(l, Ok(_) | Err(Error::UnsupportedIdealClass(_))));
    }

    #[test]
    fn local_ring_drops_primes_off_the_origin() {
        let r = PolyRing::local(CoefficientField::Rationals, &["x", "y"]).unwrap();
        let l = minimal_primes(&ideal(&r, &["x^2 - x"])).unwrap();
        assert_eq!(l.len(), 1);
        assert!(has(&l, &r, &["x"]));
    }

    #[test]
    fn associated_primes_examples() {
        let r = qxy();
        let l = associated_primes(&FGModule::cyclic(&ideal(&r, &["x"]))).unwrap();
        assert_eq!(l.len(), 1);
        assert!(has(&l, &r, &["x"]));
        let l = associated_primes(&FGModule::cyclic(&ideal(&r, &["x^2", "x*y"]))).unwrap();
        assert_eq!(l.len(), 2);
        assert!(has(&l, &r, &["x"]) && has(&l, &r, &["x", "y"]));
        let l = associated_primes(&FGModule::cyclic(&ideal(&r, &["x^2", "y^3"]))).unwrap();
        assert_eq!(l.len(), 1);
        assert!(l.all_maximal());
    }

    #[test]
    fn avoidance_examples() {
        let r = qxy();
        let nonmax = PrimeList::from_primes(vec![PrimeIdeal::new(ideal(&r, &["x"]))], Provenance::UserSupplied);
        match prime_avoid(&ideal(&r, &["x", "y"]), &nonmax, 100).unwrap() {
            Avoidance::Element { element, .. } => assert_eq!(element, r.parse("y").unwrap()),
            other => panic!("{other:?}"),
        }
        let max = PrimeList::from_primes(vec![PrimeIdeal::new(ideal(&r, &["x", "y"]))], Provenance::UserSupplied);
        match prime_avoid(&ideal(&r, &["x"]), &max, 100).unwrap() {
            Avoidance::Element { element, .. } => assert_eq!(element, r.parse("x").unwrap()),
            other => panic!("{other:?}"),
        }
        assert!(matches!(prime_avoid(&ideal(&r, &["x"]), &nonmax, 100).unwrap(), Avoidance::Contained(_)));
    }

    #[test]
    fn tuple_order_starts_small() {
        let v: Vec<Vec<usize>> = TupleOrder::new(2, 10).take(5).collect();
        assert_eq!(v, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![0, 2], vec![1, 2]]);
    }
}
