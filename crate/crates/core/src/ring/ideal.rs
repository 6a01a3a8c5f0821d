use std::fmt;
use std::sync::{Arc, OnceLock};

use super::groebner::{self, ExtendedBasis, Vector};
use super::monomial::Monomial;
use super::poly::Poly;
use super::RingRef;
use crate::error::{Error, Result};

/// Ideal of a (quotient) polynomial ring. Internally it is the ideal of the
/// ambient polynomial ring generated by `gens` and the ring relations; its
/// reduced Gröbner basis is computed once and shared between clones.
#[derive(Clone)]
pub struct Ideal {
    ring: RingRef,
    gens: Vec<Poly>,
    basis: Arc<OnceLock<Vec<Poly>>>,
}

impl Ideal {
    pub fn new(ring: &RingRef, gens: Vec<Poly>) -> Result<Self> {
        if gens.iter().any(|g| g.nvars() != ring.nvars()) {
            return Err(Error::RingMismatch("generator lives in a different ring".into()));
        }
        let gens = gens.iter().map(|g| ring.reduce(g)).collect();
        Ok(Ideal { ring: ring.clone(), gens, basis: Arc::new(OnceLock::new()) })
    }

    pub fn parse(ring: &RingRef, gens: &[&str]) -> Result<Self> {
        let polys = gens.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(ring, polys)
    }

    pub fn zero(ring: &RingRef) -> Self {
        Ideal { ring: ring.clone(), gens: Vec::new(), basis: Arc::new(OnceLock::new()) }
    }

    /// The unit ideal, built explicitly rather than as a zeroth power.
    pub fn unit(ring: &RingRef) -> Self {
        Ideal { ring: ring.clone(), gens: vec![ring.one()], basis: Arc::new(OnceLock::new()) }
    }

    pub fn principal(ring: &RingRef, f: Poly) -> Result<Self> {
        Self::new(ring, vec![f])
    }

    /// `(x_1, ..., x_d)`.
    pub fn irrelevant(ring: &RingRef) -> Self {
        let gens = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        Ideal { ring: ring.clone(), gens, basis: Arc::new(OnceLock::new()) }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    /// Reduced Gröbner basis of `gens + relations` (degrevlex, monic, sorted).
    pub fn groebner(&self) -> &[Poly] {
        self.basis.get_or_init(|| {
            let f = self.ring.field();
            let vs: Vec<Vector> = self
                .gens
                .iter()
                .chain(self.ring.relations())
                .filter(|p| !p.is_zero())
                .cloned()
                .map(Vector::from_poly)
                .collect();
            groebner::groebner(&vs, f).into_iter().map(|v| v.0.into_iter().next().unwrap()).collect()
        })
    }

    /// Generators of the Gröbner basis that are nonzero in the quotient ring.
    pub fn basis_in_ring(&self) -> Vec<Poly> {
        self.groebner().iter().map(|g| self.ring.reduce(g)).filter(|g| !g.is_zero()).collect()
    }

    pub(crate) fn basis_vectors(&self) -> Vec<Vector> {
        self.groebner().iter().cloned().map(Vector::from_poly).collect()
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        if p.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch("polynomial lives in a different ring".into()));
        }
        let r = groebner::reduce(&Vector::from_poly(p.clone()), &self.basis_vectors(), self.ring.field());
        Ok(r.0.into_iter().next().unwrap())
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.normal_form(p).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn same_ideal(&self, other: &Ideal) -> bool {
        *self.ring == *other.ring && self.groebner() == other.groebner()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().all(Poly::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        self.groebner().iter().any(Poly::is_unit)
    }

    /// Every Gröbner basis element (relations included) is a monomial.
    pub fn is_monomial(&self) -> bool {
        self.groebner().iter().all(Poly::is_monomial)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(Poly::is_homogeneous) && self.ring.is_graded()
    }

    /// Contained in the irrelevant ideal `(x_1..x_d)`.
    pub fn inside_irrelevant(&self) -> bool {
        !self.is_unit() && self.gens.iter().all(Poly::vanishes_at_origin)
    }

    /// The quotient `S/I` is finite dimensional over the field (true for the unit ideal).
    pub fn is_zero_dimensional(&self) -> bool {
        let n = self.ring.nvars();
        let leads: Vec<&Monomial> = self.groebner().iter().filter_map(Poly::lead_monomial).collect();
        if leads.iter().any(|m| m.is_one()) {
            return true;
        }
        (0..n).all(|v| leads.iter().any(|m| m.pure_power().is_some_and(|(i, _)| i == v)))
    }

    /// Standard monomials of a zero-dimensional ideal, ascending.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        if !self.is_zero_dimensional() {
            return None;
        }
        let leads: Vec<Monomial> = self.groebner().iter().filter_map(|p| p.lead_monomial().cloned()).collect();
        Some(standard_monomials(self.ring.nvars(), &leads))
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.ensure_same(&other.ring)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.ensure_same(&other.ring)?;
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                let p = self.ring.mul(a, b);
                if !p.is_zero() && !gens.contains(&p) {
                    gens.push(p);
                }
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// `I^n` for `n >= 1`, generated by the `n`-fold products of the
    /// Gröbner generators, reduced and deduplicated.
    pub fn power(&self, n: u32) -> Result<Ideal> {
        if n == 0 {
            return Err(Error::InvalidArgument("ideal power needs n >= 1; use Ideal::unit".into()));
        }
        let base = self.basis_in_ring();
        let mut layer: Vec<(usize, Poly)> = base.iter().enumerate().map(|(i, g)| (i, g.clone())).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for (last, p) in &layer {
                for (i, g) in base.iter().enumerate().skip(*last) {
                    next.push((i, self.ring.mul(p, g)));
                }
            }
            layer = next;
        }
        let mut gens: Vec<Poly> = Vec::new();
        for (_, p) in layer {
            if !p.is_zero() && !gens.contains(&p) {
                gens.push(p);
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// `I : f = {g : g f in I}`.
    pub fn colon(&self, f: &Poly) -> Result<Ideal> {
        let ext = ExtendedBasis::new(1, self.ring.nvars(), &[Vector::from_poly(f.clone())], &self.basis_vectors(), self.ring.field());
        let gens = ext.syzygies().into_iter().map(|v| v.0.into_iter().next().unwrap()).collect();
        Ideal::new(&self.ring, gens)
    }

    pub fn colon_ideal(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.ensure_same(&other.ring)?;
        let mut acc = Ideal::unit(&self.ring);
        for g in &other.gens {
            acc = acc.intersect(&self.colon(g)?)?;
        }
        Ok(acc)
    }

    /// `I : f^infinity`.
    pub fn saturate(&self, f: &Poly) -> Result<Ideal> {
        let mut cur = self.clone();
        loop {
            let next = cur.colon(f)?;
            if next.same_ideal(&cur) {
                return Ok(cur);
            }
            cur = next;
        }
    }

    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.ensure_same(&other.ring)?;
        let n = self.ring.nvars();
        let one = Vector(vec![Poly::one(n), Poly::one(n)]);
        let mut rels = Vec::new();
        for g in self.groebner() {
            rels.push(Vector(vec![g.clone(), Poly::zero(n)]));
        }
        for g in other.groebner() {
            rels.push(Vector(vec![Poly::zero(n), g.clone()]));
        }
        let ext = ExtendedBasis::new(2, n, &[one], &rels, self.ring.field());
        let gens = ext.syzygies().into_iter().map(|v| v.0.into_iter().next().unwrap()).collect();
        Ideal::new(&self.ring, gens)
    }

    /// Whether some power of `f` lies in the ideal, decided by
    /// `1 in I + (1 - t f)` in the ring extended by a fresh variable `t`.
    pub fn radical_contains(&self, f: &Poly) -> Result<bool> {
        if f.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch("polynomial lives in a different ring".into()));
        }
        let n = self.ring.nvars();
        let field = self.ring.field();
        let t = Poly::var(n + 1, n);
        let aux = Poly::one(n + 1).sub(&t.mul(&f.extend_vars(1), field), field);
        let mut gens: Vec<Vector> = self.groebner().iter().map(|g| Vector::from_poly(g.extend_vars(1))).collect();
        gens.push(Vector::from_poly(aux));
        let gb = groebner::groebner(&gens, field);
        Ok(gb.iter().any(|v| v.0[0].is_unit()))
    }

    /// `rad(self) contains rad(other)`, i.e. `V(self) ⊆ V(other)`.
    pub fn radical_contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in other.gens() {
            if !self.radical_contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_radical(&self, other: &Ideal) -> Result<bool> {
        Ok(self.radical_contains_ideal(other)? && other.radical_contains_ideal(self)?)
    }

    /// Buchberger-criterion self-check of the cached basis.
    pub fn verify_basis(&self) -> bool {
        let vs = self.basis_vectors();
        let f = self.ring.field();
        groebner::is_groebner(&vs, f)
            && self.gens.iter().all(|g| groebner::reduce(&Vector::from_poly(g.clone()), &vs, f).is_zero())
            && vs.iter().all(|b| {
                let mut all: Vec<Poly> = self.gens.clone();
                all.extend(self.ring.relations().iter().cloned());
                contains_by_lift(&all, &b.0[0], &self.ring)
            })
    }

    pub fn format(&self) -> String {
        let gens: Vec<String> = self.gens.iter().filter(|g| !g.is_zero()).map(|g| self.ring.format(g)).collect();
        if gens.is_empty() {
            return "(0)".into();
        }
        format!("({})", gens.join(", "))
    }
}

fn contains_by_lift(gens: &[Poly], p: &Poly, ring: &RingRef) -> bool {
    let vs: Vec<Vector> = gens.iter().filter(|g| !g.is_zero()).cloned().map(Vector::from_poly).collect();
    if vs.is_empty() {
        return p.is_zero();
    }
    let ext = ExtendedBasis::new(1, ring.nvars(), &vs, &[], ring.field());
    match ext.lift(&Vector::from_poly(p.clone()), ring.field()) {
        None => false,
        Some(u) => {
            let mut acc = Poly::zero(ring.nvars());
            for (c, g) in u.0.iter().zip(&vs) {
                acc = acc.add(&c.mul(&g.0[0], ring.field()), ring.field());
            }
            acc == *p
        }
    }
}

/// Monomials not divisible by any of `leads`; the caller guarantees finiteness.
pub fn standard_monomials(nvars: usize, leads: &[Monomial]) -> Vec<Monomial> {
    if leads.iter().any(Monomial::is_one) {
        return Vec::new();
    }
    let mut bounds = vec![0u32; nvars];
    for (v, b) in bounds.iter_mut().enumerate() {
        *b = leads
            .iter()
            .filter_map(|m| m.pure_power().filter(|(i, _)| *i == v).map(|(_, e)| e))
            .min()
            .expect("zero-dimensional");
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    loop {
        let m = Monomial(cur.clone());
        if !leads.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        let mut k = 0;
        loop {
            if k == nvars {
                out.sort();
                return out;
            }
            cur[k] += 1;
            if cur[k] < bounds[k] {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{}", self.format())
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.same_ideal(other)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{CoefficientField, PolyRing};
    use super::*;

    fn qxy() -> RingRef {
        PolyRing::new(CoefficientField::Rationals, &["x", "y"]).unwrap()
    }

    fn polys(r: &RingRef, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|t| r.parse(t).unwrap()).collect()
    }

    #[test]
    fn groebner_examples() {
        let r = qxy();
        let i = Ideal::parse(&r, &["x^2 + y", "x*y"]).unwrap();
        assert_eq!(i.groebner(), polys(&r, &["x^2 + y", "x*y", "y^2"]).as_slice());
        assert!(Ideal::zero(&r).groebner().is_empty());
        let u = Ideal::parse(&r, &["x", "1 + x"]).unwrap();
        assert_eq!(u.groebner(), polys(&r, &["1"]).as_slice());
        assert!(u.is_unit());
    }

    #[test]
    fn normal_forms() {
        let r = qxy();
        let i = Ideal::parse(&r, &["x^2 + y", "x*y"]).unwrap();
        assert!(i.normal_form(&r.parse("y^2").unwrap()).unwrap().is_zero());
        assert_eq!(i.normal_form(&r.parse("x").unwrap()).unwrap(), r.parse("x").unwrap());
        assert!(i.normal_form(&r.zero()).unwrap().is_zero());
        let other = PolyRing::new(CoefficientField::Rationals, &["x"]).unwrap();
        assert!(matches!(i.normal_form(&other.var(0)), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn powers() {
        let r = qxy();
        let m = Ideal::parse(&r, &["x", "y"]).unwrap();
        assert_eq!(m.power(2).unwrap().gens(), polys(&r, &["x^2", "x*y", "y^2"]).as_slice());
        let x = Ideal::parse(&r, &["x"]).unwrap();
        assert_eq!(x.power(3).unwrap().gens(), polys(&r, &["x^3"]).as_slice());
        let i = Ideal::parse(&r, &["x^2 + y", "x*y"]).unwrap();
        let sq = i.power(2).unwrap();
        assert_eq!(sq.gens().len(), 6);
        assert_eq!(sq, i.product(&i).unwrap());
        assert!(matches!(i.power(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn radical_membership_examples() {
        let r = qxy();
        let x2 = Ideal::parse(&r, &["x^2"]).unwrap();
        assert!(x2.radical_contains(&r.parse("x").unwrap()).unwrap());
        assert!(!x2.radical_contains(&r.parse("y").unwrap()).unwrap());
        let i = Ideal::parse(&r, &["x^2", "y^2"]).unwrap();
        assert!(i.radical_contains(&r.parse("x + y").unwrap()).unwrap());
    }

    #[test]
    fn colon_saturation_intersection() {
        let r = qxy();
        let i = Ideal::parse(&r, &["x^2", "x*y"]).unwrap();
        assert_eq!(i.colon(&r.parse("x").unwrap()).unwrap(), Ideal::parse(&r, &["x", "y"]).unwrap());
        assert_eq!(i.saturate(&r.parse("y").unwrap()).unwrap(), Ideal::parse(&r, &["x"]).unwrap());
        let a = Ideal::parse(&r, &["x"]).unwrap();
        let b = Ideal::parse(&r, &["y"]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), Ideal::parse(&r, &["x*y"]).unwrap());
    }

    #[test]
    fn zero_dimensionality_and_standard_monomials() {
        let r = qxy();
        let m2 = Ideal::parse(&r, &["x^2", "x*y", "y^2"]).unwrap();
        assert!(m2.is_zero_dimensional());
        assert_eq!(m2.standard_monomials().unwrap().len(), 3);
        assert!(!Ideal::parse(&r, &["x"]).unwrap().is_zero_dimensional());
        assert!(Ideal::unit(&r).is_zero_dimensional());
        assert!(m2.verify_basis());
    }
}
