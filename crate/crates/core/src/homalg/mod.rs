//! Finitely presented modules `S^n / U` over a `PolyRing`, with syzygies,
//! free resolutions, Tor, Ext, annihilators and length.

mod derived;
mod resolution;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ring::groebner::{self, ExtendedBasis};
use crate::ring::{Ideal, Monomial, Poly, RingRef, Vector};

pub use derived::{ext, ext_subquotient, hom_matrix, tensor_matrix, tor, tor_subquotient, InducedMap, Subquotient};
pub use resolution::{free_resolution, lift_chain_map, prune_generators, syzygy, FreeResolution};

/// Length of a module: a natural number or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(u64),
    Infinite,
}

impl Length {
    pub fn is_finite(&self) -> bool {
        matches!(self, Length::Finite(_))
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            Length::Finite(n) => Some(*n),
            Length::Infinite => None,
        }
    }
}

impl std::ops::Add for Length {
    type Output = Length;
    fn add(self, rhs: Length) -> Length {
        match (self, rhs) {
            (Length::Finite(a), Length::Finite(b)) => Length::Finite(a + b),
            _ => Length::Infinite,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => write!(f, "infinity"),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Length::Finite(n) => s.serialize_u64(*n),
            Length::Infinite => s.serialize_str("infinity"),
        }
    }
}

/// `S^ngens / (rows of relations + J S^ngens)` where `J` are the ring relations.
#[derive(Clone)]
pub struct FGModule {
    ring: RingRef,
    ngens: usize,
    relations: Vec<Vector>,
    degrees: Option<Vec<i64>>,
    basis: Arc<OnceLock<Vec<Vector>>>,
}

impl FGModule {
    pub fn new(ring: &RingRef, ngens: usize, relations: Vec<Vector>) -> Result<Self> {
        let n = ring.nvars();
        let mut rows = Vec::with_capacity(relations.len());
        for r in relations {
            if r.rank() != ngens || r.0.iter().any(|p| p.nvars() != n) {
                return Err(Error::RingMismatch(format!(
                    "relation of rank {} does not fit {} generators over {}",
                    r.rank(),
                    ngens,
                    ring
                )));
            }
            let r = Vector(r.0.iter().map(|p| ring.reduce(p)).collect());
            if !r.is_zero() && !rows.contains(&r) {
                rows.push(r);
            }
        }
        let mut m = FGModule { ring: ring.clone(), ngens, relations: rows, degrees: None, basis: Arc::new(OnceLock::new()) };
        m.degrees = m.infer_degrees();
        Ok(m)
    }

    /// Rows given as strings, one entry per generator.
    pub fn parse(ring: &RingRef, ngens: usize, rows: &[Vec<&str>]) -> Result<Self> {
        let mut rels = Vec::new();
        for row in rows {
            let v = row.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
            rels.push(Vector(v));
        }
        Self::new(ring, ngens, rels)
    }

    pub fn free(ring: &RingRef, rank: usize) -> Self {
        Self::new(ring, rank, Vec::new()).expect("free module")
    }

    pub fn zero(ring: &RingRef) -> Self {
        Self::free(ring, 0)
    }

    /// `R / I`.
    pub fn cyclic(ideal: &Ideal) -> Self {
        let rels = ideal.gens().iter().cloned().map(Vector::from_poly).collect();
        Self::new(ideal.ring(), 1, rels).expect("cyclic module")
    }

    /// Checks and attaches generator degrees.
    pub fn with_degrees(mut self, degrees: Vec<i64>) -> Result<Self> {
        if degrees.len() != self.ngens {
            return Err(Error::InvalidArgument(format!("{} degrees for {} generators", degrees.len(), self.ngens)));
        }
        for r in &self.relations {
            if row_degree(r, &degrees).is_none() {
                return Err(Error::InvalidArgument("relation is not homogeneous for the given degrees".into()));
            }
        }
        self.degrees = Some(degrees);
        Ok(self)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &[Vector] {
        &self.relations
    }

    pub fn degrees(&self) -> Option<&[i64]> {
        self.degrees.as_deref()
    }

    pub fn is_graded(&self) -> bool {
        self.degrees.is_some()
    }

    /// Relations plus `J e_j`, as generators of the submodule of `S^ngens`.
    pub fn relation_module(&self) -> Vec<Vector> {
        let mut v = self.relations.clone();
        v.extend(self.ring.relation_vectors(self.ngens));
        v
    }

    /// Reduced Gröbner basis (position over term) of the relation module.
    pub fn groebner(&self) -> &[Vector] {
        self.basis.get_or_init(|| groebner::groebner(&self.relation_module(), self.ring.field()))
    }

    /// Whether `v` in `S^ngens` is zero in the module.
    pub fn is_zero_element(&self, v: &Vector) -> bool {
        groebner::reduce(v, self.groebner(), self.ring.field()).is_zero()
    }

    pub fn normal_form(&self, v: &Vector) -> Vector {
        groebner::reduce(v, self.groebner(), self.ring.field())
    }

    pub fn is_zero(&self) -> bool {
        (0..self.ngens).all(|j| {
            self.groebner().iter().any(|g| g.lead().is_some_and(|(p, m, _)| p == j && m.is_one()))
        })
    }

    pub fn direct_sum(&self, other: &FGModule) -> Result<FGModule> {
        self.ring.ensure_same(&other.ring)?;
        let n = self.ring.nvars();
        let total = self.ngens + other.ngens;
        let mut rels = Vec::new();
        for r in &self.relations {
            rels.push(r.concat(&Vector::zero(other.ngens, n)));
        }
        for r in &other.relations {
            rels.push(Vector::zero(self.ngens, n).concat(r));
        }
        let m = FGModule::new(&self.ring, total, rels)?;
        Ok(match (&self.degrees, &other.degrees) {
            (Some(a), Some(b)) => {
                let mut d = a.clone();
                d.extend(b);
                m.clone().with_degrees(d).unwrap_or(m)
            }
            _ => m,
        })
    }

    /// `M / I M`.
    pub fn quotient_by_ideal(&self, ideal: &Ideal) -> Result<FGModule> {
        self.ring.ensure_same(ideal.ring())?;
        let n = self.ring.nvars();
        let mut rels = self.relations.clone();
        for g in ideal.gens() {
            for j in 0..self.ngens {
                let mut v = Vector::zero(self.ngens, n);
                v.0[j] = g.clone();
                rels.push(v);
            }
        }
        FGModule::new(&self.ring, self.ngens, rels)
    }

    /// `(0 :_M I)` as a subquotient of `S^ngens`.
    pub fn colon_submodule(&self, ideal: &Ideal) -> Result<Subquotient> {
        self.ring.ensure_same(ideal.ring())?;
        let field = self.ring.field();
        let n = self.ring.nvars();
        let k = self.ngens;
        let gens: Vec<&Poly> = ideal.gens().iter().filter(|g| !g.is_zero()).collect();
        let rels = self.groebner().to_vec();
        if gens.is_empty() {
            let units = (0..k).map(|j| Vector::unit(k, n, j)).collect();
            return Ok(Subquotient::new(&self.ring, k, units, rels));
        }
        let blocks = gens.len();
        let images: Vec<Vector> = (0..k)
            .map(|j| {
                let mut v = Vector::zero(k * blocks, n);
                for (b, g) in gens.iter().enumerate() {
                    v.0[b * k + j] = (*g).clone();
                }
                v
            })
            .collect();
        let mut target_rels = Vec::new();
        for b in 0..blocks {
            for r in &rels {
                target_rels.push(Vector::zero(b * k, n).concat(r).concat(&Vector::zero((blocks - b - 1) * k, n)));
            }
        }
        let ext = ExtendedBasis::new(k * blocks, n, &images, &target_rels, field);
        Ok(Subquotient::new(&self.ring, k, ext.syzygies(), rels))
    }

    /// Elements of the ring killing every generator.
    pub fn annihilator(&self) -> Ideal {
        let n = self.ring.nvars();
        let k = self.ngens;
        if k == 0 {
            return Ideal::unit(&self.ring);
        }
        if k == 1 {
            let gens = self.relations.iter().map(|r| r.0[0].clone()).collect();
            return Ideal::new(&self.ring, gens).expect("same ring");
        }
        let mut stacked = Vector::zero(k * k, n);
        for j in 0..k {
            stacked.0[j * k + j] = Poly::one(n);
        }
        let rels = self.groebner();
        let mut target_rels = Vec::new();
        for b in 0..k {
            for r in rels {
                target_rels.push(Vector::zero(b * k, n).concat(r).concat(&Vector::zero((k - b - 1) * k, n)));
            }
        }
        let ext = ExtendedBasis::new(k * k, n, &[stacked], &target_rels, self.ring.field());
        let gens = ext.syzygies().into_iter().map(|v| v.0.into_iter().next().unwrap()).collect();
        Ideal::new(&self.ring, gens).expect("same ring")
    }

    /// Field dimension, counted by standard monomials per generator position.
    pub fn length(&self) -> Length {
        let nv = self.ring.nvars();
        let mut total = 0u64;
        for j in 0..self.ngens {
            let leads: Vec<Monomial> = self
                .groebner()
                .iter()
                .filter_map(|g| g.lead().filter(|(p, _, _)| *p == j).map(|(_, m, _)| m.clone()))
                .collect();
            if leads.iter().any(Monomial::is_one) {
                continue;
            }
            let zero_dim = (0..nv).all(|v| leads.iter().any(|m| m.pure_power().is_some_and(|(i, _)| i == v)));
            if !zero_dim {
                return Length::Infinite;
            }
            total += crate::ring::standard_monomials(nv, &leads).len() as u64;
        }
        Length::Finite(total)
    }

    /// Minimal number of generators in the graded-local sense: `dim M / mM`.
    pub fn minimal_generator_count(&self) -> usize {
        let m = self.quotient_by_ideal(&Ideal::irrelevant(&self.ring)).expect("same ring");
        m.length().finite().unwrap_or(0) as usize
    }

    /// Eliminates generators through relations with a nonzero constant
    /// entry, then stores the relations as a reduced Gröbner basis. The
    /// result is canonical for a fixed ordering of surviving generators.
    pub fn minimal_presentation(&self) -> FGModule {
        let field = self.ring.field().clone();
        let mut ngens = self.ngens;
        let mut degrees = self.degrees.clone();
        let mut rels = self.relation_module();
        loop {
            let gb = if ngens == 0 { Vec::new() } else { groebner::groebner(&rels, &field) };
            let pivot = gb.iter().enumerate().find_map(|(ri, r)| {
                r.0.iter().position(|p| p.is_constant() && !p.is_zero()).map(|j| (ri, j))
            });
            let Some((ri, j)) = pivot else {
                let jvecs = self.ring.relation_vectors(ngens);
                let kept: Vec<Vector> = gb
                    .into_iter()
                    .filter(|r| !groebner::reduce(r, &jvecs, &field).is_zero())
                    .collect();
                let mut m = FGModule {
                    ring: self.ring.clone(),
                    ngens,
                    relations: kept,
                    degrees: None,
                    basis: Arc::new(OnceLock::new()),
                };
                m.degrees = match degrees {
                    Some(d) if m.relations.iter().all(|r| row_degree(r, &d).is_some()) => Some(d),
                    _ => m.infer_degrees(),
                };
                return m;
            };
            let pivot_row = gb[ri].clone();
            let c = pivot_row.0[j].constant_term();
            let mut next = Vec::with_capacity(gb.len());
            for (si, s) in gb.iter().enumerate() {
                if si == ri {
                    continue;
                }
                let factor = s.0[j].scale(&field.inv(&c), &field);
                let reduced = s.sub(&pivot_row.mul_poly(&factor, &field), &field);
                let mut entries = reduced.0;
                entries.remove(j);
                let v = Vector(entries.iter().map(|p| self.ring.reduce(p)).collect());
                if !v.is_zero() {
                    next.push(v);
                }
            }
            ngens -= 1;
            if let Some(d) = degrees.as_mut() {
                d.remove(j);
            }
            next.extend(self.ring.relation_vectors(ngens));
            rels = next;
        }
    }

    /// Same number of generators and same relation module after minimalization.
    pub fn same_presentation(&self, other: &FGModule) -> bool {
        if *self.ring != *other.ring {
            return false;
        }
        let a = self.minimal_presentation();
        let b = other.minimal_presentation();
        a.ngens == b.ngens && a.groebner() == b.groebner()
    }

    /// Isomorphism invariants used when presentations differ.
    pub fn fingerprint(&self) -> Fingerprint {
        let m = Ideal::irrelevant(&self.ring);
        let mut truncations = Vec::new();
        let mut power = m.clone();
        for k in 1..=3u32 {
            if k > 1 {
                power = m.power(k).expect("positive power");
            }
            truncations.push(self.quotient_by_ideal(&power).expect("same ring").length());
        }
        Fingerprint {
            min_generators: self.minimal_generator_count(),
            annihilator: self.annihilator().groebner().to_vec(),
            length: self.length(),
            truncations,
        }
    }

    /// Same reduced presentation, or failing that the same fingerprint.
    pub fn isomorphic_hint(&self, other: &FGModule) -> bool {
        self.same_presentation(other) || (*self.ring == *other.ring && self.fingerprint() == other.fingerprint())
    }

    fn infer_degrees(&self) -> Option<Vec<i64>> {
        if !self.ring.is_graded() {
            return None;
        }
        let mut deg: Vec<Option<i64>> = vec![None; self.ngens];
        for r in &self.relations {
            if r.0.iter().any(|p| !p.is_zero() && !p.is_homogeneous()) {
                return None;
            }
        }
        loop {
            let mut changed = true;
            while changed {
                changed = false;
                for r in &self.relations {
                    let entries: Vec<(usize, i64)> = r
                        .0
                        .iter()
                        .enumerate()
                        .filter_map(|(j, p)| p.homogeneous_degree().map(|d| (j, d as i64)))
                        .collect();
                    let Some(row) = entries.iter().find_map(|&(j, d)| deg[j].map(|g| g + d)) else { continue };
                    for &(j, d) in &entries {
                        match deg[j] {
                            Some(g) if g + d != row => return None,
                            Some(_) => {}
                            None => {
                                deg[j] = Some(row - d);
                                changed = true;
                            }
                        }
                    }
                }
            }
            match deg.iter().position(Option::is_none) {
                Some(j) => deg[j] = Some(0),
                None => break,
            }
        }
        let deg: Vec<i64> = deg.into_iter().map(|d| d.unwrap()).collect();
        let low = deg.iter().copied().min().unwrap_or(0);
        Some(deg.into_iter().map(|d| d - low).collect())
    }

    pub fn format(&self) -> String {
        let rows: Vec<String> = self
            .relations
            .iter()
            .map(|r| {
                let es: Vec<String> = r.0.iter().map(|p| self.ring.format(p)).collect();
                format!("[{}]", es.join(", "))
            })
            .collect();
        format!("R^{} / <{}>", self.ngens, rows.join(", "))
    }
}

fn row_degree(r: &Vector, degrees: &[i64]) -> Option<i64> {
    let mut row = None;
    for (j, p) in r.0.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let d = p.homogeneous_degree()? as i64 + degrees[j];
        match row {
            None => row = Some(d),
            Some(e) if e != d => return None,
            _ => {}
        }
    }
    Some(row.unwrap_or(0))
}

impl fmt::Debug for FGModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FGModule({} over {})", self.format(), self.ring)
    }
}

impl fmt::Display for FGModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub min_generators: usize,
    pub annihilator: Vec<Poly>,
    pub length: Length,
    pub truncations: Vec<Length>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CoefficientField, PolyRing};

    fn qxy() -> RingRef {
        PolyRing::new(CoefficientField::Rationals, &["x", "y"]).unwrap()
    }

    fn cyc(r: &RingRef, gens: &[&str]) -> FGModule {
        FGModule::cyclic(&Ideal::parse(r, gens).unwrap())
    }

    #[test]
    fn lengths() {
        let r = qxy();
        assert_eq!(cyc(&r, &["x^2", "x*y", "y^2"]).length(), Length::Finite(3));
        assert_eq!(cyc(&r, &["x"]).length(), Length::Infinite);
        assert_eq!(FGModule::zero(&r).length(), Length::Finite(0));
        let a = cyc(&r, &["x", "y^2"]);
        let b = cyc(&r, &["x^2", "y^3"]);
        assert_eq!(a.direct_sum(&b).unwrap().length(), Length::Finite(8));
    }

    #[test]
    fn annihilators() {
        let r = qxy();
        let ann = cyc(&r, &["x^2"]).annihilator();
        assert!(ann.same_ideal(&Ideal::parse(&r, &["x^2"]).unwrap()));
        let sum = cyc(&r, &["x"]).direct_sum(&cyc(&r, &["y"])).unwrap();
        assert!(sum.annihilator().same_ideal(&Ideal::parse(&r, &["x*y"]).unwrap()));
        assert!(FGModule::free(&r, 1).annihilator().is_zero() || FGModule::free(&r, 1).annihilator().groebner().is_empty());
    }

    #[test]
    fn unit_pivoting() {
        let r = qxy();
        // e1 = x e2 eliminated; what is left is R/(x y)
        let m = FGModule::parse(&r, 2, &[vec!["1", "-x"], vec!["0", "x*y"]]).unwrap();
        let p = m.minimal_presentation();
        assert_eq!(p.ngens(), 1);
        assert!(p.same_presentation(&cyc(&r, &["x*y"])));
        assert!(!m.is_zero());
        assert!(FGModule::parse(&r, 1, &[vec!["3"]]).unwrap().is_zero());
    }

    #[test]
    fn degrees_inferred() {
        let r = qxy();
        let m = FGModule::parse(&r, 2, &[vec!["x", "y^2"]]).unwrap();
        assert_eq!(m.degrees(), Some(&[1, 0][..]));
        assert!(FGModule::parse(&r, 1, &[vec!["x + y^2"]]).unwrap().degrees().is_none());
    }

    #[test]
    fn colon_submodule_of_cyclic() {
        let r = qxy();
        // (0 :_{R/(x^2)} x) = x R/(x^2), one dimensional over R/(x)
        let m = cyc(&r, &["x^2"]);
        let sub = m.colon_submodule(&Ideal::parse(&r, &["x"]).unwrap()).unwrap();
        let p = sub.presentation();
        assert!(p.isomorphic_hint(&cyc(&r, &["x"])));
    }
}
