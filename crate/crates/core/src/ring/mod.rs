//! Exact polynomial arithmetic, Gröbner bases and ideal operations over the
//! rationals and prime fields, including quotient rings and the graded-local
//! model (a graded quotient ring localized at its irrelevant ideal).

pub mod field;
pub mod groebner;
mod ideal;
pub mod monomial;
pub mod parse;
pub mod poly;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

pub use field::{Coeff, CoefficientField};
pub use groebner::Vector;
pub use ideal::{standard_monomials, Ideal};
pub use monomial::Monomial;
pub use poly::Poly;

use crate::error::{Error, Result};

/// `K[x_1..x_d] / J` with a fixed degrevlex order. When `local` is set, the
/// ring stands for its localization at `(x_1..x_d)`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: CoefficientField,
    vars: Vec<String>,
    relations: Vec<Poly>,
    local: bool,
}

pub type RingRef = Arc<PolyRing>;

impl PolyRing {
    pub fn new(field: CoefficientField, vars: &[&str]) -> Result<RingRef> {
        Self::with_relations(field, vars.iter().map(|s| s.to_string()).collect(), Vec::new(), false)
    }

    pub fn local(field: CoefficientField, vars: &[&str]) -> Result<RingRef> {
        Self::with_relations(field, vars.iter().map(|s| s.to_string()).collect(), Vec::new(), true)
    }

    /// Quotient ring; `relations` are replaced by their reduced Gröbner basis.
    pub fn with_relations(field: CoefficientField, vars: Vec<String>, relations: Vec<Poly>, local: bool) -> Result<RingRef> {
        if let CoefficientField::Prime(p) = field {
            CoefficientField::prime(p)?;
        }
        let mut seen = HashSet::new();
        for v in &vars {
            if v.is_empty() || !seen.insert(v.clone()) {
                return Err(Error::InvalidArgument(format!("variable names must be distinct and nonempty: '{v}'")));
            }
        }
        let n = vars.len();
        if relations.iter().any(|p| p.nvars() != n) {
            return Err(Error::RingMismatch("relation has the wrong number of variables".into()));
        }
        let gens: Vec<Vector> =
            relations.into_iter().filter(|p| !p.is_zero()).map(Vector::from_poly).collect();
        let relations: Vec<Poly> =
            groebner::groebner(&gens, &field).into_iter().map(|v| v.0.into_iter().next().unwrap()).collect();
        if relations.iter().any(Poly::is_unit) {
            return Err(Error::InvalidArgument("quotient relations generate the unit ideal".into()));
        }
        if local && relations.iter().any(|p| !p.vanishes_at_origin()) {
            return Err(Error::InvalidArgument(
                "a local ring needs relations without constant term".into(),
            ));
        }
        Ok(Arc::new(PolyRing { field, vars, relations, local }))
    }

    pub fn field(&self) -> &CoefficientField {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn is_local(&self) -> bool {
        self.local
    }

    /// Relations are homogeneous, so the ring is graded.
    pub fn is_graded(&self) -> bool {
        self.relations.iter().all(Poly::is_homogeneous)
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.nvars())
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.nvars())
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.nvars(), i)
    }

    pub fn constant(&self, n: i64) -> Poly {
        Poly::constant(self.nvars(), self.field.from_int(n))
    }

    /// Parses and reduces modulo the quotient relations.
    pub fn parse(&self, s: &str) -> Result<Poly> {
        Ok(self.reduce(&parse::parse_poly(s, &self.vars, &self.field)?))
    }

    pub fn format(&self, p: &Poly) -> String {
        p.format(&self.vars)
    }

    /// Normal form modulo the quotient relations.
    pub fn reduce(&self, p: &Poly) -> Poly {
        if self.relations.is_empty() {
            return p.clone();
        }
        let basis: Vec<Vector> = self.relations.iter().cloned().map(Vector::from_poly).collect();
        groebner::reduce(&Vector::from_poly(p.clone()), &basis, &self.field).0.remove(0)
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.add(b, &self.field))
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.sub(b, &self.field))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(b, &self.field))
    }

    /// `relations * e_j` for every `j < rank`.
    pub fn relation_vectors(&self, rank: usize) -> Vec<Vector> {
        let mut out = Vec::new();
        for j in 0..rank {
            for r in &self.relations {
                let mut v = Vector::zero(rank, self.nvars());
                v.0[j] = r.clone();
                out.push(v);
            }
        }
        out
    }

    /// The ambient polynomial ring: same variables and locality, no relations.
    pub fn ambient(&self) -> RingRef {
        Arc::new(PolyRing {
            field: self.field.clone(),
            vars: self.vars.clone(),
            relations: Vec::new(),
            local: self.local,
        })
    }

    /// Same ring with additional trailing variables (relations kept).
    pub fn extended(&self, names: &[&str]) -> Result<RingRef> {
        let mut vars = self.vars.clone();
        vars.extend(names.iter().map(|s| s.to_string()));
        let rels = self.relations.iter().map(|p| p.extend_vars(names.len())).collect();
        Self::with_relations(self.field.clone(), vars, rels, false)
    }

    pub fn ensure_same(&self, other: &PolyRing) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self.vars.join(","))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|p| self.format(p)).collect();
            write!(f, "/({})", rels.join(", "))?;
        }
        if self.local {
            write!(f, " (local)")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_variables() {
        assert!(PolyRing::new(CoefficientField::Rationals, &["x", "x"]).is_err());
    }

    #[test]
    fn local_marker_requires_homogeneous_maximal_irrelevant_ideal() {
        let q = CoefficientField::Rationals;
        let vars = vec!["x".to_string(), "y".to_string()];
        let bad = parse::parse_poly("x - 1", &vars, &q).unwrap();
        assert!(PolyRing::with_relations(q.clone(), vars.clone(), vec![bad], true).is_err());
        let good = parse::parse_poly("x*y", &vars, &q).unwrap();
        let r = PolyRing::with_relations(q, vars, vec![good], true).unwrap();
        assert!(r.parse("x^2*y + x").unwrap() == r.parse("x").unwrap());
        assert_eq!(r.to_string(), "QQ[x,y]/(x*y) (local)");
    }
}
