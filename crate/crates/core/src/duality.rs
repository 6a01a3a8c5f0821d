//! Artinian modules as formal duals `D(L)` of finitely generated modules over
//! a local-marked graded ring, and as canonical Artinian groups over `Z`.
//! Every operation on `N = D(L)` is carried out on `L`:
//!
//! * `(0 :_N J) = D(L / JL)`
//! * `N / xN = D(0 :_L x)`
//! * `Att(N) = Ass(L)`, `Ann(N) = Ann(L)`, `length(N) = length(L)`
//! * `Tor_i(M, N) = D(Ext^i(M, L))`

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::homalg::{ext, FGModule, Length};
use crate::integer::{tor_fg_artinian, AbelianGroup, ArtinianGroup, ZCosupport};
use crate::primes::{associated_primes, minimal_primes, PrimeIdeal, PrimeList, Provenance};
use crate::ring::{Ideal, Poly, RingRef};

/// `D(L)` over a local-marked ring.
#[derive(Clone, Debug)]
pub struct DualModule {
    predual: FGModule,
}

impl DualModule {
    pub fn new(predual: FGModule) -> Result<Self> {
        if !predual.ring().is_local() {
            return Err(Error::InvalidArgument(format!(
                "a dual module needs a local ring, got {}",
                predual.ring()
            )));
        }
        Ok(DualModule { predual })
    }

    pub fn zero(ring: &RingRef) -> Result<Self> {
        Self::new(FGModule::zero(ring))
    }

    /// The finitely generated module `L` with `N = D(L)`.
    pub fn predual(&self) -> &FGModule {
        &self.predual
    }

    pub fn ring(&self) -> &RingRef {
        self.predual.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.predual.is_zero()
    }

    /// `(0 :_N J) = D(L / JL)`.
    pub fn colon_dual(&self, j: &Ideal) -> Result<DualModule> {
        Ok(DualModule { predual: self.predual.quotient_by_ideal(j)? })
    }

    /// `N / xN = D(0 :_L x)`.
    pub fn quotient_by_element(&self, x: &Poly) -> Result<DualModule> {
        let ideal = Ideal::new(self.ring(), vec![x.clone()])?;
        Ok(DualModule { predual: self.predual.colon_submodule(&ideal)?.reduced() })
    }

    pub fn attached_primes(&self) -> Result<PrimeList> {
        associated_primes(&self.predual)
    }

    pub fn annihilator(&self) -> Ideal {
        self.predual.annihilator()
    }

    pub fn cosupport(&self) -> Result<Cosupport> {
        let ann = self.annihilator();
        let inside_max = cosupport_inside_max(&ann)?;
        Ok(Cosupport { annihilator: ann, inside_max })
    }

    pub fn length(&self) -> Length {
        self.predual.length()
    }

    /// `Tor_i(M, N) = D(Ext^i(M, L))`.
    pub fn tor_with(&self, m: &FGModule, i: usize) -> Result<DualModule> {
        Ok(DualModule { predual: ext(m, &self.predual, i)? })
    }

    /// `(0 :_N a + Ann M)` has finite length.
    pub fn finite_length_colon_check(&self, a: &Ideal, ann_m: &Ideal) -> Result<bool> {
        Ok(self.colon_dual(&a.sum(ann_m)?)?.length().is_finite())
    }
}

impl fmt::Display for DualModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "D({})", self.predual)
        }
    }
}

/// `V(Ann N)` described by the annihilator.
#[derive(Clone, Debug)]
pub struct Cosupport {
    pub annihilator: Ideal,
    pub inside_max: bool,
}

impl Cosupport {
    /// `p` lies in the cosupport.
    pub fn contains(&self, p: &PrimeIdeal) -> bool {
        p.ideal().contains_ideal(&self.annihilator)
    }
}

/// `V(ann)` consists of maximal ideals (of the local model).
pub fn cosupport_inside_max(ann: &Ideal) -> Result<bool> {
    if ann.is_unit() || ann.is_zero_dimensional() {
        return Ok(true);
    }
    if ann.is_homogeneous() {
        return Ok(false);
    }
    Ok(minimal_primes(ann)?.all_maximal())
}

/// An Artinian module in one of the two closed worlds.
#[derive(Clone, Debug)]
pub enum ArtinianModule {
    Dual(DualModule),
    Integer(ArtinianGroup),
}

/// Attached primes in either world; `0` stands for the zero ideal of `Z`.
#[derive(Clone, Debug)]
pub enum AttachedPrimes {
    Graded(PrimeList),
    Integer(Vec<u64>),
}

impl AttachedPrimes {
    pub fn all_maximal(&self) -> bool {
        match self {
            AttachedPrimes::Graded(l) => l.all_maximal(),
            AttachedPrimes::Integer(v) => !v.contains(&0),
        }
    }

    pub fn formatted(&self) -> Vec<String> {
        match self {
            AttachedPrimes::Graded(l) => l.formatted(),
            AttachedPrimes::Integer(v) => v.iter().map(|p| format!("({p})")).collect(),
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            AttachedPrimes::Graded(l) => l.provenance(),
            AttachedPrimes::Integer(_) => Provenance::Computed,
        }
    }
}

impl ArtinianModule {
    pub fn length(&self) -> Length {
        match self {
            ArtinianModule::Dual(d) => d.length(),
            ArtinianModule::Integer(g) => g.length(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ArtinianModule::Dual(d) => d.is_zero(),
            ArtinianModule::Integer(g) => g.is_zero(),
        }
    }

    pub fn attached_primes(&self) -> Result<AttachedPrimes> {
        Ok(match self {
            ArtinianModule::Dual(d) => AttachedPrimes::Graded(d.attached_primes()?),
            ArtinianModule::Integer(g) => AttachedPrimes::Integer(g.attached_primes()),
        })
    }

    /// Cosupport contained in the maximal ideals.
    pub fn cosupport_inside_max(&self) -> Result<bool> {
        match self {
            ArtinianModule::Dual(d) => Ok(d.cosupport()?.inside_max),
            ArtinianModule::Integer(g) => Ok(g.cosupport().inside_max()),
        }
    }

    pub fn integer_cosupport(&self) -> Option<ZCosupport> {
        match self {
            ArtinianModule::Integer(g) => Some(g.cosupport()),
            ArtinianModule::Dual(_) => None,
        }
    }
}

impl fmt::Display for ArtinianModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArtinianModule::Dual(d) => d.fmt(f),
            ArtinianModule::Integer(g) => g.fmt(f),
        }
    }
}

/// Integer-side counterparts of the dual operations.
pub mod integer_side {
    use super::*;

    pub fn colon_dual(n: &ArtinianGroup, j: &BigInt) -> ArtinianGroup {
        n.colon(j)
    }

    pub fn quotient_by_element(n: &ArtinianGroup, x: &BigInt) -> ArtinianGroup {
        n.quotient_by(x)
    }

    pub fn tor_with_artinian(m: &AbelianGroup, n: &ArtinianGroup, i: usize) -> ArtinianGroup {
        tor_fg_artinian(m, n, i)
    }

    pub fn finite_length_colon_check(n: &ArtinianGroup, a: &BigInt, ann_m: &BigInt) -> bool {
        use num_integer::Integer;
        n.colon(&a.gcd(ann_m)).length().is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CoefficientField, PolyRing};

    fn local() -> RingRef {
        PolyRing::local(CoefficientField::Rationals, &["x", "y"]).unwrap()
    }

    fn dual(r: &RingRef, gens: &[&str]) -> DualModule {
        let i = if gens.is_empty() { Ideal::zero(r) } else { Ideal::parse(r, gens).unwrap() };
        DualModule::new(FGModule::cyclic(&i)).unwrap()
    }

    #[test]
    fn needs_a_local_ring() {
        let r = PolyRing::new(CoefficientField::Rationals, &["x"]).unwrap();
        assert!(DualModule::new(FGModule::free(&r, 1)).is_err());
    }

    #[test]
    fn colon_and_quotient() {
        let r = local();
        let n = dual(&r, &[]);
        let m = Ideal::parse(&r, &["x", "y"]).unwrap();
        assert_eq!(n.colon_dual(&m).unwrap().length(), Length::Finite(1));
        assert!(n.colon_dual(&Ideal::zero(&r)).unwrap().length() == Length::Infinite);
        assert!(n.quotient_by_element(&r.parse("x").unwrap()).unwrap().is_zero());
        let nx = dual(&r, &["x"]);
        let q = nx.quotient_by_element(&r.parse("x").unwrap()).unwrap();
        assert!(q.predual().isomorphic_hint(nx.predual()));
    }

    #[test]
    fn attached_primes_and_cosupport() {
        let r = local();
        let nx = dual(&r, &["x"]);
        let att = nx.attached_primes().unwrap();
        assert_eq!(att.formatted(), vec!["(x)"]);
        assert!(!nx.cosupport().unwrap().inside_max);
        assert!(dual(&r, &["x", "y"]).cosupport().unwrap().inside_max);
        let z = ArtinianModule::Integer(ArtinianGroup::new(vec![(3, 2)], vec![(2, 1)]).unwrap());
        assert_eq!(z.attached_primes().unwrap().formatted(), vec!["(0)", "(3)"]);
        assert!(!ArtinianModule::Integer(ArtinianGroup::prufer(2)).cosupport_inside_max().unwrap());
    }

    #[test]
    fn tor_and_length() {
        let r = local();
        let n = dual(&r, &[]);
        let m = FGModule::cyclic(&Ideal::parse(&r, &["x"]).unwrap());
        let t = n.tor_with(&m, 1).unwrap();
        assert!(t.predual().isomorphic_hint(&m));
        assert_eq!(dual(&r, &["x^2", "x*y", "y^2"]).length(), Length::Finite(3));
        let nx = dual(&r, &["x"]);
        assert!(nx.finite_length_colon_check(&Ideal::parse(&r, &["x", "y"]).unwrap(), &Ideal::zero(&r)).unwrap());
        let p = ArtinianGroup::prufer(2);
        assert_eq!(integer_side::tor_with_artinian(&AbelianGroup::cyclic(12), &p, 1), ArtinianGroup::finite_cyclic(&[4]).unwrap());
        assert!(integer_side::tor_with_artinian(&AbelianGroup::cyclic(12), &p, 0).is_zero());
    }
}
