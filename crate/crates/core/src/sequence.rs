//! Filter coregular sequences on Artinian modules, `fwidth`, and the dual
//! filter regular invariant `fdepth` on finitely generated modules.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::duality::DualModule;
use crate::error::{Error, Result};
use crate::homalg::{FGModule, Length};
use crate::integer::ArtinianGroup;
use crate::primes::{associated_primes, prime_avoid_nth, Avoidance, PrimeIdeal, PrimeList, Provenance, DEFAULT_AVOID_BUDGET};
use crate::ring::{Ideal, Poly, RingRef};

/// Cap on greedy extension steps before giving up with an undetermined result.
pub const MAX_STEPS: usize = 64;

pub enum AvoidOutcome<E, P> {
    Element(E),
    Contained(P),
}

/// The operations the sequence engine needs from a world of Artinian modules.
pub trait CoregularModel {
    type Elem: Clone + fmt::Debug;
    type Ideal: Clone;
    type Module: Clone;
    type Prime: Clone;

    /// `(0 :_N (elems))`.
    fn colon(&self, n: &Self::Module, elems: &[Self::Elem]) -> Result<Self::Module>;
    /// `N / xN`.
    fn quotient(&self, n: &Self::Module, x: &Self::Elem) -> Result<Self::Module>;
    fn length(&self, n: &Self::Module) -> Length;
    fn attached_non_maximal(&self, n: &Self::Module) -> Result<Vec<Self::Prime>>;
    fn prime_contains(&self, p: &Self::Prime, x: &Self::Elem) -> bool;
    fn ideal_contains(&self, a: &Self::Ideal, x: &Self::Elem) -> bool;
    /// The `skip`-th element of `a` outside every prime, in a fixed order.
    fn avoid(&self, a: &Self::Ideal, primes: &[Self::Prime], skip: usize) -> Result<AvoidOutcome<Self::Elem, Self::Prime>>;
    fn format_elem(&self, x: &Self::Elem) -> String;
    fn format_prime(&self, p: &Self::Prime) -> String;
    fn format_ideal(&self, a: &Self::Ideal) -> String;
}

/// Duals `D(L)` over a local-marked polynomial ring.
#[derive(Clone, Debug)]
pub struct GradedWorld {
    pub ring: RingRef,
    pub budget: usize,
}

impl GradedWorld {
    pub fn new(ring: &RingRef) -> Self {
        GradedWorld { ring: ring.clone(), budget: DEFAULT_AVOID_BUDGET }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }
}

impl CoregularModel for GradedWorld {
    type Elem = Poly;
    type Ideal = Ideal;
    type Module = DualModule;
    type Prime = PrimeIdeal;

    fn colon(&self, n: &DualModule, elems: &[Poly]) -> Result<DualModule> {
        if elems.is_empty() {
            return Ok(n.clone());
        }
        n.colon_dual(&Ideal::new(n.ring(), elems.to_vec())?)
    }

    fn quotient(&self, n: &DualModule, x: &Poly) -> Result<DualModule> {
        n.quotient_by_element(x)
    }

    fn length(&self, n: &DualModule) -> Length {
        n.length()
    }

    fn attached_non_maximal(&self, n: &DualModule) -> Result<Vec<PrimeIdeal>> {
        Ok(n.attached_primes()?.non_maximal().into_iter().cloned().collect())
    }

    fn prime_contains(&self, p: &PrimeIdeal, x: &Poly) -> bool {
        p.contains(x)
    }

    fn ideal_contains(&self, a: &Ideal, x: &Poly) -> bool {
        a.contains(x)
    }

    fn avoid(&self, a: &Ideal, primes: &[PrimeIdeal], skip: usize) -> Result<AvoidOutcome<Poly, PrimeIdeal>> {
        let list = PrimeList::from_primes(primes.to_vec(), Provenance::Computed);
        Ok(match prime_avoid_nth(a, &list, self.budget, skip)? {
            Avoidance::Element { element, .. } => AvoidOutcome::Element(element),
            Avoidance::Contained(p) => AvoidOutcome::Contained(p),
        })
    }

    fn format_elem(&self, x: &Poly) -> String {
        self.ring.format(x)
    }

    fn format_prime(&self, p: &PrimeIdeal) -> String {
        p.to_string()
    }

    fn format_ideal(&self, a: &Ideal) -> String {
        a.format()
    }
}

/// Artinian abelian groups; ideals of `Z` are given by a generator and
/// primes by a generator with `0` for the zero ideal.
#[derive(Clone, Debug)]
pub struct IntegerWorld {
    pub budget: usize,
}

impl Default for IntegerWorld {
    fn default() -> Self {
        IntegerWorld { budget: DEFAULT_AVOID_BUDGET }
    }
}

impl CoregularModel for IntegerWorld {
    type Elem = BigInt;
    type Ideal = BigInt;
    type Module = ArtinianGroup;
    type Prime = u64;

    fn colon(&self, n: &ArtinianGroup, elems: &[BigInt]) -> Result<ArtinianGroup> {
        use num_integer::Integer;
        let g = elems.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        Ok(if elems.is_empty() { n.clone() } else { n.colon(&g) })
    }

    fn quotient(&self, n: &ArtinianGroup, x: &BigInt) -> Result<ArtinianGroup> {
        Ok(n.quotient_by(x))
    }

    fn length(&self, n: &ArtinianGroup) -> Length {
        n.length()
    }

    fn attached_non_maximal(&self, n: &ArtinianGroup) -> Result<Vec<u64>> {
        Ok(if n.has_prufer() { vec![0] } else { Vec::new() })
    }

    fn prime_contains(&self, p: &u64, x: &BigInt) -> bool {
        if *p == 0 {
            x.is_zero()
        } else {
            (x % BigInt::from(*p)).is_zero()
        }
    }

    fn ideal_contains(&self, a: &BigInt, x: &BigInt) -> bool {
        if a.is_zero() {
            x.is_zero()
        } else {
            (x % a).is_zero()
        }
    }

    fn avoid(&self, a: &BigInt, primes: &[u64], skip: usize) -> Result<AvoidOutcome<BigInt, u64>> {
        for &p in primes {
            if self.ideal_contains(&BigInt::from(p), a) {
                return Ok(AvoidOutcome::Contained(p));
            }
        }
        if a.is_zero() {
            return Ok(AvoidOutcome::Element(BigInt::zero()));
        }
        let mut found = 0;
        // multiples c * a with c = 1, -1, 2, -2, ...
        for k in 1..=self.budget as i64 {
            let c = if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) };
            let e = a.abs() * c;
            if primes.iter().any(|p| self.prime_contains(p, &e)) {
                continue;
            }
            if found == skip {
                return Ok(AvoidOutcome::Element(e));
            }
            found += 1;
        }
        Err(Error::SearchBudgetExceeded { budget: self.budget })
    }

    fn format_elem(&self, x: &BigInt) -> String {
        x.to_string()
    }

    fn format_prime(&self, p: &u64) -> String {
        format!("({p})")
    }

    fn format_ideal(&self, a: &BigInt) -> String {
        format!("({})", a.abs())
    }
}

/// Evidence for one step of a filter coregular sequence.
#[derive(Clone, Debug, Serialize)]
pub struct StepCertificate {
    pub element: String,
    /// Length of `(0 :_N prefix) / x (0 :_N prefix)`.
    pub subquotient_length: Length,
    /// Non-maximal attached primes of `(0 :_N prefix)` the element avoids;
    /// absent when attached primes were out of reach.
    pub avoided: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FilterSequence<E> {
    #[serde(skip)]
    pub elements: Vec<E>,
    pub steps: Vec<StepCertificate>,
    pub ideal: String,
    /// No element of the ideal extends the sequence.
    pub maximal: bool,
    /// Non-maximal attached prime containing the ideal, when maximal.
    pub obstruction: Option<String>,
}

impl<E> FilterSequence<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn formatted(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.element.clone()).collect()
    }
}

/// Decides whether `x` continues `prefix` on `n`, by the finite-length test
/// on the step subquotient and by avoidance of the non-maximal attached
/// primes of `(0 :_N prefix)`. The two must agree.
pub fn is_filter_coregular_step<W: CoregularModel>(
    w: &W,
    n: &W::Module,
    prefix: &[W::Elem],
    x: &W::Elem,
) -> Result<(bool, StepCertificate)> {
    let current = w.colon(n, prefix)?;
    let sub = w.quotient(&current, x)?;
    let length = w.length(&sub);
    let by_length = length.is_finite();
    let (avoided, note) = match w.attached_non_maximal(&current) {
        Ok(primes) => {
            let by_att = primes.iter().all(|p| !w.prime_contains(p, x));
            if by_att != by_length {
                return Err(Error::InternalInconsistency(format!(
                    "step {} : subquotient length {length} but attached-prime route says {by_att}",
                    w.format_elem(x)
                )));
            }
            (Some(primes.iter().map(|p| w.format_prime(p)).collect()), None)
        }
        Err(e) if e.is_unsupported() => (None, Some(format!("attached primes unavailable, length route only: {e}"))),
        Err(e) => return Err(e),
    };
    Ok((by_length, StepCertificate { element: w.format_elem(x), subquotient_length: length, avoided, note }))
}

/// Greedy extension of `prefix` inside `a` up to `target` elements. Step `k`
/// takes the `choice(k)`-th avoiding candidate (0 for the canonical one).
pub fn extend_coregular_sequence<W: CoregularModel>(
    w: &W,
    n: &W::Module,
    a: &W::Ideal,
    prefix: &[W::Elem],
    target: usize,
    choice: &dyn Fn(usize) -> usize,
) -> Result<FilterSequence<W::Elem>> {
    let mut seq = FilterSequence { elements: Vec::new(), steps: Vec::new(), ideal: w.format_ideal(a), maximal: false, obstruction: None };
    for x in prefix {
        if !w.ideal_contains(a, x) {
            return Err(Error::InvalidArgument(format!("{} is not in {}", w.format_elem(x), seq.ideal)));
        }
        let (ok, cert) = is_filter_coregular_step(w, n, &seq.elements, x)?;
        if !ok {
            return Err(Error::InvalidArgument(format!("{} does not continue the sequence", w.format_elem(x))));
        }
        seq.elements.push(x.clone());
        seq.steps.push(cert);
    }
    while seq.len() < target {
        let current = w.colon(n, &seq.elements)?;
        let bad = if w.length(&current).is_finite() { Vec::new() } else { w.attached_non_maximal(&current)? };
        match w.avoid(a, &bad, choice(seq.len()))? {
            AvoidOutcome::Contained(p) => {
                seq.maximal = true;
                seq.obstruction = Some(w.format_prime(&p));
                break;
            }
            AvoidOutcome::Element(x) => {
                let (ok, cert) = is_filter_coregular_step(w, n, &seq.elements, &x)?;
                if !ok {
                    return Err(Error::InternalInconsistency(format!("avoiding element {} fails the step test", w.format_elem(&x))));
                }
                seq.elements.push(x);
                seq.steps.push(cert);
            }
        }
    }
    Ok(seq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Width {
    Finite(usize),
    Infinite,
    Undetermined,
}

impl fmt::Display for Width {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Width::Finite(n) => write!(f, "{n}"),
            Width::Infinite => write!(f, "infinity"),
            Width::Undetermined => write!(f, "undetermined"),
        }
    }
}

impl Serialize for Width {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Width::Finite(n) => s.serialize_u64(*n as u64),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WidthWitness {
    /// `(0 :_N prefix)` has finite length after `prefix_length` steps.
    FiniteLength { prefix_length: usize, length: Length },
    /// The ideal lies in a non-maximal attached prime of the last colon module.
    Obstruction { prime: String },
    Undetermined { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct WidthResult<E> {
    pub value: Width,
    pub sequence: FilterSequence<E>,
    pub witness: WidthWitness,
}

/// `fwidth(a, N)`: `∞` as soon as a prefix colon module has finite length,
/// otherwise the length of a maximal greedy filter coregular sequence.
pub fn fwidth<W: CoregularModel>(w: &W, a: &W::Ideal, n: &W::Module) -> Result<WidthResult<W::Elem>> {
    let mut seq = FilterSequence { elements: Vec::new(), steps: Vec::new(), ideal: w.format_ideal(a), maximal: false, obstruction: None };
    loop {
        let current = w.colon(n, &seq.elements)?;
        let length = w.length(&current);
        if length.is_finite() {
            let witness = WidthWitness::FiniteLength { prefix_length: seq.len(), length };
            return Ok(WidthResult { value: Width::Infinite, sequence: seq, witness });
        }
        if seq.len() >= MAX_STEPS {
            let witness = WidthWitness::Undetermined { reason: format!("no conclusion after {MAX_STEPS} steps") };
            return Ok(WidthResult { value: Width::Undetermined, sequence: seq, witness });
        }
        let bad = match w.attached_non_maximal(&current) {
            Ok(b) => b,
            Err(e) if e.is_unsupported() => {
                let witness = WidthWitness::Undetermined { reason: e.to_string() };
                return Ok(WidthResult { value: Width::Undetermined, sequence: seq, witness });
            }
            Err(e) => return Err(e),
        };
        match w.avoid(a, &bad, 0)? {
            AvoidOutcome::Contained(p) => {
                seq.maximal = true;
                seq.obstruction = Some(w.format_prime(&p));
                let witness = WidthWitness::Obstruction { prime: w.format_prime(&p) };
                return Ok(WidthResult { value: Width::Finite(seq.len()), sequence: seq, witness });
            }
            AvoidOutcome::Element(x) => {
                let (ok, cert) = is_filter_coregular_step(w, n, &seq.elements, &x)?;
                if !ok {
                    return Err(Error::InternalInconsistency(format!("avoiding element {} fails the step test", w.format_elem(&x))));
                }
                seq.elements.push(x);
                seq.steps.push(cert);
            }
        }
    }
}

/// `fdepth(a, L)`: `∞` when `L / aL` has finite length, otherwise the length
/// of a maximal greedy filter regular sequence in `a` on `L`.
pub fn fdepth(a: &Ideal, l: &FGModule, budget: usize) -> Result<WidthResult<Poly>> {
    l.ring().ensure_same(a.ring())?;
    let ring = l.ring().clone();
    let w = GradedWorld::new(&ring).with_budget(budget);
    let mut seq = FilterSequence { elements: Vec::new(), steps: Vec::new(), ideal: a.format(), maximal: false, obstruction: None };
    let total = l.quotient_by_ideal(a)?.length();
    if total.is_finite() {
        let witness = WidthWitness::FiniteLength { prefix_length: 0, length: total };
        return Ok(WidthResult { value: Width::Infinite, sequence: seq, witness });
    }
    loop {
        let current = if seq.is_empty() { l.clone() } else { l.quotient_by_ideal(&Ideal::new(&ring, seq.elements.clone())?)? };
        let length = current.length();
        if length.is_finite() {
            let witness = WidthWitness::FiniteLength { prefix_length: seq.len(), length };
            return Ok(WidthResult { value: Width::Infinite, sequence: seq, witness });
        }
        if seq.len() >= MAX_STEPS {
            let witness = WidthWitness::Undetermined { reason: format!("no conclusion after {MAX_STEPS} steps") };
            return Ok(WidthResult { value: Width::Undetermined, sequence: seq, witness });
        }
        let ass = match associated_primes(&current) {
            Ok(p) => p,
            Err(e) if e.is_unsupported() => {
                let witness = WidthWitness::Undetermined { reason: e.to_string() };
                return Ok(WidthResult { value: Width::Undetermined, sequence: seq, witness });
            }
            Err(e) => return Err(e),
        };
        let bad: Vec<PrimeIdeal> = ass.non_maximal().into_iter().cloned().collect();
        match w.avoid(a, &bad, 0)? {
            AvoidOutcome::Contained(p) => {
                seq.maximal = true;
                seq.obstruction = Some(p.to_string());
                let witness = WidthWitness::Obstruction { prime: p.to_string() };
                return Ok(WidthResult { value: Width::Finite(seq.len()), sequence: seq, witness });
            }
            AvoidOutcome::Element(x) => {
                let torsion = current.colon_submodule(&Ideal::new(&ring, vec![x.clone()])?)?.length();
                if !torsion.is_finite() {
                    return Err(Error::InternalInconsistency(format!("{} is not filter regular", ring.format(&x))));
                }
                let avoided = Some(bad.iter().map(|p| p.to_string()).collect());
                seq.steps.push(StepCertificate { element: ring.format(&x), subquotient_length: torsion, avoided, note: None });
                seq.elements.push(x);
            }
        }
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

    fn ideal(r: &RingRef, gens: &[&str]) -> Ideal {
        if gens.is_empty() {
            Ideal::zero(r)
        } else {
            Ideal::parse(r, gens).unwrap()
        }
    }

    #[test]
    fn step_examples() {
        let r = local();
        let w = GradedWorld::new(&r);
        let x = r.parse("x").unwrap();
        assert!(is_filter_coregular_step(&w, &dual(&r, &[]), &[], &x).unwrap().0);
        assert!(!is_filter_coregular_step(&w, &dual(&r, &["x"]), &[], &x).unwrap().0);
        let zw = IntegerWorld::default();
        assert!(is_filter_coregular_step(&zw, &ArtinianGroup::prufer(2), &[], &BigInt::from(2)).unwrap().0);
    }

    #[test]
    fn extension_examples() {
        let r = local();
        let w = GradedWorld::new(&r);
        let s = extend_coregular_sequence(&w, &dual(&r, &[]), &ideal(&r, &["x"]), &[], 2, &|_| 0).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.maximal);
        assert_eq!(s.obstruction.as_deref(), Some("(x)"));
        let s = extend_coregular_sequence(&w, &dual(&r, &["x"]), &ideal(&r, &["x", "y"]), &[], 3, &|_| 0).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.formatted()[0], "y");
        let s = extend_coregular_sequence(&w, &DualModule::zero(&r).unwrap(), &ideal(&r, &["x"]), &[], 5, &|_| 0).unwrap();
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn fwidth_examples() {
        let r = local();
        let w = GradedWorld::new(&r);
        let e1 = fwidth(&w, &ideal(&r, &["x"]), &dual(&r, &[])).unwrap();
        assert_eq!(e1.value, Width::Finite(1));
        let e3 = fwidth(&w, &ideal(&r, &["x", "y"]), &dual(&r, &["x"])).unwrap();
        assert_eq!(e3.value, Width::Infinite);
        assert!(matches!(e3.witness, WidthWitness::FiniteLength { prefix_length: 1, .. }));
        assert_eq!(fwidth(&w, &ideal(&r, &[]), &dual(&r, &[])).unwrap().value, Width::Finite(0));
        let zw = IntegerWorld::default();
        let p = ArtinianGroup::prufer(2);
        assert_eq!(fwidth(&zw, &BigInt::from(6), &p).unwrap().value, Width::Infinite);
        assert_eq!(fwidth(&zw, &BigInt::zero(), &p).unwrap().value, Width::Finite(0));
    }

    #[test]
    fn fdepth_examples() {
        let r = local();
        let free = FGModule::free(&r, 1);
        assert_eq!(fdepth(&ideal(&r, &["x"]), &free, DEFAULT_AVOID_BUDGET).unwrap().value, Width::Finite(1));
        assert_eq!(fdepth(&ideal(&r, &["x", "y"]), &free, DEFAULT_AVOID_BUDGET).unwrap().value, Width::Infinite);
        assert_eq!(fdepth(&ideal(&r, &[]), &free, DEFAULT_AVOID_BUDGET).unwrap().value, Width::Finite(0));
    }
}
