//! Generalized local homology `H_i^a(M, N) = lim_n Tor_i(M / a^n M, N)`:
//! truncated inverse systems, the finiteness profile, and checks of the
//! equivalences and cosupport inclusions relating filter coregular
//! sequences to Tor.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::duality::{cosupport_inside_max, ArtinianModule, DualModule};
use crate::error::{Error, Result};
use crate::homalg::{ext_subquotient, hom_matrix, lift_chain_map, FGModule, FreeResolution, InducedMap, Length, Subquotient};
use crate::integer::{tor_fg_artinian, valuation, AbelianGroup, ArtinianGroup, ZCosupport};
use crate::ring::{Ideal, Vector};
use crate::sequence::{
    extend_coregular_sequence, fwidth, is_filter_coregular_step, CoregularModel, GradedWorld, IntegerWorld, StepCertificate, Width,
    WidthWitness,
};

/// Truncation depth for inverse-system slices.
#[derive(Clone, Copy, Debug)]
pub struct SliceOptions {
    pub n_max: usize,
    /// Largest depth reached by doubling `n_max`.
    pub n_cap: usize,
}

impl Default for SliceOptions {
    fn default() -> Self {
        SliceOptions { n_max: 8, n_cap: 32 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceLevel {
    pub n: usize,
    pub module: String,
    pub length: Length,
}

/// The map `T_{n+1} -> T_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub surjective: bool,
    pub injective: bool,
}

impl Transition {
    pub fn is_isomorphism(&self) -> bool {
        self.surjective && self.injective
    }
}

/// `Tor_i(M / a^n M, N)` for `n = 1..levels` with the transition maps.
#[derive(Clone, Debug, Serialize)]
pub struct InverseSystemSlice {
    pub index: usize,
    /// The ideal actually used, `a + Ann M`.
    pub ideal: String,
    pub levels: Vec<SliceLevel>,
    pub transitions: Vec<Transition>,
    /// First level from which two successive transitions are isomorphisms.
    pub stabilized_at: Option<usize>,
    /// No stabilization up to the depth cap.
    pub inconclusive: bool,
    #[serde(skip)]
    pub modules: Vec<ArtinianModule>,
}

impl InverseSystemSlice {
    pub fn stabilized(&self) -> bool {
        self.stabilized_at.is_some()
    }

    /// Length of the stable value.
    pub fn stable_length(&self) -> Option<Length> {
        self.stabilized_at.map(|n| self.levels[n - 1].length)
    }

    /// All transitions are onto.
    pub fn is_surjective_tower(&self) -> bool {
        self.transitions.iter().all(|t| t.surjective)
    }
}

fn first_stable(transitions: &[Transition]) -> Option<usize> {
    transitions.windows(2).find(|w| w[0].is_isomorphism() && w[1].is_isomorphism()).map(|w| w[0].to)
}

/// Grows a slice level by level, doubling the depth on non-stabilization.
fn grow_slice<T>(
    index: usize,
    ideal: String,
    opts: SliceOptions,
    mut level: impl FnMut(usize) -> Result<(T, ArtinianModule)>,
    mut transition: impl FnMut(&T, &T) -> Result<(bool, bool)>,
) -> Result<InverseSystemSlice> {
    let mut slice = InverseSystemSlice {
        index,
        ideal,
        levels: Vec::new(),
        transitions: Vec::new(),
        stabilized_at: None,
        inconclusive: false,
        modules: Vec::new(),
    };
    let mut raw: Vec<T> = Vec::new();
    let mut depth = opts.n_max.max(3);
    let cap = opts.n_cap.max(depth);
    let mut n = 0;
    loop {
        while n < depth {
            n += 1;
            let (t, module) = level(n)?;
            slice.levels.push(SliceLevel { n, module: module.to_string(), length: module.length() });
            slice.modules.push(module);
            if let Some(prev) = raw.last() {
                let (surjective, injective) = transition(&t, prev)?;
                slice.transitions.push(Transition { from: n, to: n - 1, surjective, injective });
            }
            raw.push(t);
            if let Some(s) = first_stable(&slice.transitions) {
                slice.stabilized_at = Some(s);
                return Ok(slice);
            }
        }
        if depth >= cap {
            slice.inconclusive = true;
            return Ok(slice);
        }
        depth = (depth * 2).min(cap);
    }
}

/// The graded slice `T_n = D(Ext^i(M / b^n M, L))` with `b = a + Ann M`;
/// transitions are dual to the maps induced on Ext by `M / b^{n+1} M -> M / b^n M`.
pub fn graded_slice(m: &FGModule, n: &DualModule, a: &Ideal, i: usize, opts: SliceOptions) -> Result<InverseSystemSlice> {
    m.ring().ensure_same(a.ring())?;
    m.ring().ensure_same(n.ring())?;
    let ring = m.ring().clone();
    let b = a.sum(&m.annihilator())?;
    let base = m.minimal_presentation();
    let l = n.predual().clone();
    let rank0 = base.ngens();
    let level = |k: usize| -> Result<((FreeResolution, Subquotient), ArtinianModule)> {
        let q = base.quotient_by_ideal(&b.power(k as u32)?)?;
        let res = FreeResolution::of_presentation(&q, i + 1);
        let e = ext_subquotient(&res, &l, i);
        let t = DualModule::new(e.reduced())?;
        Ok(((res, e), ArtinianModule::Dual(t)))
    };
    let transition = |upper: &(FreeResolution, Subquotient), lower: &(FreeResolution, Subquotient)| -> Result<(bool, bool)> {
        let nv = ring.nvars();
        let identity: Vec<Vector> = (0..rank0).map(|k| Vector::unit(rank0, nv, k)).collect();
        let phis = lift_chain_map(&upper.0, &lower.0, identity, i)?;
        let cols = hom_matrix(&phis[i], lower.0.rank(i), l.ngens());
        let map = InducedMap::new(lower.1.clone(), upper.1.clone(), cols);
        if !map.is_well_defined() {
            return Err(Error::InternalInconsistency(format!("transition map on Ext^{i} is not well defined")));
        }
        // dualizing swaps injective and surjective
        Ok((map.is_injective(), map.is_surjective()))
    };
    grow_slice(i, b.format(), opts, level, transition)
}

/// Per-component exponents of `Tor_i(Z/g, N)`.
fn cyclic_tor_exponents(n: &ArtinianGroup, g: &BigInt, i: usize) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if i > 1 {
        return out;
    }
    for &(p, e) in &n.finite {
        out.push((p, e.min(valuation(g, p))));
    }
    if i == 1 {
        for &(p, k) in &n.prufer {
            for _ in 0..k {
                out.push((p, valuation(g, p)));
            }
        }
    }
    out
}

/// Onto and one-to-one for the map `Tor_i(Z/g', N) -> Tor_i(Z/g, N)`
/// induced by the projection, `g | g'`.
fn cyclic_transition(n: &ArtinianGroup, upper: &BigInt, lower: &BigInt, i: usize) -> (bool, bool) {
    let src = cyclic_tor_exponents(n, upper, i);
    let tgt = cyclic_tor_exponents(n, lower, i);
    let c = upper / lower;
    let mut onto = true;
    let mut mono = true;
    for (&(p, s), &(_, t)) in src.iter().zip(&tgt) {
        // Tor_0 is the projection N/g'N -> N/gN; Tor_1 is multiplication by g'/g
        let image = if i == 0 { t } else { s.saturating_sub(valuation(&c, p)) };
        onto &= image == t;
        mono &= image == s;
    }
    (onto, mono)
}

/// Cyclic orders of `M / b^n M` for a finitely generated group `M`.
fn truncated_orders(m: &AbelianGroup, bn: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = (0..m.free_rank).map(|_| bn.clone()).collect();
    out.extend(m.invariant_factors.iter().map(|d| d.gcd(bn)));
    out
}

/// The slice `T_n = Tor_i(M / b^n M, N)` over `Z` with `b = (a, Ann M)`.
pub fn integer_slice(m: &AbelianGroup, n: &ArtinianGroup, a: &BigInt, i: usize, opts: SliceOptions) -> Result<InverseSystemSlice> {
    let b = a.gcd(&m.annihilator());
    let level = |k: usize| -> Result<(Vec<BigInt>, ArtinianModule)> {
        if b.is_zero() {
            return Ok((Vec::new(), ArtinianModule::Integer(tor_fg_artinian(m, n, i))));
        }
        let orders = truncated_orders(m, &num_traits::pow(b.clone(), k));
        let quotient = AbelianGroup::from_cyclic_orders(0, &orders);
        Ok((orders, ArtinianModule::Integer(tor_fg_artinian(&quotient, n, i))))
    };
    let transition = |upper: &Vec<BigInt>, lower: &Vec<BigInt>| -> Result<(bool, bool)> {
        let mut onto = true;
        let mut mono = true;
        for (u, l) in upper.iter().zip(lower) {
            let (s, j) = cyclic_transition(n, u, l, i);
            onto &= s;
            mono &= j;
        }
        Ok((onto, mono))
    };
    grow_slice(i, format!("({})", b.abs()), opts, level, transition)
}

/// Limit of a surjective tower of finite groups over `Z`: a `p`-adic
/// integer summand for every component that keeps growing, plus the
/// components that settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerLimit {
    pub p_adic: Vec<u64>,
    pub finite: Vec<(u64, u32)>,
}

impl TowerLimit {
    /// Reads the limit off the last two levels of an integer slice.
    pub fn of_slice(slice: &InverseSystemSlice) -> Option<TowerLimit> {
        if !slice.is_surjective_tower() {
            return None;
        }
        let groups: Vec<&ArtinianGroup> = slice
            .modules
            .iter()
            .map(|m| match m {
                ArtinianModule::Integer(g) => Some(g),
                ArtinianModule::Dual(_) => None,
            })
            .collect::<Option<_>>()?;
        let (last, prev) = match groups.len() {
            0 => return None,
            1 => (groups[0], groups[0]),
            k => (groups[k - 1], groups[k - 2]),
        };
        if last.has_prufer() {
            return None;
        }
        let mut lim = TowerLimit { p_adic: Vec::new(), finite: Vec::new() };
        for p in last.primes() {
            let mut cur: Vec<u32> = last.finite.iter().filter(|c| c.0 == p).map(|c| c.1).collect();
            let mut old: Vec<u32> = prev.finite.iter().filter(|c| c.0 == p).map(|c| c.1).collect();
            cur.sort_unstable_by(|x, y| y.cmp(x));
            old.sort_unstable_by(|x, y| y.cmp(x));
            old.resize(cur.len(), 0);
            for (c, o) in cur.into_iter().zip(old) {
                if c > o && !slice.stabilized() {
                    lim.p_adic.push(p);
                } else {
                    lim.finite.push((p, c));
                }
            }
        }
        Some(lim)
    }

    /// `∩_t a^t · limit = 0`: every `p`-adic summand needs `p | a`, and a
    /// finite summand `Z/p^e` is killed by `a^e` exactly when `p | a`.
    pub fn is_separated(&self, a: &BigInt) -> bool {
        let divides = |p: u64| (a % BigInt::from(p)).is_zero();
        self.p_adic.iter().all(|&p| divides(p)) && self.finite.iter().all(|&(p, _)| divides(p))
    }
}

impl fmt::Display for TowerLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.p_adic.iter().map(|p| format!("Z_{p}")).collect();
        parts.extend(self.finite.iter().map(|(p, e)| format!("Z/{}", p.pow(*e))));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// What the homology engine needs beyond the sequence engine.
pub trait HomologyWorld: CoregularModel + Sync
where
    Self::Module: Send + Sync,
    Self::Ideal: Send + Sync,
{
    type Fg: Clone + Send + Sync;
    /// A cosupport, described by an annihilator.
    type Cos: Clone + Send;

    fn format_fg(&self, m: &Self::Fg) -> String;
    fn format_module(&self, n: &Self::Module) -> String;
    fn format_cos(&self, c: &Self::Cos) -> String;
    fn annihilator(&self, m: &Self::Fg) -> Self::Ideal;
    fn ideal_sum(&self, a: &Self::Ideal, b: &Self::Ideal) -> Result<Self::Ideal>;
    /// `a ⊆ b`.
    fn ideal_inside(&self, a: &Self::Ideal, b: &Self::Ideal) -> bool;
    fn same_radical(&self, a: &Self::Ideal, b: &Self::Ideal) -> Result<bool>;
    /// `R / a`.
    fn residue(&self, a: &Self::Ideal) -> Result<Self::Fg>;
    fn tor(&self, m: &Self::Fg, n: &Self::Module, i: usize) -> Result<Self::Module>;
    fn cosupport(&self, n: &Self::Module) -> Result<Self::Cos>;
    fn cos_inside_max(&self, c: &Self::Cos) -> Result<bool>;
    /// `left ⊆ (∪ right) [∪ Max]`; `Some(witness)` on failure.
    fn cos_included(&self, left: &Self::Cos, right: &[Self::Cos], up_to_max: bool) -> Result<Option<String>>;
    fn slice(&self, m: &Self::Fg, n: &Self::Module, a: &Self::Ideal, i: usize, opts: SliceOptions) -> Result<InverseSystemSlice>;
}

impl HomologyWorld for GradedWorld {
    type Fg = FGModule;
    type Cos = Ideal;

    fn format_fg(&self, m: &FGModule) -> String {
        m.to_string()
    }

    fn format_module(&self, n: &DualModule) -> String {
        n.to_string()
    }

    fn format_cos(&self, c: &Ideal) -> String {
        format!("V{}", c.format())
    }

    fn annihilator(&self, m: &FGModule) -> Ideal {
        m.annihilator()
    }

    fn ideal_sum(&self, a: &Ideal, b: &Ideal) -> Result<Ideal> {
        let s = a.sum(b)?;
        Ideal::new(&self.ring, s.basis_in_ring())
    }

    fn ideal_inside(&self, a: &Ideal, b: &Ideal) -> bool {
        b.contains_ideal(a)
    }

    fn same_radical(&self, a: &Ideal, b: &Ideal) -> Result<bool> {
        a.same_radical(b)
    }

    fn residue(&self, a: &Ideal) -> Result<FGModule> {
        Ok(FGModule::cyclic(a))
    }

    fn tor(&self, m: &FGModule, n: &DualModule, i: usize) -> Result<DualModule> {
        n.tor_with(m, i)
    }

    fn cosupport(&self, n: &DualModule) -> Result<Ideal> {
        Ok(n.annihilator())
    }

    fn cos_inside_max(&self, c: &Ideal) -> Result<bool> {
        cosupport_inside_max(c)
    }

    fn cos_included(&self, left: &Ideal, right: &[Ideal], up_to_max: bool) -> Result<Option<String>> {
        // V(B_1) ∪ ... ∪ V(B_k) = V(B_1 ∩ ... ∩ B_k)
        let mut b = Ideal::unit(&self.ring);
        for r in right {
            b = b.intersect(r)?;
        }
        if !up_to_max {
            return Ok(if left.radical_contains_ideal(&b)? {
                None
            } else {
                Some(format!("{} is not inside the radical of {}", b.format(), left.format()))
            });
        }
        // V(A) \ V(B) ⊆ Max iff (A : g^inf) has maximal cosupport for every generator g of B
        for g in b.gens().iter().filter(|g| !g.is_zero()) {
            let sat = left.saturate(g)?;
            if !cosupport_inside_max(&sat)? {
                return Ok(Some(format!(
                    "V{} has a non-maximal prime outside V({})",
                    sat.format(),
                    self.ring.format(g)
                )));
            }
        }
        Ok(None)
    }

    fn slice(&self, m: &FGModule, n: &DualModule, a: &Ideal, i: usize, opts: SliceOptions) -> Result<InverseSystemSlice> {
        graded_slice(m, n, a, i, opts)
    }
}

impl HomologyWorld for IntegerWorld {
    type Fg = AbelianGroup;
    type Cos = ZCosupport;

    fn format_fg(&self, m: &AbelianGroup) -> String {
        m.to_string()
    }

    fn format_module(&self, n: &ArtinianGroup) -> String {
        n.to_string()
    }

    fn format_cos(&self, c: &ZCosupport) -> String {
        let mut parts: Vec<String> = c.primes.iter().map(|p| format!("({p})")).collect();
        if c.whole_spectrum {
            parts.insert(0, "Spec Z".into());
        }
        format!("{{{}}}", parts.join(", "))
    }

    fn annihilator(&self, m: &AbelianGroup) -> BigInt {
        m.annihilator()
    }

    fn ideal_sum(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a.gcd(b))
    }

    fn ideal_inside(&self, a: &BigInt, b: &BigInt) -> bool {
        if b.is_zero() {
            a.is_zero()
        } else {
            (a % b).is_zero()
        }
    }

    fn same_radical(&self, a: &BigInt, b: &BigInt) -> Result<bool> {
        Ok(ZCosupport::of_annihilator(a) == ZCosupport::of_annihilator(b))
    }

    fn residue(&self, a: &BigInt) -> Result<AbelianGroup> {
        Ok(AbelianGroup::from_cyclic_orders(0, &[a.abs()]))
    }

    fn tor(&self, m: &AbelianGroup, n: &ArtinianGroup, i: usize) -> Result<ArtinianGroup> {
        Ok(tor_fg_artinian(m, n, i))
    }

    fn cosupport(&self, n: &ArtinianGroup) -> Result<ZCosupport> {
        Ok(n.cosupport())
    }

    fn cos_inside_max(&self, c: &ZCosupport) -> Result<bool> {
        Ok(c.inside_max())
    }

    fn cos_included(&self, left: &ZCosupport, right: &[ZCosupport], up_to_max: bool) -> Result<Option<String>> {
        let union = right.iter().fold(ZCosupport { whole_spectrum: false, primes: Default::default() }, |acc, c| acc.union(c));
        if up_to_max {
            return Ok((!left.inside_up_to_max(&union)).then(|| "(0) lies in the left side only".to_string()));
        }
        Ok(left.witness_outside(&union).map(|p| format!("({p}) lies in the left side only")))
    }

    fn slice(&self, m: &AbelianGroup, n: &ArtinianGroup, a: &BigInt, i: usize, opts: SliceOptions) -> Result<InverseSystemSlice> {
        integer_slice(m, n, a, i, opts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Finiteness {
    FiniteLength,
    FinitelyGeneratedOverCompletion,
    NotFinitelyGenerated,
    Undetermined,
}

impl Finiteness {
    pub fn is_finitely_generated(&self) -> bool {
        matches!(self, Finiteness::FiniteLength | Finiteness::FinitelyGeneratedOverCompletion)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileEntry {
    pub index: usize,
    pub class: Finiteness,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slice: Option<InverseSystemSlice>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyProfile {
    pub ideal: String,
    pub module: String,
    pub artinian: String,
    /// `a + Ann M`, the ideal the width is taken over.
    pub effective_ideal: String,
    pub entries: Vec<ProfileEntry>,
    pub first_non_finitely_generated: Width,
    pub sequence: Vec<String>,
    pub steps: Vec<StepCertificate>,
    pub witness: WidthWitness,
}

impl HomologyProfile {
    pub fn all_finitely_generated(&self) -> bool {
        self.first_non_finitely_generated == Width::Infinite
    }
}

/// Classifies `H_i^a(M, N)` for `i <= i_max`: finitely generated over the
/// completion below `fwidth(a + Ann M, N)`, not finitely generated from
/// there on. With `slices`, each index below the first bad one also gets a
/// truncated inverse system, and a stable finite-length value refines the
/// class.
pub fn homology_finiteness_profile<W>(
    w: &W,
    m: &W::Fg,
    n: &W::Module,
    a: &W::Ideal,
    i_max: usize,
    slices: Option<SliceOptions>,
) -> Result<HomologyProfile>
where
    W: HomologyWorld,
    W::Module: Send + Sync,
    W::Ideal: Send + Sync,
{
    let b = w.ideal_sum(a, &w.annihilator(m))?;
    let width = fwidth(w, &b, n)?;
    let first = width.value;
    let entries: Vec<Result<ProfileEntry>> = (0..=i_max)
        .into_par_iter()
        .map(|i| {
            let below = match first {
                Width::Undetermined => return Ok(ProfileEntry { index: i, class: Finiteness::Undetermined, slice: None }),
                Width::Infinite => true,
                Width::Finite(k) => i < k,
            };
            if !below {
                return Ok(ProfileEntry { index: i, class: Finiteness::NotFinitelyGenerated, slice: None });
            }
            let slice = slices.map(|opts| w.slice(m, n, a, i, opts)).transpose()?;
            let class = match slice.as_ref().and_then(|s| s.stable_length()) {
                Some(Length::Finite(_)) => Finiteness::FiniteLength,
                _ => Finiteness::FinitelyGeneratedOverCompletion,
            };
            Ok(ProfileEntry { index: i, class, slice })
        })
        .collect();
    Ok(HomologyProfile {
        ideal: w.format_ideal(a),
        module: w.format_fg(m),
        artinian: w.format_module(n),
        effective_ideal: w.format_ideal(&b),
        entries: entries.into_iter().collect::<Result<_>>()?,
        first_non_finitely_generated: first,
        sequence: width.sequence.formatted(),
        steps: width.sequence.steps,
        witness: width.witness,
    })
}

/// `inf { i <= i_max : Tor_i(M', N) has infinite length }`.
pub fn first_infinite_tor_index<W>(w: &W, m: &W::Fg, n: &W::Module, i_max: usize) -> Result<Option<usize>>
where
    W: HomologyWorld,
    W::Module: Send + Sync,
    W::Ideal: Send + Sync,
{
    for i in 0..=i_max {
        if !w.length(&w.tor(m, n, i)?).is_finite() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClauseStatus {
    Holds,
    Fails,
    /// The clause's hypothesis on `M` is not met.
    Vacuous,
    Undetermined,
}

impl ClauseStatus {
    fn of(b: bool) -> Self {
        if b {
            ClauseStatus::Holds
        } else {
            ClauseStatus::Fails
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Clause {
    pub name: String,
    pub statement: String,
    pub status: ClauseStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub ideal: String,
    pub module: String,
    pub artinian: String,
    pub clauses: Vec<Clause>,
    /// All determined clauses have the same truth value.
    pub agreement: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

fn guarded(r: Result<(bool, String)>) -> Result<(ClauseStatus, String)> {
    match r {
        Ok((b, d)) => Ok((ClauseStatus::of(b), d)),
        Err(e) if e.is_unsupported() => Ok((ClauseStatus::Undetermined, e.to_string())),
        Err(e) => Err(e),
    }
}

/// Evaluates, for index `n`, the equivalent conditions: a filter coregular
/// sequence of length `n` in `a`; maximal cosupport of `Tor_i(R/a, N)`,
/// `i < n`; the same for `Tor_i(M, N)` and finite length of `Tor_i(M, N)`
/// when `supp M = V(a)`; finite generation of `H_i^a(M, N)`, `i < n`,
/// when `Ann M ⊆ a`.
pub fn verify_theorem_equivalences<W>(w: &W, m: &W::Fg, n: &W::Module, a: &W::Ideal, k: usize) -> Result<TheoremReport>
where
    W: HomologyWorld,
    W::Module: Send + Sync,
    W::Ideal: Send + Sync,
{
    let ann = w.annihilator(m);
    let same_support = w.same_radical(&ann, a)?;
    let ann_inside = w.ideal_inside(&ann, a);
    let mut clauses = Vec::new();

    let (status, detail) = guarded(extend_coregular_sequence(w, n, a, &[], k, &|_| 0).map(|s| {
        let found = s.formatted();
        (s.len() == k, format!("greedy sequence [{}]", found.join(", ")))
    }))?;
    clauses.push(Clause { name: "i".into(), statement: format!("a filter coregular sequence of length {k} exists in the ideal"), status, detail });

    let residue = w.residue(a)?;
    let tor_max = |mod_: &W::Fg| -> Result<(bool, String)> {
        for i in 0..k {
            let t = w.tor(mod_, n, i)?;
            if !w.cos_inside_max(&w.cosupport(&t)?)? {
                return Ok((false, format!("Tor_{i} = {} has a non-maximal cosupport", w.format_module(&t))));
            }
        }
        Ok((true, format!("Tor_i has maximal cosupport for i < {k}")))
    };
    let (status, detail) = guarded(tor_max(&residue))?;
    clauses.push(Clause { name: "iii".into(), statement: format!("Tor_i(R/a, N) has cosupport in Max for i < {k}"), status, detail });

    let unmet = |what: &str| (ClauseStatus::Vacuous, format!("{what} does not hold"));
    let (status, detail) = if same_support { guarded(tor_max(m))? } else { unmet("Supp M = V(a)") };
    clauses.push(Clause { name: "iv".into(), statement: format!("Tor_i(M, N) has cosupport in Max for i < {k}"), status, detail });

    let (status, detail) = if same_support {
        guarded((|| {
            for i in 0..k {
                let t = w.tor(m, n, i)?;
                if !w.length(&t).is_finite() {
                    return Ok((false, format!("Tor_{i} = {} has infinite length", w.format_module(&t))));
                }
            }
            Ok((true, format!("Tor_i has finite length for i < {k}")))
        })())?
    } else {
        unmet("Supp M = V(a)")
    };
    clauses.push(Clause { name: "v".into(), statement: format!("Tor_i(M, N) has finite length for i < {k}"), status, detail });

    let (status, detail) = if ann_inside {
        let p = homology_finiteness_profile(w, m, n, a, k.saturating_sub(1), None)?;
        match p.first_non_finitely_generated {
            Width::Undetermined => (ClauseStatus::Undetermined, "width undetermined".to_string()),
            Width::Infinite => (ClauseStatus::Holds, "first non-finitely-generated index is infinity".to_string()),
            Width::Finite(f) => (ClauseStatus::of(f >= k), format!("first non-finitely-generated index is {f}")),
        }
    } else {
        unmet("Ann M ⊆ a")
    };
    clauses.push(Clause { name: "vi".into(), statement: format!("H_i^a(M, N) is finitely generated over the completion for i < {k}"), status, detail });

    let determined: Vec<&Clause> =
        clauses.iter().filter(|c| matches!(c.status, ClauseStatus::Holds | ClauseStatus::Fails)).collect();
    let agreement = determined.windows(2).all(|p| p[0].status == p[1].status);
    let counterexample = (!agreement).then(|| {
        determined.iter().map(|c| format!("({}) {:?}: {}", c.name, c.status, c.detail)).collect::<Vec<_>>().join("; ")
    });
    Ok(TheoremReport {
        n: k,
        ideal: w.format_ideal(a),
        module: w.format_fg(m),
        artinian: w.format_module(n),
        clauses,
        agreement,
        counterexample,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionCheck {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub status: ClauseStatus,
    pub left: String,
    pub right: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub module: String,
    pub artinian: String,
    pub sequence: Vec<String>,
    /// Every element kills `M`.
    pub in_annihilator: bool,
    /// The elements form a filter coregular sequence on `N`.
    pub coregular: bool,
    pub checks: Vec<InclusionCheck>,
}

impl InclusionReport {
    /// No evaluated check failed.
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.status != ClauseStatus::Fails)
    }
}

/// Cosupports of `Tor_j(M, X)` for one module `X`, computed on demand.
struct TorCosupports<'a, W: HomologyWorld>
where
    W::Module: Send + Sync,
    W::Ideal: Send + Sync,
{
    w: &'a W,
    m: &'a W::Fg,
    x: W::Module,
    cache: Vec<Option<W::Cos>>,
}

impl<'a, W: HomologyWorld> TorCosupports<'a, W>
where
    W::Module: Send + Sync,
    W::Ideal: Send + Sync,
{
    fn new(w: &'a W, m: &'a W::Fg, x: W::Module) -> Self {
        TorCosupports { w, m, x, cache: Vec::new() }
    }

    fn get(&mut self, j: usize) -> Result<W::Cos> {
        if self.cache.len() <= j {
            self.cache.resize(j + 1, None);
        }
        if self.cache[j].is_none() {
            let t = self.w.tor(self.m, &self.x, j)?;
            self.cache[j] = Some(self.w.cosupport(&t)?);
        }
        Ok(self.cache[j].clone().unwrap())
    }

    /// Union over `lo..=hi`, with negative indices contributing nothing.
    fn range(&mut self, lo: i64, hi: i64) -> Result<Vec<W::Cos>> {
        let mut out = Vec::new();
        for j in lo.max(0)..=hi {
            out.push(self.get(j as usize)?);
        }
        Ok(out)
    }
}

/// Checks the cosupport inclusions tying `Tor_*(M, N)`, `Tor_*(M, (0 :_N x))`
/// and the step subquotients `(0 :_N x_<k) / x_k (0 :_N x_<k)` together, for
/// `i = 0..=i_max`:
///
/// * `2.1`: `Tor_i(M, 0:x) ⊆ ∪_{j=i}^{i+n} Tor_j(M, N) ∪ ∪_k ∪_{j=i+2}^{i+2+n-k} Tor_j(M, S_k)`
/// * `2.2` (x in Ann M): `Tor_i(M, N) ⊆ Tor_{i-n}(M, 0:x) ∪ ∪_k ∪_{j=i+1-k}^{i+2-k} Tor_j(M, S_k)`
/// * `2.3` (coregular in Ann M): `Tor_i(M, N) ⊆ Max` for `i < n`
/// * `2.4` (coregular in Ann M): `Tor_n(M, N) ∪ Max = M ⊗ (0:x) ∪ Max`
///
/// each read as a statement about cosupports.
pub fn verify_inclusions<W>(w: &W, m: &W::Fg, n: &W::Module, xs: &[W::Elem], i_max: usize) -> Result<InclusionReport>
where
    W: HomologyWorld,
    W::Module: Send + Sync,
    W::Ideal: Send + Sync,
{
    let len = xs.len();
    let ann = w.annihilator(m);
    let in_annihilator = xs.iter().all(|x| w.ideal_contains(&ann, x));
    let mut coregular = true;
    for k in 0..len {
        if !is_filter_coregular_step(w, n, &xs[..k], &xs[k])?.0 {
            coregular = false;
            break;
        }
    }
    let mut on_n = TorCosupports::new(w, m, n.clone());
    let mut on_colon = TorCosupports::new(w, m, w.colon(n, xs)?);
    let mut on_steps = Vec::with_capacity(len);
    for k in 0..len {
        let prefix = w.colon(n, &xs[..k])?;
        on_steps.push(TorCosupports::new(w, m, w.quotient(&prefix, &xs[k])?));
    }
    let show = |cs: &[W::Cos]| -> String {
        if cs.is_empty() {
            "{}".into()
        } else {
            cs.iter().map(|c| w.format_cos(c)).collect::<Vec<_>>().join(" ∪ ")
        }
    };
    let mut checks = Vec::new();
    let check = |label: &str, index: Option<usize>, left: W::Cos, right: Vec<W::Cos>, up_to_max: bool| -> Result<InclusionCheck> {
        let witness = w.cos_included(&left, &right, up_to_max)?;
        let suffix = if up_to_max { " ∪ Max" } else { "" };
        Ok(InclusionCheck {
            label: label.into(),
            index,
            status: ClauseStatus::of(witness.is_none()),
            left: w.format_cos(&left),
            right: format!("{}{suffix}", show(&right)),
            witness,
        })
    };
    let n_i = len as i64;
    for i in 0..=i_max {
        let ii = i as i64;
        let left = on_colon.get(i)?;
        let mut right = on_n.range(ii, ii + n_i)?;
        for (k, s) in on_steps.iter_mut().enumerate() {
            let k = k as i64 + 1;
            right.extend(s.range(ii + 2, ii + 2 + n_i - k)?);
        }
        checks.push(check("2.1", Some(i), left, right, false)?);
    }
    if in_annihilator {
        for i in 0..=i_max {
            let ii = i as i64;
            let left = on_n.get(i)?;
            let mut right = if ii >= n_i { vec![on_colon.get(i - len)?] } else { Vec::new() };
            for (k, s) in on_steps.iter_mut().enumerate() {
                let k = k as i64 + 1;
                right.extend(s.range(ii + 1 - k, ii + 2 - k)?);
            }
            checks.push(check("2.2", Some(i), left, right, false)?);
        }
    } else {
        checks.push(skipped("2.2", "the sequence is not inside Ann M"));
    }
    if in_annihilator && coregular {
        for i in 0..len {
            let left = on_n.get(i)?;
            checks.push(check("2.3", Some(i), left, Vec::new(), true)?);
        }
        let top = on_n.get(len)?;
        let tensor = on_colon.get(0)?;
        checks.push(check("2.4", None, top.clone(), vec![tensor.clone()], true)?);
        checks.push(check("2.4", None, tensor, vec![top], true)?);
    } else {
        let why = if in_annihilator { "the sequence is not filter coregular" } else { "the sequence is not inside Ann M" };
        checks.push(skipped("2.3", why));
        checks.push(skipped("2.4", why));
    }
    Ok(InclusionReport {
        module: w.format_fg(m),
        artinian: w.format_module(n),
        sequence: xs.iter().map(|x| w.format_elem(x)).collect(),
        in_annihilator,
        coregular,
        checks,
    })
}

fn skipped(label: &str, why: &str) -> InclusionCheck {
    InclusionCheck {
        label: label.into(),
        index: None,
        status: ClauseStatus::Vacuous,
        left: String::new(),
        right: String::new(),
        witness: Some(why.into()),
    }
}
