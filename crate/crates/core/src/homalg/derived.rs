use std::sync::{Arc, OnceLock};

use crate::error::Result;
use crate::ring::groebner::{self, ExtendedBasis};
use crate::ring::{RingRef, Vector};

use super::resolution::{apply, free_resolution, FreeResolution};
use super::{FGModule, Length};

/// The module `(<gens> + <rels>) / <rels>` inside `S^rank / J S^rank`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ring: RingRef,
    rank: usize,
    gens: Vec<Vector>,
    rels: Vec<Vector>,
    rel_basis: Arc<OnceLock<Vec<Vector>>>,
    lift_basis: Arc<OnceLock<ExtendedBasis>>,
}

impl Subquotient {
    pub fn new(ring: &RingRef, rank: usize, gens: Vec<Vector>, rels: Vec<Vector>) -> Self {
        Subquotient {
            ring: ring.clone(),
            rank,
            gens,
            rels,
            rel_basis: Arc::new(OnceLock::new()),
            lift_basis: Arc::new(OnceLock::new()),
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    /// Rank of the ambient free module.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gens(&self) -> &[Vector] {
        &self.gens
    }

    pub fn rels(&self) -> &[Vector] {
        &self.rels
    }

    fn all_rels(&self) -> Vec<Vector> {
        let mut v = self.rels.clone();
        v.extend(self.ring.relation_vectors(self.rank));
        v
    }

    fn rel_groebner(&self) -> &[Vector] {
        self.rel_basis.get_or_init(|| groebner::groebner(&self.all_rels(), self.ring.field()))
    }

    fn lifter(&self) -> &ExtendedBasis {
        self.lift_basis.get_or_init(|| {
            ExtendedBasis::new(self.rank, self.ring.nvars(), &self.gens, &self.all_rels(), self.ring.field())
        })
    }

    /// `v` lies in `<rels> + J`, i.e. is zero in the subquotient.
    pub fn is_zero_element(&self, v: &Vector) -> bool {
        self.rank == 0 || groebner::reduce(v, self.rel_groebner(), self.ring.field()).is_zero()
    }

    /// Coefficients on `gens` of an ambient element of `<gens> + <rels>`.
    pub fn coordinates(&self, v: &Vector) -> Option<Vector> {
        if self.gens.is_empty() {
            return self.is_zero_element(v).then(|| Vector(Vec::new()));
        }
        self.lifter().lift(v, self.ring.field())
    }

    /// Presentation on the given generators.
    pub fn presentation(&self) -> FGModule {
        if self.gens.is_empty() {
            return FGModule::zero(&self.ring);
        }
        let syz = self.lifter().syzygies();
        FGModule::new(&self.ring, self.gens.len(), syz).expect("syzygies have the right shape")
    }

    /// Minimal presentation.
    pub fn reduced(&self) -> FGModule {
        self.presentation().minimal_presentation()
    }

    pub fn length(&self) -> Length {
        self.presentation().length()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().all(|g| self.is_zero_element(g))
    }
}

/// A map of subquotients induced by an ambient matrix (`columns[i]` is the
/// image of the i-th ambient basis vector of the source).
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub source: Subquotient,
    pub target: Subquotient,
    pub columns: Vec<Vector>,
}

impl InducedMap {
    pub fn new(source: Subquotient, target: Subquotient, columns: Vec<Vector>) -> Self {
        InducedMap { source, target, columns }
    }

    fn image(&self, v: &Vector) -> Vector {
        let ring = self.target.ring();
        apply(&self.columns, v, self.target.rank(), ring.nvars(), ring.field())
    }

    fn gen_images(&self) -> Vec<Vector> {
        self.source.gens().iter().map(|g| self.image(g)).collect()
    }

    /// Generators land in the target and relations go to zero.
    pub fn is_well_defined(&self) -> bool {
        self.source.gens().iter().all(|g| self.target.coordinates(&self.image(g)).is_some())
            && self.source.rels().iter().all(|r| self.target.is_zero_element(&self.image(r)))
    }

    pub fn is_surjective(&self) -> bool {
        let ring = self.target.ring();
        if self.target.rank() == 0 {
            return true;
        }
        let mut span = self.gen_images();
        span.extend(self.target.all_rels());
        let gb = groebner::groebner(&span, ring.field());
        self.target.gens().iter().all(|g| groebner::reduce(g, &gb, ring.field()).is_zero())
    }

    pub fn is_injective(&self) -> bool {
        let ring = self.source.ring();
        let images = self.gen_images();
        if images.is_empty() {
            return true;
        }
        if self.target.rank() == 0 {
            return self.source.is_zero();
        }
        let ext = ExtendedBasis::new(self.target.rank(), ring.nvars(), &images, &self.target.all_rels(), ring.field());
        ext.syzygies().iter().all(|u| {
            let v = apply(self.source.gens(), u, self.source.rank(), ring.nvars(), ring.field());
            self.source.is_zero_element(&v)
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Matrix of `A (x) L` for `A : F -> G` given by columns, `l` = generators of `L`.
/// Basis `e_m (x) g_a` has index `m * l + a`.
pub fn tensor_matrix(cols: &[Vector], target_rank: usize, l: usize) -> Vec<Vector> {
    let nvars = cols.first().and_then(|c| c.0.first()).map(|p| p.nvars()).unwrap_or(0);
    let mut out = Vec::with_capacity(cols.len() * l);
    for col in cols {
        for a in 0..l {
            let mut v = Vector::zero(target_rank * l, nvars);
            for (k, p) in col.0.iter().enumerate() {
                v.0[k * l + a] = p.clone();
            }
            out.push(v);
        }
    }
    out
}

/// Matrix of `Hom(A, L) : Hom(G, L) -> Hom(F, L)` for `A : F -> G` given by
/// columns, with `Hom(F, L) = L^rank F` indexed as in `tensor_matrix`.
pub fn hom_matrix(cols: &[Vector], source_rank_g: usize, l: usize) -> Vec<Vector> {
    let nvars = cols.first().and_then(|c| c.0.first()).map(|p| p.nvars()).unwrap_or(0);
    let f_rank = cols.len();
    let mut out = Vec::with_capacity(source_rank_g * l);
    for k in 0..source_rank_g {
        for a in 0..l {
            let mut v = Vector::zero(f_rank * l, nvars);
            for (m, col) in cols.iter().enumerate() {
                v.0[m * l + a] = col.0[k].clone();
            }
            out.push(v);
        }
    }
    out
}

/// Relations of `L^copies`.
fn block_relations(l: &FGModule, copies: usize) -> Vec<Vector> {
    let nvars = l.ring().nvars();
    let lr = l.ngens();
    let mut out = Vec::new();
    for b in 0..copies {
        for r in l.relations() {
            out.push(Vector::zero(b * lr, nvars).concat(r).concat(&Vector::zero((copies - b - 1) * lr, nvars)));
        }
    }
    out
}

fn kernel(ring: &RingRef, mid_rank: usize, cols: &[Vector], target_rank: usize, target_rels: Vec<Vector>) -> Vec<Vector> {
    let n = ring.nvars();
    if target_rank == 0 || cols.is_empty() {
        return (0..mid_rank).map(|i| Vector::unit(mid_rank, n, i)).collect();
    }
    let mut rels = target_rels;
    rels.extend(ring.relation_vectors(target_rank));
    ExtendedBasis::new(target_rank, n, cols, &rels, ring.field()).syzygies()
}

/// `Tor_i` as the homology of `F_. (x) L` at `F_i (x) L`; needs `res` of length `i + 1`
/// or complete.
pub fn tor_subquotient(res: &FreeResolution, l: &FGModule, i: usize) -> Subquotient {
    let ring = res.ring();
    let lr = l.ngens();
    let ri = res.rank(i);
    let mid = ri * lr;
    let ker = if i == 0 {
        kernel(ring, mid, &[], 0, Vec::new())
    } else {
        let prev = res.rank(i - 1);
        let cols = tensor_matrix(res.differential(i), prev, lr);
        kernel(ring, mid, &cols, prev * lr, block_relations(l, prev))
    };
    let mut rels = block_relations(l, ri);
    rels.extend(tensor_matrix(res.differential(i + 1), ri, lr));
    Subquotient::new(ring, mid, ker, rels)
}

/// `Ext^i` as the cohomology of `Hom(F_., L)` at `Hom(F_i, L)`; needs `res` of
/// length `i + 1` or complete.
pub fn ext_subquotient(res: &FreeResolution, l: &FGModule, i: usize) -> Subquotient {
    let ring = res.ring();
    let lr = l.ngens();
    let ri = res.rank(i);
    let mid = ri * lr;
    let next = res.rank(i + 1);
    let cols = hom_matrix(res.differential(i + 1), ri, lr);
    let ker = kernel(ring, mid, &cols, next * lr, block_relations(l, next));
    let mut rels = block_relations(l, ri);
    if i > 0 {
        rels.extend(hom_matrix(res.differential(i), res.rank(i - 1), lr));
    }
    Subquotient::new(ring, mid, ker, rels)
}

/// `Tor_i(M, L)` as a reduced presentation.
pub fn tor(m: &FGModule, l: &FGModule, i: usize) -> Result<FGModule> {
    m.ring().ensure_same(l.ring())?;
    let res = free_resolution(m, i + 1);
    Ok(tor_subquotient(&res, l, i).reduced())
}

/// `Ext^i(M, L)` as a reduced presentation.
pub fn ext(m: &FGModule, l: &FGModule, i: usize) -> Result<FGModule> {
    m.ring().ensure_same(l.ring())?;
    let res = free_resolution(m, i + 1);
    Ok(ext_subquotient(&res, l, i).reduced())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CoefficientField, Ideal, PolyRing};

    fn qxy() -> RingRef {
        PolyRing::new(CoefficientField::Rationals, &["x", "y"]).unwrap()
    }

    fn cyc(r: &RingRef, gens: &[&str]) -> FGModule {
        FGModule::cyclic(&Ideal::parse(r, gens).unwrap())
    }

    #[test]
    fn tor_examples() {
        let r = qxy();
        let t0 = tor(&cyc(&r, &["x"]), &cyc(&r, &["y"]), 0).unwrap();
        assert!(t0.same_presentation(&cyc(&r, &["x", "y"])));
        let t1 = tor(&cyc(&r, &["x"]), &cyc(&r, &["x"]), 1).unwrap();
        assert!(t1.same_presentation(&cyc(&r, &["x"])));
        let t1 = tor(&cyc(&r, &["x"]), &cyc(&r, &["y"]), 1).unwrap();
        assert!(t1.is_zero());
        let k = cyc(&r, &["x", "y"]);
        assert_eq!(tor(&k, &k, 1).unwrap().length(), Length::Finite(2));
        assert_eq!(tor(&k, &k, 2).unwrap().length(), Length::Finite(1));
        assert!(tor(&k, &k, 3).unwrap().is_zero());
    }

    #[test]
    fn ext_examples() {
        let r = qxy();
        let free = FGModule::free(&r, 1);
        let l = cyc(&r, &["x^2", "y"]);
        assert!(ext(&free, &l, 0).unwrap().same_presentation(&l));
        let e1 = ext(&cyc(&r, &["x"]), &free, 1).unwrap();
        assert!(e1.same_presentation(&cyc(&r, &["x"])));
        let e2 = ext(&cyc(&r, &["x", "y"]), &free, 2).unwrap();
        assert!(e2.same_presentation(&cyc(&r, &["x", "y"])));
        assert_eq!(e2.length(), Length::Finite(1));
        assert!(ext(&cyc(&r, &["x", "y"]), &free, 1).unwrap().is_zero());
        assert!(ext(&cyc(&r, &["x", "y"]), &free, 0).unwrap().is_zero());
    }

    #[test]
    fn tor_symmetry_on_small_pair() {
        let r = qxy();
        let a = cyc(&r, &["x^2", "x*y"]);
        let b = cyc(&r, &["y^2"]);
        for i in 0..3 {
            let ab = tor(&a, &b, i).unwrap();
            let ba = tor(&b, &a, i).unwrap();
            assert!(ab.isomorphic_hint(&ba), "Tor_{i}: {ab} vs {ba}");
        }
    }

    #[test]
    fn induced_map_on_quotients() {
        // R/(x^2) -> R/(x) induced by the identity on R
        let r = qxy();
        let n = r.nvars();
        let big = Subquotient::new(&r, 1, vec![Vector::unit(1, n, 0)], vec![Vector::from_poly(r.parse("x^2").unwrap())]);
        let small = Subquotient::new(&r, 1, vec![Vector::unit(1, n, 0)], vec![Vector::from_poly(r.parse("x").unwrap())]);
        let map = InducedMap::new(big, small, vec![Vector::unit(1, n, 0)]);
        assert!(map.is_well_defined());
        assert!(map.is_surjective());
        assert!(!map.is_injective());
    }
}
