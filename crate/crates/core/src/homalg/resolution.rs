use crate::error::{Error, Result};
use crate::ring::groebner::{self, ExtendedBasis};
use crate::ring::{Poly, RingRef, Vector};

use super::FGModule;

// Above this many generators the quadratic redundancy check is skipped.
const PRUNE_LIMIT: usize = 48;

/// Reduces entries modulo the ring relations, drops zero and repeated
/// generators, then removes generators lying in the span of the rest.
/// For homogeneous input the result is a minimal generating set.
pub fn prune_generators(ring: &RingRef, rank: usize, gens: Vec<Vector>) -> Vec<Vector> {
    let field = ring.field();
    let mut out: Vec<Vector> = Vec::new();
    for g in gens {
        let g = Vector(g.0.iter().map(|p| ring.reduce(p)).collect()).make_monic(field);
        if !g.is_zero() && !out.contains(&g) {
            out.push(g);
        }
    }
    if out.len() > PRUNE_LIMIT {
        return out;
    }
    let jv = ring.relation_vectors(rank);
    let degree = |v: &Vector| v.0.iter().filter_map(Poly::total_degree).max().unwrap_or(0);
    let mut order: Vec<usize> = (0..out.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse((degree(&out[i]), i)));
    let mut keep = vec![true; out.len()];
    for i in order {
        let others: Vec<Vector> = out
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && keep[*j])
            .map(|(_, v)| v.clone())
            .chain(jv.iter().cloned())
            .collect();
        if others.is_empty() {
            continue;
        }
        let gb = groebner::groebner(&others, field);
        if groebner::reduce(&out[i], &gb, field).is_zero() {
            keep[i] = false;
        }
    }
    out.into_iter().zip(keep).filter(|(_, k)| *k).map(|(v, _)| v).collect()
}

/// Generators of the kernel of the map `S^cols.len() -> S^target_rank / J`
/// whose columns are `cols`.
pub fn syzygy(ring: &RingRef, target_rank: usize, cols: &[Vector]) -> Vec<Vector> {
    if cols.is_empty() {
        return Vec::new();
    }
    let n = ring.nvars();
    if target_rank == 0 {
        let units = (0..cols.len()).map(|i| Vector::unit(cols.len(), n, i)).collect();
        return prune_generators(ring, cols.len(), units);
    }
    let ext = ExtendedBasis::new(target_rank, n, cols, &ring.relation_vectors(target_rank), ring.field());
    prune_generators(ring, cols.len(), ext.syzygies())
}

/// `0 <- F_0 <- F_1 <- ... <- F_len` with `coker d_1` the resolved module.
/// `maps[i]` holds the columns of `d_{i+1} : F_{i+1} -> F_i`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    ring: RingRef,
    module: FGModule,
    ranks: Vec<usize>,
    maps: Vec<Vec<Vector>>,
    complete: bool,
}

impl FreeResolution {
    /// Resolves `module` keeping its generators as the basis of `F_0`.
    pub fn of_presentation(module: &FGModule, length: usize) -> Self {
        let ring = module.ring().clone();
        let mut ranks = vec![module.ngens()];
        let mut maps: Vec<Vec<Vector>> = Vec::new();
        let mut complete = false;
        for k in 0..length {
            let cols = if k == 0 {
                prune_generators(&ring, module.ngens(), module.relations().to_vec())
            } else {
                syzygy(&ring, ranks[k - 1], &maps[k - 1])
            };
            if cols.is_empty() {
                complete = true;
                break;
            }
            ranks.push(cols.len());
            maps.push(cols);
        }
        if !complete && length > 0 && syzygy(&ring, ranks[length - 1], &maps[length - 1]).is_empty() {
            complete = true;
        }
        FreeResolution { ring, module: module.clone(), ranks, maps, complete }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn module(&self) -> &FGModule {
        &self.module
    }

    /// Number of computed differentials.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// The resolution stopped because a syzygy module vanished.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Rank of `F_i`; zero past the computed range.
    pub fn rank(&self, i: usize) -> usize {
        self.ranks.get(i).copied().unwrap_or(0)
    }

    /// Columns of `d_i : F_i -> F_{i-1}`, `i >= 1`; empty past the computed range.
    pub fn differential(&self, i: usize) -> &[Vector] {
        assert!(i >= 1, "differentials start at d_1");
        self.maps.get(i - 1).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Checks `d_i d_{i+1} = 0` modulo the ring relations.
    pub fn is_complex(&self) -> bool {
        let field = self.ring.field();
        for i in 1..self.maps.len() {
            let rank = self.rank(i - 1);
            for c in self.differential(i + 1) {
                let v = apply(self.differential(i), c, rank, self.ring.nvars(), field);
                if !Vector(v.0.iter().map(|p| self.ring.reduce(p)).collect()).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Resolution of length `length`; the module is minimalized first in the graded or local case.
pub fn free_resolution(module: &FGModule, length: usize) -> FreeResolution {
    if module.is_graded() || module.ring().is_local() {
        FreeResolution::of_presentation(&module.minimal_presentation(), length)
    } else {
        FreeResolution::of_presentation(module, length)
    }
}

/// `sum_i v_i cols[i]` in `S^rank`.
pub(crate) fn apply(cols: &[Vector], v: &Vector, rank: usize, nvars: usize, field: &crate::ring::CoefficientField) -> Vector {
    let mut acc = Vector::zero(rank, nvars);
    for (c, col) in v.0.iter().zip(cols) {
        if !c.is_zero() {
            acc = acc.add(&col.mul_poly(c, field), field);
        }
    }
    acc
}

/// Lifts a map of modules, given on `F_0` by `phi0` (images of the basis of
/// the source `F_0` in the target `G_0`), to a chain map up to degree `upto`.
pub fn lift_chain_map(source: &FreeResolution, target: &FreeResolution, phi0: Vec<Vector>, upto: usize) -> Result<Vec<Vec<Vector>>> {
    let ring = source.ring();
    let field = ring.field();
    let n = ring.nvars();
    let mut phis = vec![phi0];
    for k in 1..=upto {
        let src = source.differential(k);
        let tgt = target.differential(k);
        let prev_rank = target.rank(k - 1);
        let rank = target.rank(k);
        let ext = (!tgt.is_empty()).then(|| ExtendedBasis::new(prev_rank, n, tgt, &ring.relation_vectors(prev_rank), field));
        let mut cols = Vec::with_capacity(src.len());
        for c in src {
            let t = apply(&phis[k - 1], c, prev_rank, n, field);
            let t = Vector(t.0.iter().map(|p| ring.reduce(p)).collect());
            let col = match &ext {
                Some(e) => e.lift(&t, field),
                None => t.is_zero().then(|| Vector::zero(rank, n)),
            };
            cols.push(col.ok_or_else(|| Error::InternalInconsistency(format!("chain map does not lift in degree {k}")))?);
        }
        phis.push(cols);
    }
    Ok(phis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CoefficientField, Ideal, PolyRing};

    fn qxy() -> RingRef {
        PolyRing::new(CoefficientField::Rationals, &["x", "y"]).unwrap()
    }

    fn v(r: &RingRef, es: &[&str]) -> Vector {
        Vector(es.iter().map(|s| r.parse(s).unwrap()).collect())
    }

    #[test]
    fn koszul_syzygies() {
        let r = qxy();
        let s = syzygy(&r, 1, &[v(&r, &["x"]), v(&r, &["y"])]);
        assert_eq!(s.len(), 1);
        assert!(s[0] == v(&r, &["y", "-x"]) || s[0] == v(&r, &["-y", "x"]));
        let id = [v(&r, &["1", "0"]), v(&r, &["0", "1"])];
        assert!(syzygy(&r, 2, &id).is_empty());
        let s = syzygy(&r, 1, &[v(&r, &["x^2"]), v(&r, &["x*y"])]);
        assert_eq!(s.len(), 1);
        assert!(s[0] == v(&r, &["y", "-x"]) || s[0] == v(&r, &["-y", "x"]));
    }

    #[test]
    fn koszul_resolution() {
        let r = qxy();
        let m = FGModule::cyclic(&Ideal::parse(&r, &["x", "y"]).unwrap());
        let res = free_resolution(&m, 4);
        assert_eq!((res.rank(0), res.rank(1), res.rank(2), res.rank(3)), (1, 2, 1, 0));
        assert!(res.is_complete());
        assert!(res.is_complex());
        let free = free_resolution(&FGModule::free(&r, 1), 3);
        assert_eq!(free.len(), 0);
    }

    #[test]
    fn resolution_over_quotient_ring_is_periodic() {
        let f = CoefficientField::Rationals;
        let vars = vec!["x".to_string(), "y".to_string()];
        let rel = crate::ring::parse::parse_poly("x*y", &vars, &f).unwrap();
        let r = PolyRing::with_relations(f, vars, vec![rel], true).unwrap();
        let m = FGModule::cyclic(&Ideal::parse(&r, &["x"]).unwrap());
        let res = free_resolution(&m, 4);
        // R/(x) over k[x,y]/(xy): ... -> R -(x)-> R -(y)-> R -(x)-> R
        assert_eq!((1..=4).map(|i| res.rank(i)).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        assert!(res.is_complex());
        assert!(!res.is_complete());
    }

    #[test]
    fn chain_map_of_natural_surjection() {
        let r = qxy();
        let big = FGModule::cyclic(&Ideal::parse(&r, &["x^2", "y"]).unwrap());
        let small = FGModule::cyclic(&Ideal::parse(&r, &["x", "y"]).unwrap());
        let rb = FreeResolution::of_presentation(&big, 3);
        let rs = FreeResolution::of_presentation(&small, 3);
        let phis = lift_chain_map(&rb, &rs, vec![v(&r, &["1"])], 2).unwrap();
        assert_eq!(phis.len(), 3);
    }
}
