//! Buchberger's algorithm for submodules of free modules `S^n`, `S` a
//! polynomial ring over a field. Terms `m * e_i` are compared position over
//! term: a smaller position index is larger, ties broken by degrevlex. With
//! this order a Gröbner basis of `[v; e]`-extended generators eliminates the
//! top block, which is how syzygies and lifts are computed.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_traits::One;

use super::field::{Coeff, CoefficientField};
use super::monomial::Monomial;
use super::poly::Poly;

/// Element of a free module `S^n`, stored densely.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector(pub Vec<Poly>);

impl Vector {
    pub fn zero(rank: usize, nvars: usize) -> Self {
        Vector(vec![Poly::zero(nvars); rank])
    }

    pub fn unit(rank: usize, nvars: usize, i: usize) -> Self {
        let mut v = Self::zero(rank, nvars);
        v.0[i] = Poly::one(nvars);
        v
    }

    pub fn from_poly(p: Poly) -> Self {
        Vector(vec![p])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }

    /// Leading term: `(position, monomial, coefficient)`.
    pub fn lead(&self) -> Option<(usize, &Monomial, &Coeff)> {
        self.0
            .iter()
            .enumerate()
            .find_map(|(i, p)| p.lead().map(|(m, c)| (i, m, c)))
    }

    pub fn lead_pos(&self) -> Option<usize> {
        self.0.iter().position(|p| !p.is_zero())
    }

    pub fn add(&self, other: &Vector, f: &CoefficientField) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a.add(b, f)).collect())
    }

    pub fn sub(&self, other: &Vector, f: &CoefficientField) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a.sub(b, f)).collect())
    }

    pub fn scale(&self, c: &Coeff, f: &CoefficientField) -> Vector {
        Vector(self.0.iter().map(|p| p.scale(c, f)).collect())
    }

    pub fn mul_poly(&self, p: &Poly, f: &CoefficientField) -> Vector {
        Vector(self.0.iter().map(|q| q.mul(p, f)).collect())
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff, f: &CoefficientField) -> Vector {
        Vector(self.0.iter().map(|q| q.mul_term(m, c, f)).collect())
    }

    pub fn add_mul_term_assign(&mut self, c: &Coeff, m: &Monomial, other: &Vector, f: &CoefficientField) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            a.add_mul_term_assign(c, m, b, f);
        }
    }

    pub fn make_monic(&self, f: &CoefficientField) -> Vector {
        match self.lead() {
            Some((_, _, c)) if !c.is_one() => self.scale(&f.inv(c), f),
            _ => self.clone(),
        }
    }

    pub fn split_at(&self, n: usize) -> (Vector, Vector) {
        (Vector(self.0[..n].to_vec()), Vector(self.0[n..].to_vec()))
    }

    pub fn concat(&self, other: &Vector) -> Vector {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Vector(v)
    }
}

/// Position-over-term comparison of leading terms.
pub fn cmp_lead(a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
    match b.0.cmp(&a.0) {
        Ordering::Equal => a.1.cmp(b.1),
        o => o,
    }
}

fn find_reducer<'a>(pos: usize, m: &Monomial, basis: &'a [Vector]) -> Option<(&'a Vector, Monomial, &'a Coeff)> {
    basis.iter().find_map(|g| {
        let (gp, gm, gc) = g.lead()?;
        (gp == pos && gm.divides(m)).then(|| (g, m.div(gm), gc))
    })
}

/// Full normal form of `v` with respect to `basis` (any generating set; the
/// result is canonical only when `basis` is a Gröbner basis).
pub fn reduce(v: &Vector, basis: &[Vector], f: &CoefficientField) -> Vector {
    let nvars = v.0.first().map(Poly::nvars).unwrap_or(0);
    let mut work = v.clone();
    let mut rem = Vector::zero(v.rank(), nvars);
    loop {
        let Some(pos) = work.lead_pos() else { break };
        let (m, c) = work.0[pos].lead().cloned().unwrap();
        match find_reducer(pos, &m, basis) {
            Some((g, q, gc)) => {
                let factor = f.div(&c, gc);
                work.add_mul_term_assign(&f.neg(&factor), &q, g, f);
            }
            None => {
                work.0[pos].pop_lead();
                rem.0[pos].push_raw(m, c);
            }
        }
    }
    for p in rem.0.iter_mut() {
        p.reverse_terms();
    }
    rem
}

/// Reduces only until the leading term is irreducible.
pub fn top_reduce(v: &Vector, basis: &[Vector], f: &CoefficientField) -> Vector {
    let mut work = v.clone();
    while let Some((pos, m, c)) = work.lead() {
        let (m, c) = (m.clone(), c.clone());
        match find_reducer(pos, &m, basis) {
            Some((g, q, gc)) => {
                let factor = f.div(&c, gc);
                work.add_mul_term_assign(&f.neg(&factor), &q, g, f);
            }
            None => break,
        }
    }
    work
}

fn s_vector(a: &Vector, b: &Vector, f: &CoefficientField) -> Vector {
    let (_, ma, ca) = a.lead().unwrap();
    let (_, mb, cb) = b.lead().unwrap();
    let l = ma.lcm(mb);
    let mut s = a.mul_term(&l.div(ma), &f.inv(ca), f);
    s.add_mul_term_assign(&f.neg(&f.inv(cb)), &l.div(mb), b, f);
    s
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Gröbner basis, monic, sorted by descending leading term.
pub fn groebner(gens: &[Vector], f: &CoefficientField) -> Vec<Vector> {
    let Some(first) = gens.first() else { return Vec::new() };
    let rank = first.rank();
    let mut basis: Vec<Vector> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let add = |v: Vector, basis: &mut Vec<Vector>, pairs: &mut Vec<Pair>, pending: &mut HashSet<(usize, usize)>| {
        let v = v.make_monic(f);
        let (pv, mv, _) = v.lead().unwrap();
        let (pv, mv) = (pv, mv.clone());
        let k = basis.len();
        for (i, g) in basis.iter().enumerate() {
            let (pg, mg, _) = g.lead().unwrap();
            if pg != pv {
                continue;
            }
            // product criterion holds only for ideals
            if rank == 1 && mg.coprime(&mv) {
                continue;
            }
            pairs.push(Pair { i, j: k, lcm: mg.lcm(&mv) });
            pending.insert((i, k));
        }
        basis.push(v);
    };

    for g in gens {
        let r = reduce(g, &basis, f);
        if !r.is_zero() {
            add(r, &mut basis, &mut pairs, &mut pending);
        }
    }

    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first
        let idx = (0..pairs.len())
            .min_by(|&a, &b| {
                pairs[a]
                    .lcm
                    .cmp(&pairs[b].lcm)
                    .then((pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
            })
            .unwrap();
        let pair = pairs.swap_remove(idx);
        pending.remove(&(pair.i, pair.j));
        let pos = basis[pair.i].lead_pos().unwrap();
        let chain = (0..basis.len()).any(|k| {
            if k == pair.i || k == pair.j {
                return false;
            }
            let (pk, mk, _) = basis[k].lead().unwrap();
            let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
            pk == pos
                && mk.divides(&pair.lcm)
                && !pending.contains(&key(pair.i, k))
                && !pending.contains(&key(pair.j, k))
        });
        if chain {
            continue;
        }
        let s = s_vector(&basis[pair.i], &basis[pair.j], f);
        let r = reduce(&s, &basis, f);
        if !r.is_zero() {
            add(r, &mut basis, &mut pairs, &mut pending);
        }
    }
    interreduce(basis, f)
}

/// Minimizes and fully interreduces a Gröbner basis.
pub fn interreduce(basis: Vec<Vector>, f: &CoefficientField) -> Vec<Vector> {
    let mut minimal: Vec<Vector> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let (pg, mg, _) = g.lead().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            if i == j {
                return false;
            }
            let (ph, mh, _) = h.lead().unwrap();
            // among equal leading terms keep the first one
            ph == pg && mh.divides(mg) && (mh != mg || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<Vector> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let (head, rest) = minimal.split_at(i);
        let others: Vec<Vector> = head.iter().chain(&rest[1..]).cloned().collect();
        let g = &minimal[i];
        let (p, m, c) = g.lead().unwrap();
        let mut lead_only = Vector::zero(g.rank(), m.nvars());
        lead_only.0[p] = Poly::term(m.clone(), c.clone());
        let tail = g.sub(&lead_only, f);
        let r = lead_only.add(&reduce(&tail, &others, f), f);
        out.push(r.make_monic(f));
    }
    out.sort_by(|a, b| {
        let (pa, ma, _) = a.lead().unwrap();
        let (pb, mb, _) = b.lead().unwrap();
        cmp_lead((pb, mb), (pa, ma))
    });
    out
}

/// Buchberger criterion: every S-vector reduces to zero.
pub fn is_groebner(basis: &[Vector], f: &CoefficientField) -> bool {
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            if basis[i].lead_pos() != basis[j].lead_pos() {
                continue;
            }
            if !reduce(&s_vector(&basis[i], &basis[j], f), basis, f).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Gröbner basis of the extended system `[g_i; e_i]`, `[r_j; 0]`. It answers
/// membership in `<g, r>`, expresses members as combinations of the `g_i`,
/// and yields the syzygies `{u : sum u_i g_i in <r>}`.
#[derive(Clone, Debug)]
pub struct ExtendedBasis {
    top_rank: usize,
    ngens: usize,
    nvars: usize,
    basis: Vec<Vector>,
}

impl ExtendedBasis {
    pub fn new(top_rank: usize, nvars: usize, gens: &[Vector], rels: &[Vector], f: &CoefficientField) -> Self {
        let m = gens.len();
        let mut ext = Vec::with_capacity(gens.len() + rels.len());
        for (i, g) in gens.iter().enumerate() {
            ext.push(g.concat(&Vector::unit(m, nvars, i)));
        }
        for r in rels {
            ext.push(r.concat(&Vector::zero(m, nvars)));
        }
        let basis = if ext.is_empty() { Vec::new() } else { groebner(&ext, f) };
        ExtendedBasis { top_rank, ngens: m, nvars, basis }
    }

    /// Gröbner basis (POT) of the submodule `<g, r>` of `S^top_rank`.
    pub fn top_basis(&self) -> Vec<Vector> {
        self.basis
            .iter()
            .filter(|v| v.lead_pos().is_some_and(|p| p < self.top_rank))
            .map(|v| v.split_at(self.top_rank).0)
            .collect()
    }

    pub fn syzygies(&self) -> Vec<Vector> {
        self.basis
            .iter()
            .filter(|v| v.lead_pos().is_some_and(|p| p >= self.top_rank))
            .map(|v| v.split_at(self.top_rank).1)
            .collect()
    }

    /// Coefficients `u` with `target - sum u_i g_i in <r>`, if `target in <g, r>`.
    pub fn lift(&self, target: &Vector, f: &CoefficientField) -> Option<Vector> {
        let ext = target.concat(&Vector::zero(self.ngens, self.nvars));
        let r = reduce(&ext, &self.basis, f);
        let (top, bottom) = r.split_at(self.top_rank);
        if !top.is_zero() {
            return None;
        }
        Some(Vector::zero(self.ngens, self.nvars).sub(&bottom, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q() -> CoefficientField {
        CoefficientField::Rationals
    }

    fn p(terms: &[(i64, [u32; 2])]) -> Poly {
        Poly::from_terms(
            2,
            terms.iter().map(|(c, e)| (Monomial(e.to_vec()), Coeff::from_integer(BigInt::from(*c)))).collect(),
            &q(),
        )
    }

    #[test]
    fn hand_computed_basis() {
        // (x^2 + y, xy): the single new element is y^2
        let f = q();
        let g1 = Vector::from_poly(p(&[(1, [2, 0]), (1, [0, 1])]));
        let g2 = Vector::from_poly(p(&[(1, [1, 1])]));
        let gb = groebner(&[g1.clone(), g2.clone()], &f);
        let y2 = Vector::from_poly(p(&[(1, [0, 2])]));
        assert_eq!(gb, vec![g1, g2, y2]);
        assert!(is_groebner(&gb, &f));
    }

    #[test]
    fn koszul_syzygy() {
        let f = q();
        let x = Vector(vec![p(&[(1, [1, 0])])]);
        let y = Vector(vec![p(&[(1, [0, 1])])]);
        let ext = ExtendedBasis::new(1, 2, &[x, y], &[], &f);
        let syz = ext.syzygies();
        assert_eq!(syz.len(), 1);
        let expected = Vector(vec![p(&[(1, [0, 1])]), p(&[(-1, [1, 0])])]);
        assert!(syz[0] == expected || syz[0] == expected.scale(&f.from_int(-1), &f));
    }

    #[test]
    fn lift_expresses_members() {
        let f = q();
        let x = Vector(vec![p(&[(1, [1, 0])])]);
        let y = Vector(vec![p(&[(1, [0, 1])])]);
        let ext = ExtendedBasis::new(1, 2, &[x.clone(), y.clone()], &[], &f);
        let t = Vector(vec![p(&[(3, [2, 0]), (-1, [0, 1])])]);
        let u = ext.lift(&t, &f).unwrap();
        let back = x.mul_poly(&u.0[0], &f).add(&y.mul_poly(&u.0[1], &f), &f);
        assert_eq!(back, t);
        assert!(ext.lift(&Vector(vec![p(&[(1, [0, 0])])]), &f).is_none());
    }
}
