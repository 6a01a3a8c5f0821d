use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::field::{Coeff, CoefficientField};
use super::monomial::Monomial;

/// Sparse polynomial. Terms are kept sorted ascending in degrevlex order,
/// so the leading term is the last one; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: Vec<(Monomial, Coeff)>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Coeff::one())
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            return Poly::zero(nvars);
        }
        Poly { nvars, terms: vec![(m, c)] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i, 1), Coeff::one())
    }

    /// Builds from arbitrary (unsorted, possibly repeated) terms.
    pub fn from_terms(nvars: usize, terms: Vec<(Monomial, Coeff)>, f: &CoefficientField) -> Self {
        let mut terms: Vec<(Monomial, Coeff)> =
            terms.into_iter().map(|(m, c)| (m, f.normalize(c))).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = f.add(&last.1, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending order.
    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn lead(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.last()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.last().map(|t| &t.0)
    }

    pub fn lead_coeff(&self) -> Option<&Coeff> {
        self.terms.last().map(|t| &t.1)
    }

    pub(crate) fn pop_lead(&mut self) -> Option<(Monomial, Coeff)> {
        self.terms.pop()
    }

    /// Appends a term strictly smaller than all present terms' successors;
    /// used when building remainders in descending order (see `reverse_terms`).
    pub(crate) fn push_raw(&mut self, m: Monomial, c: Coeff) {
        self.terms.push((m, c));
    }

    pub(crate) fn reverse_terms(&mut self) {
        self.terms.reverse();
    }

    pub fn constant_term(&self) -> Coeff {
        match self.terms.first() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Coeff::zero(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Degree if every term has the same degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Variables that occur in some term.
    pub fn variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for (m, _) in &self.terms {
            for i in m.support() {
                used[i] = true;
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    pub fn neg(&self, f: &CoefficientField) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff, f: &CoefficientField) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, d)| (m.clone(), f.mul(c, d))).collect(),
        }
    }

    pub fn make_monic(&self, f: &CoefficientField) -> Poly {
        match self.lead_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&f.inv(c), f),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff, f: &CoefficientField) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), f.mul(c, d))).collect(),
        }
    }

    pub fn add(&self, other: &Poly, f: &CoefficientField) -> Poly {
        let mut out = self.clone();
        out.add_mul_term_assign(&Coeff::one(), &Monomial::one(self.nvars), other, f);
        out
    }

    pub fn sub(&self, other: &Poly, f: &CoefficientField) -> Poly {
        let mut out = self.clone();
        out.sub_mul_term_assign(&Coeff::one(), &Monomial::one(self.nvars), other, f);
        out
    }

    pub fn mul(&self, other: &Poly, f: &CoefficientField) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &other.terms {
            out.add_mul_term_assign(c, m, self, f);
        }
        out
    }

    pub fn pow(&self, n: u32, f: &CoefficientField) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..n {
            out = out.mul(self, f);
        }
        out
    }

    /// `self -= c * m * other`
    pub fn sub_mul_term_assign(&mut self, c: &Coeff, m: &Monomial, other: &Poly, f: &CoefficientField) {
        self.add_mul_term_assign(&f.neg(c), m, other, f);
    }

    /// `self += c * m * other`, a single ascending merge.
    pub fn add_mul_term_assign(&mut self, c: &Coeff, m: &Monomial, other: &Poly, f: &CoefficientField) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let a = std::mem::take(&mut self.terms);
        let mut out = Vec::with_capacity(a.len() + other.terms.len());
        let mut ia = a.into_iter().peekable();
        let mut ib = other.terms.iter().map(|(n, d)| (n.mul(m), f.mul(c, d))).peekable();
        loop {
            let ord = match (ia.peek(), ib.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (Some(x), Some(y)) => x.0.cmp(&y.0),
            };
            match ord {
                Ordering::Less => out.push(ia.next().unwrap()),
                Ordering::Greater => out.push(ib.next().unwrap()),
                Ordering::Equal => {
                    let (mx, cx) = ia.next().unwrap();
                    let (_, cy) = ib.next().unwrap();
                    let s = f.add(&cx, &cy);
                    if !s.is_zero() {
                        out.push((mx, s));
                    }
                }
            }
        }
        self.terms = out;
    }

    /// Embeds into a ring with `extra` additional trailing variables.
    pub fn extend_vars(&self, extra: usize) -> Poly {
        Poly {
            nvars: self.nvars + extra,
            terms: self.terms.iter().map(|(m, c)| (m.extend(extra), c.clone())).collect(),
        }
    }

    /// Drops trailing variables; caller guarantees they do not occur.
    pub fn restrict_vars(&self, nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: self.terms.iter().map(|(m, c)| (Monomial(m.0[..nvars].to_vec()), c.clone())).collect(),
        }
    }

    /// Coefficients `[c_0, c_1, ...]` when the polynomial only involves variable `v`.
    pub fn univariate_coeffs(&self, v: usize) -> Option<Vec<Coeff>> {
        let mut out: Vec<Coeff> = Vec::new();
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != v && e > 0) {
                return None;
            }
            let d = m.0[v] as usize;
            if out.len() <= d {
                out.resize(d + 1, Coeff::zero());
            }
            out[d] = c.clone();
        }
        Some(out)
    }

    pub fn from_univariate(nvars: usize, v: usize, coeffs: &[Coeff], f: &CoefficientField) -> Poly {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| (Monomial::var(nvars, v, d as u32), c.clone()))
            .collect();
        Poly::from_terms(nvars, terms, f)
    }

    /// Value at the origin is zero.
    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term().is_zero()
    }

    pub fn eval(&self, point: &[Coeff], f: &CoefficientField) -> Coeff {
        let mut acc = Coeff::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = f.mul(&t, &point[i]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    pub fn format(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c < &Coeff::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mono = format_monomial(m, vars);
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{abs}*{mono}"));
            }
        }
        s
    }
}

fn format_monomial(m: &Monomial, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], e)),
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CoefficientField {
        CoefficientField::Rationals
    }

    #[test]
    fn arithmetic_and_format() {
        let f = q();
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let s = x.add(&y, &f);
        let sq = s.mul(&s, &f);
        let vars = vec!["x".to_string(), "y".to_string()];
        assert_eq!(sq.format(&vars), "x^2 + 2*x*y + y^2");
        assert!(sq.sub(&sq, &f).is_zero());
        assert_eq!(sq.lead_monomial(), Some(&Monomial(vec![2, 0])));
        assert_eq!(x.sub(&y, &f).neg(&f).format(&vars), "-x + y");
    }

    #[test]
    fn univariate_roundtrip() {
        let f = q();
        let c: Vec<Coeff> = [1, 0, -3].iter().map(|&n| f.from_int(n)).collect();
        let p = Poly::from_univariate(2, 1, &c, &f);
        assert_eq!(p.univariate_coeffs(1).unwrap(), c);
        assert!(p.univariate_coeffs(0).is_none());
    }
}
