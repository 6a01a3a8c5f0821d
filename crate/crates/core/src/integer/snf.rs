//! Smith normal form over the integers with unimodular transforms, and the
//! lattice operations built on it (kernels, solving, subquotients).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `A = U * D * V` with `U`, `V` unimodular, `D` diagonal with
/// `d_1 | d_2 | ...`, all nonnegative. `u_inv` and `v_inv` are the inverses.
#[derive(Clone, Debug)]
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    /// Nonzero diagonal entries in order.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.d[i][i].clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }

    /// `U * D * V` recomputed.
    pub fn recompose(&self) -> IntMatrix {
        let ud = mat_mul(&self.u, &self.d, self.rows, self.cols);
        mat_mul(&ud, &self.v, self.cols, self.cols)
    }

    pub fn is_valid_for(&self, a: &IntMatrix) -> bool {
        let n = self.rows.min(self.cols);
        let diagonal = (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.d[i][j].is_zero()));
        let divisibility = (1..n).all(|i| {
            let (p, q) = (&self.d[i - 1][i - 1], &self.d[i][i]);
            !p.is_negative() && !q.is_negative() && (q.is_zero() || (!p.is_zero() && (q % p).is_zero()))
        });
        let inverses = mat_mul(&self.u, &self.u_inv, self.rows, self.rows) == identity(self.rows)
            && mat_mul(&self.v, &self.v_inv, self.cols, self.cols) == identity(self.cols);
        diagonal && divisibility && inverses && self.recompose() == *a
    }
}

struct State {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl State {
    // D <- E D with E = (row i += c row j); U <- U E^-1, U^-1 <- E U^-1
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        for col in 0..self.d[0].len() {
            let t = &self.d[j][col] * c;
            self.d[i][col] += t;
        }
        for r in 0..self.u.len() {
            let t = &self.u[r][i] * c;
            self.u[r][j] -= t;
        }
        for col in 0..self.u_inv.len() {
            let t = &self.u_inv[j][col] * c;
            self.u_inv[i][col] += t;
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.d.swap(i, j);
        for r in self.u.iter_mut() {
            r.swap(i, j);
        }
        self.u_inv.swap(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.d[i].iter_mut() {
            *x = -&*x;
        }
        for r in self.u.iter_mut() {
            r[i] = -&r[i];
        }
        for x in self.u_inv[i].iter_mut() {
            *x = -&*x;
        }
    }

    // D <- D F with F = (col i += c col j); V <- F^-1 V, V^-1 <- V^-1 F
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        for r in self.d.iter_mut() {
            let t = &r[j] * c;
            r[i] += t;
        }
        for col in 0..self.v[0].len() {
            let t = &self.v[i][col] * c;
            self.v[j][col] -= t;
        }
        for r in self.v_inv.iter_mut() {
            let t = &r[j] * c;
            r[i] += t;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.d.iter_mut() {
            r.swap(i, j);
        }
        self.v.swap(i, j);
        for r in self.v_inv.iter_mut() {
            r.swap(i, j);
        }
    }
}

pub fn smith_normal_form(a: &IntMatrix, rows: usize, cols: usize) -> Smith {
    let mut s = State { d: a.clone(), u: identity(rows), u_inv: identity(rows), v: identity(cols), v_inv: identity(cols) };
    if rows == 0 || cols == 0 {
        return Smith { rows, cols, d: s.d, u: s.u, u_inv: s.u_inv, v: s.v, v_inv: s.v_inv };
    }
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block goes to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !s.d[i][j].is_zero() && best.is_none_or(|(bi, bj)| s.d[i][j].abs() < s.d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            if bi != t {
                s.swap_rows(t, bi);
            }
            if bj != t {
                s.swap_cols(t, bj);
            }
            let mut dirty = false;
            for i in (t + 1)..rows {
                if !s.d[i][t].is_zero() {
                    let q = s.d[i][t].div_floor(&s.d[t][t]);
                    s.add_row(i, t, &-q);
                    dirty |= !s.d[i][t].is_zero();
                }
            }
            for j in (t + 1)..cols {
                if !s.d[t][j].is_zero() {
                    let q = s.d[t][j].div_floor(&s.d[t][t]);
                    s.add_col(j, t, &-q);
                    dirty |= !s.d[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            let pivot = s.d[t][t].clone();
            let bad = ((t + 1)..rows).find(|&i| ((t + 1)..cols).any(|j| !(&s.d[i][j] % &pivot).is_zero()));
            match bad {
                Some(i) => s.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if s.d[t][t].is_negative() {
            s.negate_row(t);
        }
    }
    Smith { rows, cols, d: s.d, u: s.u, u_inv: s.u_inv, v: s.v, v_inv: s.v_inv }
}

/// Basis of `{x in Z^rows : x A = 0}` (row-vector convention, `A` is rows x cols).
pub fn left_kernel(a: &IntMatrix, rows: usize, cols: usize) -> IntMatrix {
    let s = smith_normal_form(a, rows, cols);
    let r = s.rank();
    // x A = (x U) D V, so x U must vanish on the first r coordinates
    s.u_inv[r..].to_vec()
}

/// Basis of the row lattice of `m` (rows x cols).
pub fn row_lattice_basis(m: &IntMatrix, rows: usize, cols: usize) -> IntMatrix {
    if rows == 0 {
        return Vec::new();
    }
    let s = smith_normal_form(m, rows, cols);
    s.invariants().iter().enumerate().map(|(i, d)| s.v[i].iter().map(|x| x * d).collect()).collect()
}

/// Some `x` with `x A = b`, if one exists.
pub fn solve_left(a: &IntMatrix, rows: usize, cols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith_normal_form(a, rows, cols);
    // x U D = b V^-1
    let c: Vec<BigInt> = (0..cols).map(|j| (0..cols).map(|k| &b[k] * &s.v_inv[k][j]).sum()).collect();
    let r = s.rank();
    let mut w = vec![BigInt::zero(); rows];
    for j in 0..cols {
        if j < r {
            let (q, rem) = c[j].div_rem(&s.d[j][j]);
            if !rem.is_zero() {
                return None;
            }
            w[j] = q;
        } else if !c[j].is_zero() {
            return None;
        }
    }
    Some((0..rows).map(|i| (0..rows).map(|k| &w[k] * &s.u_inv[k][i]).sum()).collect())
}

/// Cokernel invariants of `Z^rank / <gens>`: free rank and invariant factors > 1.
pub fn cokernel(gens: &IntMatrix, rank: usize) -> (usize, Vec<BigInt>) {
    if gens.is_empty() {
        return (rank, Vec::new());
    }
    let s = smith_normal_form(gens, gens.len(), rank);
    let inv = s.invariants();
    let free = rank - inv.len();
    (free, inv.into_iter().filter(|d| !d.is_one()).collect())
}

/// `<kernel_gens> / <image_gens>` inside `Z^rank`, requiring image inside kernel.
pub fn subquotient(kernel_gens: &IntMatrix, image_gens: &IntMatrix, rank: usize) -> Option<(usize, Vec<BigInt>)> {
    let basis = row_lattice_basis(kernel_gens, kernel_gens.len(), rank);
    let k = basis.len();
    if k == 0 {
        return Some((0, Vec::new()));
    }
    let mut coords = Vec::with_capacity(image_gens.len());
    for g in image_gens {
        coords.push(solve_left(&basis, k, rank, g)?);
    }
    Some(cokernel(&coords, k))
}
