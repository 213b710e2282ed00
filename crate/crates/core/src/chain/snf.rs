//! Smith and Hermite normal forms over the integers.

use super::matrix::{Matrix, SparseVec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

type Dense = Vec<Vec<BigInt>>;

/// Result of a Smith normal form computation: `u * m * v = s`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Matrix,
    pub s: Matrix,
    pub v: Matrix,
    /// Nonzero diagonal entries of `s`, each dividing the next.
    pub diagonal: Vec<BigInt>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

fn ident(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn swap_cols(m: &mut Dense, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

// row_a += c * row_b
fn row_axpy(m: &mut Dense, a: usize, b: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    let rb = m[b].clone();
    for (x, y) in m[a].iter_mut().zip(rb.iter()) {
        *x += c * y;
    }
}

// col_a += c * col_b
fn col_axpy(m: &mut Dense, a: usize, b: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let t = &row[b] * c;
        row[a] += t;
    }
}

fn row_neg(m: &mut Dense, a: usize) {
    for x in m[a].iter_mut() {
        *x = -&*x;
    }
}

/// Full Smith normal form with transformation matrices.
pub fn smith_normal_form(m: &Matrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_dense();
    let mut u = ident(rows);
    let mut v = ident(cols);
    let mut t = 0;
    loop {
        if t >= rows || t >= cols {
            break;
        }
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let nq = -q;
                    row_axpy(&mut a, i, t, &nq);
                    row_axpy(&mut u, i, t, &nq);
                    if !a[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    let nq = -q;
                    col_axpy(&mut a, j, t, &nq);
                    col_axpy(&mut v, j, t, &nq);
                    if !a[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // divisibility of the remaining block
                let mut bad = None;
                'outer: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            bad = Some(i);
                            break 'outer;
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        let one = BigInt::one();
                        row_axpy(&mut a, t, i, &one);
                        row_axpy(&mut u, t, i, &one);
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
                u.swap(t, best.0);
            }
            if best.1 != t {
                swap_cols(&mut a, t, best.1);
                swap_cols(&mut v, t, best.1);
            }
        }
        if a[t][t].is_negative() {
            row_neg(&mut a, t);
            row_neg(&mut u, t);
        }
        t += 1;
    }
    let diagonal: Vec<BigInt> = (0..t.min(rows).min(cols)).map(|i| a[i][i].clone()).filter(|x| !x.is_zero()).collect();
    Snf {
        u: Matrix::from_big_rows(rows, rows, &u),
        s: Matrix::from_big_rows(rows, cols, &a),
        v: Matrix::from_big_rows(cols, cols, &v),
        diagonal,
    }
}

/// Invariant factors (nonzero diagonal of the Smith form) using sparse unit-pivot elimination
/// before a dense finish.
pub fn invariant_factors(m: &Matrix) -> Vec<BigInt> {
    // row-wise sparse storage
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows()];
    let mut col_rows: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); m.cols()];
    for (r, c, v) in m.triplets() {
        rows[r].insert(c, v.clone());
        col_rows[c].insert(r);
    }
    let mut alive_row = vec![true; m.rows()];
    let mut units = 0usize;
    loop {
        // choose a unit pivot minimizing fill-in
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            if !alive_row[r] {
                continue;
            }
            for (c, v) in row {
                if v.abs().is_one() {
                    let cost = (row.len() - 1) * (col_rows[*c].len() - 1);
                    if best.map_or(true, |(_, _, bc)| cost < bc) {
                        best = Some((r, *c, cost));
                    }
                    if cost == 0 {
                        break;
                    }
                }
            }
            if matches!(best, Some((_, _, 0))) {
                break;
            }
        }
        let Some((pr, pc, _)) = best else { break };
        units += 1;
        let prow = std::mem::take(&mut rows[pr]);
        alive_row[pr] = false;
        let pv = prow[&pc].clone();
        for (c, _) in &prow {
            col_rows[*c].remove(&pr);
        }
        let others: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in others {
            let f = rows[r][&pc].clone() * &pv; // pv = ±1, so f / pv = f * pv
            for (c, x) in &prow {
                let e = rows[r].entry(*c).or_insert_with(BigInt::zero);
                *e -= &f * x;
                if e.is_zero() {
                    rows[r].remove(c);
                    col_rows[*c].remove(&r);
                } else {
                    col_rows[*c].insert(r);
                }
            }
        }
        debug_assert!(col_rows[pc].is_empty());
    }
    // dense remainder
    let live_rows: Vec<usize> = (0..m.rows()).filter(|&r| alive_row[r] && !rows[r].is_empty()).collect();
    let mut live_cols: Vec<usize> = live_rows.iter().flat_map(|&r| rows[r].keys().copied()).collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let mut out: Vec<BigInt> = vec![BigInt::one(); units];
    if !live_rows.is_empty() {
        let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let trips = live_rows
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| rows[r].iter().map(move |(c, v)| (i, *c, v.clone())))
            .map(|(i, c, v)| (i, col_pos[&c], v))
            .collect::<Vec<_>>();
        let rest = Matrix::from_triplets(live_rows.len(), live_cols.len(), trips);
        out.extend(dense_invariant_factors(&rest));
    }
    out
}

fn dense_invariant_factors(m: &Matrix) -> Vec<BigInt> {
    smith_normal_form(m).diagonal
}

/// Rank over the rationals (equal to the number of invariant factors).
pub fn rank(m: &Matrix) -> usize {
    invariant_factors(m).len()
}

/// A basis of the kernel (columns) of a matrix; the kernel is saturated so this is a ℤ-basis.
pub fn kernel_basis(m: &Matrix) -> Matrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let cols: Vec<usize> = (r..m.cols()).collect();
    snf.v.select_cols(&cols)
}

/// Solves `m x = b` over the integers if possible.
pub fn solve(m: &Matrix, b: &Matrix) -> Option<Matrix> {
    let snf = smith_normal_form(m);
    let ub = snf.u.mul(b);
    let r = snf.rank();
    let mut y = Vec::new();
    for (row, col, val) in ub.triplets() {
        if row >= r {
            return None;
        }
        let d = &snf.diagonal[row];
        if !(val % d).is_zero() {
            return None;
        }
        y.push((row, col, val / d));
    }
    let y = Matrix::from_triplets(m.cols(), b.cols(), y);
    Some(snf.v.mul(&y))
}

/// Determinant of a square matrix via its Smith form (up to sign) -- returns |det|.
pub fn abs_det(m: &Matrix) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    let snf = smith_normal_form(m);
    if snf.rank() < m.rows() {
        return BigInt::zero();
    }
    snf.diagonal.iter().product()
}

pub fn is_unimodular(m: &Matrix) -> bool {
    m.rows() == m.cols() && abs_det(m).is_one()
}

/// Inverse of a unimodular matrix.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    if m.rows() != m.cols() {
        return None;
    }
    solve(m, &Matrix::identity(m.rows()))
}

/// Reduction modulo a sublattice of ℤ^n, kept in Hermite echelon form.
///
/// Each stored vector has a pivot (its smallest index with a nonzero entry), positive at the
/// pivot, and entries at other pivots are reduced to `[0, pivot)`.
#[derive(Clone, Debug, Default)]
pub struct Lattice {
    // pivot index -> vector
    basis: BTreeMap<usize, SparseVec>,
}

impl Lattice {
    pub fn new() -> Self {
        Lattice { basis: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Adds a vector to the generating set.
    pub fn insert(&mut self, v: SparseVec) {
        let mut v = v;
        v.retain(|_, x| !x.is_zero());
        while let Some((&p, _)) = v.iter().next() {
            let Some(w) = self.basis.get(&p).cloned() else {
                let v = normalize_sign(v);
                let p = *v.keys().next().unwrap();
                self.basis.insert(p, v);
                self.rereduce();
                return;
            };
            // gcd step between v and w at pivot p
            let a = v[&p].clone();
            let b = w[&p].clone();
            let g = a.extended_gcd(&b);
            // g.gcd = x a + y b
            let (x, y) = (g.x, g.y);
            let ag = &a / &g.gcd;
            let bg = &b / &g.gcd;
            let new_w = lin2(&v, &x, &w, &y); // pivot g
            let new_v = lin2(&v, &bg, &w, &(-ag)); // pivot 0
            self.basis.insert(p, normalize_sign(new_w));
            v = new_v;
            v.retain(|_, x| !x.is_zero());
        }
        self.rereduce();
    }

    fn rereduce(&mut self) {
        let pivots: Vec<usize> = self.basis.keys().copied().collect();
        for &p in pivots.iter() {
            let w = self.basis[&p].clone();
            for &q in pivots.iter().filter(|&&q| q < p) {
                let v = self.basis.get_mut(&q).unwrap();
                if let Some(c) = v.get(&p).cloned() {
                    let f = c.div_floor(&w[&p]);
                    if !f.is_zero() {
                        super::matrix::vec_add_scaled(v, &w, &(-f));
                    }
                }
            }
        }
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        v.retain(|_, x| !x.is_zero());
        for (p, w) in &self.basis {
            if let Some(c) = v.get(p).cloned() {
                let f = c.div_floor(&w[p]);
                if !f.is_zero() {
                    super::matrix::vec_add_scaled(&mut v, w, &(-f));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &SparseVec> {
        self.basis.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = (&usize, &BigInt)> {
        self.basis.iter().map(|(p, w)| (p, &w[p]))
    }
}

fn lin2(a: &SparseVec, ca: &BigInt, b: &SparseVec, cb: &BigInt) -> SparseVec {
    let mut out = SparseVec::new();
    super::matrix::vec_add_scaled(&mut out, a, ca);
    super::matrix::vec_add_scaled(&mut out, b, cb);
    out
}

fn normalize_sign(mut v: SparseVec) -> SparseVec {
    if let Some((_, x)) = v.iter().next() {
        if x.is_negative() {
            for y in v.values_mut() {
                *y = -&*y;
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check(m: &Matrix) -> Snf {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.s);
        assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
        for w in s.diagonal.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        for (r, c, _) in s.s.triplets() {
            assert_eq!(r, c);
        }
        s
    }

    #[test]
    fn snf_examples() {
        let d = Matrix::from_rows(2, 2, &[vec![2, 0], vec![0, 3]]);
        let s = check(&d);
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
        assert!(check(&Matrix::zero(3, 2)).diagonal.is_empty());
    }

    #[test]
    fn snf_random_and_sparse_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let r = rng.gen_range(1..7);
            let c = rng.gen_range(1..7);
            let rows: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| if rng.gen_bool(0.5) { rng.gen_range(-4..5) } else { 0 }).collect())
                .collect();
            let m = Matrix::from_rows(r, c, &rows);
            let s = check(&m);
            assert_eq!(invariant_factors(&m), s.diagonal);
        }
    }

    #[test]
    fn kernel_and_solve() {
        let m = Matrix::from_rows(2, 3, &[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
        let b = Matrix::from_rows(2, 1, &[vec![3], vec![6]]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.mul(&x), b);
        let b2 = Matrix::from_rows(2, 1, &[vec![1], vec![1]]);
        assert!(solve(&m, &b2).is_none());
    }

    #[test]
    fn lattice_reduction() {
        let mut l = Lattice::new();
        let v = |xs: &[i64]| -> SparseVec {
            xs.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i, BigInt::from(*x))).collect()
        };
        l.insert(v(&[4, 2]));
        l.insert(v(&[6, 0]));
        // lattice spanned by (4,2),(6,0) = {(a,b): b even, a ≡ ... }
        assert!(l.contains(&v(&[2, 4])));
        assert!(l.contains(&v(&[0, 6])));
        assert!(!l.contains(&v(&[0, 2])));
        let r1 = l.reduce(&v(&[5, 3]));
        let r2 = l.reduce(&v(&[5 + 4, 3 + 2]));
        assert_eq!(r1, r2);
        assert_eq!(l.reduce(&r1), r1);
    }
}
