use super::{shih_element, TensorWord};
use crate::chain::{tot, BiComplex, ChainComplex, Matrix};
use crate::simplexcat::{shuffles, SimplexMap};
use crate::sset::BiSimplicial;
use num_bigint::BigInt;
use std::collections::HashMap;

/// Normalized chains of a bisimplicial set: the diagonal complex and the bicomplex
/// `N_{i,j}` (nondegenerate in both directions), both through total degree `nmax`.
pub struct BiChains<'a, B: BiSimplicial> {
    x: &'a B,
    nmax: usize,
    diag: Vec<Vec<B::Elem>>,
    diag_index: Vec<HashMap<B::Elem, usize>>,
    bi: Vec<Vec<Vec<B::Elem>>>,
    bi_index: Vec<Vec<HashMap<B::Elem, usize>>>,
}

fn index_of<E: Clone + Eq + std::hash::Hash>(v: &[E]) -> HashMap<E, usize> {
    v.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect()
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

impl<'a, B: BiSimplicial> BiChains<'a, B> {
    pub fn new(x: &'a B, nmax: usize) -> Self {
        let diag: Vec<Vec<B::Elem>> = (0..=nmax).map(|n| x.diagonal_nondegenerate(n)).collect();
        let diag_index = diag.iter().map(|v| index_of(v)).collect();
        let bi: Vec<Vec<Vec<B::Elem>>> = (0..=nmax)
            .map(|i| (0..=nmax).map(|j| if i + j <= nmax { x.bi_nondegenerate(i, j) } else { Vec::new() }).collect())
            .collect();
        let bi_index = bi.iter().map(|r| r.iter().map(|v| index_of(v)).collect()).collect();
        BiChains { x, nmax, diag, diag_index, bi, bi_index }
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn diag_basis(&self, n: usize) -> &[B::Elem] {
        &self.diag[n]
    }

    pub fn bi_basis(&self, i: usize, j: usize) -> &[B::Elem] {
        &self.bi[i][j]
    }

    pub fn diag_rank(&self, n: usize) -> usize {
        self.diag.get(n).map_or(0, Vec::len)
    }

    pub fn tot_rank(&self, n: usize) -> usize {
        (0..=n).map(|i| self.bi_rank(i, n - i)).sum()
    }

    fn bi_rank(&self, i: usize, j: usize) -> usize {
        self.bi.get(i).and_then(|r| r.get(j)).map_or(0, Vec::len)
    }

    fn tot_offset(&self, n: usize, i: usize) -> usize {
        (0..i).map(|a| self.bi_rank(a, n - a)).sum()
    }

    /// The diagonal element `X(f, g)(x)` for `x ∈ X_{c,c}`, as a matrix over the degree-`n` basis.
    pub fn word_matrix(&self, w: &TensorWord) -> Matrix {
        assert_eq!(w.arity(), 2);
        let (n, c) = (w.dom(), w.cods()[0]);
        assert_eq!(c, w.cods()[1]);
        let mut trips = Vec::new();
        for (col, e) in self.diag[c].iter().enumerate() {
            for (t, coef) in w.terms() {
                let y = self.x.act(e, &t[0], &t[1]);
                if let Some(&row) = self.diag_index[n].get(&y) {
                    trips.push((row, col, BigInt::from(coef)));
                }
            }
        }
        Matrix::from_triplets(self.diag_rank(n), self.diag_rank(c), trips)
    }

    fn diag_d(&self, n: usize) -> Matrix {
        if n == 0 {
            return Matrix::zero(0, self.diag_rank(0));
        }
        let mut w = TensorWord::zero(n - 1, vec![n, n]);
        for k in 0..=n {
            let f = SimplexMap::face(n, k);
            w.add_term(vec![f.clone(), f], sign(k));
        }
        self.word_matrix(&w)
    }

    /// `N(δ*X)` in degrees `0..=nmax`.
    pub fn diag_complex(&self) -> ChainComplex {
        let basis = self.diag.iter().map(|v| v.iter().map(|e| format!("{e:?}")).collect()).collect();
        let d = (0..=self.nmax).map(|n| self.diag_d(n)).collect();
        ChainComplex::new(0, basis, d, true).expect("normalized diagonal chains")
    }

    fn bi_face(&self, i: usize, j: usize, horizontal: bool) -> Matrix {
        let (ti, tj) = if horizontal { (i - 1, j) } else { (i, j - 1) };
        let mut trips = Vec::new();
        let top = if horizontal { i } else { j };
        for (col, e) in self.bi[i][j].iter().enumerate() {
            for k in 0..=top {
                let y = if horizontal {
                    self.x.act(e, &SimplexMap::face(i, k), &SimplexMap::identity(j))
                } else {
                    self.x.act(e, &SimplexMap::identity(i), &SimplexMap::face(j, k))
                };
                if let Some(&row) = self.bi_index[ti][tj].get(&y) {
                    trips.push((row, col, BigInt::from(sign(k))));
                }
            }
        }
        Matrix::from_triplets(self.bi_rank(ti, tj), self.bi_rank(i, j), trips)
    }

    /// The bicomplex `N_{i,j}` for `i + j ≤ nmax`, zero beyond.
    pub fn bicomplex(&self) -> BiComplex {
        let m = self.nmax;
        let basis = self.bi.iter().map(|r| r.iter().map(|v| v.iter().map(|e| format!("{e:?}")).collect()).collect()).collect();
        let mut dl = Vec::new();
        let mut dr = Vec::new();
        for i in 0..=m {
            let mut l = Vec::new();
            let mut r = Vec::new();
            for j in 0..=m {
                l.push(if i == 0 { Matrix::zero(0, self.bi_rank(i, j)) } else { self.bi_face(i, j, true) });
                r.push(if j == 0 { Matrix::zero(0, self.bi_rank(i, j)) } else { self.bi_face(i, j, false) });
            }
            dl.push(l);
            dr.push(r);
        }
        BiComplex::new(basis, dl, dr).expect("normalized bicomplex")
    }

    /// `tot N` in degrees `0..=nmax`, with `d = d_l + (−1)^i d_r`.
    pub fn tot_complex(&self) -> ChainComplex {
        tot(&self.bicomplex()).truncate_above(self.nmax as i64)
    }

    /// `AW_n : N(δ*X)_n -> (tot N)_n`, `x ↦ Σ_{i+j=n} X(δ_{0,i}, δ_{i,n})x`.
    pub fn aw(&self, n: usize) -> Matrix {
        let mut trips = Vec::new();
        for (col, e) in self.diag[n].iter().enumerate() {
            for i in 0..=n {
                let j = n - i;
                let y = self.x.act(e, &SimplexMap::interval(n, 0, i), &SimplexMap::interval(n, i, j));
                if let Some(&row) = self.bi_index[i][j].get(&y) {
                    trips.push((self.tot_offset(n, i) + row, col, BigInt::from(1)));
                }
            }
        }
        Matrix::from_triplets(self.tot_rank(n), self.diag_rank(n), trips)
    }

    /// `EZ_n : (tot N)_n -> N(δ*X)_n`, `x ↦ Σ sgn(σ,τ) X(σ,τ)x` over `(i,j)`-shuffles.
    pub fn ez(&self, n: usize) -> Matrix {
        let mut trips = Vec::new();
        for i in 0..=n {
            let j = n - i;
            let off = self.tot_offset(n, i);
            let sh = shuffles(i, j);
            for (col, e) in self.bi[i][j].iter().enumerate() {
                for s in &sh {
                    let y = self.x.act(e, &s.sigma, &s.tau);
                    if let Some(&row) = self.diag_index[n].get(&y) {
                        trips.push((row, off + col, BigInt::from(s.sign)));
                    }
                }
            }
        }
        Matrix::from_triplets(self.diag_rank(n), self.tot_rank(n), trips)
    }

    /// The Shih homotopy `N(δ*X)_{n-1} -> N(δ*X)_n`.
    pub fn shih(&self, n: usize) -> Matrix {
        assert!(n >= 1 && n <= self.nmax);
        self.word_matrix(&shih_element(n))
    }

    /// Checks `AW_n ∘ EZ_n = id` for all `n ≤ nmax`.
    pub fn check_aw_ez(&self) -> bool {
        (0..=self.nmax).all(|n| self.aw(n).mul(&self.ez(n)).is_identity())
    }

    /// Checks `dH + Hd = c·(EZ∘AW − id)` in degrees `< nmax` for the given global sign `c`.
    pub fn check_shih(&self, c: i64) -> bool {
        let diag = self.diag_complex();
        (0..self.nmax).all(|m| {
            let mut lhs = diag.d(m as i64 + 1).mul(&self.shih(m + 1));
            if m >= 1 {
                lhs = lhs.add(&self.shih(m).mul(&diag.d(m as i64)));
            }
            let rhs = self.ez(m).mul(&self.aw(m)).sub(&Matrix::identity(self.diag_rank(m))).scale(c);
            lhs == rhs
        })
    }
}
