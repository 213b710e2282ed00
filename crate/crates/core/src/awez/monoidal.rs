//! Monoidal structure of the total complex and the hexagon relating EZ and AW for four factors.

use crate::chain::{tensor, tensor_offsets, tot, BiComplex, ChainComplex, Matrix};
use crate::error::Result;
use crate::simplexcat::{shuffles, SimplexMap};
use crate::sset::{BiSimplicial, ExternalProduct, SSetPresentation, Simplex, Simplicial};
use num_bigint::BigInt;
use std::collections::BTreeMap;

fn parity(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Summands `A_{i,j} ⊗ B_{k,l}` of bidegree `(p,q)`, with their offsets.
fn bi_tensor_layout(a: &BiComplex, b: &BiComplex, p: usize, q: usize) -> Vec<((usize, usize, usize, usize), usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for i in 0..=p {
        for j in 0..=q {
            let (k, l) = (p - i, q - j);
            let size = a.rank(i as i64, j as i64) * b.rank(k as i64, l as i64);
            if size > 0 {
                out.push(((i, j, k, l), off));
                off += size;
            }
        }
    }
    out
}

/// `A ⊗̃ B`: bidegree `(p,q)` is `⊕ A_{i,j} ⊗ B_{p-i,q-j}`, with
/// `d_l = d_l ⊗ 1 + (−1)^i 1 ⊗ d_l` and `d_r = d_r ⊗ 1 + (−1)^j 1 ⊗ d_r`.
pub fn bicomplex_tensor(a: &BiComplex, b: &BiComplex) -> Result<BiComplex> {
    let imax = a.imax() + b.imax();
    let jmax = a.jmax() + b.jmax();
    let rank = |p: usize, q: usize| -> usize {
        bi_tensor_layout(a, b, p, q).iter().map(|((i, j, k, l), _)| a.rank(*i as i64, *j as i64) * b.rank(*k as i64, *l as i64)).sum()
    };
    let mut basis = vec![vec![Vec::new(); jmax + 1]; imax + 1];
    let mut dl = vec![vec![Matrix::zero(0, 0); jmax + 1]; imax + 1];
    let mut dr = vec![vec![Matrix::zero(0, 0); jmax + 1]; imax + 1];
    for p in 0..=imax {
        for q in 0..=jmax {
            let layout = bi_tensor_layout(a, b, p, q);
            let mut labels = Vec::new();
            for ((i, j, k, l), _) in &layout {
                for x in &a.basis[*i][*j] {
                    for y in &b.basis[*k][*l] {
                        labels.push(format!("{x}⊗{y}"));
                    }
                }
            }
            basis[p][q] = labels;
            let cols = rank(p, q);
            for horizontal in [true, false] {
                let tgt = if horizontal {
                    if p == 0 {
                        None
                    } else {
                        Some((p - 1, q))
                    }
                } else if q == 0 {
                    None
                } else {
                    Some((p, q - 1))
                };
                let m = match tgt {
                    None => Matrix::zero(0, cols),
                    Some((tp, tq)) => {
                        let tl = bi_tensor_layout(a, b, tp, tq);
                        let find = |key: (usize, usize, usize, usize)| tl.iter().find(|(k2, _)| *k2 == key).map(|(_, o)| *o);
                        let mut trips = Vec::new();
                        for &((i, j, k, l), c0) in &layout {
                            let rb = b.rank(k as i64, l as i64);
                            let ra = a.rank(i as i64, j as i64);
                            // differential on the first factor
                            let (fa, key_a) = if horizontal {
                                (i.checked_sub(1).map(|_| a.dl_at(i as i64, j as i64)), (i.wrapping_sub(1), j, k, l))
                            } else {
                                (j.checked_sub(1).map(|_| a.dr_at(i as i64, j as i64)), (i, j.wrapping_sub(1), k, l))
                            };
                            if let (Some(fa), Some(r0)) = (fa, find(key_a)) {
                                let m = fa.kron(&Matrix::identity(rb));
                                trips.extend(m.triplets().map(|(r, c, v)| (r + r0, c + c0, v.clone())));
                            }
                            let (fb, key_b, s) = if horizontal {
                                (k.checked_sub(1).map(|_| b.dl_at(k as i64, l as i64)), (i, j, k.wrapping_sub(1), l), parity(i))
                            } else {
                                (l.checked_sub(1).map(|_| b.dr_at(k as i64, l as i64)), (i, j, k, l.wrapping_sub(1)), parity(j))
                            };
                            if let (Some(fb), Some(r0)) = (fb, find(key_b)) {
                                let m = Matrix::identity(ra).kron(&fb).scale(s);
                                trips.extend(m.triplets().map(|(r, c, v)| (r + r0, c + c0, v.clone())));
                            }
                        }
                        Matrix::from_triplets(rank(tp, tq), cols, trips)
                    }
                };
                if horizontal {
                    dl[p][q] = m;
                } else {
                    dr[p][q] = m;
                }
            }
        }
    }
    BiComplex::new(basis, dl, dr)
}

/// The isomorphism `tot(A ⊗̃ B) -> tot A ⊗ tot B`, `a_{i,j} ⊗ b_{k,l} ↦ (−1)^{jk} a ⊗ b`,
/// returned with its source and target; one matrix per degree.
pub fn dec_monoidal_sign(a: &BiComplex, b: &BiComplex) -> Result<(ChainComplex, ChainComplex, Vec<Matrix>)> {
    let ab = bicomplex_tensor(a, b)?;
    let src = tot(&ab);
    let (ta, tb) = (tot(a), tot(b));
    let tgt = tensor(&ta, &tb);
    let mut maps = Vec::new();
    for n in src.degrees() {
        let mut trips = Vec::new();
        let toffs = tensor_offsets(&ta, &tb, n);
        let mut col0 = 0;
        for p in 0..=n as usize {
            let q = n as usize - p;
            for ((i, j, k, l), off) in bi_tensor_layout(a, b, p, q) {
                let (s, t) = (i + j, k + l);
                let Some(&(_, r0)) = toffs.iter().find(|(d, _)| *d == s as i64) else { continue };
                let oa = a.tot_offsets(s as i64).iter().find(|(ii, _)| *ii == i as i64).unwrap().1;
                let ob = b.tot_offsets(t as i64).iter().find(|(kk, _)| *kk == k as i64).unwrap().1;
                let rb_tot = tb.rank(t as i64);
                let (ra, rb) = (a.rank(i as i64, j as i64), b.rank(k as i64, l as i64));
                let sign = parity(j * k);
                for x in 0..ra {
                    for y in 0..rb {
                        let row = r0 + (oa + x) * rb_tot + ob + y;
                        trips.push((row, col0 + off + x * rb + y, BigInt::from(sign)));
                    }
                }
            }
            col0 += ab.rank(p as i64, q as i64);
        }
        maps.push(Matrix::from_triplets(tgt.rank(n), src.rank(n), trips));
    }
    Ok((src, tgt, maps))
}

/// A basis element of `N(X×Y)_i ⊗ N(Z×W)_j`, each factor a pair of simplices.
pub type PairTensor = ((Simplex, Simplex), (Simplex, Simplex));

fn jointly_nondegenerate(x: &Simplex, y: &Simplex) -> bool {
    !x.deg.collapse_set().iter().any(|e| y.deg.is_degenerate_at(*e))
}

fn add(acc: &mut BTreeMap<PairTensor, i64>, k: PairTensor, c: i64) {
    let e = acc.entry(k.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        acc.remove(&k);
    }
}

/// Four simplicial sets for the hexagon `(A ⊗ B) ⊗̃ (C ⊗ D) -> (A ⊗ C) ⊗̃ (B ⊗ D)`.
pub struct FourFactors<'a> {
    pub a: &'a SSetPresentation,
    pub b: &'a SSetPresentation,
    pub c: &'a SSetPresentation,
    pub d: &'a SSetPresentation,
}

impl FourFactors<'_> {
    /// Basis of `(N(A×B) ⊗ N(C×D))_n`.
    pub fn source_basis(&self, n: usize) -> Vec<PairTensor> {
        let (ab, cd) = (ExternalProduct(self.a, self.b), ExternalProduct(self.c, self.d));
        let mut out = Vec::new();
        for p in 0..=n {
            for x in ab.diagonal_nondegenerate(p) {
                for y in cd.diagonal_nondegenerate(n - p) {
                    out.push((x.clone(), y));
                }
            }
        }
        out
    }

    /// `AW ∘ σ ∘ EZ`: Eilenberg-Zilber into `N(A×B×C×D)`, reorder factors, Alexander-Whitney
    /// for the splitting `(A×C) ⊠ (B×D)`.
    pub fn switch(&self, x: &PairTensor) -> BTreeMap<PairTensor, i64> {
        let ((a, b), (c, d)) = x;
        let (p, q) = (a.dim(), c.dim());
        let n = p + q;
        let mut acc = BTreeMap::new();
        for sh in shuffles(p, q) {
            let a2 = self.a.act(a, &sh.sigma);
            let b2 = self.b.act(b, &sh.sigma);
            let c2 = self.c.act(c, &sh.tau);
            let d2 = self.d.act(d, &sh.tau);
            for i in 0..=n {
                let (f, g) = (SimplexMap::interval(n, 0, i), SimplexMap::interval(n, i, n - i));
                let ac = (self.a.act(&a2, &f), self.c.act(&c2, &f));
                let bd = (self.b.act(&b2, &g), self.d.act(&d2, &g));
                if jointly_nondegenerate(&ac.0, &ac.1) && jointly_nondegenerate(&bd.0, &bd.1) {
                    add(&mut acc, (ac, bd), sh.sign);
                }
            }
        }
        acc
    }

    /// `(EZ ⊗ EZ) ∘ σ̃ ∘ (AW ⊗ AW)` with the Koszul sign of the middle swap.
    pub fn lower_path(&self, x: &PairTensor) -> BTreeMap<PairTensor, i64> {
        let ((a, b), (c, d)) = x;
        let (p, q) = (a.dim(), c.dim());
        let mut acc = BTreeMap::new();
        for i in 0..=p {
            let fa = self.a.act(a, &SimplexMap::interval(p, 0, i));
            let fb = self.b.act(b, &SimplexMap::interval(p, i, p - i));
            if fa.is_degenerate() || fb.is_degenerate() {
                continue;
            }
            for k in 0..=q {
                let fc = self.c.act(c, &SimplexMap::interval(q, 0, k));
                let fd = self.d.act(d, &SimplexMap::interval(q, k, q - k));
                if fc.is_degenerate() || fd.is_degenerate() {
                    continue;
                }
                let swap = parity((p - i) * k);
                for s1 in shuffles(i, k) {
                    let ac = (self.a.act(&fa, &s1.sigma), self.c.act(&fc, &s1.tau));
                    for s2 in shuffles(p - i, q - k) {
                        let bd = (self.b.act(&fb, &s2.sigma), self.d.act(&fd, &s2.tau));
                        add(&mut acc, (ac.clone(), bd), swap * s1.sign * s2.sign);
                    }
                }
            }
        }
        acc
    }

    /// Checks that both paths of the hexagon agree on every basis element in degrees `≤ nmax`.
    pub fn hexagon_commutes(&self, nmax: usize) -> bool {
        (0..=nmax).all(|n| self.source_basis(n).iter().all(|x| self.switch(x) == self.lower_path(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::dec_upper_star;
    use crate::sset::{delta, sphere};

    #[test]
    fn monoidal_sign_is_chain_iso() {
        let a = dec_upper_star(&crate::doldkan::chains_of(&delta(2, 3)));
        let b = dec_upper_star(&crate::doldkan::chains_of(&sphere(1, 3)));
        let (src, tgt, maps) = dec_monoidal_sign(&a, &b).unwrap();
        for n in src.degrees() {
            assert!(crate::chain::snf::is_unimodular(&maps[n as usize]));
            if n >= 1 {
                assert_eq!(tgt.d(n).mul(&maps[n as usize]), maps[n as usize - 1].mul(&src.d(n)), "degree {n}");
            }
        }
    }

    #[test]
    fn hexagon_on_edges() {
        let e = delta(1, 4);
        let f = FourFactors { a: &e, b: &e, c: &e, d: &e };
        assert!(f.hexagon_commutes(3));
    }
}
