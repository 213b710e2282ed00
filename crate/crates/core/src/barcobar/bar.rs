//! The Eilenberg-MacLane bar construction and the Adams cobar construction.

use super::tensor::{extend_der, poly_add_term, FreeAlgebra, Gen, Poly, Word};
use super::{entries, sign, DgAlgebra, DgCoalgebra};
use crate::chain::{AbGroup, ChainComplex, Matrix};
use crate::error::{invalid, Result};
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// Sign of the component `s⁻¹C_a ⊗ s⁻¹C_b` of the quadratic cobar differential.
pub fn cobar_d2_sign(a: usize) -> i64 {
    sign(a as i64)
}

/// Eilenberg-MacLane bar construction `T(sĀ)` in degrees `≤ degmax`, with the deconcatenation
/// coproduct. For weighted algebras only words of total weight `≤ maxweight` are kept.
///
/// The unit must be a basis vector `u`; `Ā_0` then has the basis `b − ε(b) u` for the other
/// basis vectors `b`.
pub fn em_bar(a: &DgAlgebra, degmax: usize, maxweight: Option<usize>) -> Result<DgCoalgebra> {
    let Some(eps) = &a.augmentation else {
        return invalid("bar construction needs an augmentation");
    };
    if a.complex.lo() < 0 {
        return invalid("bar construction needs a non-negatively graded algebra");
    }
    let nz: Vec<usize> = (0..a.unit.len()).filter(|&k| a.unit[k] != 0).collect();
    if nz.len() != 1 || a.unit[nz[0]] != 1 {
        return invalid("the unit must be a basis vector");
    }
    let u = nz[0];
    // basis of Ā_n as indices into A_n
    let abar: Vec<Vec<usize>> = (0..=degmax as i64)
        .map(|n| if n == 0 { (0..a.rank(0)).filter(|&k| k != u).collect() } else { (0..a.rank(n)).collect() })
        .collect();
    let pos = |n: usize, k: usize| -> Option<usize> { abar[n].iter().position(|&x| x == k) };
    let as_vec = |n: usize, idx: usize| -> Vec<(usize, i64)> {
        let k = abar[n][idx];
        if n == 0 && eps[k] != 0 {
            vec![(k, 1), (u, -eps[k])]
        } else {
            vec![(k, 1)]
        }
    };
    // Ā-coordinates of an element of A_n lying in Ā_n
    let coords = |n: usize, v: &BTreeMap<usize, i64>| -> Vec<(usize, i64)> {
        v.iter().filter(|(_, c)| **c != 0).filter_map(|(&k, &c)| pos(n, k).map(|i| (i, c))).collect()
    };
    let ranks: Vec<usize> = (0..=degmax).map(|d| if d == 0 { 0 } else { abar.get(d - 1).map_or(0, Vec::len) }).collect();
    let weight_of = |g: &Gen| a.weight(g.0 as i64 - 1, abar[g.0 - 1][g.1]);
    let mut alg = FreeAlgebra::new(ranks, degmax, None)?;
    if let Some(w) = maxweight {
        alg = alg.retain(&|word: &Word| word.iter().map(weight_of).sum::<usize>() <= w);
    }
    let d1 = |g: Gen| -> Poly {
        // d(sx) = −s(dx)
        let n = g.0 - 1;
        let mut p = Poly::new();
        if n == 0 {
            return p;
        }
        let dm = a.complex.d(n as i64);
        let mut img = BTreeMap::new();
        for (k, c) in as_vec(n, g.1) {
            for (r, v) in entries(&dm, k) {
                *img.entry(r).or_insert(0) += c * v;
            }
        }
        for (i, c) in coords(n - 1, &img) {
            poly_add_term(&mut p, vec![(n, i)], -c);
        }
        p
    };
    let d2 = |g: Gen, h: Gen| -> Poly {
        // d(sx ⊗ sy) = (−1)^{|x|} s(xy)
        let (n, m) = (g.0 - 1, h.0 - 1);
        let mut p = Poly::new();
        if n + m + 1 > degmax {
            return p;
        }
        let rm = a.rank(m as i64);
        let mut img = BTreeMap::new();
        if let Some(mm) = a.mult_components().get(&(n as i64, m as i64)) {
            for (k1, c1) in as_vec(n, g.1) {
                for (k2, c2) in as_vec(m, h.1) {
                    for (r, v) in entries(mm, k1 * rm + k2) {
                        *img.entry(r).or_insert(0) += c1 * c2 * v;
                    }
                }
            }
        }
        for (i, c) in coords(n + m, &img) {
            poly_add_term(&mut p, vec![(n + m + 1, i)], sign(n as i64) * c);
        }
        p
    };
    let diff = |w: &Word| -> Poly {
        let mut out = Poly::new();
        let mut prefix = 0usize;
        for i in 0..w.len() {
            let s = sign(prefix as i64);
            let mut parts = vec![(d1(w[i]), 1)];
            if i + 1 < w.len() {
                parts.push((d2(w[i], w[i + 1]), 2));
            }
            for (img, consumed) in parts {
                for (m, c) in img {
                    let mut nw = w[..i].to_vec();
                    nw.extend(m);
                    nw.extend_from_slice(&w[i + consumed..]);
                    poly_add_term(&mut out, nw, s * c);
                }
            }
            prefix += w[i].0;
        }
        out
    };
    let mut basis = Vec::new();
    let mut mats = Vec::new();
    for n in 0..=degmax {
        basis.push(alg.words(n).iter().map(|w| alg.word_label(w)).collect());
        if n == 0 {
            mats.push(Matrix::zero(0, alg.rank(0)));
        } else {
            mats.push(alg.matrix(n, &alg, n - 1, &diff));
        }
    }
    let complex = ChainComplex::new(0, basis, mats, true)?;
    let mut comult = BTreeMap::new();
    for n in 0..=degmax {
        for (col, w) in alg.words(n).iter().enumerate() {
            for k in 0..=w.len() {
                let (l, r) = (&w[..k], &w[k..]);
                let (i, j) = (super::tensor::word_degree(l), super::tensor::word_degree(r));
                let row = alg.word_index(l).unwrap() * alg.rank(j) + alg.word_index(r).unwrap();
                comult.entry((i as i64, j as i64)).or_insert_with(Vec::new).push((row, col, BigInt::from(1)));
            }
        }
    }
    let comult = comult
        .into_iter()
        .map(|((i, j), t)| ((i, j), Matrix::from_triplets(alg.rank(i as usize) * alg.rank(j as usize), alg.rank((i + j) as usize), t)))
        .collect();
    DgCoalgebra::new(complex, comult, vec![1], Some(vec![1]))
}

/// The Adams cobar construction `T(s⁻¹C̄)` of a connected coalgebra, in degrees `≤ degmax`.
///
/// If `C_1 ≠ 0` the generators `s⁻¹C_1` sit in degree 0 and a word-length bound is required;
/// the result is then the quotient by words longer than `maxlen`, which is a dg-ideal.
#[derive(Clone, Debug)]
pub struct Cobar {
    pub alg: FreeAlgebra,
    pub complex: ChainComplex,
    d_gen: BTreeMap<Gen, Poly>,
}

impl Cobar {
    /// The differential on a generator `s⁻¹c`, `c ∈ C_{g.0 + 1}`.
    pub fn d_gen(&self, g: Gen) -> Poly {
        self.d_gen.get(&g).cloned().unwrap_or_default()
    }

    pub fn d(&self, p: &Poly) -> Poly {
        extend_der(&|g| self.d_gen(g), p, self.alg.maxlen())
    }

    pub fn homology(&self, n: usize) -> Result<AbGroup> {
        self.complex.homology(n as i64)
    }

    /// The concatenation algebra as a [`DgAlgebra`], augmented by the projection to length 0.
    pub fn as_dg_algebra(&self) -> DgAlgebra {
        let alg = &self.alg;
        let top = alg.maxdeg();
        let mut mult = BTreeMap::new();
        for i in 0..=top {
            for j in 0..=top - i {
                let rj = alg.rank(j);
                let mut trips = Vec::new();
                for (a, u) in alg.words(i).iter().enumerate() {
                    for (b, v) in alg.words(j).iter().enumerate() {
                        if alg.maxlen().is_some_and(|l| u.len() + v.len() > l) {
                            continue;
                        }
                        let mut w = u.clone();
                        w.extend_from_slice(v);
                        trips.push((alg.word_index(&w).unwrap(), a * rj + b, BigInt::from(1)));
                    }
                }
                mult.insert((i as i64, j as i64), Matrix::from_triplets(alg.rank(i + j), alg.rank(i) * rj, trips));
            }
        }
        let mut unit = vec![0; alg.rank(0)];
        unit[alg.word_index(&[]).unwrap()] = 1;
        DgAlgebra { complex: self.complex.clone(), mult, unit: unit.clone(), augmentation: Some(unit), weights: None }
    }
}

/// The differential on the generator `s⁻¹c` of the cobar construction:
/// `−s⁻¹(dc) + Σ_{a,b ≥ 1} (−1)^a s⁻¹c' ⊗ s⁻¹c''`.
pub(crate) fn cobar_gen_differential(c: &DgCoalgebra, n: usize, idx: usize) -> Poly {
    let mut p = Poly::new();
    if n >= 2 {
        let dm = c.complex.d(n as i64);
        for (r, v) in entries(&dm, idx) {
            poly_add_term(&mut p, vec![(n - 2, r)], -v);
        }
    }
    for a in 1..n {
        let b = n - a;
        for (x, y, v) in c.coproduct(a as i64, b as i64, idx) {
            poly_add_term(&mut p, vec![(a - 1, x), (b - 1, y)], cobar_d2_sign(a) * v);
        }
    }
    p
}

pub fn adams_cobar(c: &DgCoalgebra, degmax: usize, maxlen: Option<usize>) -> Result<Cobar> {
    if !c.is_connected() {
        return invalid("cobar construction needs a connected coalgebra (apply connected_cover first)");
    }
    if c.complex.hi() < degmax as i64 + 1 && c.complex.is_truncated() {
        return Err(crate::Error::Truncation { need: degmax + 1, have: c.complex.hi().max(0) as usize });
    }
    let ranks: Vec<usize> = (0..=degmax).map(|d| c.rank(d as i64 + 1)).collect();
    let labels: Vec<Vec<String>> =
        (0..=degmax).map(|d| c.complex.basis(d as i64 + 1).iter().map(|l| format!("s⁻¹{l}")).collect()).collect();
    let alg = FreeAlgebra::with_labels(ranks, labels, degmax, maxlen)?;
    let mut d_gen = BTreeMap::new();
    for g in alg.gens().collect::<Vec<_>>() {
        let p = cobar_gen_differential(c, g.0 + 1, g.1);
        if !p.is_empty() {
            d_gen.insert(g, p);
        }
    }
    let complex = alg.complex(&|g| d_gen.get(&g).cloned().unwrap_or_default())?;
    Ok(Cobar { alg, complex, d_gen })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{sphere, standard, wedge};

    fn free_one_gen(h: &[AbGroup]) -> bool {
        h.iter().all(|g| *g == AbGroup::free(1))
    }

    #[test]
    fn cobar_of_s2_is_tensor_algebra() {
        let s2 = sphere(2, 7);
        let c = DgCoalgebra::of_sset(&s2, 7);
        let om = adams_cobar(&c, 5, None).unwrap();
        let h: Vec<AbGroup> = (0..5).map(|k| om.homology(k).unwrap()).collect();
        assert!(free_one_gen(&h));
        assert!(om.complex.ranks().iter().all(|&r| r <= 1));
        om.as_dg_algebra().check_laws().unwrap();
    }

    #[test]
    fn cobar_of_trivial_and_nonconnected() {
        let om = adams_cobar(&DgCoalgebra::trivial(), 3, None).unwrap();
        assert_eq!(om.complex.ranks(), vec![1, 0, 0, 0]);
        let two_points = standard("boundary1", 3).unwrap();
        assert!(adams_cobar(&DgCoalgebra::of_sset(&two_points, 3), 2, None).is_err());
    }

    #[test]
    fn cobar_of_wedge_squares_to_zero() {
        let x = wedge(&sphere(1, 5), &sphere(2, 5)).unwrap();
        let c = DgCoalgebra::of_sset(&x, 5);
        assert!(adams_cobar(&c, 3, None).is_err());
        let om = adams_cobar(&c, 3, Some(4)).unwrap();
        // ChainComplex::new already rejects d∘d ≠ 0; H_0 of a free algebra on s⁻¹C_1 truncated
        assert_eq!(om.homology(0).unwrap(), AbGroup::free(om.alg.rank(0)));
    }

    #[test]
    fn bar_of_polynomial_algebra() {
        let a = DgAlgebra::truncated_polynomial(7);
        let b = em_bar(&a, 5, Some(7)).unwrap();
        let h: Vec<AbGroup> = (0..5).map(|k| b.complex.homology(k).unwrap()).collect();
        assert_eq!(h[0], AbGroup::free(1));
        assert_eq!(h[1], AbGroup::free(1));
        assert!(h[2..].iter().all(AbGroup::is_zero));
    }

    #[test]
    fn bar_of_trivial_and_missing_augmentation() {
        let b = em_bar(&DgAlgebra::trivial(), 3, None).unwrap();
        assert_eq!(b.complex.ranks(), vec![1, 0, 0, 0]);
        let mut a = DgAlgebra::trivial();
        a.augmentation = None;
        assert!(em_bar(&a, 3, None).is_err());
    }

    #[test]
    fn bar_of_cobar_squares_to_zero() {
        let s2 = sphere(2, 5);
        let om = adams_cobar(&DgCoalgebra::of_sset(&s2, 5), 4, None).unwrap();
        let b = em_bar(&om.as_dg_algebra(), 4, None).unwrap();
        b.check_laws().unwrap();
    }
}
