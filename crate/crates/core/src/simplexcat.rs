//! Morphisms of the simplex category and the combinatorics built on them.
//!
//! A [`SimplexMap`] is a weakly monotone map `[n] -> [m]` stored by its
//! value sequence. Composition follows function notation: `compose(f, g)`
//! is `f ∘ g`.

use crate::error::{invalid, Error, Result};
use std::fmt;

/// A weakly monotone map `[dom] -> [cod]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexMap {
    cod: usize,
    values: Vec<usize>,
}

impl fmt::Debug for SimplexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->[{}]", self.values, self.cod)
    }
}

impl SimplexMap {
    /// Builds a map from its values; rejects empty, non-monotone or out-of-range data.
    pub fn new(cod: usize, values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return invalid("a simplex map needs a nonempty domain");
        }
        if values.iter().any(|&v| v > cod) {
            return invalid(format!("value exceeds codomain [{cod}]: {values:?}"));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return invalid(format!("values not monotone: {values:?}"));
        }
        Ok(SimplexMap { cod, values })
    }

    pub(crate) fn from_values_unchecked(cod: usize, values: Vec<usize>) -> Self {
        debug_assert!(Self::new(cod, values.clone()).is_ok());
        SimplexMap { cod, values }
    }

    pub fn identity(n: usize) -> Self {
        SimplexMap { cod: n, values: (0..=n).collect() }
    }

    /// The face `δ_i : [n-1] -> [n]` omitting `i`.
    pub fn face(n: usize, i: usize) -> Self {
        assert!(n >= 1 && i <= n, "face δ_{i} into [{n}]");
        let values = (0..n).map(|x| if x < i { x } else { x + 1 }).collect();
        SimplexMap { cod: n, values }
    }

    /// The degeneracy `s_i : [n+1] -> [n]` hitting `i` twice.
    pub fn degeneracy(n: usize, i: usize) -> Self {
        assert!(i <= n, "degeneracy s_{i} onto [{n}]");
        let values = (0..=n + 1).map(|x| if x <= i { x } else { x - 1 }).collect();
        SimplexMap { cod: n, values }
    }

    /// The constant map `[n] -> [m]` with value `v`.
    pub fn constant(n: usize, m: usize, v: usize) -> Self {
        assert!(v <= m);
        SimplexMap { cod: m, values: vec![v; n + 1] }
    }

    /// The interval inclusion `[len] -> [m]` starting at `start`.
    pub fn interval(m: usize, start: usize, len: usize) -> Self {
        assert!(start + len <= m);
        SimplexMap { cod: m, values: (start..=start + len).collect() }
    }

    pub fn dom(&self) -> usize {
        self.values.len() - 1
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn at(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn is_identity(&self) -> bool {
        self.cod == self.dom() && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.cod
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// Endpoint preserving.
    pub fn is_active(&self) -> bool {
        self.values[0] == 0 && *self.values.last().unwrap() == self.cod
    }

    /// Interval inclusion.
    pub fn is_inert(&self) -> bool {
        self.values.windows(2).all(|w| w[1] == w[0] + 1)
    }

    /// Positions `e` with `f(e) = f(e+1)`.
    pub fn collapse_set(&self) -> Vec<usize> {
        (0..self.dom()).filter(|&e| self.values[e] == self.values[e + 1]).collect()
    }

    /// True if `f(e) = f(e+1)`.
    pub fn is_degenerate_at(&self, e: usize) -> bool {
        e < self.dom() && self.values[e] == self.values[e + 1]
    }

    /// Values missed by the map.
    pub fn missed(&self) -> Vec<usize> {
        (0..=self.cod).filter(|v| self.values.binary_search(v).is_err()).collect()
    }

    /// Surjection followed by injection: returns `(degeneracy, face)` with `face ∘ degeneracy = self`.
    pub fn epi_mono_factor(&self) -> (SimplexMap, SimplexMap) {
        let mut image: Vec<usize> = self.values.clone();
        image.dedup();
        let r = image.len() - 1;
        let mut epi = Vec::with_capacity(self.values.len());
        let mut k = 0;
        for &v in &self.values {
            while image[k] != v {
                k += 1;
            }
            epi.push(k);
        }
        (SimplexMap { cod: r, values: epi }, SimplexMap { cod: self.cod, values: image })
    }

    /// Active map followed by inert: returns `(active, inert)` with `inert ∘ active = self`.
    pub fn active_inert_factor(&self) -> (SimplexMap, SimplexMap) {
        let lo = self.values[0];
        let hi = *self.values.last().unwrap();
        let active = SimplexMap { cod: hi - lo, values: self.values.iter().map(|v| v - lo).collect() };
        (active, SimplexMap::interval(self.cod, lo, hi - lo))
    }

    /// Concatenation `[n] ∗ [n'] = [n+n'+1]`.
    pub fn star(&self, other: &SimplexMap) -> SimplexMap {
        let shift = self.cod + 1;
        let mut values = self.values.clone();
        values.extend(other.values.iter().map(|v| v + shift));
        SimplexMap { cod: self.cod + other.cod + 1, values }
    }

    /// Concatenation identifying the last point of `self` with the first of `other`.
    pub fn star_prime(&self, other: &SimplexMap) -> Result<SimplexMap> {
        if !self.is_active() || !other.is_active() {
            return invalid("∗′ needs active maps");
        }
        Ok(self.star_prime_shift(other))
    }

    /// `∗′` without the activity check: glue `other` shifted by the top value of `self`.
    pub fn star_prime_shift(&self, other: &SimplexMap) -> SimplexMap {
        let shift = self.cod;
        let mut values = self.values.clone();
        values.extend(other.values.iter().skip(1).map(|v| v + shift));
        SimplexMap { cod: self.cod + other.cod, values }
    }

    /// The duality between active maps `[n] -> [m]` and maps `[m-1] -> [n-1]`.
    pub fn interval_dual(&self) -> Result<SimplexMap> {
        let (n, m) = (self.dom(), self.cod);
        if !self.is_active() || n == 0 || m == 0 {
            return invalid("interval dual needs an active map with n, m ≥ 1");
        }
        let values = (1..=m)
            .map(|j| self.values.iter().position(|&v| v >= j).unwrap() - 1)
            .collect();
        Ok(SimplexMap { cod: n - 1, values })
    }

    /// Inverse of [`SimplexMap::interval_dual`]: sends any `g : [a] -> [b]` to the active map
    /// `[b+1] -> [a+1]`, `x ↦ #{i : g(i) < x}`.
    pub fn interval_dual_inv(&self) -> SimplexMap {
        let a = self.dom();
        let values = (0..=self.cod + 1).map(|x| self.values.iter().filter(|&&v| v < x).count()).collect();
        SimplexMap { cod: a + 1, values }
    }

    /// Decomposes a surjection as a word of degeneracies.
    ///
    /// Returns indices `d_1 < … < d_k`; the map equals `s_{d_1} ∘ s_{d_2} ∘ … ∘ s_{d_k}`.
    pub fn degeneracy_indices(&self) -> Vec<usize> {
        debug_assert!(self.is_surjective());
        self.collapse_set()
    }

    /// Decomposes an injection as a word of faces.
    ///
    /// Returns the missed values `j_1 < … < j_k`; the map equals `δ_{j_k} ∘ … ∘ δ_{j_1}`.
    pub fn face_indices(&self) -> Vec<usize> {
        debug_assert!(self.is_injective());
        self.missed()
    }
}

/// `f ∘ g`.
pub fn compose(f: &SimplexMap, g: &SimplexMap) -> Result<SimplexMap> {
    if g.cod != f.dom() {
        return Err(Error::Dimension(format!("compose: cod {} vs dom {}", g.cod, f.dom())));
    }
    Ok(compose_unchecked(f, g))
}

pub(crate) fn compose_unchecked(f: &SimplexMap, g: &SimplexMap) -> SimplexMap {
    SimplexMap { cod: f.cod, values: g.values.iter().map(|&x| f.values[x]).collect() }
}

/// Every monotone map `[n] -> [m]`, in lexicographic order.
pub fn all_maps(n: usize, m: usize) -> Vec<SimplexMap> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n + 1);
    fn rec(n: usize, m: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<SimplexMap>) {
        if cur.len() == n + 1 {
            out.push(SimplexMap { cod: m, values: cur.clone() });
            return;
        }
        for v in lo..=m {
            cur.push(v);
            rec(n, m, v, cur, out);
            cur.pop();
        }
    }
    rec(n, m, 0, &mut cur, &mut out);
    out
}

/// Every surjection `[n] ↠ [k]`.
pub fn surjections(n: usize, k: usize) -> Vec<SimplexMap> {
    if k > n {
        return Vec::new();
    }
    subsets(n, n - k)
        .into_iter()
        .map(|collapse| surjection_from_collapse(n, &collapse))
        .collect()
}

/// The surjection out of `[n]` collapsing exactly the intervals `(e, e+1)` for `e` in `collapse`.
pub fn surjection_from_collapse(n: usize, collapse: &[usize]) -> SimplexMap {
    let mut values = Vec::with_capacity(n + 1);
    let mut v = 0;
    values.push(0);
    for e in 0..n {
        if !collapse.contains(&e) {
            v += 1;
        }
        values.push(v);
    }
    SimplexMap { cod: v, values }
}

/// All `k`-subsets of `{0..n-1}` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(n, k, x + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// A `(p,q)`-shuffle: a jointly injective pair of surjections out of `[p+q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shuffle {
    pub p: usize,
    pub q: usize,
    pub sigma: SimplexMap,
    pub tau: SimplexMap,
    pub sign: i64,
}

/// All `(p,q)`-shuffles, ordered lexicographically by the set of intervals collapsed by `sigma`
/// (intervals labelled `1..=p+q`).
pub fn shuffles(p: usize, q: usize) -> Vec<Shuffle> {
    let n = p + q;
    subsets(n, q)
        .into_iter()
        .map(|b| {
            let tau_collapse: Vec<usize> = (0..n).filter(|e| !b.contains(e)).collect();
            let sigma = surjection_from_collapse(n, &b);
            let tau = surjection_from_collapse(n, &tau_collapse);
            Shuffle { p, q, sigma, tau, sign: shuffle_sign(n, &b) }
        })
        .collect()
}

/// Sign of the shuffle whose `sigma` collapses the intervals `b` (0-based) of `[n]`:
/// the parity of pairs (σ-collapse, later σ-step).
pub fn shuffle_sign(n: usize, b: &[usize]) -> i64 {
    let q = b.len();
    let count: usize = b.iter().enumerate().map(|(i, &bi)| (n - 1 - bi) - (q - 1 - i)).sum();
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

/// An arbitrary function `{0..dom} -> {0..cod}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinSetMap {
    pub cod: usize,
    pub values: Vec<usize>,
}

impl FinSetMap {
    pub fn new(cod: usize, values: Vec<usize>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|&v| v > cod) {
            return invalid("finite set map out of range");
        }
        Ok(FinSetMap { cod, values })
    }

    pub fn dom(&self) -> usize {
        self.values.len() - 1
    }

    /// `self ∘ g`.
    pub fn after(&self, g: &FinSetMap) -> FinSetMap {
        FinSetMap { cod: self.cod, values: g.values.iter().map(|&x| self.values[x]).collect() }
    }

    pub fn from_simplex_map(f: &SimplexMap) -> Self {
        FinSetMap { cod: f.cod(), values: f.values().to_vec() }
    }

    /// Every function `{0..n} -> {0..m}`.
    pub fn all(n: usize, m: usize) -> Vec<FinSetMap> {
        let mut out = vec![Vec::new()];
        for _ in 0..=n {
            out = out
                .into_iter()
                .flat_map(|v: Vec<usize>| {
                    (0..=m).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(|values| FinSetMap { cod: m, values }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sm(cod: usize, v: &[usize]) -> SimplexMap {
        SimplexMap::new(cod, v.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let s1 = SimplexMap::degeneracy(1, 1);
        let d1 = SimplexMap::face(2, 1);
        assert!(compose(&s1, &d1).unwrap().is_identity());
        let c = compose(&SimplexMap::face(2, 0), &SimplexMap::face(1, 0)).unwrap();
        assert_eq!(c.values(), &[2]);
        assert!(compose(&s1, &s1).is_err());
    }

    #[test]
    fn simplicial_identities() {
        for n in 1..=6usize {
            for j in 0..=n {
                for i in 0..j {
                    // δ_j δ_i = δ_i δ_{j-1} as maps [n-2] -> [n]
                    if n >= 2 {
                        let lhs = compose(&SimplexMap::face(n, j), &SimplexMap::face(n - 1, i)).unwrap();
                        let rhs = compose(&SimplexMap::face(n, i), &SimplexMap::face(n - 1, j - 1)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
            for i in 0..=n {
                for j in i..=n {
                    // s_j s_i = s_i s_{j+1} as maps [n+2] -> [n]  (i ≤ j)
                    let lhs = compose(&SimplexMap::degeneracy(n, j), &SimplexMap::degeneracy(n + 1, i)).unwrap();
                    let rhs = compose(&SimplexMap::degeneracy(n, i), &SimplexMap::degeneracy(n + 1, j + 1)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            // mixed: s_j δ_i
            for j in 0..n {
                for i in 0..=n {
                    let lhs = compose(&SimplexMap::degeneracy(n - 1, j), &SimplexMap::face(n, i)).unwrap();
                    let expect = if i < j {
                        compose(&SimplexMap::face(n - 1, i), &SimplexMap::degeneracy(n - 2, j - 1)).ok()
                    } else if i == j || i == j + 1 {
                        Some(SimplexMap::identity(n - 1))
                    } else {
                        compose(&SimplexMap::face(n - 1, i - 1), &SimplexMap::degeneracy(n - 2, j)).ok()
                    };
                    if let Some(e) = expect {
                        assert_eq!(lhs, e);
                    }
                }
            }
        }
    }

    #[test]
    fn factorizations() {
        let (d, m) = sm(2, &[0, 0, 2]).epi_mono_factor();
        assert_eq!(d, sm(1, &[0, 0, 1]));
        assert_eq!(m, sm(2, &[0, 2]));
        let (a, i) = sm(3, &[1, 2]).active_inert_factor();
        assert!(a.is_identity());
        assert_eq!(i, sm(3, &[1, 2]));
        let (a, i) = sm(2, &[1]).active_inert_factor();
        assert!(a.is_identity() && i == sm(2, &[1]));
        for n in 0..=5 {
            for m in 0..=5 {
                for f in all_maps(n, m) {
                    let (e, mo) = f.epi_mono_factor();
                    assert!(e.is_surjective() && mo.is_injective());
                    assert_eq!(compose(&mo, &e).unwrap(), f);
                    let (a, i) = f.active_inert_factor();
                    assert!(a.is_active() && i.is_inert());
                    assert_eq!(compose(&i, &a).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn star_examples() {
        let id0 = SimplexMap::identity(0);
        assert!(id0.star(&id0).is_identity());
        let id1 = SimplexMap::identity(1);
        assert_eq!(id1.star_prime(&id1).unwrap().dom(), 2);
        let s0 = SimplexMap::degeneracy(0, 0);
        assert_eq!(s0.star(&s0), sm(1, &[0, 0, 1, 1]));
        assert!(SimplexMap::face(1, 0).star_prime(&id1).is_err());
    }

    #[test]
    fn star_functorial_and_associative() {
        let maps: Vec<SimplexMap> = (0..=2).flat_map(|n| (0..=2).flat_map(move |m| all_maps(n, m))).collect();
        for f in &maps {
            for g in &maps {
                for h in maps.iter().take(12) {
                    assert_eq!(f.star(g).star(h), f.star(&g.star(h)));
                }
                for f2 in maps.iter().filter(|x| x.cod() == f.dom()) {
                    for g2 in maps.iter().filter(|x| x.cod() == g.dom()) {
                        let lhs = compose(&f.star(g), &f2.star(g2)).unwrap();
                        let rhs = compose(f, f2).unwrap().star(&compose(g, g2).unwrap());
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn interval_dual_examples() {
        let d1 = SimplexMap::face(2, 1);
        assert_eq!(d1.interval_dual().unwrap(), SimplexMap::degeneracy(0, 0));
        for n in 1..=4 {
            assert!(SimplexMap::identity(n).interval_dual().unwrap().is_identity());
            for m in 1..=4 {
                for f in all_maps(n, m).into_iter().filter(|f| f.is_active()) {
                    assert_eq!(f.interval_dual().unwrap().interval_dual_inv(), f);
                }
                for g in all_maps(n - 1, m - 1) {
                    assert_eq!(g.interval_dual_inv().interval_dual().unwrap(), g);
                }
            }
        }
        // faces and degeneracies are exchanged
        for n in 2..=4 {
            for i in 1..n {
                assert_eq!(SimplexMap::face(n, i).interval_dual().unwrap(), SimplexMap::degeneracy(n - 2, i - 1));
            }
        }
    }

    fn perm_sign(perm: &[usize]) -> i64 {
        let mut inv = 0;
        for a in 0..perm.len() {
            for b in a + 1..perm.len() {
                if perm[a] > perm[b] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn shuffles_against_brute_force() {
        for n in 0..=6 {
            for p in 0..=n {
                let q = n - p;
                let got = shuffles(p, q);
                let mut brute = Vec::new();
                for s in surjections(n, p) {
                    for t in surjections(n, q) {
                        let joint = (0..n).all(|e| s.at(e) != s.at(e + 1) || t.at(e) != t.at(e + 1));
                        if joint {
                            brute.push((s.clone(), t.clone()));
                        }
                    }
                }
                assert_eq!(got.len(), brute.len());
                for sh in &got {
                    assert!(brute.contains(&(sh.sigma.clone(), sh.tau.clone())));
                    // permutation sign: the σ-steps are x-coordinates 0..p, τ-steps p..n
                    let mut perm = Vec::new();
                    let (mut x, mut y) = (0, 0);
                    for e in 0..n {
                        if sh.sigma.at(e) != sh.sigma.at(e + 1) {
                            perm.push(x);
                            x += 1;
                        } else {
                            perm.push(p + y);
                            y += 1;
                        }
                    }
                    assert_eq!(sh.sign, perm_sign(&perm));
                }
            }
        }
        assert_eq!(shuffles(1, 1).len(), 2);
        let s = shuffles(0, 3);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].sign, 1);
        let signs: Vec<i64> = shuffles(2, 1).iter().map(|s| s.sign).collect();
        assert_eq!(signs, vec![1, -1, 1]);
    }

    #[test]
    fn degeneracy_word_reproduces_map() {
        for n in 0..=5 {
            for k in 0..=n {
                for f in surjections(n, k) {
                    let idx = f.degeneracy_indices();
                    let mut acc = SimplexMap::identity(k);
                    let mut cod = k;
                    for &d in idx.iter() {
                        // acc ∘ s_d, each step adds one to the domain
                        acc = compose(&acc, &SimplexMap::degeneracy(cod, d)).unwrap();
                        cod += 1;
                    }
                    assert_eq!(acc, f);
                }
            }
        }
    }
}
