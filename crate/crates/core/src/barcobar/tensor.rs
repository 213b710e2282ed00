//! Truncated free graded algebras `T(V)` on a finite graded generating set.

use crate::chain::matrix::SparseVec;
use crate::chain::{ChainComplex, Matrix};
use crate::error::{invalid, Result};
use num_bigint::BigInt;
use std::collections::{BTreeMap, HashMap};

/// A generator `(degree, index)`.
pub type Gen = (usize, usize);
/// A tensor word; the empty word is the unit.
pub type Word = Vec<Gen>;
/// A finite ℤ-linear combination of words.
pub type Poly = BTreeMap<Word, i64>;

pub fn word_degree(w: &[Gen]) -> usize {
    w.iter().map(|g| g.0).sum()
}

pub fn poly_add_term(p: &mut Poly, w: Word, c: i64) {
    if c == 0 {
        return;
    }
    use std::collections::btree_map::Entry;
    match p.entry(w) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let v = e.get().checked_add(c).expect("coefficient overflow");
            if v == 0 {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

pub fn poly_add(p: &mut Poly, q: &Poly, c: i64) {
    for (w, &x) in q {
        poly_add_term(p, w.clone(), x.checked_mul(c).expect("coefficient overflow"));
    }
}

pub fn poly_gen(g: Gen) -> Poly {
    Poly::from([(vec![g], 1)])
}

pub fn poly_unit() -> Poly {
    Poly::from([(Vec::new(), 1)])
}

/// Concatenation product, dropping words longer than `maxlen`.
pub fn poly_mul(a: &Poly, b: &Poly, maxlen: Option<usize>) -> Poly {
    let mut out = Poly::new();
    for (u, &x) in a {
        for (v, &y) in b {
            if maxlen.is_some_and(|l| u.len() + v.len() > l) {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            poly_add_term(&mut out, w, x.checked_mul(y).expect("coefficient overflow"));
        }
    }
    out
}

/// Multiplicative extension of a degree-0 map on generators.
pub fn extend_hom(f: &dyn Fn(Gen) -> Poly, p: &Poly, maxlen: Option<usize>) -> Poly {
    let mut cache: HashMap<Gen, Poly> = HashMap::new();
    let mut out = Poly::new();
    for (w, &c) in p {
        let mut acc = poly_unit();
        for g in w {
            let img = cache.entry(*g).or_insert_with(|| f(*g));
            acc = poly_mul(&acc, img, maxlen);
            if acc.is_empty() {
                break;
            }
        }
        poly_add(&mut out, &acc, c);
    }
    out
}

/// Extension of a map on generators of odd degree as a derivation with Koszul signs:
/// `D(x_1…x_k) = Σ_i (−1)^{|x_1|+…+|x_{i−1}|} x_1…D(x_i)…x_k`.
pub fn extend_der(f: &dyn Fn(Gen) -> Poly, p: &Poly, maxlen: Option<usize>) -> Poly {
    let mut cache: HashMap<Gen, Poly> = HashMap::new();
    let mut out = Poly::new();
    for (w, &c) in p {
        let mut prefix_deg = 0usize;
        for (i, g) in w.iter().enumerate() {
            let img = cache.entry(*g).or_insert_with(|| f(*g)).clone();
            let sign = if prefix_deg % 2 == 0 { c } else { -c };
            for (m, &y) in &img {
                let len = w.len() - 1 + m.len();
                if maxlen.is_some_and(|l| len > l) {
                    continue;
                }
                let mut nw = w[..i].to_vec();
                nw.extend_from_slice(m);
                nw.extend_from_slice(&w[i + 1..]);
                poly_add_term(&mut out, nw, y.checked_mul(sign).expect("coefficient overflow"));
            }
            prefix_deg += g.0;
        }
    }
    out
}

/// The words of `T(V)` in degrees `0..=maxdeg`, with at most `maxlen` letters.
#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    ranks: Vec<usize>,
    labels: Vec<Vec<String>>,
    maxdeg: usize,
    maxlen: Option<usize>,
    words: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
}

impl FreeAlgebra {
    /// `ranks[d]` generators in degree `d`. Degree-0 generators require a length bound.
    pub fn new(ranks: Vec<usize>, maxdeg: usize, maxlen: Option<usize>) -> Result<Self> {
        let labels = ranks
            .iter()
            .enumerate()
            .map(|(d, &r)| (0..r).map(|i| format!("g{d}.{i}")).collect())
            .collect();
        Self::with_labels(ranks, labels, maxdeg, maxlen)
    }

    pub fn with_labels(ranks: Vec<usize>, labels: Vec<Vec<String>>, maxdeg: usize, maxlen: Option<usize>) -> Result<Self> {
        if ranks.first().is_some_and(|&r| r > 0) && maxlen.is_none() {
            return invalid("degree-0 generators need a word-length bound");
        }
        let mut ranks = ranks;
        ranks.resize(maxdeg + 1, 0);
        ranks.truncate(maxdeg + 1);
        let mut words: Vec<Vec<Word>> = vec![Vec::new(); maxdeg + 1];
        // extend words by one letter, in order of length
        let mut frontier: Vec<Word> = vec![Vec::new()];
        words[0].push(Vec::new());
        let mut len = 0;
        while !frontier.is_empty() && maxlen.map_or(true, |l| len < l) {
            let mut next = Vec::new();
            for w in &frontier {
                let d = word_degree(w);
                for (gd, &r) in ranks.iter().enumerate() {
                    if d + gd > maxdeg {
                        break;
                    }
                    for i in 0..r {
                        let mut nw = w.clone();
                        nw.push((gd, i));
                        words[d + gd].push(nw.clone());
                        next.push(nw);
                    }
                }
            }
            frontier = next;
            len += 1;
        }
        for ws in &mut words {
            ws.sort();
        }
        let index = words.iter().map(|ws| ws.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect()).collect();
        Ok(FreeAlgebra { ranks, labels, maxdeg, maxlen, words, index })
    }

    /// Keeps only the words accepted by `keep`, which must be closed under taking subwords.
    pub fn retain(mut self, keep: &dyn Fn(&Word) -> bool) -> Self {
        for ws in &mut self.words {
            ws.retain(|w| keep(w));
        }
        self.index = self.words.iter().map(|ws| ws.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect()).collect();
        self
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn maxdeg(&self) -> usize {
        self.maxdeg
    }

    pub fn maxlen(&self) -> Option<usize> {
        self.maxlen
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + '_ {
        self.ranks.iter().enumerate().flat_map(|(d, &r)| (0..r).map(move |i| (d, i)))
    }

    pub fn words(&self, n: usize) -> &[Word] {
        self.words.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn rank(&self, n: usize) -> usize {
        self.words(n).len()
    }

    pub fn word_index(&self, w: &[Gen]) -> Option<usize> {
        self.index.get(word_degree(w))?.get(w).copied()
    }

    pub fn word_label(&self, w: &[Gen]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&(d, i)| self.labels[d][i].as_str()).collect::<Vec<_>>().join("|")
    }

    /// Coordinates of the degree-`n` part of `p`; other words are ignored.
    pub fn to_vec(&self, p: &Poly, n: usize) -> SparseVec {
        let mut v = SparseVec::new();
        for (w, &c) in p {
            if word_degree(w) != n {
                continue;
            }
            if let Some(i) = self.index.get(n).and_then(|ix| ix.get(w)) {
                crate::chain::matrix::add_entry(&mut v, *i, BigInt::from(c));
            }
        }
        v
    }

    /// Matrix of a map sending degree-`n` words into `target` degree `m`.
    pub fn matrix(&self, n: usize, target: &FreeAlgebra, m: usize, f: &dyn Fn(&Word) -> Poly) -> Matrix {
        let cols = self.words(n).iter().map(|w| target.to_vec(&f(w), m)).collect();
        Matrix::from_columns(target.rank(m), cols)
    }

    /// The complex `(T(V), D)` in degrees `0..=maxdeg` for a derivation given on generators.
    pub fn complex(&self, d: &dyn Fn(Gen) -> Poly) -> Result<ChainComplex> {
        let mut basis = Vec::new();
        let mut mats = Vec::new();
        for n in 0..=self.maxdeg {
            basis.push(self.words(n).iter().map(|w| self.word_label(w)).collect());
            if n == 0 {
                mats.push(Matrix::zero(0, self.rank(0)));
            } else {
                mats.push(self.matrix(n, self, n - 1, &|w| extend_der(d, &Poly::from([(w.clone(), 1)]), self.maxlen)));
            }
        }
        ChainComplex::new(0, basis, mats, true)
    }
}
