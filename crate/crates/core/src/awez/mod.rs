//! Alexander-Whitney, Eilenberg-Zilber and Shih operators.
//!
//! Operators are first built as [`TensorWord`]s, formal sums of tuples of simplex maps, and
//! then evaluated on normalized chains of a bisimplicial set.

mod eval;
mod monoidal;

pub use eval::BiChains;
pub use monoidal::*;

use crate::error::{invalid, Result};
use crate::simplexcat::{compose_unchecked, shuffles, SimplexMap};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

/// A ℤ-linear combination of tuples `(f_0, …, f_k)` of maps `[dom] -> [cods[i]]`.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorWord {
    dom: usize,
    cods: Vec<usize>,
    terms: BTreeMap<Vec<SimplexMap>, i64>,
}

impl TensorWord {
    pub fn zero(dom: usize, cods: Vec<usize>) -> Self {
        TensorWord { dom, cods, terms: BTreeMap::new() }
    }

    /// The arity-one word `id_[n]`.
    pub fn identity(n: usize) -> Self {
        let mut w = TensorWord::zero(n, vec![n]);
        w.add_term(vec![SimplexMap::identity(n)], 1);
        w
    }

    pub fn from_terms(dom: usize, cods: Vec<usize>, terms: impl IntoIterator<Item = (Vec<SimplexMap>, i64)>) -> Result<Self> {
        let mut w = TensorWord::zero(dom, cods);
        for (t, c) in terms {
            if t.len() != w.arity() || t.iter().zip(&w.cods).any(|(f, &m)| f.dom() != dom || f.cod() != m) {
                return invalid(format!("tuple {t:?} does not fit domain {dom} and codomains {:?}", w.cods));
            }
            w.add_term(t, c);
        }
        Ok(w)
    }

    pub fn arity(&self) -> usize {
        self.cods.len()
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cods(&self) -> &[usize] {
        &self.cods
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &[SimplexMap]) -> i64 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[SimplexMap], i64)> {
        self.terms.iter().map(|(t, &c)| (t.as_slice(), c))
    }

    pub(crate) fn add_term(&mut self, t: Vec<SimplexMap>, c: i64) {
        debug_assert_eq!(t.len(), self.arity());
        if c == 0 {
            return;
        }
        match self.terms.entry(t) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &TensorWord) -> TensorWord {
        assert_eq!((self.dom, &self.cods), (other.dom, &other.cods), "adding words of different shapes");
        let mut w = self.clone();
        for (t, c) in other.terms() {
            w.add_term(t.to_vec(), c);
        }
        w
    }

    pub fn scale(&self, c: i64) -> TensorWord {
        let mut w = TensorWord::zero(self.dom, self.cods.clone());
        for (t, v) in self.terms() {
            w.add_term(t.to_vec(), v * c);
        }
        w
    }

    pub fn sub(&self, other: &TensorWord) -> TensorWord {
        self.add(&other.scale(-1))
    }

    /// Keeps the tuples satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&[SimplexMap]) -> bool) -> TensorWord {
        let mut w = TensorWord::zero(self.dom, self.cods.clone());
        for (t, c) in self.terms() {
            if keep(t) {
                w.add_term(t.to_vec(), c);
            }
        }
        w
    }

    /// Precomposes every slot with `g : [m] -> [dom]`.
    pub fn precompose(&self, g: &SimplexMap) -> TensorWord {
        assert_eq!(g.cod(), self.dom);
        let mut w = TensorWord::zero(g.dom(), self.cods.clone());
        for (t, c) in self.terms() {
            w.add_term(t.iter().map(|f| compose_unchecked(f, g)).collect(), c);
        }
        w
    }

    /// Drops every tuple with slot `i` collapsing the interval `(e, e+1)` for `e = n-k-1+i`,
    /// where `n = dom` and `k + 1` is the arity.
    pub fn p_projection(&self) -> TensorWord {
        let n = self.dom as i64;
        let k = self.arity() as i64 - 1;
        self.filter(|t| {
            t.iter().enumerate().all(|(i, f)| {
                let e = n - k - 1 + i as i64;
                !(e >= 0 && (e as usize) < self.dom && f.is_degenerate_at(e as usize))
            })
        })
    }

    /// Drops tuples that are jointly degenerate, i.e. all slots collapse a common interval.
    pub fn drop_jointly_degenerate(&self) -> TensorWord {
        self.filter(|t| !(0..self.dom).any(|e| t.iter().all(|f| f.is_degenerate_at(e))))
    }
}

fn fmt_map(f: &SimplexMap) -> String {
    let v: Vec<String> = f.values().iter().map(|x| x.to_string()).collect();
    format!("({})", v.join(","))
}

impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (t, c)) in self.terms.iter().enumerate() {
            let body: Vec<String> = t.iter().map(fmt_map).collect();
            let body = body.join("⊗");
            match (idx, *c) {
                (0, 1) => write!(f, "{body}")?,
                (0, -1) => write!(f, "-{body}")?,
                (0, c) => write!(f, "{c}·{body}")?,
                (_, 1) => write!(f, " + {body}")?,
                (_, -1) => write!(f, " - {body}")?,
                (_, c) if c < 0 => write!(f, " - {}·{body}", -c)?,
                (_, c) => write!(f, " + {c}·{body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorWord[{} -> {:?}]({self})", self.dom, self.cods)
    }
}

/// `Q^n = Σ sgn(σ,τ) (δ_{0,p}σ, δ_{p,n}τ)` over `(p,q)`-shuffles with `p + q = n`.
pub fn q_element(n: usize) -> TensorWord {
    let mut w = TensorWord::zero(n, vec![n, n]);
    for p in 0..=n {
        let q = n - p;
        let front = SimplexMap::interval(n, 0, p);
        let back = SimplexMap::interval(n, p, q);
        for sh in shuffles(p, q) {
            w.add_term(vec![compose_unchecked(&front, &sh.sigma), compose_unchecked(&back, &sh.tau)], sh.sign);
        }
    }
    w
}

/// The pair `(B⁰_y, B¹_y)` of maps `[n] -> [n]`, `n = y.len()`; `B⁰_y` is followed by the
/// initial-segment inclusion.
pub fn b_element(y: &[bool]) -> (SimplexMap, SimplexMap) {
    let (b0, b1) = b_raw(y);
    let n = y.len();
    let incl = SimplexMap::interval(n, 0, b0.cod());
    (compose_unchecked(&incl, &b0), b1)
}

fn b_raw(y: &[bool]) -> (SimplexMap, SimplexMap) {
    let n = y.len();
    if n == 0 {
        return (SimplexMap::identity(0), SimplexMap::identity(0));
    }
    let (p0, p1) = b_raw(&y[1..]);
    let y0 = y[0] as usize;
    let s = SimplexMap::degeneracy(n - 1, n - 1);
    let step = |j: usize, b: SimplexMap| -> SimplexMap {
        match j.cmp(&y0) {
            std::cmp::Ordering::Less => compose_unchecked(&b, &s),
            std::cmp::Ordering::Equal => b.star(&SimplexMap::identity(0)),
            std::cmp::Ordering::Greater => {
                let c = b.cod();
                compose_unchecked(&SimplexMap::face(c + 1, 0), &compose_unchecked(&b, &s))
            }
        }
    };
    (step(0, p0), step(1, p1))
}

/// `Σ_y (−1)^{Σ_{i<j} y_j(y_i+1)} B⁰_y ⊗ B¹_y`.
pub fn q_from_b(n: usize) -> TensorWord {
    let mut w = TensorWord::zero(n, vec![n, n]);
    for bits in 0..(1u64 << n) {
        let y: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        let mut count = 0;
        for j in 0..n {
            for i in 0..j {
                if y[j] && !y[i] {
                    count += 1;
                }
            }
        }
        let (b0, b1) = b_element(&y);
        w.add_term(vec![b0, b1], if count % 2 == 0 { 1 } else { -1 });
    }
    w
}

/// `ℋ^n_b = s_b ∘ (id_[b] ∗ Q^{n-b-1})`, a word of pairs of maps `[n] -> [n-1]`.
pub fn shih_term(n: usize, b: usize) -> TensorWord {
    assert!(n >= 1 && b < n, "shih_term needs 0 ≤ b < n");
    let m = n - b - 1;
    let s = SimplexMap::degeneracy(n - 1, b);
    let id = SimplexMap::identity(b);
    let mut w = TensorWord::zero(n, vec![n - 1, n - 1]);
    for (t, c) in q_element(m).terms() {
        let slot = |f: &SimplexMap| compose_unchecked(&s, &id.star(f));
        w.add_term(vec![slot(&t[0]), slot(&t[1])], c);
    }
    w
}

/// `Σ_b (−1)^b ℋ^n_b`.
pub fn shih_element(n: usize) -> TensorWord {
    let mut w = TensorWord::zero(n, vec![n - 1, n - 1]);
    for b in 0..n {
        w = w.add(&shih_term(n, b).scale(if b % 2 == 0 { 1 } else { -1 }));
    }
    w
}

/// `ℋ^n_b` applied to a pair of maps `[n-1] -> [m]`, transporting joint degeneracies:
/// `ℋ^n_b s_i = s_i ℋ^{n-1}_{b-1}` for `i < b` and `s_{i+1} ℋ^{n-1}_b` for `i ≥ b`.
pub fn shih_apply(n: usize, b: usize, tau: &SimplexMap, kappa: &SimplexMap) -> TensorWord {
    debug_assert!(tau.dom() + 1 == n && kappa.dom() + 1 == n);
    let cods = vec![tau.cod(), kappa.cod()];
    let joint = (0..n - 1).find(|&i| tau.is_degenerate_at(i) && kappa.is_degenerate_at(i));
    match joint {
        None => {
            let mut w = TensorWord::zero(n, cods);
            for (t, c) in shih_term(n, b).terms() {
                w.add_term(vec![compose_unchecked(tau, &t[0]), compose_unchecked(kappa, &t[1])], c);
            }
            w
        }
        Some(i) => {
            let face = SimplexMap::face(n - 1, i + 1);
            let (tp, kp) = (compose_unchecked(tau, &face), compose_unchecked(kappa, &face));
            let (ip, bp) = if i < b { (i, b - 1) } else { (i + 1, b) };
            shih_apply(n - 1, bp, &tp, &kp).precompose(&SimplexMap::degeneracy(n - 1, ip))
        }
    }
}

/// Checks `n - 1 > b_0 > … > b_{k-1} ≥ 0` and `i_j ≤ k - j - 1`.
pub fn validate_shih_indices(n: usize, b: &[usize], i: &[usize]) -> Result<()> {
    let k = b.len();
    if i.len() != k {
        return invalid(format!("b has length {k} but i has length {}", i.len()));
    }
    if k > 0 && b[0] + 1 >= n {
        return invalid(format!("need n-1 > b_0, got n={n}, b_0={}", b[0]));
    }
    if b.windows(2).any(|w| w[0] <= w[1]) {
        return invalid("b must be strictly decreasing");
    }
    if let Some((j, _)) = i.iter().enumerate().find(|(j, &x)| x + j + 1 > k) {
        return invalid(format!("i_{j} exceeds k-{j}-1"));
    }
    Ok(())
}

/// The higher Shih element `ℋ^n_{b,i}`: tuples of `k+1` maps `[n] -> [n-k]`.
pub fn higher_shih(n: usize, b: &[usize], i: &[usize]) -> Result<TensorWord> {
    validate_shih_indices(n, b, i)?;
    Ok(higher_shih_rec(n, b, i))
}

fn higher_shih_rec(n: usize, b: &[usize], i: &[usize]) -> TensorWord {
    let k = b.len();
    if k == 0 {
        return TensorWord::identity(n);
    }
    let inner = higher_shih_rec(n - 1, &b[1..], &i[1..]);
    let (b0, i0) = (b[0], i[0]);
    let s = SimplexMap::degeneracy(n - 1, b0);
    let mut w = TensorWord::zero(n, vec![n - k; k + 1]);
    for (t, c) in inner.terms() {
        let pair = shih_apply(n, b0, &t[i0], &t[i0]);
        let pre: Vec<SimplexMap> = t[..i0].iter().map(|f| compose_unchecked(f, &s)).collect();
        let post: Vec<SimplexMap> = t[i0 + 1..].iter().map(|f| compose_unchecked(f, &s)).collect();
        for (h, d) in pair.terms() {
            let mut tuple = pre.clone();
            tuple.extend_from_slice(h);
            tuple.extend(post.iter().cloned());
            w.add_term(tuple, c * d);
        }
    }
    w
}
