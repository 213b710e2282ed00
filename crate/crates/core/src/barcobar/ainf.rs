//! A∞-algebras, A∞-coalgebras and A∞-coalgebra morphisms.

use super::tensor::{extend_der, extend_hom, poly_add, poly_add_term, FreeAlgebra, Gen, Poly};
use super::{entries, sign, DgAlgebra, DgCoalgebra};
use crate::chain::Matrix;
use crate::error::{invalid, Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::collections::{BTreeMap, HashMap};

/// A basis element `(degree, index)` of a ℤ-graded module.
pub type AGen = (i64, usize);
type APoly = BTreeMap<Vec<AGen>, i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AInfKind {
    /// `m_k : V^{⊗k} -> V` of degree `k − 2`.
    Algebra,
    /// `Δ_k : V -> V^{⊗k}` of degree `k − 2`.
    Coalgebra,
}

/// Structure maps of an A∞-(co)algebra on a finite graded module, up to some arity.
///
/// Each component is stored as a sparse map from input words to combinations of output words;
/// for algebras the outputs have length 1, for coalgebras the inputs do.
#[derive(Clone, Debug)]
pub struct AInfStructure {
    pub kind: AInfKind,
    ranks: BTreeMap<i64, usize>,
    /// Top degree up to which the module is known; identities are checked strictly below it.
    top: Option<i64>,
    ops: BTreeMap<usize, HashMap<Vec<AGen>, APoly>>,
}

fn apoly_add(p: &mut APoly, w: Vec<AGen>, c: i64) {
    let e = p.entry(w).or_insert(0);
    *e = e.checked_add(c).expect("coefficient overflow");
    p.retain(|_, v| *v != 0);
}

impl AInfStructure {
    pub fn zero(kind: AInfKind, ranks: BTreeMap<i64, usize>) -> Self {
        AInfStructure { kind, ranks, top: None, ops: BTreeMap::new() }
    }

    pub fn gens(&self) -> Vec<AGen> {
        self.ranks.iter().flat_map(|(&d, &r)| (0..r).map(move |i| (d, i))).collect()
    }

    pub fn set(&mut self, arity: usize, input: Vec<AGen>, output: Vec<AGen>, c: i64) {
        if c == 0 {
            return;
        }
        let m = self.ops.entry(arity).or_default().entry(input).or_default();
        apoly_add(m, output, c);
    }

    /// Flips the sign of one coefficient; returns whether it was present.
    pub fn flip(&mut self, arity: usize, input: &[AGen], output: &[AGen]) -> bool {
        match self.ops.get_mut(&arity).and_then(|m| m.get_mut(input)).and_then(|p| p.get_mut(output)) {
            Some(c) => {
                *c = -*c;
                true
            }
            None => false,
        }
    }

    pub fn get(&self, arity: usize, input: &[AGen]) -> Option<&APoly> {
        self.ops.get(&arity).and_then(|m| m.get(input))
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.keys().copied()
    }

    fn deg(w: &[AGen]) -> i64 {
        w.iter().map(|g| g.0).sum()
    }

    /// Value of the Stasheff expression `Σ (−1)^{r+st} m_{r+1+t}(1^r ⊗ m_s ⊗ 1^t)` on `x`.
    pub fn stasheff_algebra(&self, x: &[AGen]) -> APoly {
        let n = x.len();
        let mut out = APoly::new();
        for s in 1..=n {
            let Some(inner) = self.ops.get(&s) else { continue };
            for r in 0..=n - s {
                let t = n - r - s;
                let Some(outer) = self.ops.get(&(r + 1 + t)) else { continue };
                let Some(mid) = inner.get(&x[r..r + s]) else { continue };
                let sg = sign((r + s * t) as i64) * sign(s as i64 * Self::deg(&x[..r]));
                for (y, &c) in mid {
                    let mut w = x[..r].to_vec();
                    w.extend_from_slice(y);
                    w.extend_from_slice(&x[r + s..]);
                    if let Some(img) = outer.get(&w) {
                        for (z, &e) in img {
                            apoly_add(&mut out, z.clone(), sg * c * e);
                        }
                    }
                }
            }
        }
        out
    }

    /// Value of `Σ (−1)^{r+st} (1^r ⊗ Δ_s ⊗ 1^t) Δ_{r+1+t}` on `c`, restricted to output length `n`.
    pub fn stasheff_coalgebra(&self, c: AGen, n: usize) -> APoly {
        let mut out = APoly::new();
        for s in 1..=n {
            let Some(inner) = self.ops.get(&s) else { continue };
            for r in 0..=n - s {
                let t = n - r - s;
                let Some(outer) = self.ops.get(&(r + 1 + t)).and_then(|m| m.get(&vec![c])) else { continue };
                for (y, &e) in outer {
                    let Some(mid) = inner.get(&y[r..r + 1]) else { continue };
                    let sg = sign((r + s * t) as i64) * sign(s as i64 * Self::deg(&y[..r]));
                    for (z, &f) in mid {
                        let mut w = y[..r].to_vec();
                        w.extend_from_slice(z);
                        w.extend_from_slice(&y[r + 1..]);
                        apoly_add(&mut out, w, sg * e * f);
                    }
                }
            }
        }
        out
    }
}

fn tuples(gens: &[AGen], n: usize) -> Vec<Vec<AGen>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w| gens.iter().map(move |g| {
            let mut w2: Vec<AGen> = w.clone();
            w2.push(*g);
            w2
        })).collect();
    }
    out
}

/// Checks the Stasheff identities in every arity `≤ nmax`.
pub fn stasheff_check(m: &AInfStructure, nmax: usize) -> bool {
    stasheff_failure(m, nmax).is_none()
}

/// The first input on which a Stasheff identity fails, if any.
pub fn stasheff_failure(m: &AInfStructure, nmax: usize) -> Option<Vec<AGen>> {
    let gens = m.gens();
    for n in 1..=nmax {
        match m.kind {
            AInfKind::Algebra => {
                for x in tuples(&gens, n) {
                    let out_deg = AInfStructure::deg(&x) + n as i64 - 3;
                    if m.top.is_some_and(|t| out_deg + 1 > t) {
                        continue;
                    }
                    if !m.stasheff_algebra(&x).is_empty() {
                        return Some(x);
                    }
                }
            }
            AInfKind::Coalgebra => {
                for &c in &gens {
                    if !m.stasheff_coalgebra(c, n).is_empty() {
                        return Some(vec![c]);
                    }
                }
            }
        }
    }
    None
}

/// Dg-(co)algebras viewed as A∞-(co)algebras.
pub trait ToAInf {
    fn to_ainf(&self) -> AInfStructure;
}

impl ToAInf for DgAlgebra {
    fn to_ainf(&self) -> AInfStructure {
        let c = &self.complex;
        let ranks = c.degrees().map(|n| (n, c.rank(n))).collect();
        let mut m = AInfStructure::zero(AInfKind::Algebra, ranks);
        if c.is_truncated() {
            m.top = Some(c.hi());
        }
        for n in c.degrees() {
            let d = c.d(n);
            for k in 0..c.rank(n) {
                for (r, v) in entries(&d, k) {
                    m.set(1, vec![(n, k)], vec![(n - 1, r)], -v);
                }
            }
        }
        for (&(i, j), mm) in self.mult_components() {
            let rj = c.rank(j);
            for col in 0..mm.cols() {
                for (r, v) in entries(mm, col) {
                    m.set(2, vec![(i, col / rj), (j, col % rj)], vec![(i + j, r)], v);
                }
            }
        }
        m
    }
}

impl ToAInf for DgCoalgebra {
    fn to_ainf(&self) -> AInfStructure {
        let c = &self.complex;
        let ranks = c.degrees().map(|n| (n, c.rank(n))).collect();
        let mut m = AInfStructure::zero(AInfKind::Coalgebra, ranks);
        for n in c.degrees() {
            let d = c.d(n);
            for k in 0..c.rank(n) {
                for (r, v) in entries(&d, k) {
                    m.set(1, vec![(n, k)], vec![(n - 1, r)], -v);
                }
            }
        }
        for (&(i, j), _) in self.comult_components() {
            for k in 0..c.rank(i + j) {
                for (a, b, v) in self.coproduct(i, j, k) {
                    m.set(2, vec![(i + j, k)], vec![(i, a), (j, b)], v);
                }
            }
        }
        m
    }
}

/// `m_1 = −d`, `m_2` the (co)multiplication, higher components zero.
pub fn ainf_from_dg<T: ToAInf>(x: &T) -> AInfStructure {
    x.to_ainf()
}

/// A morphism of A∞-coalgebras in shifted form: a multiplicative map between the free algebras
/// on the desuspended generators, `x ↦ Σ_k α_k(x)` with `α_k(x)` of word length `k`.
///
/// All components have degree 0, so composition involves no signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfMorphism {
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    images: BTreeMap<Gen, Poly>,
}

impl AInfMorphism {
    /// Images must preserve degree and contain no constant term.
    pub fn new(src: Vec<usize>, tgt: Vec<usize>, images: BTreeMap<Gen, Poly>) -> Result<Self> {
        for (g, p) in &images {
            if g.0 >= src.len() || g.1 >= src[g.0] {
                return invalid("image of an unknown generator");
            }
            for w in p.keys() {
                if w.is_empty() || super::tensor::word_degree(w) != g.0 || w.iter().any(|h| h.0 >= tgt.len() || h.1 >= tgt[h.0]) {
                    return invalid("morphism component of wrong shape");
                }
            }
        }
        let mut images = images;
        images.retain(|_, p| !p.is_empty());
        Ok(AInfMorphism { src, tgt, images })
    }

    pub fn identity(ranks: Vec<usize>) -> Self {
        let images = ranks.iter().enumerate().flat_map(|(d, &r)| (0..r).map(move |i| ((d, i), Poly::from([(vec![(d, i)], 1)])))).collect();
        AInfMorphism { src: ranks.clone(), tgt: ranks, images }
    }

    pub fn image(&self, g: Gen) -> Poly {
        self.images.get(&g).cloned().unwrap_or_default()
    }

    /// The arity-`k` component on a generator.
    pub fn component(&self, k: usize, g: Gen) -> Poly {
        self.image(g).into_iter().filter(|(w, _)| w.len() == k).collect()
    }

    /// Multiplicative extension, dropping words longer than `maxlen`.
    pub fn apply(&self, p: &Poly, maxlen: Option<usize>) -> Poly {
        extend_hom(&|g| self.image(g), p, maxlen)
    }

    /// `self ∘ other`, components up to arity `nmax`.
    pub fn compose(&self, other: &AInfMorphism, nmax: usize) -> AInfMorphism {
        let images = other.images.iter().map(|(g, p)| (*g, self.apply(p, Some(nmax)))).collect();
        AInfMorphism::new(other.src.clone(), self.tgt.clone(), images).expect("composite")
    }

    /// Equality of all components up to arity `nmax`.
    pub fn agrees_with(&self, other: &AInfMorphism, nmax: usize) -> bool {
        let trunc = |p: Poly| -> Poly { p.into_iter().filter(|(w, _)| w.len() <= nmax).collect() };
        self.src == other.src
            && self.tgt == other.tgt
            && (0..self.src.len()).all(|d| (0..self.src[d]).all(|i| trunc(self.image((d, i))) == trunc(other.image((d, i)))))
    }

    /// Whether the induced map of free algebras commutes with the given derivations, up to
    /// words of length `nmax`.
    pub fn commutes_with(&self, d_src: &dyn Fn(Gen) -> Poly, d_tgt: &dyn Fn(Gen) -> Poly, nmax: usize) -> bool {
        for d in 0..self.src.len() {
            for i in 0..self.src[d] {
                let g = (d, i);
                let lhs = extend_der(d_tgt, &self.image(g), Some(nmax));
                let rhs = self.apply(&d_src(g), Some(nmax));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    fn linear_part(&self, d: usize) -> Matrix {
        let rows = self.tgt.get(d).copied().unwrap_or(0);
        let cols = (0..self.src[d])
            .map(|i| {
                self.component(1, (d, i)).into_iter().map(|(w, c)| (w[0].1, BigInt::from(c))).collect()
            })
            .collect();
        Matrix::from_columns(rows, cols)
    }
}

/// The inverse of an A∞-morphism with invertible linear part, up to arity `nmax`.
pub fn ainf_invert(alpha: &AInfMorphism, nmax: usize) -> Result<AInfMorphism> {
    let degs = alpha.src.len().max(alpha.tgt.len());
    let mut inv1 = Vec::new();
    for d in 0..degs {
        if alpha.src.get(d).copied().unwrap_or(0) != alpha.tgt.get(d).copied().unwrap_or(0) {
            return Err(Error::Invalid(format!("linear part is not square in degree {d}")));
        }
        if d >= alpha.src.len() {
            inv1.push(Matrix::zero(0, 0));
            continue;
        }
        let a = alpha.linear_part(d);
        inv1.push(crate::chain::snf::inverse(&a).ok_or_else(|| Error::Invalid(format!("linear part not invertible in degree {d}")))?);
    }
    let mut images: BTreeMap<Gen, Poly> = BTreeMap::new();
    for (d, m) in inv1.iter().enumerate() {
        for y in 0..m.cols() {
            let p: Poly = m.column(y).iter().map(|(x, c)| (vec![(d, *x)], c.to_i64().expect("entry fits"))).collect();
            images.insert((d, y), p);
        }
    }
    let mut beta = AInfMorphism { src: alpha.tgt.clone(), tgt: alpha.src.clone(), images };
    for k in 2..=nmax {
        let mut updates: BTreeMap<Gen, Poly> = BTreeMap::new();
        for (d, m) in inv1.iter().enumerate() {
            // E(x) = length-k part of β(α(x)); β_k(y) = −Σ_x (α_1^{-1})_{x,y} E(x)
            let errs: Vec<Poly> = (0..m.rows())
                .map(|x| beta.apply(&alpha.image((d, x)), Some(k)).into_iter().filter(|(w, _)| w.len() == k).collect())
                .collect();
            for y in 0..m.cols() {
                let mut p = Poly::new();
                for (x, c) in m.column(y) {
                    poly_add(&mut p, &errs[*x], -c.to_i64().expect("entry fits"));
                }
                if !p.is_empty() {
                    updates.insert((d, y), p);
                }
            }
        }
        for (g, p) in updates {
            let e = beta.images.entry(g).or_default();
            poly_add(e, &p, 1);
        }
    }
    Ok(beta)
}

/// A random morphism with identity linear part on a free algebra's generators.
pub fn random_unipotent_morphism(alg: &FreeAlgebra, rng: &mut impl rand::Rng, nmax: usize) -> AInfMorphism {
    let ranks = alg.ranks().to_vec();
    let mut images = BTreeMap::new();
    for g in alg.gens() {
        let mut p = Poly::from([(vec![g], 1)]);
        for w in alg.words(g.0) {
            if w.len() >= 2 && w.len() <= nmax && rng.gen_bool(0.3) {
                poly_add_term(&mut p, w.clone(), rng.gen_range(-2..=2));
            }
        }
        images.insert(g, p);
    }
    AInfMorphism::new(ranks.clone(), ranks, images).expect("random morphism")
}
