//! Simplicial groups and monoids: Kan's loop group, the classifying space `W̄`,
//! the geometric cobar presentation and normalized chains of simplicial sets given by
//! an element action.

mod classifying;
mod monoid;

pub use classifying::{classifying_space, ClassifyingSpace, MonoidNerve, SimplicialMonoid};
pub use monoid::{
    fundamental_monoid, geometric_cobar, group_completion, GeometricCobar, GroupPresentation, MonoidPresentation,
};

use crate::chain::{ChainComplex, Matrix};
use crate::error::{invalid, Error, Result};
use crate::simplexcat::SimplexMap;
use crate::sset::{SSetPresentation, Simplex, Simplicial};
use num_bigint::BigInt;
use std::collections::HashMap;
use std::fmt::Debug;

/// A word in a free group: letter `g + 1` is generator `g`, `-(g + 1)` its inverse.
pub type FreeWord = Vec<i32>;

/// Free reduction.
pub fn reduce(w: &[i32]) -> FreeWord {
    let mut out: FreeWord = Vec::with_capacity(w.len());
    for &a in w {
        if out.last() == Some(&-a) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

pub fn word_mul(a: &[i32], b: &[i32]) -> FreeWord {
    let mut w = a.to_vec();
    w.extend_from_slice(b);
    reduce(&w)
}

pub fn word_inv(a: &[i32]) -> FreeWord {
    a.iter().rev().map(|x| -x).collect()
}

pub fn letter(g: usize) -> i32 {
    g as i32 + 1
}

/// Image of `w` under the homomorphism sending generator `g` to `images[g]`.
pub fn apply_hom(images: &[FreeWord], w: &[i32]) -> FreeWord {
    let mut out = Vec::new();
    for &a in w {
        let img = &images[a.unsigned_abs() as usize - 1];
        if a > 0 {
            out.extend_from_slice(img);
        } else {
            out.extend(word_inv(img));
        }
    }
    reduce(&out)
}

/// `X(f)(x)` from faces and degeneracies: `f = ι ∘ σ`, faces of `ι` are applied from the
/// largest missed index down, then the degeneracies of `σ` in increasing order.
pub fn act_by_generators<E>(
    x: E,
    f: &SimplexMap,
    mut face: impl FnMut(E, usize, usize) -> E,
    mut degen: impl FnMut(E, usize, usize) -> E,
) -> E {
    let (sigma, iota) = f.epi_mono_factor();
    let mut cur = iota.cod();
    let mut y = x;
    for &j in iota.missed().iter().rev() {
        y = face(y, cur, j);
        cur -= 1;
    }
    for &d in &sigma.collapse_set() {
        y = degen(y, cur, d);
        cur += 1;
    }
    y
}

/// A simplicial group, levelwise free on finitely many generators.
#[derive(Clone, Debug)]
pub struct SimplicialGroup {
    names: Vec<Vec<String>>,
    /// `faces[k][i][g]`, level `k ≥ 1` to `k - 1`.
    faces: Vec<Vec<Vec<FreeWord>>>,
    /// `degens[k][i][g]`, level `k` to `k + 1`, for `k < top`.
    degens: Vec<Vec<Vec<FreeWord>>>,
}

impl SimplicialGroup {
    /// Validates shapes, reducedness and the simplicial identities on generators.
    pub fn new(names: Vec<Vec<String>>, faces: Vec<Vec<Vec<FreeWord>>>, degens: Vec<Vec<Vec<FreeWord>>>) -> Result<Self> {
        let top = names.len().checked_sub(1).ok_or_else(|| Error::Invalid("no levels".into()))?;
        if faces.len() != top + 1 || degens.len() != top + 1 {
            return invalid("one face and degeneracy table per level");
        }
        for k in 0..=top {
            let nf = if k == 0 { 0 } else { k + 1 };
            let nd = if k == top { 0 } else { k + 1 };
            if faces[k].len() != nf || degens[k].len() != nd {
                return invalid(format!("wrong number of structure maps at level {k}"));
            }
            let check = |maps: &Vec<Vec<FreeWord>>, target: usize| {
                maps.iter().all(|m| {
                    m.len() == names[k].len()
                        && m.iter().all(|w| {
                            reduce(w) == *w && w.iter().all(|&a| a != 0 && (a.unsigned_abs() as usize) <= names[target].len())
                        })
                })
            };
            if (k > 0 && !check(&faces[k], k - 1)) || (k < top && !check(&degens[k], k + 1)) {
                return invalid(format!("malformed structure map at level {k}"));
            }
        }
        let g = SimplicialGroup { names, faces, degens };
        g.check_identities()?;
        Ok(g)
    }

    pub fn top(&self) -> usize {
        self.names.len() - 1
    }

    pub fn rank(&self, k: usize) -> usize {
        self.names[k].len()
    }

    pub fn gen_name(&self, k: usize, g: usize) -> &str {
        &self.names[k][g]
    }

    pub fn face(&self, w: &[i32], k: usize, i: usize) -> FreeWord {
        apply_hom(&self.faces[k][i], w)
    }

    pub fn degen(&self, w: &[i32], k: usize, i: usize) -> FreeWord {
        apply_hom(&self.degens[k][i], w)
    }

    pub fn act(&self, w: &[i32], f: &SimplexMap) -> FreeWord {
        act_by_generators(w.to_vec(), f, |y, n, i| self.face(&y, n, i), |y, n, i| self.degen(&y, n, i))
    }

    /// All simplicial identities, evaluated on generators.
    pub fn check_identities(&self) -> Result<()> {
        let top = self.top();
        let fail = |what: &str, k: usize| Err(Error::Verification(format!("{what} fails at level {k}")));
        for k in 0..=top {
            for g in 0..self.rank(k) {
                let x = vec![letter(g)];
                if k >= 2 {
                    for j in 1..=k {
                        for i in 0..j {
                            if self.face(&self.face(&x, k, j), k - 1, i) != self.face(&self.face(&x, k, i), k - 1, j - 1) {
                                return fail("d_i d_j = d_{j-1} d_i", k);
                            }
                        }
                    }
                }
                if k + 1 <= top {
                    for j in 0..=k {
                        let s = self.degen(&x, k, j);
                        for i in 0..=k + 1 {
                            let lhs = self.face(&s, k + 1, i);
                            let rhs = if i < j {
                                self.degen(&self.face(&x, k, i), k - 1, j - 1)
                            } else if i == j || i == j + 1 {
                                x.clone()
                            } else {
                                self.degen(&self.face(&x, k, i - 1), k - 1, j)
                            };
                            if lhs != rhs {
                                return fail("d_i s_j", k);
                            }
                        }
                    }
                }
                if k + 2 <= top {
                    for j in 0..=k {
                        for i in 0..=j {
                            let lhs = self.degen(&self.degen(&x, k, j), k + 1, i);
                            let rhs = self.degen(&self.degen(&x, k, i), k + 1, j + 1);
                            if lhs != rhs {
                                return fail("s_i s_j = s_{j+1} s_i", k);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// True if every face and degeneracy sends generators to words of length at most one,
    /// so that reduced words of bounded length form a simplicial subset.
    pub fn is_length_nonincreasing(&self) -> bool {
        self.faces.iter().chain(&self.degens).flatten().flatten().all(|w| w.len() <= 1)
    }
}

/// Level `k` of Kan's loop group: generators are the `(k+1)`-simplices outside the image
/// of `s_k`; `d_i = δ_i` for `i < k`, `d_k(x) = (δ_k x)(δ_{k+1} x)^{-1}`, `s_i = s_i` for `i ≤ k`.
pub fn kan_loop_group(x: &SSetPresentation, kmax: usize) -> Result<SimplicialGroup> {
    if !x.is_reduced() {
        return invalid("Kan's loop group needs a single-vertex simplicial set");
    }
    if x.dim() < kmax + 1 {
        return Err(Error::Truncation { need: kmax + 1, have: x.dim() });
    }
    let app = |s: &Simplex, f: &SimplexMap| x.apply(s, f);
    // generators of level k and their positions
    let mut gens: Vec<Vec<Simplex>> = Vec::new();
    let mut index: Vec<HashMap<Simplex, usize>> = Vec::new();
    for k in 0..=kmax {
        let mut g = Vec::new();
        for s in x.all_simplices(k + 1) {
            let back = app(&app(&s, &SimplexMap::face(k + 1, k + 1))?, &SimplexMap::degeneracy(k, k))?;
            if back != s {
                g.push(s);
            }
        }
        index.push(g.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect());
        gens.push(g);
    }
    let class = |k: usize, s: &Simplex| -> FreeWord { index[k].get(s).map(|&g| vec![letter(g)]).unwrap_or_default() };
    let mut names = Vec::new();
    let mut faces = Vec::new();
    let mut degens = Vec::new();
    for k in 0..=kmax {
        names.push(gens[k].iter().map(|s| x.simplex_name(s)).collect());
        let mut fk = Vec::new();
        if k > 0 {
            for i in 0..=k {
                let mut m = Vec::new();
                for s in &gens[k] {
                    let a = class(k - 1, &app(s, &SimplexMap::face(k + 1, i))?);
                    if i < k {
                        m.push(a);
                    } else {
                        let b = class(k - 1, &app(s, &SimplexMap::face(k + 1, k + 1))?);
                        m.push(word_mul(&a, &word_inv(&b)));
                    }
                }
                fk.push(m);
            }
        }
        faces.push(fk);
        let mut dk = Vec::new();
        if k < kmax {
            for i in 0..=k {
                let m = gens[k]
                    .iter()
                    .map(|s| Ok(class(k + 1, &app(s, &SimplexMap::degeneracy(k + 1, i))?)))
                    .collect::<Result<Vec<_>>>()?;
                dk.push(m);
            }
        }
        degens.push(dk);
    }
    SimplicialGroup::new(names, faces, degens)
}

/// The simplicial subset of reduced words of length at most `maxlen`.
pub struct WordBall<'a> {
    pub group: &'a SimplicialGroup,
    pub maxlen: usize,
}

impl Simplicial for WordBall<'_> {
    type Elem = FreeWord;

    fn elements(&self, n: usize) -> Vec<FreeWord> {
        let r = self.group.rank(n) as i32;
        let letters: Vec<i32> = (1..=r).flat_map(|a| [a, -a]).collect();
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..self.maxlen {
            let mut next = Vec::new();
            for w in &frontier {
                for &a in &letters {
                    if w.last() != Some(&-a) {
                        let mut v: FreeWord = w.clone();
                        v.push(a);
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    fn act(&self, x: &FreeWord, f: &SimplexMap) -> FreeWord {
        self.group.act(x, f)
    }
}

/// Normalized chains in degrees `0..=top` of a levelwise finite simplicial set; the top
/// degree is marked truncated.
pub fn simplicial_chains<S: Simplicial>(s: &S, top: usize) -> Result<ChainComplex>
where
    S::Elem: Debug,
{
    Ok(simplicial_chains_with_basis(s, top)?.0)
}

/// [`simplicial_chains`] together with the nondegenerate elements indexing each basis.
pub fn simplicial_chains_with_basis<S: Simplicial>(s: &S, top: usize) -> Result<(ChainComplex, Vec<Vec<S::Elem>>)>
where
    S::Elem: Debug,
{
    let mut cells: Vec<Vec<S::Elem>> = Vec::new();
    let mut lookup: Vec<HashMap<S::Elem, usize>> = Vec::new();
    let mut d = Vec::new();
    for n in 0..=top {
        let nd: Vec<S::Elem> = s.elements(n).into_iter().filter(|x| n == 0 || s.degenerate_index(x, n).is_none()).collect();
        lookup.push(nd.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect());
        if n == 0 {
            d.push(Matrix::zero(0, nd.len()));
        } else {
            let mut trips = Vec::new();
            for (c, x) in nd.iter().enumerate() {
                for i in 0..=n {
                    let y = s.face(x, n, i);
                    if n >= 2 && s.degenerate_index(&y, n - 1).is_some() {
                        continue;
                    }
                    let r = *lookup[n - 1].get(&y).ok_or_else(|| Error::Invalid(format!("face {y:?} not enumerated")))?;
                    trips.push((r, c, BigInt::from(if i % 2 == 0 { 1 } else { -1 })));
                }
            }
            d.push(Matrix::from_triplets(cells[n - 1].len(), nd.len(), trips));
        }
        cells.push(nd);
    }
    let basis = cells.iter().map(|l| l.iter().map(|x| format!("{x:?}")).collect()).collect();
    Ok((ChainComplex::new(0, basis, d, true)?, cells))
}

/// Normalized chains of the reduced words of length at most `maxlen` in `g`, degrees `0..=nmax`.
/// For groups whose structure maps do not shorten-or-preserve word length the bounded words
/// are not closed, which is reported as exhausted fuel.
pub fn chains(g: &SimplicialGroup, nmax: usize, maxlen: usize) -> Result<ChainComplex> {
    Ok(chains_with_basis(g, nmax, maxlen)?.0)
}

/// [`chains`] together with the words indexing each basis.
pub fn chains_with_basis(g: &SimplicialGroup, nmax: usize, maxlen: usize) -> Result<(ChainComplex, Vec<Vec<FreeWord>>)> {
    if g.top() < nmax {
        return Err(Error::Truncation { need: nmax, have: g.top() });
    }
    if !g.is_length_nonincreasing() {
        return Err(Error::Fuel("structure maps lengthen words; bounded words are not a simplicial subset".into()));
    }
    simplicial_chains_with_basis(&WordBall { group: g, maxlen }, nmax)
}

/// `φ(a) = (δ_{k+1} a)(δ_{k+2} a)^{-1}` for a generator `a ∈ X_{k+2}` of level `k` of the
/// geometric cobar construction, as a word of level `k` of Kan's loop group.
pub fn kan_phi(x: &SSetPresentation, g: &SimplicialGroup, k: usize, a: &Simplex) -> Result<FreeWord> {
    let a0 = x.apply(a, &SimplexMap::face(k + 2, k + 1))?;
    let a1 = x.apply(a, &SimplexMap::face(k + 2, k + 2))?;
    Ok(word_mul(&kan_class(x, g, k, &a0)?, &word_inv(&kan_class(x, g, k, &a1)?)))
}

/// Class of a `(k+1)`-simplex in level `k` of Kan's loop group.
pub fn kan_class(x: &SSetPresentation, g: &SimplicialGroup, k: usize, s: &Simplex) -> Result<FreeWord> {
    let name = x.simplex_name(s);
    Ok(g.names[k].iter().position(|n| *n == name).map(|i| vec![letter(i)]).unwrap_or_default())
}

/// Image of a word in the level-`k` generators of the geometric cobar construction.
pub fn to_loop_group(x: &SSetPresentation, g: &SimplicialGroup, k: usize, word: &[usize]) -> Result<FreeWord> {
    let gens = x.all_simplices(k + 2);
    let mut out = Vec::new();
    for &i in word {
        let a = gens.get(i).ok_or_else(|| Error::Invalid("generator out of range".into()))?;
        out = word_mul(&out, &kan_phi(x, g, k, a)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::AbGroup;
    use crate::sset::{sphere, standard};

    #[test]
    fn reduction_is_idempotent_and_multiplicative() {
        let w = vec![1, 2, -2, -1, 3, 1, -1];
        let r = reduce(&w);
        assert_eq!(r, vec![3]);
        assert_eq!(reduce(&r), r);
        let a = vec![1, 2, -3];
        assert!(word_mul(&a, &word_inv(&a)).is_empty());
    }

    #[test]
    fn kan_loop_group_levels() {
        let s2 = sphere(2, 5);
        let g = kan_loop_group(&s2, 3).unwrap();
        assert_eq!(g.rank(0), 0);
        assert_eq!(g.rank(1), 1);
        assert_eq!(g.rank(2), 2);
        assert!(g.is_length_nonincreasing());
        let s1 = standard("S1", 4).unwrap();
        let g1 = kan_loop_group(&s1, 2).unwrap();
        assert_eq!(g1.rank(0), 1);
        assert!(kan_loop_group(&crate::sset::delta(2, 4), 1).is_err());
    }

    #[test]
    fn loop_group_of_s2_has_loop_space_homology() {
        let s2 = sphere(2, 6);
        let g = kan_loop_group(&s2, 3).unwrap();
        let c = chains(&g, 3, 3).unwrap();
        for n in 0..3 {
            assert_eq!(c.homology(n).unwrap(), AbGroup::free(1), "H_{n}");
        }
    }
}
