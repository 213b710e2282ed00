//! The Szczarba map from the cobar construction into chains on Kan's loop group, and the
//! passage from tree-indexed families to A∞-morphisms.

use super::{sz, LeveledTree};
use crate::barcobar::cobar_gen_differential;
use crate::barcobar::tensor::{poly_add_term, Gen, Poly};
use crate::barcobar::{adams_cobar, AInfMorphism, DgCoalgebra};
use crate::chain::{ChainComplex, Matrix};
use crate::error::{invalid, Error, Result};
use crate::loopgroup::{chains_with_basis, kan_class, kan_loop_group, word_mul, FreeWord, SimplicialGroup};
use crate::simplexcat::{shuffles, SimplexMap};
use crate::sset::{SSetPresentation, Simplex};
use num_bigint::BigInt;
use std::collections::{BTreeMap, HashMap};

/// A finite ℤ-combination of elements of one level of a simplicial group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupChain {
    pub level: usize,
    pub terms: BTreeMap<FreeWord, i64>,
}

impl GroupChain {
    pub fn zero(level: usize) -> Self {
        GroupChain { level, terms: BTreeMap::new() }
    }

    pub fn unit(level: usize) -> Self {
        let mut c = GroupChain::zero(level);
        c.add_term(Vec::new(), 1);
        c
    }

    pub fn add_term(&mut self, w: FreeWord, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(w).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn add(&mut self, other: &GroupChain, c: i64) {
        assert_eq!(self.level, other.level, "adding chains of different levels");
        for (w, v) in &other.terms {
            self.add_term(w.clone(), c * v);
        }
    }

    /// Drops degenerate elements, giving the normalized representative.
    pub fn normalize(&self, g: &SimplicialGroup) -> GroupChain {
        let m = self.level;
        let mut out = GroupChain::zero(m);
        for (w, &c) in &self.terms {
            let degenerate = m > 0 && (0..m).any(|i| g.degen(&g.face(w, m, i), m - 1, i) == *w);
            if !degenerate {
                out.add_term(w.clone(), c);
            }
        }
        out
    }

    /// `Σ (-1)^i d_i`.
    pub fn boundary(&self, g: &SimplicialGroup) -> GroupChain {
        let m = self.level;
        if m == 0 {
            return GroupChain::zero(0);
        }
        let mut out = GroupChain::zero(m - 1);
        for (w, &c) in &self.terms {
            for i in 0..=m {
                out.add_term(g.face(w, m, i), if i % 2 == 0 { c } else { -c });
            }
        }
        out.normalize(g)
    }

    /// Shuffle product in `ℤ[G^op]`.
    pub fn mul_opposite(&self, other: &GroupChain, g: &SimplicialGroup) -> GroupChain {
        let (p, q) = (self.level, other.level);
        let mut out = GroupChain::zero(p + q);
        for sh in shuffles(p, q) {
            for (a, &x) in &self.terms {
                let a2 = g.act(a, &sh.sigma);
                for (b, &y) in &other.terms {
                    out.add_term(word_mul(&g.act(b, &sh.tau), &a2), sh.sign * x * y);
                }
            }
        }
        out.normalize(g)
    }

    /// Shuffle product in the simplicial ring `ℤ[G]`: `Σ sgn · σ^*(a) · τ^*(b)`.
    pub fn mul(&self, other: &GroupChain, g: &SimplicialGroup) -> GroupChain {
        let (p, q) = (self.level, other.level);
        let mut out = GroupChain::zero(p + q);
        for sh in shuffles(p, q) {
            for (a, &x) in &self.terms {
                let a2 = g.act(a, &sh.sigma);
                for (b, &y) in &other.terms {
                    out.add_term(word_mul(&a2, &g.act(b, &sh.tau)), sh.sign * x * y);
                }
            }
        }
        out.normalize(g)
    }
}

/// The Szczarba map from the cobar construction of normalized chains (Alexander-Whitney
/// diagonal) into normalized chains of `ℤ[G^op]`, `G` Kan's loop group.
///
/// On `s⁻¹x` with `x ∈ X_1` it is `x - 1`; on `x ∈ X_{m+1}`, `m ≥ 1`, it is
/// `(-1)^m Σ_i sgn(i^∨) [x_0]·…·[x_m]` (product in `G^op`) over trees `i` with `m` vertices,
/// where `x_j = x ∘ (Sz^j_i ∗′ id_[1])`. Cobar words map to shuffle products in `ℤ[G^op]`.
pub struct SzczarbaMorphism {
    pub x: SSetPresentation,
    pub group: SimplicialGroup,
    pub coalgebra: DgCoalgebra,
    pub kmax: usize,
}

impl SzczarbaMorphism {
    pub fn new(x: &SSetPresentation, kmax: usize) -> Result<Self> {
        if !x.is_reduced() {
            return invalid("the Szczarba map needs a single-vertex simplicial set");
        }
        let group = kan_loop_group(x, kmax)?;
        let coalgebra = DgCoalgebra::of_sset(x, kmax + 1);
        Ok(SzczarbaMorphism { x: x.clone(), group, coalgebra, kmax })
    }

    fn check_degree(&self, m: usize) -> Result<()> {
        if m > self.kmax {
            return Err(Error::Truncation { need: m, have: self.kmax });
        }
        Ok(())
    }

    /// The image of the generator `s⁻¹c`, `c` the cell `g.1` of dimension `g.0 + 1`.
    pub fn on_generator(&self, g: Gen) -> Result<GroupChain> {
        let m = g.0;
        self.check_degree(m)?;
        if g.1 >= self.x.num_cells(m + 1) {
            return invalid("generator out of range");
        }
        let x = Simplex::nondegenerate(m + 1, g.1);
        let mut out = GroupChain::zero(m);
        if m == 0 {
            out.add_term(kan_class(&self.x, &self.group, 0, &x)?, 1);
            out.add_term(Vec::new(), -1);
            return Ok(out);
        }
        let id1 = SimplexMap::identity(1);
        let sign = if m % 2 == 0 { 1 } else { -1 };
        for i in LeveledTree::all(m) {
            let mut word = Vec::new();
            for j in 0..=m {
                let f = sz(j, &i)?.star_prime_shift(&id1);
                let f = SimplexMap::new(m + 1, f.values().to_vec())?;
                let y = self.x.apply(&x, &f)?;
                word = word_mul(&kan_class(&self.x, &self.group, m, &y)?, &word);
            }
            out.add_term(word, sign * i.dual().sign());
        }
        Ok(out.normalize(&self.group))
    }

    /// Multiplicative extension to a homogeneous element of degree `deg`.
    pub fn apply(&self, p: &Poly, deg: usize) -> Result<GroupChain> {
        self.check_degree(deg)?;
        let mut cache: HashMap<Gen, GroupChain> = HashMap::new();
        let mut out = GroupChain::zero(deg);
        for (w, &c) in p {
            let mut acc = GroupChain::unit(0);
            for &g in w {
                if !cache.contains_key(&g) {
                    cache.insert(g, self.on_generator(g)?);
                }
                acc = acc.mul_opposite(&cache[&g], &self.group);
            }
            if acc.level != deg {
                return invalid("inhomogeneous element");
            }
            out.add(&acc, c);
        }
        Ok(out)
    }

    /// First generator of degree `1..=deg` on which `d ∘ Sz ≠ Sz ∘ d`, if any.
    pub fn chain_map_failure(&self, deg: usize) -> Result<Option<Gen>> {
        self.check_degree(deg)?;
        for m in 1..=deg {
            for c in 0..self.x.num_cells(m + 1) {
                let g = (m, c);
                let lhs = self.on_generator(g)?.boundary(&self.group);
                let rhs = self.apply(&cobar_gen_differential(&self.coalgebra, m + 1, c), m - 1)?;
                if lhs != rhs {
                    return Ok(Some(g));
                }
            }
        }
        Ok(None)
    }

    /// The map of complexes from the cobar construction (degrees `≤ deg`) into normalized
    /// chains of loop-group words of length `≤ maxlen`; fails if an image leaves that range.
    pub fn chain_matrices(&self, deg: usize, maxlen: usize) -> Result<(ChainComplex, ChainComplex, Vec<Matrix>)> {
        if self.coalgebra.rank(1) > 0 {
            return invalid("the chain-level comparison needs X_1 to have no nondegenerate simplices");
        }
        self.check_degree(deg)?;
        let cobar = adams_cobar(&self.coalgebra, deg, None)?;
        let (target, basis) = chains_with_basis(&self.group, deg, maxlen)?;
        let mut maps = Vec::new();
        for n in 0..=deg {
            let index: HashMap<&FreeWord, usize> = basis[n].iter().enumerate().map(|(i, w)| (w, i)).collect();
            let mut trips = Vec::new();
            for (col, w) in cobar.alg.words(n).iter().enumerate() {
                let img = self.apply(&Poly::from([(w.clone(), 1)]), n)?;
                for (u, c) in img.terms {
                    let r = *index.get(&u).ok_or_else(|| Error::Fuel(format!("image word {u:?} longer than {maxlen}")))?;
                    trips.push((r, col, BigInt::from(c)));
                }
            }
            maps.push(Matrix::from_triplets(basis[n].len(), cobar.alg.rank(n), trips));
        }
        Ok((cobar.complex.clone(), target, maps))
    }

    /// Whether the map induces isomorphisms on `H_0, …, H_top` (with `top < deg`), via
    /// acyclicity of the mapping cone in degrees `≤ top + 1`.
    pub fn homology_iso(&self, top: usize, deg: usize, maxlen: usize) -> Result<bool> {
        if top + 1 > deg {
            return invalid("need deg > top");
        }
        let (a, b, f) = self.chain_matrices(deg, maxlen)?;
        let cone = mapping_cone(&a, &b, &f, deg)?;
        for n in 0..=top + 1 {
            if !cone.homology(n as i64)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `Cone(f)_k = A_{k-1} ⊕ B_k` with `d(a, b) = (-da, f(a) + db)`, degrees `0..=top`.
fn mapping_cone(a: &ChainComplex, b: &ChainComplex, f: &[Matrix], top: usize) -> Result<ChainComplex> {
    let ra = |k: i64| if k < 0 { 0 } else { a.rank(k) };
    let mut basis = Vec::new();
    let mut d = Vec::new();
    for k in 0..=top as i64 {
        let mut names: Vec<String> = if k >= 1 { a.basis(k - 1).iter().map(|s| format!("a:{s}")).collect() } else { Vec::new() };
        names.extend(b.basis(k).iter().map(|s| format!("b:{s}")));
        basis.push(names);
        let (na, nb) = (ra(k - 1), b.rank(k));
        let rows = if k == 0 { 0 } else { ra(k - 2) + b.rank(k - 1) };
        let mut trips = Vec::new();
        if k >= 1 {
            let off = ra(k - 2);
            if k >= 2 {
                for (r, c, v) in a.d(k - 1).triplets() {
                    trips.push((r, c, -v.clone()));
                }
            }
            for (r, c, v) in f[(k - 1) as usize].triplets() {
                trips.push((off + r, c, v.clone()));
            }
            for (r, c, v) in b.d(k).triplets() {
                trips.push((off + r, na + c, v.clone()));
            }
        }
        d.push(Matrix::from_triplets(rows, na + nb, trips));
    }
    ChainComplex::new(0, basis, d, true)
}

/// Assembles `α_{k+1}(s⁻¹x) = Σ_i sgn(i) (s⁻¹)^{⊗(k+1)} μ(i)(x)` for trees with `k < kmax`
/// vertices and checks the A∞-morphism identity up to arity `kmax`.
///
/// `mu(i, n, c)` lists the terms `y_0 ⊗ … ⊗ y_k` (pairs `(degree, index)`, total degree `n+k`)
/// of `μ(i)` applied to basis element `c` of `F_n`; factors of degree `0` are dropped.
pub fn exp_to_ainf(
    src: &DgCoalgebra,
    tgt: &DgCoalgebra,
    mu: &dyn Fn(&LeveledTree, usize, usize) -> Vec<(Vec<(usize, usize)>, i64)>,
    kmax: usize,
    degmax: usize,
) -> Result<AInfMorphism> {
    let src_ranks: Vec<usize> = (0..=degmax).map(|d| src.rank(d as i64 + 1)).collect();
    let tgt_ranks: Vec<usize> = (0..=degmax).map(|d| tgt.rank(d as i64 + 1)).collect();
    let mut images: BTreeMap<Gen, Poly> = BTreeMap::new();
    for d in 0..=degmax {
        let n = d + 1;
        for c in 0..src_ranks[d] {
            let mut p = Poly::new();
            for k in 0..kmax {
                for i in LeveledTree::all(k) {
                    for (ys, v) in mu(&i, n, c) {
                        if ys.len() != k + 1 || ys.iter().map(|y| y.0).sum::<usize>() != n + k {
                            return invalid("component of the family has the wrong shape");
                        }
                        if ys.iter().any(|y| y.0 == 0) {
                            continue;
                        }
                        let koszul: usize = ys.iter().enumerate().map(|(l, y)| (k - l) * y.0).sum();
                        let sign = i.sign() * if koszul % 2 == 0 { 1 } else { -1 };
                        let w: Vec<Gen> = ys.iter().map(|y| (y.0 - 1, y.1)).collect();
                        poly_add_term(&mut p, w, sign * v);
                    }
                }
            }
            images.insert((d, c), p);
        }
    }
    let alpha = AInfMorphism::new(src_ranks, tgt_ranks, images)?;
    let ds = |g: Gen| cobar_gen_differential(src, g.0 + 1, g.1);
    let dt = |g: Gen| cobar_gen_differential(tgt, g.0 + 1, g.1);
    if !alpha.commutes_with(&ds, &dt, kmax) {
        return invalid("the assembled components violate the A∞-morphism identity");
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{product, sphere, standard, wedge};

    #[test]
    fn degree_zero_component() {
        let s1 = sphere(1, 3);
        let sz = SzczarbaMorphism::new(&s1, 2).unwrap();
        let img = sz.on_generator((0, 0)).unwrap();
        let expect = GroupChain { level: 0, terms: BTreeMap::from([(vec![], -1), (vec![1], 1)]) };
        assert_eq!(img, expect);
        assert_eq!(sz.chain_map_failure(2).unwrap(), None);
    }

    #[test]
    fn sphere_generator_goes_to_loop_class() {
        let s2 = sphere(2, 5);
        let sz = SzczarbaMorphism::new(&s2, 3).unwrap();
        let img = sz.on_generator((1, 0)).unwrap();
        assert_eq!(img, GroupChain { level: 1, terms: BTreeMap::from([(vec![1], -1)]) });
    }

    #[test]
    fn chain_map_on_spheres_and_wedges() {
        let cases = [sphere(1, 5), sphere(2, 5), sphere(3, 5), wedge(&sphere(1, 5), &sphere(2, 5)).unwrap()];
        for x in &cases {
            let sz = SzczarbaMorphism::new(x, 3).unwrap();
            assert_eq!(sz.chain_map_failure(3).unwrap(), None);
        }
    }

    #[test]
    fn chain_map_on_products() {
        let s1 = sphere(1, 4);
        let t3 = product(&product(&s1, &s1).unwrap(), &s1).unwrap();
        let sz = SzczarbaMorphism::new(&t3, 2).unwrap();
        assert_eq!(sz.chain_map_failure(2).unwrap(), None);
        let x = product(&s1, &sphere(3, 4)).unwrap();
        let sz = SzczarbaMorphism::new(&x, 3).unwrap();
        assert_eq!(sz.chain_map_failure(3).unwrap(), None);
    }

    #[test]
    fn wrong_product_order_fails() {
        // with the products of `G` instead of `G^op` the torus 2-cells already fail
        let s1 = sphere(1, 3);
        let t = product(&s1, &s1).unwrap();
        let sz = SzczarbaMorphism::new(&t, 1).unwrap();
        let g = (1, 0);
        let img = sz.on_generator(g).unwrap();
        let flipped: BTreeMap<FreeWord, i64> =
            img.terms.iter().map(|(w, &c)| (w.iter().rev().copied().collect(), c)).collect();
        let lhs = GroupChain { level: 1, terms: flipped }.boundary(&sz.group);
        let rhs = sz.apply(&cobar_gen_differential(&sz.coalgebra, 2, 0), 0).unwrap();
        assert_ne!(lhs, rhs);
        assert_eq!(img.boundary(&sz.group), rhs);
    }

    #[test]
    fn sphere_homology_iso() {
        let sz = SzczarbaMorphism::new(&sphere(2, 4), 3).unwrap();
        assert!(sz.homology_iso(1, 3, 3).unwrap());
    }

    #[test]
    fn rejects_multi_vertex_input() {
        assert!(SzczarbaMorphism::new(&standard("delta2", 3).unwrap(), 1).is_err());
    }

    #[test]
    fn strict_family() {
        let c = DgCoalgebra::of_sset(&sphere(2, 4), 4);
        let mu = |i: &LeveledTree, n: usize, x: usize| if i.k() == 0 { vec![(vec![(n, x)], 1)] } else { vec![] };
        let alpha = exp_to_ainf(&c, &c, &mu, 3, 2).unwrap();
        assert!(alpha.agrees_with(&AInfMorphism::identity(alpha.src.clone()), 3));
        let zero = |_: &LeveledTree, _: usize, _: usize| vec![];
        assert!(exp_to_ainf(&c, &c, &zero, 3, 2).is_ok());
    }

    #[test]
    fn rejects_non_chain_map() {
        // ℤ[S²∨S²] with both spheres sent to the first: fine; a single top class sent to a
        // lower one is not
        let x = sphere(3, 4);
        let c = DgCoalgebra::of_sset(&x, 4);
        let y = wedge(&sphere(2, 4), &sphere(3, 4)).unwrap();
        let e = DgCoalgebra::of_sset(&y, 4);
        let bad = |i: &LeveledTree, n: usize, _: usize| if i.k() == 0 && n == 3 { vec![(vec![(3, 0)], 1)] } else { vec![] };
        assert!(exp_to_ainf(&c, &e, &bad, 2, 2).is_ok());
        let c2 = DgCoalgebra::of_sset(&sphere(2, 4), 4);
        let t = DgCoalgebra::of_sset(&product(&sphere(1, 4), &sphere(1, 4)).unwrap(), 4);
        let bad2 = |i: &LeveledTree, n: usize, _: usize| if i.k() == 0 && n == 2 { vec![(vec![(2, 0)], 1)] } else { vec![] };
        assert!(exp_to_ainf(&c2, &t, &bad2, 2, 1).is_err());
    }
}
