//! The quotient `T(A_1)/I` of a coalgebra given by its first two levels, and its comparison
//! with the Adams cobar construction.

use super::bar::{adams_cobar, cobar_gen_differential, Cobar};
use super::tensor::{extend_der, extend_hom, poly_add, poly_add_term, poly_mul, word_degree, FreeAlgebra, Gen, Poly};
use super::{sign, DgCoalgebra};
use crate::chain::matrix::SparseVec;
use crate::chain::snf::{invariant_factors, Lattice};
use crate::chain::{AbGroup, Matrix};
use crate::error::{invalid, Error, Result};
use num_traits::{One, ToPrimitive};
use std::collections::BTreeMap;

/// `T(V)/I` for a two-sided ideal `I` generated by homogeneous relations, computed degreewise
/// (and modulo words longer than the algebra's length bound, if any).
#[derive(Clone, Debug)]
pub struct CobarQuotient {
    pub alg: FreeAlgebra,
    pub relations: Vec<Poly>,
    ideal: Vec<Lattice>,
}

fn homogeneous_degree(p: &Poly) -> Option<usize> {
    let mut degs = p.keys().map(|w| word_degree(w));
    let d = degs.next()?;
    degs.all(|e| e == d).then_some(d)
}

impl CobarQuotient {
    pub fn new(alg: FreeAlgebra, relations: Vec<Poly>) -> Result<Self> {
        let maxlen = alg.maxlen();
        let mut ideal = vec![Lattice::new(); alg.maxdeg() + 1];
        for g in &relations {
            if g.is_empty() {
                continue;
            }
            let Some(e) = homogeneous_degree(g) else {
                return invalid("relations must be homogeneous");
            };
            let shortest = g.keys().map(Vec::len).min().unwrap();
            for n in e..=alg.maxdeg() {
                for a in 0..=n - e {
                    let b = n - e - a;
                    for u in alg.words(a) {
                        for v in alg.words(b) {
                            if maxlen.is_some_and(|l| u.len() + v.len() + shortest > l) {
                                continue;
                            }
                            let ug = poly_mul(&Poly::from([(u.clone(), 1)]), g, maxlen);
                            let ugv = poly_mul(&ug, &Poly::from([(v.clone(), 1)]), maxlen);
                            ideal[n].insert(alg.to_vec(&ugv, n));
                        }
                    }
                }
            }
        }
        Ok(CobarQuotient { alg, relations, ideal })
    }

    fn from_vec(&self, n: usize, v: &SparseVec) -> Poly {
        let words = self.alg.words(n);
        v.iter().map(|(&i, c)| (words[i].clone(), c.to_i64().expect("coefficient fits"))).collect()
    }

    fn parts(p: &Poly) -> BTreeMap<usize, Poly> {
        let mut out: BTreeMap<usize, Poly> = BTreeMap::new();
        for (w, &c) in p {
            poly_add_term(out.entry(word_degree(w)).or_default(), w.clone(), c);
        }
        out
    }

    /// The canonical representative modulo the ideal.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        let mut out = Poly::new();
        for (n, q) in Self::parts(p) {
            if n > self.alg.maxdeg() {
                continue;
            }
            let r = self.ideal[n].reduce(&self.alg.to_vec(&q, n));
            poly_add(&mut out, &self.from_vec(n, &r), 1);
        }
        out
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.normal_form(p).is_empty()
    }

    /// The quotient group in degree `n`.
    pub fn quotient(&self, n: usize) -> AbGroup {
        let rank = self.alg.rank(n);
        let cols: Vec<SparseVec> = self.ideal[n].vectors().cloned().collect();
        let m = Matrix::from_columns(rank, cols);
        let f = invariant_factors(&m);
        AbGroup { rank: rank - f.len(), torsion: f.into_iter().filter(|x| !x.is_one()).collect() }
    }

    pub fn ideal_rank(&self, n: usize) -> usize {
        self.ideal[n].rank()
    }
}

/// `T(A_1)/I` with `A_1 = C_1`, `A_2 = C_2` and `I` generated by `(m_{1,1} + d)(a)`, `a ∈ A_2`,
/// modulo words longer than `maxlen`.
pub fn cobar_h0(c: &DgCoalgebra, maxlen: usize) -> Result<CobarQuotient> {
    if c.complex.is_truncated() && c.complex.hi() < 2 {
        return Err(Error::Truncation { need: 2, have: c.complex.hi().max(0) as usize });
    }
    let alg = FreeAlgebra::with_labels(vec![c.rank(1)], vec![c.complex.basis(1).to_vec()], 0, Some(maxlen))?;
    let d2 = c.complex.d(2);
    let mut relations = Vec::new();
    for a in 0..c.rank(2) {
        let mut g = Poly::new();
        for (r, v) in super::entries(&d2, a) {
            poly_add_term(&mut g, vec![(0, r)], v);
        }
        for (x, y, v) in c.coproduct(1, 1, a) {
            poly_add_term(&mut g, vec![(0, x), (0, y)], v);
        }
        relations.push(g);
    }
    CobarQuotient::new(alg, relations)
}

/// The comparison between `T(A_1)/I` for `A = dec* B` and the Adams cobar construction of
/// the connected cover of `B`, with `A_1 = s⁻²B ⊕ s⁻¹B` and `A_2 = s⁻³B ⊕ s⁻²B`.
#[derive(Clone, Debug)]
pub struct DecIso {
    pub quotient: CobarQuotient,
    pub cobar: Cobar,
    /// `φ_n : T(A_1)_n -> Ω_n` on words.
    pub phi: Vec<Matrix>,
    /// `ψ_n : Ω_n -> T(A_1)_n` on words.
    pub psi: Vec<Matrix>,
}

struct DecData<'a> {
    b: &'a DgCoalgebra,
}

impl DecData<'_> {
    fn r(&self, n: usize) -> usize {
        self.b.rank(n as i64)
    }

    // generator of A_1 in degree n: (b, 0) with b ∈ B_{n+2}, or (0, b) with b ∈ B_{n+1}
    fn first(&self, n: usize, k: usize) -> Gen {
        (n, k)
    }

    fn second(&self, n: usize, k: usize) -> Gen {
        (n, self.r(n + 2) + k)
    }

    fn split(&self, g: Gen) -> (bool, usize) {
        let r2 = self.r(g.0 + 2);
        if g.1 < r2 {
            (true, g.1)
        } else {
            (false, g.1 - r2)
        }
    }

    /// Differential of `A_1`: `(b_{n+2}, b_{n+1}) ↦ (d b_{n+2} + (−1)^n b_{n+1}, d b_{n+1})`.
    fn d_a(&self, g: Gen) -> Poly {
        let n = g.0;
        let mut p = Poly::new();
        if n == 0 {
            return p;
        }
        let (is_first, k) = self.split(g);
        if is_first {
            let dm = self.b.complex.d(n as i64 + 2);
            for (r, v) in super::entries(&dm, k) {
                poly_add_term(&mut p, vec![self.first(n - 1, r)], v);
            }
        } else {
            poly_add_term(&mut p, vec![self.first(n - 1, k)], sign(n as i64));
            let dm = self.b.complex.d(n as i64 + 1);
            for (r, v) in super::entries(&dm, k) {
                poly_add_term(&mut p, vec![self.second(n - 1, r)], v);
            }
        }
        p
    }

    /// `(m_{1,1} + d)(a)` for `a = (c, 0)` with `c ∈ B_{n+3}`, or `a = (0, c)` with `c ∈ B_{n+2}`.
    fn relation(&self, n: usize, first: bool, c: usize) -> Poly {
        let mut g = Poly::new();
        let b = self.b;
        for i in 0..=n {
            let j = n - i;
            if first {
                for (x, y, v) in b.coproduct(i as i64 + 2, j as i64 + 1, c) {
                    poly_add_term(&mut g, vec![self.first(i, x), self.second(j, y)], v);
                }
                for (x, y, v) in b.coproduct(i as i64 + 1, j as i64 + 2, c) {
                    poly_add_term(&mut g, vec![self.second(i, x), self.first(j, y)], sign(j as i64 + 1) * v);
                }
            } else {
                for (x, y, v) in b.coproduct(i as i64 + 1, j as i64 + 1, c) {
                    poly_add_term(&mut g, vec![self.second(i, x), self.second(j, y)], sign(j as i64) * v);
                }
            }
        }
        if !first {
            poly_add_term(&mut g, vec![self.first(n, c)], 1);
        }
        g
    }

    /// `φ(b_{n+2}, b_{n+1}) = (−1)^n s⁻¹b_{n+1} + d_2 s⁻¹b_{n+2}`.
    fn phi(&self, g: Gen) -> Poly {
        let (is_first, k) = self.split(g);
        if is_first {
            cobar_gen_differential(self.b, g.0 + 2, k).into_iter().filter(|(w, _)| w.len() == 2).collect()
        } else {
            Poly::from([(vec![(g.0, k)], sign(g.0 as i64))])
        }
    }

    /// `ψ(s⁻¹b_{n+1}) = (0, (−1)^n b_{n+1})`.
    fn psi(&self, g: Gen) -> Poly {
        Poly::from([(vec![self.second(g.0, g.1)], sign(g.0 as i64))])
    }
}

fn verify(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Verification(what.to_string()))
    }
}

/// Builds both sides and verifies that `φ` is an isomorphism of dg-algebras with inverse `ψ`
/// in degrees `≤ degmax`, modulo words longer than `maxlen` when degree-0 generators occur.
pub fn cobar_dec_iso(b: &DgCoalgebra, degmax: usize, maxlen: Option<usize>) -> Result<DecIso> {
    if b.complex.lo() < 0 {
        return invalid("coalgebra must be non-negatively graded");
    }
    if b.complex.is_truncated() && b.complex.hi() < degmax as i64 + 3 {
        return Err(Error::Truncation { need: degmax + 3, have: b.complex.hi().max(0) as usize });
    }
    let data = DecData { b };
    let ranks: Vec<usize> = (0..=degmax).map(|n| data.r(n + 2) + data.r(n + 1)).collect();
    let labels: Vec<Vec<String>> = (0..=degmax)
        .map(|n| {
            let mut l: Vec<String> = b.complex.basis(n as i64 + 2).iter().map(|x| format!("({x},0)")).collect();
            l.extend(b.complex.basis(n as i64 + 1).iter().map(|x| format!("(0,{x})")));
            l
        })
        .collect();
    let alg = FreeAlgebra::with_labels(ranks, labels, degmax, maxlen)?;
    let mut relations = Vec::new();
    for n in 0..=degmax {
        for c in 0..data.r(n + 3) {
            relations.push(data.relation(n, true, c));
        }
        for c in 0..data.r(n + 2) {
            relations.push(data.relation(n, false, c));
        }
    }
    let quotient = CobarQuotient::new(alg, relations)?;
    let alg = &quotient.alg;
    alg.complex(&|g| data.d_a(g))?;

    // Ω(P B): connectivity only affects B_0, which the generators do not see
    let mut pb = b.clone();
    pb.complex = b.complex.connected_cover();
    pb.counit = vec![1];
    pb.coaugmentation = Some(vec![1]);
    let cobar = adams_cobar(&pb, degmax, maxlen)?;
    let om = &cobar.alg;

    let d_a = |p: &Poly| extend_der(&|g| data.d_a(g), p, maxlen);
    let phi = |p: &Poly| extend_hom(&|g| data.phi(g), p, maxlen);
    let psi = |p: &Poly| extend_hom(&|g| data.psi(g), p, maxlen);

    for g in &quotient.relations {
        verify(quotient.contains(&d_a(g)), "ideal is not closed under the differential")?;
        verify(phi(g).is_empty(), "φ does not kill the ideal")?;
    }
    for g in alg.gens() {
        let x = Poly::from([(vec![g], 1)]);
        verify(cobar.d(&phi(&x)) == phi(&d_a(&x)), "φ is not a chain map")?;
        let mut back = psi(&phi(&x));
        poly_add(&mut back, &x, -1);
        verify(quotient.contains(&back), "ψφ ≢ id modulo the ideal")?;
    }
    for g in om.gens() {
        let y = Poly::from([(vec![g], 1)]);
        verify(phi(&psi(&y)) == y, "φψ ≠ id")?;
    }
    let mut phis = Vec::new();
    let mut psis = Vec::new();
    for n in 0..=degmax {
        let pm = alg.matrix(n, om, n, &|w| phi(&Poly::from([(w.clone(), 1)])));
        let sm = om.matrix(n, alg, n, &|w| psi(&Poly::from([(w.clone(), 1)])));
        verify(pm.mul(&sm).is_identity(), "φψ ≠ id on words")?;
        for (k, w) in alg.words(n).iter().enumerate() {
            let mut back = psi(&phi(&Poly::from([(w.clone(), 1)])));
            poly_add_term(&mut back, w.clone(), -1);
            verify(quotient.contains(&back), &format!("ψφ ≢ id on word {k} in degree {n}"))?;
        }
        verify(quotient.quotient(n) == AbGroup::free(om.rank(n)), "quotient and cobar differ in rank")?;
        phis.push(pm);
        psis.push(sm);
    }
    Ok(DecIso { quotient, cobar, phi: phis, psi: psis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{product, sphere};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn h0_of_circle_is_free_monoid_algebra() {
        let c = DgCoalgebra::of_sset(&sphere(1, 3), 3);
        let q = cobar_h0(&c, 5).unwrap();
        assert_eq!(q.quotient(0), AbGroup::free(6));
        assert_eq!(cobar_h0(&DgCoalgebra::trivial(), 3).unwrap().quotient(0), AbGroup::free(1));
    }

    #[test]
    fn h0_relations_lie_in_ideal() {
        let t = product(&sphere(1, 3), &sphere(1, 3)).unwrap();
        let c = DgCoalgebra::of_sset(&t, 3);
        let q = cobar_h0(&c, 4).unwrap();
        for g in &q.relations {
            assert!(q.contains(g));
        }
        // normal forms are idempotent and additive
        let words = q.alg.words(0).to_vec();
        for (i, w) in words.iter().enumerate().take(12) {
            let p = Poly::from([(w.clone(), 1)]);
            let nf = q.normal_form(&p);
            assert_eq!(q.normal_form(&nf), nf);
            let v = &words[(i * 7) % words.len()];
            let mut sum = p.clone();
            poly_add_term(&mut sum, v.clone(), 3);
            let mut expect = nf.clone();
            poly_add(&mut expect, &q.normal_form(&Poly::from([(v.clone(), 3)])), 1);
            assert_eq!(q.normal_form(&sum), q.normal_form(&expect));
        }
        // the torus has an abelian fundamental monoid: H_0 grows like a polynomial ring
        assert_eq!(q.quotient(0), AbGroup::free(1 + 2 + 3 + 4 + 5));
    }

    #[test]
    fn dec_iso_small_cases() {
        let iso = cobar_dec_iso(&DgCoalgebra::of_sset(&sphere(2, 7), 7), 3, Some(4)).unwrap();
        assert!((0..=3).all(|n| iso.cobar.alg.rank(n) == 1));
        let mut triv = DgCoalgebra::trivial();
        triv.complex.set_truncated(false);
        let iso = cobar_dec_iso(&triv, 3, None).unwrap();
        assert_eq!(iso.cobar.complex.ranks(), vec![1, 0, 0, 0]);
        cobar_dec_iso(&DgCoalgebra::of_sset(&sphere(1, 6), 6), 3, Some(4)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut b = DgCoalgebra::random_two_stage(&mut rng, 2, 2);
        b.complex.set_truncated(false);
        cobar_dec_iso(&b, 3, Some(4)).unwrap();
    }
}
