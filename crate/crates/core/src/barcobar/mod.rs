//! Dg-algebras and dg-coalgebras over ℤ, the bar and cobar constructions, A∞ structures and
//! morphisms, and the cobar quotient of a coalgebra in simplicial abelian groups.
//!
//! Conventions: the Koszul rule throughout; `m_1 = −d`, `m_2` is the multiplication; tensor
//! bases are indexed by `a * rank + b` as in [`crate::chain::tensor`].

mod ainf;
mod bar;
mod quotient;
pub mod tensor;

pub use ainf::*;
pub use bar::*;
pub use quotient::*;

use crate::chain::{ChainComplex, Matrix};
use crate::error::{invalid, Error, Result};
use crate::simplexcat::SimplexMap;
use crate::sset::{SSetPresentation, Simplex};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use std::collections::BTreeMap;

pub(crate) fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub(crate) fn entries(m: &Matrix, c: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
    m.column(c).iter().map(|(r, v)| (*r, v.to_i64().expect("entry fits in i64")))
}

fn col_vec(v: &[i64]) -> Matrix {
    Matrix::from_rows(v.len(), 1, &v.iter().map(|&x| vec![x]).collect::<Vec<_>>())
}

fn row_vec(v: &[i64]) -> Matrix {
    Matrix::from_rows(1, v.len(), &[v.to_vec()])
}

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Verification(what.to_string()))
    }
}

/// An associative unital dg-algebra, possibly truncated above `complex.hi()`.
#[derive(Clone, Debug)]
pub struct DgAlgebra {
    pub complex: ChainComplex,
    mult: BTreeMap<(i64, i64), Matrix>,
    /// The unit as a vector in degree 0.
    pub unit: Vec<i64>,
    /// `ε : A_0 -> ℤ`.
    pub augmentation: Option<Vec<i64>>,
    /// Optional multiplicative weights of basis elements, `weights[n - lo][k]`.
    pub weights: Option<Vec<Vec<usize>>>,
}

impl DgAlgebra {
    /// `mult[(i, j)] : A_i ⊗ A_j -> A_{i+j}`; missing components are zero. Laws are checked.
    pub fn new(
        complex: ChainComplex,
        mult: BTreeMap<(i64, i64), Matrix>,
        unit: Vec<i64>,
        augmentation: Option<Vec<i64>>,
    ) -> Result<Self> {
        let a = DgAlgebra { complex, mult, unit, augmentation, weights: None };
        a.check_laws()?;
        Ok(a)
    }

    pub fn with_weights(mut self, weights: Vec<Vec<usize>>) -> Result<Self> {
        self.weights = Some(weights);
        for ((i, j), m) in &self.mult {
            for c in 0..m.cols() {
                let (a, b) = (c / self.complex.rank(*j), c % self.complex.rank(*j));
                let w = self.weight(*i, a) + self.weight(*j, b);
                if entries(m, c).any(|(r, _)| self.weight(i + j, r) != w) {
                    return invalid("multiplication does not preserve weights");
                }
            }
        }
        for n in self.complex.degrees() {
            let d = self.complex.d(n);
            for c in 0..d.cols() {
                if entries(&d, c).any(|(r, _)| self.weight(n - 1, r) != self.weight(n, c)) {
                    return invalid("differential does not preserve weights");
                }
            }
        }
        Ok(self)
    }

    pub fn weight(&self, n: i64, k: usize) -> usize {
        self.weights.as_ref().map_or(0, |w| w[(n - self.complex.lo()) as usize][k])
    }

    pub fn rank(&self, n: i64) -> usize {
        self.complex.rank(n)
    }

    pub fn mult(&self, i: i64, j: i64) -> Matrix {
        self.mult.get(&(i, j)).cloned().unwrap_or_else(|| Matrix::zero(self.rank(i + j), self.rank(i) * self.rank(j)))
    }

    pub fn mult_components(&self) -> &BTreeMap<(i64, i64), Matrix> {
        &self.mult
    }

    /// Product of two basis elements.
    pub fn product(&self, (i, a): (i64, usize), (j, b): (i64, usize)) -> Vec<(usize, i64)> {
        match self.mult.get(&(i, j)) {
            Some(m) => entries(m, a * self.rank(j) + b).collect(),
            None => Vec::new(),
        }
    }

    fn in_range(&self, n: i64) -> bool {
        n >= self.complex.lo() && n <= self.complex.hi()
    }

    /// Associativity, unit and Leibniz as matrix identities.
    pub fn check_laws(&self) -> Result<()> {
        let c = &self.complex;
        check(self.unit.len() == c.rank(0), "unit has the wrong length")?;
        let degs: Vec<i64> = c.degrees().collect();
        for &i in &degs {
            for &j in &degs {
                if !self.in_range(i + j) {
                    continue;
                }
                for &k in &degs {
                    if !self.in_range(i + j + k) {
                        continue;
                    }
                    let l = self.mult(i + j, k).mul(&self.mult(i, j).kron(&Matrix::identity(c.rank(k))));
                    let r = self.mult(i, j + k).mul(&Matrix::identity(c.rank(i)).kron(&self.mult(j, k)));
                    check(l == r, "associativity")?;
                }
                // d(ab) = (da)b + (−1)^i a(db)
                let lhs = c.d(i + j).mul(&self.mult(i, j));
                let mut rhs = Matrix::zero(lhs.rows(), lhs.cols());
                if self.in_range(i - 1) {
                    rhs = rhs.add(&self.mult(i - 1, j).mul(&c.d(i).kron(&Matrix::identity(c.rank(j)))));
                }
                if self.in_range(j - 1) {
                    let t = self.mult(i, j - 1).mul(&Matrix::identity(c.rank(i)).kron(&c.d(j)));
                    rhs = rhs.lin(&t, sign(i));
                }
                check(lhs == rhs, "Leibniz rule")?;
            }
            let u = col_vec(&self.unit);
            if self.in_range(0) {
                let left = self.mult(0, i).mul(&u.kron(&Matrix::identity(c.rank(i))));
                let right = self.mult(i, 0).mul(&Matrix::identity(c.rank(i)).kron(&u));
                check(left.is_identity() && right.is_identity(), "unit law")?;
            }
        }
        if self.in_range(0) {
            check(c.d(0).mul(&col_vec(&self.unit)).is_zero(), "unit is not a cycle")?;
        }
        if let Some(eps) = &self.augmentation {
            check(eps.len() == c.rank(0), "augmentation has the wrong length")?;
            let e = row_vec(eps);
            check(e.mul(&col_vec(&self.unit)).is_identity(), "augmentation of the unit")?;
            check(e.mul(&c.d(1)).is_zero(), "augmentation is not a chain map")?;
            let ee = self.mult(0, 0);
            check(e.mul(&ee) == e.kron(&e), "augmentation is not multiplicative")?;
        }
        Ok(())
    }

    /// `ℤ` in degree 0.
    pub fn trivial() -> Self {
        let mut mult = BTreeMap::new();
        mult.insert((0, 0), Matrix::identity(1));
        DgAlgebra { complex: ChainComplex::unit(0), mult, unit: vec![1], augmentation: Some(vec![1]), weights: None }
    }

    /// `ℤ[x]/(x^{w+1})` with `x` in degree 0, weight of `x^k` equal to `k`, augmentation `x ↦ 0`.
    pub fn truncated_polynomial(w: usize) -> Self {
        let basis = vec![(0..=w).map(|k| format!("x^{k}")).collect()];
        let complex = ChainComplex::new(0, basis, vec![Matrix::zero(0, w + 1)], false).expect("single degree");
        let r = w + 1;
        let trips = (0..r).flat_map(|a| (0..r).filter(move |b| a + b <= w).map(move |b| (a + b, a * r + b, BigInt::from(1))));
        let mut mult = BTreeMap::new();
        mult.insert((0, 0), Matrix::from_triplets(r, r * r, trips));
        let mut unit = vec![0; r];
        unit[0] = 1;
        let a = DgAlgebra { complex, mult, unit: unit.clone(), augmentation: Some(unit), weights: None };
        a.with_weights(vec![(0..=w).collect()]).expect("weights of x^k")
    }

    /// The endomorphism dg-algebra `Hom(C, C)` with `D f = d f − (−1)^{|f|} f d`.
    pub fn endomorphisms(c: &ChainComplex) -> Self {
        let (lo, hi) = (c.lo(), c.hi());
        let span = hi - lo;
        // basis of End_k: (i, r, s) with E : C_i -> C_{i+k}, column s to row r
        let mut basis: Vec<Vec<(i64, usize, usize)>> = Vec::new();
        for k in -span..=span {
            let mut b = Vec::new();
            for i in lo..=hi {
                if i + k < lo || i + k > hi {
                    continue;
                }
                for r in 0..c.rank(i + k) {
                    for s in 0..c.rank(i) {
                        b.push((i, r, s));
                    }
                }
            }
            basis.push(b);
        }
        let index: Vec<BTreeMap<(i64, usize, usize), usize>> =
            basis.iter().map(|b| b.iter().enumerate().map(|(n, &e)| (e, n)).collect()).collect();
        let ix = |k: i64, e: (i64, usize, usize)| index[(k + span) as usize].get(&e).copied();
        let mut dmats = Vec::new();
        for k in -span..=span {
            let src = &basis[(k + span) as usize];
            let rows = if k == -span { 0 } else { basis[(k - 1 + span) as usize].len() };
            let mut trips = Vec::new();
            for (col, &(i, r, s)) in src.iter().enumerate() {
                // d ∘ E: C_{i+k} -> C_{i+k-1}
                let dd = c.d(i + k);
                for (r2, v) in entries(&dd, r) {
                    if let Some(row) = ix(k - 1, (i, r2, s)) {
                        trips.push((row, col, BigInt::from(v)));
                    }
                }
                // E ∘ d: C_{i+1} -> C_{i+k}, entries where d maps basis t of C_{i+1} to s
                let du = c.d(i + 1);
                for t in 0..c.rank(i + 1) {
                    for (s2, v) in entries(&du, t) {
                        if s2 == s {
                            if let Some(row) = ix(k - 1, (i + 1, r, t)) {
                                trips.push((row, col, BigInt::from(-sign(k) * v)));
                            }
                        }
                    }
                }
            }
            dmats.push(Matrix::from_triplets(rows, src.len(), trips));
        }
        let labels = basis.iter().map(|b| b.iter().map(|(i, r, s)| format!("E{i}:{s}->{r}")).collect()).collect();
        let complex = ChainComplex::new(-span, labels, dmats, false).expect("endomorphism complex");
        let mut mult = BTreeMap::new();
        for k in -span..=span {
            for l in -span..=span {
                if (k + l).abs() > span {
                    continue;
                }
                let (bk, bl) = (&basis[(k + span) as usize], &basis[(l + span) as usize]);
                let mut trips = Vec::new();
                for (a, &(i1, r1, s1)) in bk.iter().enumerate() {
                    for (b, &(i2, r2, s2)) in bl.iter().enumerate() {
                        // f ∘ g with g : C_{i2} -> C_{i2+l}, f : C_{i1} -> C_{i1+k}
                        if i1 == i2 + l && s1 == r2 {
                            let row = ix(k + l, (i2, r1, s2)).expect("composite basis");
                            trips.push((row, a * bl.len() + b, BigInt::from(1)));
                        }
                    }
                }
                if !trips.is_empty() {
                    mult.insert((k, l), Matrix::from_triplets(basis[(k + l + span) as usize].len(), bk.len() * bl.len(), trips));
                }
            }
        }
        let mut unit = vec![0; basis[span as usize].len()];
        for (n, &(_, r, s)) in basis[span as usize].iter().enumerate() {
            if r == s {
                unit[n] = 1;
            }
        }
        DgAlgebra { complex, mult, unit, augmentation: None, weights: None }
    }
}

/// A coassociative counital dg-coalgebra, possibly truncated above `complex.hi()`.
#[derive(Clone, Debug)]
pub struct DgCoalgebra {
    pub complex: ChainComplex,
    comult: BTreeMap<(i64, i64), Matrix>,
    /// `ε : C_0 -> ℤ`.
    pub counit: Vec<i64>,
    /// `η : ℤ -> C_0`.
    pub coaugmentation: Option<Vec<i64>>,
}

impl DgCoalgebra {
    /// `comult[(i, j)] : C_{i+j} -> C_i ⊗ C_j`; missing components are zero. Laws are checked.
    pub fn new(
        complex: ChainComplex,
        comult: BTreeMap<(i64, i64), Matrix>,
        counit: Vec<i64>,
        coaugmentation: Option<Vec<i64>>,
    ) -> Result<Self> {
        let c = DgCoalgebra { complex, comult, counit, coaugmentation };
        c.check_laws()?;
        Ok(c)
    }

    pub fn rank(&self, n: i64) -> usize {
        self.complex.rank(n)
    }

    pub fn comult(&self, i: i64, j: i64) -> Matrix {
        self.comult.get(&(i, j)).cloned().unwrap_or_else(|| Matrix::zero(self.rank(i) * self.rank(j), self.rank(i + j)))
    }

    pub fn comult_components(&self) -> &BTreeMap<(i64, i64), Matrix> {
        &self.comult
    }

    /// `Δ_{i,j}(c)` for a basis element `c ∈ C_{i+j}` as `(a, b, coefficient)`.
    pub fn coproduct(&self, i: i64, j: i64, c: usize) -> Vec<(usize, usize, i64)> {
        let rj = self.rank(j);
        match self.comult.get(&(i, j)) {
            Some(m) => entries(m, c).map(|(r, v)| (r / rj, r % rj, v)).collect(),
            None => Vec::new(),
        }
    }

    fn in_range(&self, n: i64) -> bool {
        n >= self.complex.lo() && n <= self.complex.hi()
    }

    /// `C_0 ≅ ℤ` via the counit and nothing in negative degrees.
    pub fn is_connected(&self) -> bool {
        self.complex.lo() >= 0
            && self.rank(0) == 1
            && self.counit.first().is_some_and(|e| e.abs() == 1)
    }

    /// Coassociativity, counit and co-Leibniz as matrix identities.
    pub fn check_laws(&self) -> Result<()> {
        let c = &self.complex;
        check(self.counit.len() == c.rank(0), "counit has the wrong length")?;
        let degs: Vec<i64> = c.degrees().collect();
        for &i in &degs {
            for &j in &degs {
                for &k in &degs {
                    if !self.in_range(i + j + k) {
                        continue;
                    }
                    let l = self.comult(i, j).kron(&Matrix::identity(c.rank(k))).mul(&self.comult(i + j, k));
                    let r = Matrix::identity(c.rank(i)).kron(&self.comult(j, k)).mul(&self.comult(i, j + k));
                    check(l == r, "coassociativity")?;
                }
                if !self.in_range(i + j + 1) {
                    continue;
                }
                // Δ d = (d ⊗ 1 + 1 ⊗ d) Δ
                let n = i + j + 1;
                let lhs = self.comult(i, j).mul(&c.d(n));
                let mut rhs = Matrix::zero(lhs.rows(), lhs.cols());
                if self.in_range(i + 1) {
                    rhs = rhs.add(&c.d(i + 1).kron(&Matrix::identity(c.rank(j))).mul(&self.comult(i + 1, j)));
                }
                if self.in_range(j + 1) {
                    let t = Matrix::identity(c.rank(i)).kron(&c.d(j + 1)).mul(&self.comult(i, j + 1));
                    rhs = rhs.lin(&t, sign(i));
                }
                check(lhs == rhs, "co-Leibniz rule")?;
            }
            if self.in_range(0) {
                let e = row_vec(&self.counit);
                let left = e.kron(&Matrix::identity(c.rank(i))).mul(&self.comult(0, i));
                let right = Matrix::identity(c.rank(i)).kron(&e).mul(&self.comult(i, 0));
                check(left.is_identity() && right.is_identity(), "counit law")?;
            }
        }
        if self.in_range(1) {
            check(row_vec(&self.counit).mul(&c.d(1)).is_zero(), "counit is not a chain map")?;
        }
        if let Some(eta) = &self.coaugmentation {
            check(eta.len() == c.rank(0), "coaugmentation has the wrong length")?;
            let h = col_vec(eta);
            check(row_vec(&self.counit).mul(&h).is_identity(), "counit of the coaugmentation")?;
            check(self.comult(0, 0).mul(&h) == h.kron(&h), "coaugmentation is not comultiplicative")?;
        }
        Ok(())
    }

    /// `ℤ` in degree 0.
    pub fn trivial() -> Self {
        let mut comult = BTreeMap::new();
        comult.insert((0, 0), Matrix::identity(1));
        DgCoalgebra { complex: ChainComplex::unit(0), comult, counit: vec![1], coaugmentation: Some(vec![1]) }
    }

    /// Normalized chains `C(X)` in degrees `≤ min(dim X, maxdeg)` with the Alexander-Whitney diagonal.
    pub fn of_sset(x: &SSetPresentation, maxdeg: usize) -> Self {
        let top = x.dim().min(maxdeg);
        let mut basis = Vec::new();
        let mut d = Vec::new();
        for n in 0..=top {
            basis.push((0..x.num_cells(n)).map(|c| x.cell_name(n, c).to_string()).collect());
            let mut trips = Vec::new();
            if n > 0 {
                for c in 0..x.num_cells(n) {
                    for i in 0..=n {
                        let f = x.cell_face(n, c, i);
                        if !f.is_degenerate() {
                            trips.push((f.cell, c, BigInt::from(sign(i as i64))));
                        }
                    }
                }
            }
            let rows = if n == 0 { 0 } else { x.num_cells(n - 1) };
            d.push(Matrix::from_triplets(rows, x.num_cells(n), trips));
        }
        let complex = ChainComplex::new(0, basis, d, true).expect("normalized chains");
        let mut comult = BTreeMap::new();
        for n in 0..=top {
            for i in 0..=n {
                let j = n - i;
                let rj = x.num_cells(j);
                let mut trips = Vec::new();
                for c in 0..x.num_cells(n) {
                    let s = Simplex::nondegenerate(n, c);
                    let front = x.apply(&s, &SimplexMap::interval(n, 0, i)).expect("front face");
                    let back = x.apply(&s, &SimplexMap::interval(n, i, j)).expect("back face");
                    if !front.is_degenerate() && !back.is_degenerate() {
                        trips.push((front.cell * rj + back.cell, c, BigInt::from(1)));
                    }
                }
                if !trips.is_empty() {
                    comult.insert((i as i64, j as i64), Matrix::from_triplets(x.num_cells(i) * rj, x.num_cells(n), trips));
                }
            }
        }
        let counit = vec![1; x.num_cells(0)];
        let coaugmentation = (x.num_cells(0) == 1).then(|| vec![1]);
        DgCoalgebra { complex, comult, counit, coaugmentation }
    }

    /// A connected coalgebra concentrated in degrees 0, 1, 2 with random `d : C_2 -> C_1` and
    /// random reduced diagonal `C_2 -> C_1 ⊗ C_1`.
    pub fn random_two_stage(rng: &mut impl Rng, r1: usize, r2: usize) -> Self {
        let mut rand_mat = |rows: usize, cols: usize| {
            let e: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            Matrix::from_rows(rows, cols, &e)
        };
        let d2 = rand_mat(r1, r2);
        let beta = rand_mat(r1 * r1, r2);
        let basis = vec![vec!["v".to_string()], (0..r1).map(|i| format!("a{i}")).collect(), (0..r2).map(|i| format!("b{i}")).collect()];
        let complex = ChainComplex::new(0, basis, vec![Matrix::zero(0, 1), Matrix::zero(1, r1), d2], false).expect("two-stage complex");
        let mut comult = BTreeMap::new();
        comult.insert((0, 0), Matrix::identity(1));
        for n in 1..=2 {
            let r = if n == 1 { r1 } else { r2 };
            comult.insert((0, n), Matrix::identity(r));
            comult.insert((n, 0), Matrix::identity(r));
        }
        comult.insert((1, 1), beta);
        DgCoalgebra { complex, comult, counit: vec![1], coaugmentation: Some(vec![1]) }
    }
}

/// A random bounded complex in degrees `0..=top` with small ranks, built from elementary pieces
/// `ℤ --k--> ℤ` conjugated by random unimodular changes of basis.
pub fn random_complex(rng: &mut impl Rng, top: usize, max_total_rank: usize) -> ChainComplex {
    let mut ranks = vec![0usize; top + 1];
    // pieces: (degree of source, multiplier) or free summands (degree, 0)
    let mut pieces: Vec<(usize, i64)> = Vec::new();
    let mut total = 0;
    while total < max_total_rank {
        let n = rng.gen_range(0..=top);
        if n > 0 && total + 2 <= max_total_rank && rng.gen_bool(0.5) {
            pieces.push((n, rng.gen_range(1..=3)));
            ranks[n] += 1;
            ranks[n - 1] += 1;
            total += 2;
        } else {
            pieces.push((n, 0));
            ranks[n] += 1;
            total += 1;
        }
        if rng.gen_bool(0.3) {
            break;
        }
    }
    let mut next = vec![0usize; top + 1];
    let mut d: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); top + 1];
    for &(n, k) in &pieces {
        let s = next[n];
        next[n] += 1;
        if k != 0 {
            let t = next[n - 1];
            next[n - 1] += 1;
            d[n].push((t, s, k));
        }
    }
    let change: Vec<Matrix> = ranks.iter().map(|&r| random_unimodular(rng, r)).collect();
    let mut mats = Vec::new();
    for n in 0..=top {
        let rows = if n == 0 { 0 } else { ranks[n - 1] };
        let m = Matrix::from_triplets(rows, ranks[n], d[n].iter().map(|&(r, c, v)| (r, c, BigInt::from(v))));
        if n == 0 {
            mats.push(m);
        } else {
            let inv = crate::chain::snf::inverse(&change[n]).expect("unimodular");
            mats.push(change[n - 1].mul(&m).mul(&inv));
        }
    }
    let basis = ranks.iter().enumerate().map(|(n, &r)| (0..r).map(|i| format!("c{n}.{i}")).collect()).collect();
    ChainComplex::new(0, basis, mats, false).expect("random complex")
}

fn random_unimodular(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    for _ in 0..2 * n {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            let c = rng.gen_range(-1..=1);
            let mut e = Matrix::identity(n);
            e = e.add(&Matrix::from_triplets(n, n, [(i, j, BigInt::from(c))]));
            m = e.mul(&m);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{product, sphere, standard};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chains_of_ssets_are_coalgebras() {
        for name in ["S1", "S2", "delta2", "boundary3"] {
            let x = standard(name, 4).unwrap();
            let c = DgCoalgebra::of_sset(&x, 4);
            c.check_laws().unwrap();
        }
        let s1 = sphere(1, 3);
        let t = product(&s1, &s1).unwrap();
        DgCoalgebra::of_sset(&t, 3).check_laws().unwrap();
    }

    #[test]
    fn endomorphism_algebras() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let c = random_complex(&mut rng, 2, 3);
            let e = DgAlgebra::endomorphisms(&c);
            e.check_laws().unwrap();
        }
    }

    #[test]
    fn small_examples() {
        DgAlgebra::trivial().check_laws().unwrap();
        DgAlgebra::truncated_polynomial(3).check_laws().unwrap();
        DgCoalgebra::trivial().check_laws().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        DgCoalgebra::random_two_stage(&mut rng, 2, 2).check_laws().unwrap();
    }
}
