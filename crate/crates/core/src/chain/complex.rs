use super::matrix::Matrix;
use super::snf::invariant_factors;
use crate::error::{invalid, Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;
use std::fmt;

/// A finitely generated abelian group `ℤ^rank ⊕ ⊕ ℤ/d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbGroup {
    pub fn free(rank: usize) -> Self {
        AbGroup { rank, torsion: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn with_torsion(rank: usize, torsion: &[i64]) -> Self {
        AbGroup { rank, torsion: torsion.iter().map(|&t| BigInt::from(t)).collect() }
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A bounded chain complex of free abelian groups with labelled bases.
///
/// Degrees run over `lo..=hi`. If `truncated` is set, the complex is only known up to `hi`
/// and the top homology is not available.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    lo: i64,
    basis: Vec<Vec<String>>,
    // d[k]: C_{lo+k} -> C_{lo+k-1}
    d: Vec<Matrix>,
    truncated: bool,
}

impl ChainComplex {
    /// Builds and validates a complex: shapes must match and `d∘d = 0`.
    pub fn new(lo: i64, basis: Vec<Vec<String>>, d: Vec<Matrix>, truncated: bool) -> Result<Self> {
        if basis.len() != d.len() {
            return invalid("one differential per degree expected");
        }
        for (k, m) in d.iter().enumerate() {
            let below = if k == 0 { 0 } else { basis[k - 1].len() };
            if m.cols() != basis[k].len() || m.rows() != below {
                return Err(Error::Dimension(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    lo + k as i64,
                    m.rows(),
                    m.cols(),
                    below,
                    basis[k].len()
                )));
            }
        }
        for k in 1..d.len() {
            if !d[k - 1].mul(&d[k]).is_zero() {
                return Err(Error::Verification(format!("d∘d ≠ 0 out of degree {}", lo + k as i64)));
            }
        }
        Ok(ChainComplex { lo, basis, d, truncated })
    }

    /// A complex with unnamed basis elements.
    pub fn from_ranks(lo: i64, ranks: &[usize], d: Vec<Matrix>) -> Result<Self> {
        let basis = ranks.iter().map(|&r| (0..r).map(|i| format!("e{i}")).collect()).collect();
        Self::new(lo, basis, d, false)
    }

    pub fn zero() -> Self {
        ChainComplex { lo: 0, basis: Vec::new(), d: Vec::new(), truncated: false }
    }

    /// `ℤ` concentrated in one degree.
    pub fn unit(deg: i64) -> Self {
        ChainComplex { lo: deg, basis: vec![vec!["1".into()]], d: vec![Matrix::zero(0, 1)], truncated: false }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.basis.len() as i64 - 1
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn set_truncated(&mut self, t: bool) {
        self.truncated = t;
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi()
    }

    pub fn rank(&self, n: i64) -> usize {
        self.idx(n).map_or(0, |k| self.basis[k].len())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn basis(&self, n: i64) -> &[String] {
        self.idx(n).map_or(&[], |k| &self.basis[k])
    }

    fn idx(&self, n: i64) -> Option<usize> {
        if n < self.lo || n > self.hi() {
            None
        } else {
            Some((n - self.lo) as usize)
        }
    }

    /// The differential `C_n -> C_{n-1}` (a zero matrix outside the support).
    pub fn d(&self, n: i64) -> Matrix {
        match self.idx(n) {
            Some(k) => self.d[k].clone(),
            None => Matrix::zero(self.rank(n - 1), self.rank(n)),
        }
    }

    pub fn d_ref(&self, n: i64) -> Option<&Matrix> {
        self.idx(n).map(|k| &self.d[k])
    }

    /// `H_n` via Smith normal form.
    pub fn homology(&self, n: i64) -> Result<AbGroup> {
        if self.truncated && n >= self.hi() {
            return Err(Error::Truncation { need: (n + 1).max(0) as usize, have: self.hi().max(0) as usize });
        }
        let dn = self.d(n);
        let dn1 = self.d(n + 1);
        let rk_n = invariant_factors(&dn).len();
        let f1 = invariant_factors(&dn1);
        let rank = self.rank(n) - rk_n - f1.len();
        let torsion = f1.into_iter().filter(|x| !x.is_one()).collect();
        Ok(AbGroup { rank, torsion })
    }

    /// Homology in degrees `lo..=hi` (skipping the unknown top if truncated).
    pub fn homology_all(&self) -> Vec<(i64, AbGroup)> {
        let top = if self.truncated { self.hi() - 1 } else { self.hi() };
        (self.lo..=top).map(|n| (n, self.homology(n).unwrap())).collect()
    }

    /// Restriction to degrees `≤ hi`.
    pub fn truncate_above(&self, hi: i64) -> ChainComplex {
        if hi >= self.hi() {
            return self.clone();
        }
        let keep = (hi - self.lo + 1).max(0) as usize;
        ChainComplex {
            lo: self.lo,
            basis: self.basis[..keep].to_vec(),
            d: self.d[..keep].to_vec(),
            truncated: true,
        }
    }

    /// `s^k C`: degrees raised by `k`; differentials unchanged.
    pub fn shift(&self, k: i64) -> ChainComplex {
        ChainComplex { lo: self.lo + k, ..self.clone() }
    }

    /// Degrees below `m` replaced by zero.
    pub fn truncate_below(&self, m: i64) -> ChainComplex {
        if m <= self.lo {
            return self.clone();
        }
        if m > self.hi() {
            return ChainComplex { lo: m, basis: Vec::new(), d: Vec::new(), truncated: self.truncated };
        }
        let skip = (m - self.lo) as usize;
        let mut d: Vec<Matrix> = self.d[skip..].to_vec();
        d[0] = Matrix::zero(0, self.basis[skip].len());
        ChainComplex { lo: m, basis: self.basis[skip..].to_vec(), d, truncated: self.truncated }
    }

    /// `τ_{≥1}`.
    pub fn truncate_ge1(&self) -> ChainComplex {
        self.truncate_below(1)
    }

    /// `P`: degree 0 replaced by `ℤ`, negative degrees dropped; `d_1` becomes zero.
    pub fn connected_cover(&self) -> ChainComplex {
        let pos = self.truncate_below(1);
        let mut basis = vec![vec!["1".to_string()]];
        let mut d = vec![Matrix::zero(0, 1)];
        for n in 1..=pos.hi() {
            basis.push(pos.basis(n).to_vec());
            d.push(if n == 1 { Matrix::zero(1, pos.rank(1)) } else { pos.d(n) });
        }
        ChainComplex { lo: 0, basis, d, truncated: self.truncated }
    }

    /// Checks that the given maps `C_n -> D_{n+deg}` form a chain map (`deg = 0`) or
    /// anticommute with `d` according to the Hom-differential convention.
    pub fn is_chain_map(&self, target: &ChainComplex, map: &GradedMap) -> bool {
        // ∂f = d f − (−1)^deg f d = 0
        let sign = if map.degree % 2 == 0 { 1 } else { -1 };
        for n in self.lo..=self.hi() + 1 {
            if self.truncated && n > self.hi() {
                break;
            }
            if target.truncated && n + map.degree > target.hi() {
                continue;
            }
            let lhs = target.d(n + map.degree).mul(&map.get(self, target, n));
            let rhs = map.get(self, target, n - 1).mul(&self.d(n));
            if !lhs.lin(&rhs, -sign).is_zero() {
                return false;
            }
        }
        true
    }
}

/// A family of matrices `C_n -> D_{n+degree}`, missing components are zero.
#[derive(Clone, Debug, Default)]
pub struct GradedMap {
    pub degree: i64,
    pub comps: BTreeMap<i64, Matrix>,
}

impl GradedMap {
    pub fn new(degree: i64) -> Self {
        GradedMap { degree, comps: BTreeMap::new() }
    }

    pub fn get(&self, src: &ChainComplex, tgt: &ChainComplex, n: i64) -> Matrix {
        match self.comps.get(&n) {
            Some(m) => m.clone(),
            None => Matrix::zero(tgt.rank(n + self.degree), src.rank(n)),
        }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let mut g = GradedMap::new(0);
        for n in c.degrees() {
            g.comps.insert(n, Matrix::identity(c.rank(n)));
        }
        g
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap, a: &ChainComplex, b: &ChainComplex, c: &ChainComplex) -> GradedMap {
        let mut g = GradedMap::new(self.degree + other.degree);
        for n in a.degrees() {
            let m = self.get(b, c, n + other.degree).mul(&other.get(a, b, n));
            g.comps.insert(n, m);
        }
        g
    }
}

/// A first-quadrant bicomplex with commuting differentials.
#[derive(Clone, Debug)]
pub struct BiComplex {
    // basis[i][j] for 0 ≤ i ≤ imax, 0 ≤ j ≤ jmax
    pub basis: Vec<Vec<Vec<String>>>,
    // dl[i][j]: B_{i,j} -> B_{i-1,j}
    pub dl: Vec<Vec<Matrix>>,
    // dr[i][j]: B_{i,j} -> B_{i,j-1}
    pub dr: Vec<Vec<Matrix>>,
}

impl BiComplex {
    pub fn new(basis: Vec<Vec<Vec<String>>>, dl: Vec<Vec<Matrix>>, dr: Vec<Vec<Matrix>>) -> Result<Self> {
        let b = BiComplex { basis, dl, dr };
        b.validate()?;
        Ok(b)
    }

    pub fn imax(&self) -> usize {
        self.basis.len().saturating_sub(1)
    }

    pub fn jmax(&self) -> usize {
        self.basis.first().map_or(0, |r| r.len().saturating_sub(1))
    }

    pub fn rank(&self, i: i64, j: i64) -> usize {
        if i < 0 || j < 0 || i as usize > self.imax() || j as usize > self.jmax() || self.basis.is_empty() {
            0
        } else {
            self.basis[i as usize][j as usize].len()
        }
    }

    pub fn dl_at(&self, i: i64, j: i64) -> Matrix {
        if self.rank(i, j) == 0 || i == 0 {
            return Matrix::zero(self.rank(i - 1, j), self.rank(i, j));
        }
        self.dl[i as usize][j as usize].clone()
    }

    pub fn dr_at(&self, i: i64, j: i64) -> Matrix {
        if self.rank(i, j) == 0 || j == 0 {
            return Matrix::zero(self.rank(i, j - 1), self.rank(i, j));
        }
        self.dr[i as usize][j as usize].clone()
    }

    fn validate(&self) -> Result<()> {
        for i in 0..=self.imax() as i64 {
            for j in 0..=self.jmax() as i64 {
                let (l, r) = (self.dl_at(i, j), self.dr_at(i, j));
                if (l.rows(), l.cols()) != (self.rank(i - 1, j), self.rank(i, j))
                    || (r.rows(), r.cols()) != (self.rank(i, j - 1), self.rank(i, j))
                {
                    return Err(Error::Dimension(format!("bicomplex differential shape at ({i},{j})")));
                }
                if !self.dl_at(i - 1, j).mul(&l).is_zero() {
                    return Err(Error::Verification(format!("d_l² ≠ 0 at ({i},{j})")));
                }
                if !self.dr_at(i, j - 1).mul(&r).is_zero() {
                    return Err(Error::Verification(format!("d_r² ≠ 0 at ({i},{j})")));
                }
                if self.dl_at(i, j - 1).mul(&r) != self.dr_at(i - 1, j).mul(&l) {
                    return Err(Error::Verification(format!("d_l d_r ≠ d_r d_l at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    /// Offsets of the summands `B_{i,n-i}` inside `(tot B)_n`, ordered by `i`.
    pub fn tot_offsets(&self, n: i64) -> Vec<(i64, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for i in 0..=n {
            out.push((i, off));
            off += self.rank(i, n - i);
        }
        out
    }

    /// Row `n` as a chain complex in the second index, `B_{n,•}`.
    pub fn row(&self, i: usize) -> ChainComplex {
        let basis: Vec<Vec<String>> = self.basis[i].clone();
        let d = (0..basis.len()).map(|j| self.dr_at(i as i64, j as i64)).collect();
        ChainComplex::new(0, basis, d, false).expect("bicomplex row")
    }

    /// Column `j` as a chain complex in the first index, `B_{•,j}`.
    pub fn column(&self, j: usize) -> ChainComplex {
        let basis: Vec<Vec<String>> = self.basis.iter().map(|r| r[j].clone()).collect();
        let d = (0..basis.len()).map(|i| self.dl_at(i as i64, j as i64)).collect();
        ChainComplex::new(0, basis, d, false).expect("bicomplex column")
    }
}

/// Total complex with `d = d_l + (−1)^i d_r`.
pub fn tot(b: &BiComplex) -> ChainComplex {
    let top = (b.imax() + b.jmax()) as i64;
    let mut basis = Vec::new();
    let mut d = Vec::new();
    for n in 0..=top {
        let mut labels = Vec::new();
        for i in 0..=n {
            if let Some(row) = b.basis.get(i as usize).and_then(|r| r.get((n - i) as usize)) {
                labels.extend(row.iter().map(|l| format!("{l}@({i},{})", n - i)));
            }
        }
        basis.push(labels);
        let src = b.tot_offsets(n);
        let tgt = b.tot_offsets(n - 1);
        let rows = if n == 0 { 0 } else { (0..n).map(|i| b.rank(i, n - 1 - i)).sum() };
        let cols: usize = (0..=n).map(|i| b.rank(i, n - i)).sum();
        let mut trips = Vec::new();
        for &(i, c0) in &src {
            let j = n - i;
            if i >= 1 {
                let r0 = tgt.iter().find(|(ii, _)| *ii == i - 1).unwrap().1;
                trips.extend(b.dl_at(i, j).triplets().map(|(r, c, v)| (r + r0, c + c0, v.clone())));
            }
            if j >= 1 {
                let r0 = tgt.iter().find(|(ii, _)| *ii == i).unwrap().1;
                let s: i64 = if i % 2 == 0 { 1 } else { -1 };
                trips.extend(b.dr_at(i, j).triplets().map(|(r, c, v)| (r + r0, c + c0, v * s)));
            }
        }
        d.push(Matrix::from_triplets(rows, cols, trips));
    }
    ChainComplex::new(0, basis, d, false).expect("tot of a bicomplex is a complex")
}

/// Offsets of `C_i ⊗ D_{n-i}` inside `(C ⊗ D)_n`, ordered by `i`.
pub fn tensor_offsets(c: &ChainComplex, dd: &ChainComplex, n: i64) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for i in c.lo()..=c.hi() {
        let j = n - i;
        if j < dd.lo() || j > dd.hi() {
            continue;
        }
        out.push((i, off));
        off += c.rank(i) * dd.rank(j);
    }
    out
}

/// Tensor product with Koszul signs: `d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy`;
/// the basis of `C_i ⊗ D_j` is indexed by `a * rank(D_j) + b`.
pub fn tensor(c: &ChainComplex, dd: &ChainComplex) -> ChainComplex {
    if c.basis.is_empty() || dd.basis.is_empty() {
        return ChainComplex::zero();
    }
    let lo = c.lo() + dd.lo();
    let hi = c.hi() + dd.hi();
    let mut basis = Vec::new();
    let mut d = Vec::new();
    for n in lo..=hi {
        let mut labels = Vec::new();
        for (i, _) in tensor_offsets(c, dd, n) {
            for a in c.basis(i) {
                for b2 in dd.basis(n - i) {
                    labels.push(format!("{a}⊗{b2}"));
                }
            }
        }
        let src = tensor_offsets(c, dd, n);
        let tgt = tensor_offsets(c, dd, n - 1);
        let rows: usize = if n == lo { 0 } else { tgt.iter().map(|(i, _)| c.rank(*i) * dd.rank(n - 1 - i)).sum() };
        let mut trips = Vec::new();
        for &(i, c0) in &src {
            let j = n - i;
            if let Some(&(_, r0)) = tgt.iter().find(|(ii, _)| *ii == i - 1) {
                let m = c.d(i).kron(&Matrix::identity(dd.rank(j)));
                trips.extend(m.triplets().map(|(r, cc, v)| (r + r0, cc + c0, v.clone())));
            }
            if let Some(&(_, r0)) = tgt.iter().find(|(ii, _)| *ii == i) {
                let s: i64 = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                let m = Matrix::identity(c.rank(i)).kron(&dd.d(j)).scale(s);
                trips.extend(m.triplets().map(|(r, cc, v)| (r + r0, cc + c0, v.clone())));
            }
        }
        d.push(Matrix::from_triplets(rows, labels.len(), trips));
        basis.push(labels);
    }
    ChainComplex::new(lo, basis, d, c.truncated || dd.truncated).expect("tensor of complexes")
}

/// Koszul sign of `f ⊗ g` applied to `x ⊗ y`: `(−1)^{|x||g|}`.
pub fn tensor_maps(f: &Matrix, g: &Matrix, deg_x: i64, deg_g: i64) -> Matrix {
    let m = f.kron(g);
    if (deg_x * deg_g).rem_euclid(2) == 1 {
        m.neg()
    } else {
        m
    }
}

/// The internal Hom complex: degree `n` consists of maps `C_k -> D_{k+n}`,
/// `∂f = d∘f − (−1)^n f∘d`.
///
/// The basis element `(k, a, b)` sends basis vector `a` of `C_k` to basis vector `b` of `D_{k+n}`.
pub fn hom_complex(c: &ChainComplex, dd: &ChainComplex) -> ChainComplex {
    let lo = dd.lo() - c.hi();
    let hi = dd.hi() - c.lo();
    let index = |n: i64| -> Vec<(i64, usize, usize)> {
        let mut v = Vec::new();
        for k in c.lo()..=c.hi() {
            for a in 0..c.rank(k) {
                for b in 0..dd.rank(k + n) {
                    v.push((k, a, b));
                }
            }
        }
        v
    };
    let mut basis = Vec::new();
    let mut d = Vec::new();
    let mut prev: Option<BTreeMap<(i64, usize, usize), usize>> = None;
    for n in lo..=hi {
        let idx = index(n);
        let labels: Vec<String> =
            idx.iter().map(|(k, a, b)| format!("[{}→{}]", c.basis(*k)[*a], dd.basis(k + n)[*b])).collect();
        let sign: i64 = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        let mut trips = Vec::new();
        if let Some(pos) = &prev {
            for (col, &(k, a, b)) in idx.iter().enumerate() {
                // d ∘ f: e_a ↦ d(e_b) in D_{k+n-1}
                let dd_m = dd.d(k + n);
                for (r, v) in dd_m.column(b) {
                    trips.push((pos[&(k, a, *r)], col, v.clone()));
                }
                // f ∘ d on C_{k+1}: e_{a'} ↦ d_C[a, a'] e_b
                let dc = c.d(k + 1);
                for a2 in 0..c.rank(k + 1) {
                    let v = dc.get(a, a2);
                    if v != BigInt::from(0) {
                        trips.push((pos[&(k + 1, a2, b)], col, -v * sign));
                    }
                }
            }
        }
        let rows = prev.as_ref().map_or(0, |p| p.len());
        d.push(Matrix::from_triplets(rows, labels.len(), trips));
        basis.push(labels);
        prev = Some(idx.iter().enumerate().map(|(i, key)| (*key, i)).collect());
    }
    ChainComplex::new(lo, basis, d, false).expect("hom complex")
}

/// The double complex `(dec* A)_{i,j} = A_{i+j+1} ⊕ A_{i+j}` with
/// `d_r = [[0,1],[0,0]]`, `d_l = [[d,(−1)^i],[0,d]]`.
pub fn dec_upper_star(a: &ChainComplex) -> BiComplex {
    let top = a.hi().max(0) as usize;
    let size = top + 1;
    let mut basis = vec![vec![Vec::new(); size]; size];
    let mut dl = vec![vec![Matrix::zero(0, 0); size]; size];
    let mut dr = vec![vec![Matrix::zero(0, 0); size]; size];
    let rk = |n: i64| a.rank(n);
    for i in 0..size {
        for j in 0..size {
            let n = (i + j) as i64;
            if n > top as i64 {
                continue;
            }
            let mut labels: Vec<String> = a.basis(n + 1).iter().map(|l| format!("{l}'")).collect();
            labels.extend(a.basis(n).iter().cloned());
            basis[i][j] = labels;
        }
    }
    for i in 0..size {
        for j in 0..size {
            let n = (i + j) as i64;
            if n > top as i64 {
                continue;
            }
            let (hi_r, lo_r) = (rk(n + 1), rk(n));
            if j >= 1 {
                let (th, tl) = (rk(n), rk(n - 1));
                let id = Matrix::identity(lo_r);
                dr[i][j] = Matrix::block(&[th, tl], &[hi_r, lo_r], &[vec![None, Some(&id)], vec![None, None]]);
            } else {
                dr[i][j] = Matrix::zero(0, hi_r + lo_r);
            }
            if i >= 1 {
                let (th, tl) = (rk(n), rk(n - 1));
                let s: i64 = if i % 2 == 0 { 1 } else { -1 };
                let sid = Matrix::scalar(lo_r, s);
                let d1 = a.d(n + 1);
                let d0 = a.d(n);
                dl[i][j] = Matrix::block(&[th, tl], &[hi_r, lo_r], &[vec![Some(&d1), Some(&sid)], vec![None, Some(&d0)]]);
            } else {
                dl[i][j] = Matrix::zero(0, hi_r + lo_r);
            }
        }
    }
    BiComplex::new(basis, dl, dr).expect("dec* is a bicomplex")
}

/// The right adjoint `dec^?`: entry `(n, m)` is `HOM(D_n, A)_m` truncated to non-negative degrees,
/// i.e. `A_m` for `n = 0`, `A_n` for `m = 0`, and `A_{n+m} ⊕ A_{n+m-1}` otherwise.
pub fn dec_question(a: &ChainComplex) -> BiComplex {
    // entries with n + m = top + 1 still carry A_top
    let top = a.hi().max(0) as usize + 1;
    let size = top + 1;
    let rk = |n: i64| a.rank(n);
    let shape = |n: usize, m: usize| -> (usize, usize) {
        let t = (n + m) as i64;
        if n == 0 || m == 0 {
            (rk(t), 0)
        } else {
            (rk(t), rk(t - 1))
        }
    };
    let mut basis = vec![vec![Vec::new(); size]; size];
    for n in 0..size {
        for m in 0..size {
            if n + m > top {
                continue;
            }
            let t = (n + m) as i64;
            let mut labels: Vec<String> = a.basis(t).to_vec();
            if n > 0 && m > 0 {
                labels.extend(a.basis(t - 1).iter().map(|l| format!("{l}'")));
            }
            basis[n][m] = labels;
        }
    }
    let mut dl = vec![vec![Matrix::zero(0, 0); size]; size];
    let mut dr = vec![vec![Matrix::zero(0, 0); size]; size];
    for n in 0..size {
        for m in 0..size {
            let (x, y) = shape(n, m);
            if n + m > top {
                dl[n][m] = Matrix::zero(0, 0);
                dr[n][m] = Matrix::zero(0, 0);
                continue;
            }
            let t = (n + m) as i64;
            // horizontal: restriction along D_{n-1} -> D_n
            dl[n][m] = if n == 0 {
                Matrix::zero(0, x + y)
            } else {
                let (tx, ty) = shape(n - 1, m);
                if m == 0 {
                    a.d(t)
                } else {
                    let id = Matrix::identity(y);
                    Matrix::block(&[tx, ty], &[x, y], &[vec![None, Some(&id)], vec![None, None]])
                }
            };
            // vertical: the Hom differential
            dr[n][m] = if m == 0 {
                Matrix::zero(0, x + y)
            } else if n == 0 {
                a.d(t)
            } else {
                let (tx, ty) = shape(n, m - 1);
                if m == 1 {
                    let id = Matrix::identity(y);
                    let dx = a.d(t);
                    Matrix::block(&[tx], &[x, y], &[vec![Some(&dx), Some(&id)]])
                } else {
                    let s: i64 = if m % 2 == 0 { -1 } else { 1 };
                    let sid = Matrix::scalar(y, s);
                    let dx = a.d(t);
                    let dy = a.d(t - 1);
                    Matrix::block(&[tx, ty], &[x, y], &[vec![Some(&dx), Some(&sid)], vec![None, Some(&dy)]])
                }
            };
        }
    }
    BiComplex::new(basis, dl, dr).expect("dec^? is a bicomplex")
}

/// The complex `HOM(ℤ[Δ_n], A)` of the unnormalized level `n` of `dec^? A`:
/// the direct sum of the rows `k` of `dec^? A` over the surjections `[n] ↠ [k]`.
pub fn dec_question_level(a: &ChainComplex, n: usize) -> ChainComplex {
    let b = dec_question(a);
    let mut rows = Vec::new();
    for k in 0..=n.min(b.imax()) {
        let count = crate::simplexcat::surjections(n, k).len();
        for _ in 0..count {
            rows.push(b.row(k));
        }
    }
    direct_sum(&rows)
}

/// Direct sum of complexes supported in non-negative degrees.
pub fn direct_sum(cs: &[ChainComplex]) -> ChainComplex {
    if cs.is_empty() {
        return ChainComplex::zero();
    }
    let lo = cs.iter().map(|c| c.lo()).min().unwrap();
    let hi = cs.iter().map(|c| c.hi()).max().unwrap();
    let mut basis = Vec::new();
    let mut d = Vec::new();
    for n in lo..=hi {
        let mut labels = Vec::new();
        for (k, c) in cs.iter().enumerate() {
            labels.extend(c.basis(n).iter().map(|l| format!("{l}#{k}")));
        }
        let mats: Vec<Matrix> = cs.iter().map(|c| c.d(n)).collect();
        let refs: Vec<&Matrix> = mats.iter().collect();
        let m = Matrix::block_diag(&refs);
        d.push(if n == lo { Matrix::zero(0, m.cols()) } else { m });
        basis.push(labels);
    }
    ChainComplex::new(lo, basis, d, cs.iter().any(|c| c.truncated)).expect("direct sum")
}
