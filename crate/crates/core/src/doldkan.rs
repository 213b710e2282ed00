//! Simplicial abelian groups, normalized chains, the cosimplicial complex `Δ°`, and the inverse
//! Dold-Kan functor.

use crate::chain::snf::{kernel_basis, smith_normal_form, solve};
use crate::chain::{ChainComplex, Matrix};
use crate::error::{invalid, Error, Result};
use crate::simplexcat::{subsets, FinSetMap, SimplexMap};
use crate::sset::SSetPresentation;
use num_bigint::BigInt;
use num_traits::One;
use std::collections::HashMap;

/// A simplicial free abelian group truncated at `dim`.
///
/// `faces[n][i] : A_n -> A_{n-1}` and `degens[n][i] : A_n -> A_{n+1}` (for `n < dim`).
#[derive(Clone, Debug)]
pub struct SimplicialAbGroup {
    pub basis: Vec<Vec<String>>,
    pub faces: Vec<Vec<Matrix>>,
    pub degens: Vec<Vec<Matrix>>,
}

impl SimplicialAbGroup {
    /// Validates shapes and the simplicial identities as matrix identities.
    pub fn new(basis: Vec<Vec<String>>, faces: Vec<Vec<Matrix>>, degens: Vec<Vec<Matrix>>) -> Result<Self> {
        let a = SimplicialAbGroup { basis, faces, degens };
        a.check()?;
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.basis[n].len()
    }

    fn check(&self) -> Result<()> {
        let d = self.dim();
        if self.faces.len() != d + 1 || self.degens.len() != d + 1 {
            return invalid("structure map tables must cover every level");
        }
        for n in 0..=d {
            let nf = if n == 0 { 0 } else { n + 1 };
            let ns = if n < d { n + 1 } else { 0 };
            if self.faces[n].len() != nf || self.degens[n].len() != ns {
                return Err(Error::Dimension(format!("wrong number of structure maps at level {n}")));
            }
            for m in &self.faces[n] {
                if (m.rows(), m.cols()) != (self.rank(n - 1), self.rank(n)) {
                    return Err(Error::Dimension(format!("face at level {n} has wrong shape")));
                }
            }
            for m in &self.degens[n] {
                if (m.rows(), m.cols()) != (self.rank(n + 1), self.rank(n)) {
                    return Err(Error::Dimension(format!("degeneracy at level {n} has wrong shape")));
                }
            }
        }
        let fail = |what: &str, n: usize| Err(Error::Verification(format!("{what} fails at level {n}")));
        for n in 2..=d {
            for j in 0..=n {
                for i in 0..j {
                    if self.faces[n - 1][i].mul(&self.faces[n][j]) != self.faces[n - 1][j - 1].mul(&self.faces[n][i]) {
                        return fail("δ_i δ_j = δ_{j-1} δ_i", n);
                    }
                }
            }
        }
        for n in 0..d {
            for j in 0..=n {
                for i in 0..=j {
                    if n + 1 < d && self.degens[n + 1][i].mul(&self.degens[n][j]) != self.degens[n + 1][j + 1].mul(&self.degens[n][i]) {
                        return fail("s_i s_j = s_{j+1} s_i", n);
                    }
                }
                for i in 0..=n + 1 {
                    let lhs = self.faces[n + 1][i].mul(&self.degens[n][j]);
                    let rhs = if i < j {
                        if n == 0 {
                            continue;
                        }
                        self.degens[n - 1][j - 1].mul(&self.faces[n][i])
                    } else if i == j || i == j + 1 {
                        Matrix::identity(self.rank(n))
                    } else {
                        self.degens[n - 1][j].mul(&self.faces[n][i - 1])
                    };
                    if lhs != rhs {
                        return fail("mixed simplicial identity", n);
                    }
                }
            }
        }
        Ok(())
    }

    /// The matrix of `f^* : A_n -> A_m` for `f : [m] -> [n]`.
    pub fn map(&self, f: &SimplexMap) -> Result<Matrix> {
        if f.cod() > self.dim() || f.dom() > self.dim() {
            return Err(Error::Truncation { need: f.cod().max(f.dom()), have: self.dim() });
        }
        let (sigma, iota) = f.epi_mono_factor();
        let mut m = Matrix::identity(self.rank(f.cod()));
        let mut level = f.cod();
        for &j in iota.face_indices().iter().rev() {
            m = self.faces[level][j].mul(&m);
            level -= 1;
        }
        for &d in &sigma.degeneracy_indices() {
            m = self.degens[level][d].mul(&m);
            level += 1;
        }
        Ok(m)
    }

    /// Changes the basis of every level: `A'_n = P_n A_n` with `P_n` unimodular.
    pub fn conjugate(&self, p: &[Matrix]) -> Result<SimplicialAbGroup> {
        let inv: Vec<Matrix> = p
            .iter()
            .map(|m| crate::chain::snf::inverse(m).ok_or_else(|| Error::Invalid("basis change not invertible".into())))
            .collect::<Result<_>>()?;
        let d = self.dim();
        let faces = (0..=d)
            .map(|n| self.faces[n].iter().map(|f| p[n - 1].mul(f).mul(&inv[n])).collect())
            .collect();
        let degens = (0..=d)
            .map(|n| self.degens[n].iter().map(|s| p[n + 1].mul(s).mul(&inv[n])).collect())
            .collect();
        SimplicialAbGroup::new(self.basis.clone(), faces, degens)
    }
}

/// `ℤ[X]`: level `n` has basis `X_n`, degenerate simplices included.
pub fn linearize(x: &SSetPresentation) -> SimplicialAbGroup {
    let d = x.dim();
    let levels: Vec<_> = (0..=d).map(|n| x.all_simplices(n)).collect();
    let pos: Vec<HashMap<_, usize>> =
        levels.iter().map(|l| l.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()).collect();
    let perm = |from: usize, to: usize, f: &SimplexMap| {
        let trips = levels[from].iter().enumerate().map(|(c, s)| {
            let t = x.apply(s, f).expect("within truncation");
            (pos[to][&t], c, BigInt::one())
        });
        Matrix::from_triplets(levels[to].len(), levels[from].len(), trips)
    };
    let faces = (0..=d)
        .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| perm(n, n - 1, &SimplexMap::face(n, i))).collect() })
        .collect();
    let degens = (0..=d)
        .map(|n| if n == d { Vec::new() } else { (0..=n).map(|i| perm(n, n + 1, &SimplexMap::degeneracy(n, i))).collect() })
        .collect();
    let basis = levels.iter().map(|l| l.iter().map(|s| x.simplex_name(s)).collect()).collect();
    SimplicialAbGroup { basis, faces, degens }
}

/// Normalized chains `Γ(A)`: `A_n` modulo the images of the degeneracies.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub complex: ChainComplex,
    /// `proj[n] : A_n -> Γ(A)_n`.
    pub proj: Vec<Matrix>,
    /// `lift[n] : Γ(A)_n -> A_n`, a section of `proj[n]`.
    pub lift: Vec<Matrix>,
}

pub fn normalized_chains(a: &SimplicialAbGroup) -> Result<Normalized> {
    let d = a.dim();
    let mut proj = Vec::new();
    let mut lift = Vec::new();
    let mut basis = Vec::new();
    for n in 0..=d {
        let rank = a.rank(n);
        let gens: Vec<&Matrix> = if n == 0 { Vec::new() } else { a.degens[n - 1].iter().collect() };
        let coordinate = gens.iter().all(|m| (0..m.cols()).all(|c| {
            let col = m.column(c);
            col.len() == 1 && col[0].1.is_one()
        }));
        if coordinate {
            let mut hit = vec![false; rank];
            for m in &gens {
                for c in 0..m.cols() {
                    hit[m.column(c)[0].0] = true;
                }
            }
            let keep: Vec<usize> = (0..rank).filter(|&r| !hit[r]).collect();
            let p = Matrix::identity(rank).select_rows(&keep);
            basis.push(keep.iter().map(|&r| a.basis[n][r].clone()).collect::<Vec<_>>());
            lift.push(p.transpose());
            proj.push(p);
        } else {
            let cols: Vec<Matrix> = gens.iter().map(|m| (*m).clone()).collect();
            let sizes: Vec<usize> = cols.iter().map(Matrix::cols).collect();
            let blocks = vec![cols.iter().map(Some).collect::<Vec<_>>()];
            let m = if cols.is_empty() { Matrix::zero(rank, 0) } else { Matrix::block(&[rank], &sizes, &blocks) };
            let snf = smith_normal_form(&m);
            let r = snf.rank();
            if snf.diagonal.iter().any(|x| !x.is_one()) {
                return Err(Error::Verification(format!("degenerate part at level {n} is not a direct summand")));
            }
            let p = snf.u.select_rows(&(r..rank).collect::<Vec<_>>());
            let uinv = crate::chain::snf::inverse(&snf.u).expect("unimodular");
            let l = uinv.select_cols(&(r..rank).collect::<Vec<_>>());
            basis.push((r..rank).map(|i| format!("n{n}.{i}")).collect());
            proj.push(p);
            lift.push(l);
        }
    }
    let mut dmats = vec![Matrix::zero(0, proj[0].rows())];
    for n in 1..=d {
        let mut alt = Matrix::zero(a.rank(n - 1), a.rank(n));
        for (i, f) in a.faces[n].iter().enumerate() {
            alt = alt.lin(f, if i % 2 == 0 { 1 } else { -1 });
        }
        dmats.push(proj[n - 1].mul(&alt).mul(&lift[n]));
    }
    let mut complex = ChainComplex::new(0, basis, dmats, true)?;
    complex.set_truncated(true);
    Ok(Normalized { complex, proj, lift })
}

/// Normalized chains of a simplicial set; the top degree is marked truncated.
pub fn chains_of(x: &SSetPresentation) -> ChainComplex {
    normalized_chains(&linearize(x)).expect("linearized groups split").complex
}

/// The complex `Δ°_n`: basis the nonempty subsets of `{0..n}`, `S` in degree `|S|-1`.
#[derive(Clone, Debug)]
pub struct DeltaCirc {
    pub n: usize,
    pub subsets: Vec<Vec<Vec<usize>>>,
    pub complex: ChainComplex,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl DeltaCirc {
    pub fn index_of(&self, s: &[usize]) -> usize {
        self.index[s.len() - 1][s]
    }
}

pub fn delta_circ(n: usize) -> DeltaCirc {
    let subsets_by_deg: Vec<Vec<Vec<usize>>> = (0..=n).map(|m| subsets(n + 1, m + 1)).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> = subsets_by_deg
        .iter()
        .map(|l| l.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    let mut d = vec![Matrix::zero(0, subsets_by_deg[0].len())];
    for m in 1..=n {
        let trips = subsets_by_deg[m].iter().enumerate().flat_map(|(c, s)| {
            let index = &index;
            (0..s.len()).map(move |i| {
                let mut t = s.clone();
                t.remove(i);
                (index[m - 1][&t], c, BigInt::from(if i % 2 == 0 { 1 } else { -1 }))
            })
        });
        d.push(Matrix::from_triplets(subsets_by_deg[m - 1].len(), subsets_by_deg[m].len(), trips));
    }
    let basis = subsets_by_deg
        .iter()
        .map(|l| l.iter().map(|s| format!("{s:?}")).collect())
        .collect();
    let complex = ChainComplex::new(0, basis, d, false).expect("Δ° is a complex");
    DeltaCirc { n, subsets: subsets_by_deg, complex, index }
}

/// Parity of the permutation sorting `seq` (distinct entries), by counted bubble sort.
pub fn sort_sign(seq: &[usize]) -> i64 {
    let mut v = seq.to_vec();
    let mut swaps = 0usize;
    for end in (1..v.len()).rev() {
        for k in 0..end {
            if v[k] > v[k + 1] {
                v.swap(k, k + 1);
                swaps += 1;
            }
        }
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The chain map `Δ°_n -> Δ°_{n'}` induced by an arbitrary map `α : {0..n} -> {0..n'}`:
/// `[S] ↦ ±[α(S)]` with the sign of the sorting permutation, or `0` if `α` is not injective on `S`.
/// Returns one matrix per degree `0..=n`.
pub fn finset_action(alpha: &FinSetMap, src: &DeltaCirc, tgt: &DeltaCirc) -> Vec<Matrix> {
    assert_eq!((alpha.dom(), alpha.cod), (src.n, tgt.n));
    (0..=src.n)
        .map(|m| {
            let rows = if m <= tgt.n { tgt.subsets[m].len() } else { 0 };
            let trips = src.subsets[m].iter().enumerate().filter_map(|(c, s)| {
                let img: Vec<usize> = s.iter().map(|&x| alpha.values[x]).collect();
                let mut sorted = img.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() < img.len() {
                    return None;
                }
                Some((tgt.index_of(&sorted), c, BigInt::from(sort_sign(&img))))
            });
            Matrix::from_triplets(rows, src.subsets[m].len(), trips.collect::<Vec<_>>())
        })
        .collect()
}

/// Layout of degree-0 graded maps `Δ°_n -> C`: offsets of the blocks `C_k × (Δ°_n)_k`.
struct HomLayout {
    offsets: Vec<usize>,
    total: usize,
}

fn hom_layout(dc: &DeltaCirc, c: &ChainComplex) -> HomLayout {
    let mut offsets = Vec::new();
    let mut total = 0;
    for k in 0..=dc.n {
        offsets.push(total);
        total += c.rank(k as i64) * dc.subsets[k].len();
    }
    HomLayout { offsets, total }
}

impl HomLayout {
    // coordinate of the entry (row b of C_k, column a of (Δ°_n)_k)
    fn at(&self, k: usize, b: usize, a: usize, ncols: usize) -> usize {
        self.offsets[k] + b * ncols + a
    }
}

/// `N(C)`: level `n` is the group of chain maps `Δ°_n -> C`.
#[derive(Clone, Debug)]
pub struct DoldKanN {
    pub group: SimplicialAbGroup,
    /// Per level, the basis of chain maps as columns in the flattened graded-map coordinates.
    pub kernels: Vec<Matrix>,
    circs: Vec<DeltaCirc>,
}

fn chain_map_constraints(dc: &DeltaCirc, c: &ChainComplex, lay: &HomLayout) -> Matrix {
    // d_C f_k - f_{k-1} d_Δ = 0 for 1 ≤ k ≤ n, and d_C f_0 = 0 is automatic
    let mut trips = Vec::new();
    let mut row0 = 0;
    for k in 1..=dc.n {
        let dck = c.d(k as i64);
        let ddk = dc.complex.d(k as i64);
        let rows_c = c.rank(k as i64 - 1);
        let cols_d = dc.subsets[k].len();
        let cols_prev = dc.subsets[k - 1].len();
        // equation index (b', a) for b' in C_{k-1}, a in (Δ°)_k
        for (b2, b, v) in dck.triplets() {
            for a in 0..cols_d {
                trips.push((row0 + b2 * cols_d + a, lay.at(k, b, a, cols_d), v.clone()));
            }
        }
        for (a2, a, v) in ddk.triplets() {
            for b2 in 0..rows_c {
                trips.push((row0 + b2 * cols_d + a, lay.at(k - 1, b2, a2, cols_prev), -v.clone()));
            }
        }
        row0 += rows_c * cols_d;
    }
    Matrix::from_triplets(row0, lay.total, trips)
}

/// Precomposition with a chain map `g : Δ°_m -> Δ°_n` (given per degree) as a matrix on
/// flattened coordinates.
fn precompose(g: &[Matrix], src: &DeltaCirc, tgt: &DeltaCirc, c: &ChainComplex) -> Matrix {
    let ls = hom_layout(src, c);
    let lt = hom_layout(tgt, c);
    let mut trips = Vec::new();
    for k in 0..=src.n.min(tgt.n) {
        let ncs = src.subsets[k].len();
        let nct = tgt.subsets[k].len();
        for b in 0..c.rank(k as i64) {
            for (at, asrc, v) in g[k].triplets() {
                // (f∘g)(b, asrc) += f(b, at) g(at, asrc)
                trips.push((ls.at(k, b, asrc, ncs), lt.at(k, b, at, nct), v.clone()));
            }
        }
    }
    Matrix::from_triplets(ls.total, lt.total, trips)
}

pub fn dold_kan_n(c: &ChainComplex, dim: usize) -> Result<DoldKanN> {
    if c.lo() < 0 {
        return invalid("N needs a complex in degrees ≥ 0");
    }
    let circs: Vec<DeltaCirc> = (0..=dim).map(delta_circ).collect();
    let kernels: Vec<Matrix> = circs
        .iter()
        .map(|dc| {
            let lay = hom_layout(dc, c);
            kernel_basis(&chain_map_constraints(dc, c, &lay))
        })
        .collect();
    let restrict = |f: &SimplexMap| -> Matrix {
        // α^* : N_n -> N_m for α : [m] -> [n]
        let (m, n) = (f.dom(), f.cod());
        let g = finset_action(&FinSetMap::from_simplex_map(f), &circs[m], &circs[n]);
        let pre = precompose(&g, &circs[m], &circs[n], c);
        let img = pre.mul(&kernels[n]);
        solve(&kernels[m], &img).expect("restriction of a chain map is a chain map")
    };
    let faces = (0..=dim)
        .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| restrict(&SimplexMap::face(n, i))).collect() })
        .collect();
    let degens = (0..=dim)
        .map(|n| if n == dim { Vec::new() } else { (0..=n).map(|i| restrict(&SimplexMap::degeneracy(n, i))).collect() })
        .collect();
    let basis = kernels.iter().enumerate().map(|(n, k)| (0..k.cols()).map(|i| format!("N{n}.{i}")).collect()).collect();
    let group = SimplicialAbGroup::new(basis, faces, degens)?;
    Ok(DoldKanN { group, kernels, circs })
}

impl DoldKanN {
    /// Evaluation at the top simplex `[0..n]`: `N(C)_n -> C_n`.
    pub fn eval_top(&self, c: &ChainComplex, n: usize) -> Matrix {
        let dc = &self.circs[n];
        let lay = hom_layout(dc, c);
        let ncols = dc.subsets[n].len();
        let rows = c.rank(n as i64);
        let sel = Matrix::from_triplets(rows, lay.total, (0..rows).map(|b| (b, lay.at(n, b, 0, ncols), BigInt::one())));
        sel.mul(&self.kernels[n])
    }
}

/// Verified isomorphism `Γ(N(C)) -> C`; returns the per-degree matrices.
pub fn gamma_n_iso(c: &ChainComplex, dim: usize) -> Result<Vec<Matrix>> {
    let nc = dold_kan_n(c, dim)?;
    let g = normalized_chains(&nc.group)?;
    let mut maps = Vec::new();
    for n in 0..=dim {
        let ev = nc.eval_top(c, n);
        if n > 0 {
            for s in &nc.group.degens[n - 1] {
                if !ev.mul(s).is_zero() {
                    return Err(Error::Verification("evaluation does not kill degenerates".into()));
                }
            }
        }
        let m = ev.mul(&g.lift[n]);
        if !crate::chain::snf::is_unimodular(&m) {
            return Err(Error::Verification(format!("Γ(N(C))_{n} -> C_{n} is not invertible")));
        }
        maps.push(m);
    }
    for n in 1..=dim {
        if c.d(n as i64).mul(&maps[n]) != maps[n - 1].mul(&g.complex.d(n as i64)) {
            return Err(Error::Verification(format!("Γ(N(C)) -> C is not a chain map at {n}")));
        }
    }
    Ok(maps)
}

/// Verified isomorphism `A -> N(Γ(A))`, natural for all faces and degeneracies.
pub fn n_gamma_iso(a: &SimplicialAbGroup) -> Result<Vec<Matrix>> {
    let dim = a.dim();
    let g = normalized_chains(a)?;
    let c = &g.complex;
    let nc = dold_kan_n(c, dim)?;
    let mut maps = Vec::new();
    for n in 0..=dim {
        let dc = &nc.circs[n];
        let lay = hom_layout(dc, c);
        let mut trips = Vec::new();
        for k in 0..=n {
            let ncols = dc.subsets[k].len();
            for (s_idx, s) in dc.subsets[k].iter().enumerate() {
                let iota = SimplexMap::new(n, s.clone())?;
                let img = g.proj[k].mul(&a.map(&iota)?);
                for (b, col, v) in img.triplets() {
                    trips.push((lay.at(k, b, s_idx, ncols), col, v.clone()));
                }
            }
        }
        let flat = Matrix::from_triplets(lay.total, a.rank(n), trips);
        let coords = solve(&nc.kernels[n], &flat)
            .ok_or_else(|| Error::Verification(format!("A_{n} does not land in chain maps")))?;
        if !crate::chain::snf::is_unimodular(&coords) {
            return Err(Error::Verification(format!("A_{n} -> N(Γ(A))_{n} is not invertible")));
        }
        maps.push(coords);
    }
    for n in 0..=dim {
        for (i, f) in a.faces[n].iter().enumerate() {
            if maps[n - 1].mul(f) != nc.group.faces[n][i].mul(&maps[n]) {
                return Err(Error::Verification(format!("not natural for δ_{i} at level {n}")));
            }
        }
        for (i, s) in a.degens[n].iter().enumerate() {
            if maps[n + 1].mul(s) != nc.group.degens[n][i].mul(&maps[n]) {
                return Err(Error::Verification(format!("not natural for s_{i} at level {n}")));
            }
        }
    }
    Ok(maps)
}

/// Ranks of the joint kernel of all codegeneracies `Δ°_n -> Δ°_{n-1}`, per degree; together with a
/// check that permutations act on it by their sign.
pub fn key_lemma_check(n: usize) -> (bool, Vec<usize>) {
    let src = delta_circ(n);
    let mut ranks = Vec::new();
    let mut kernels = Vec::new();
    for m in 0..=n {
        let mut stacked: Vec<Matrix> = Vec::new();
        if n > 0 {
            let tgt = delta_circ(n - 1);
            for i in 0..n {
                let a = FinSetMap::from_simplex_map(&SimplexMap::degeneracy(n - 1, i));
                stacked.push(finset_action(&a, &src, &tgt).swap_remove(m));
            }
        }
        let cols = src.subsets[m].len();
        let k = if stacked.is_empty() {
            Matrix::identity(cols)
        } else {
            let sizes: Vec<usize> = stacked.iter().map(Matrix::rows).collect();
            let blocks: Vec<Vec<Option<&Matrix>>> = stacked.iter().map(|b| vec![Some(b)]).collect();
            kernel_basis(&Matrix::block(&sizes, &[cols], &blocks))
        };
        ranks.push(k.cols());
        kernels.push(k);
    }
    let expected: Vec<usize> = (0..=n).map(|m| usize::from(m == n || (n > 0 && m + 1 == n))).collect();
    let mut ok = ranks == expected;
    // the symmetric group acts on the kernel by the sign character
    let mut perms = vec![Vec::new()];
    for k in 0..=n {
        perms = perms
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=p.len()).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                })
            })
            .collect();
    }
    for p in perms.iter().take(30) {
        let a = FinSetMap::new(n, p.clone()).expect("permutation");
        let act = finset_action(&a, &src, &src);
        let sign = sort_sign(p);
        for m in 0..=n {
            if act[m].mul(&kernels[m]) != kernels[m].scale(sign) {
                ok = false;
            }
        }
    }
    (ok, ranks)
}

/// `Γ(f)` for a levelwise map `f : A -> B` of simplicial groups.
pub fn induced_on_normalized(a: &Normalized, b: &Normalized, f: &[Matrix]) -> Vec<Matrix> {
    f.iter().enumerate().map(|(n, m)| b.proj[n].mul(m).mul(&a.lift[n])).collect()
}

/// `true` if the alternating face sum on `A` squares to zero (always the case; used as a sanity check).
pub fn unnormalized_d_squares_zero(a: &SimplicialAbGroup) -> bool {
    let alt = |n: usize| {
        let mut m = Matrix::zero(a.rank(n - 1), a.rank(n));
        for (i, f) in a.faces[n].iter().enumerate() {
            m = m.lin(f, if i % 2 == 0 { 1 } else { -1 });
        }
        m
    };
    (2..=a.dim()).all(|n| alt(n - 1).mul(&alt(n)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, delta, product, sphere};
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linearize_examples() {
        let pt = linearize(&delta(0, 3));
        assert!((0..=3).all(|n| pt.rank(n) == 1));
        let s1 = linearize(&sphere(1, 4));
        assert!((0..=4).all(|n| s1.rank(n) == n + 1));
        let a = linearize(&delta(1, 3));
        let b = linearize(&sphere(1, 3));
        let p = linearize(&product(&delta(1, 3), &sphere(1, 3)).unwrap());
        assert!((0..=3).all(|n| p.rank(n) == a.rank(n) * b.rank(n)));
        assert!(unnormalized_d_squares_zero(&p));
    }

    #[test]
    fn map_matches_apply() {
        let x = product(&delta(1, 3), &sphere(2, 3)).unwrap();
        let a = linearize(&x);
        for f in crate::sset::small_maps(3) {
            let m = a.map(&f).unwrap();
            for (c, s) in x.all_simplices(f.cod()).iter().enumerate() {
                let t = x.apply(s, &f).unwrap();
                let r = x.all_simplices(f.dom()).iter().position(|u| u == &t).unwrap();
                assert_eq!(m.column(c), &[(r, BigInt::one())]);
            }
        }
    }

    #[test]
    fn normalized_examples() {
        let c = chains_of(&delta(0, 2));
        assert_eq!(c.ranks(), vec![1, 0, 0]);
        let c = chains_of(&sphere(2, 3));
        assert_eq!(c.ranks(), vec![1, 0, 1, 0]);
        assert!(c.d(2).is_zero());
        let c = chains_of(&delta(1, 2));
        assert_eq!(c.ranks(), vec![2, 1, 0]);
        assert_eq!(c.d(1).to_i64_rows(), vec![vec![-1], vec![1]]);
        let h: Vec<_> = (0..2).map(|n| chains_of(&boundary(2, 2)).homology(n).unwrap().rank).collect();
        assert_eq!(h, vec![1, 1]);
    }

    #[test]
    fn delta_circ_ranks() {
        for n in 0..=5 {
            let dc = delta_circ(n);
            for m in 0..=n {
                assert_eq!(dc.complex.rank(m as i64), crate::simplexcat::subsets(n + 1, m + 1).len());
            }
        }
    }

    #[test]
    fn finset_examples() {
        let d1 = delta_circ(1);
        let swap = FinSetMap::new(1, vec![1, 0]).unwrap();
        let act = finset_action(&swap, &d1, &d1);
        assert_eq!(act[1].to_i64_rows(), vec![vec![-1]]);
        let collapse = FinSetMap::new(0, vec![0, 0]).unwrap();
        let d0 = delta_circ(0);
        assert!(finset_action(&collapse, &d1, &d0)[1].is_zero());
        let f = SimplexMap::face(2, 1);
        let act = finset_action(&FinSetMap::from_simplex_map(&f), &d1, &delta_circ(2));
        assert_eq!(act[1].get(d1.index_of(&[0, 1]), 0), BigInt::zero());
    }

    #[test]
    fn finset_functorial_and_chain_maps() {
        let circs: Vec<DeltaCirc> = (0..=3).map(delta_circ).collect();
        for n in 0..=2 {
            for m in 0..=2 {
                for a in FinSetMap::all(n, m) {
                    let fa = finset_action(&a, &circs[n], &circs[m]);
                    for k in 1..=n {
                        let lhs = circs[m].complex.d(k as i64).mul(&fa[k]);
                        let rhs = fa[k - 1].mul(&circs[n].complex.d(k as i64));
                        assert_eq!(lhs, rhs);
                    }
                    for l in 0..=3 {
                        for b in FinSetMap::all(m, l) {
                            let fb = finset_action(&b, &circs[m], &circs[l]);
                            let fba = finset_action(&b.after(&a), &circs[n], &circs[l]);
                            for k in 0..=n {
                                let comp = if k <= m { fb[k].mul(&fa[k]) } else { Matrix::zero(fba[k].rows(), fba[k].cols()) };
                                assert_eq!(comp, fba[k]);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn key_lemma() {
        assert_eq!(key_lemma_check(0), (true, vec![1]));
        assert_eq!(key_lemma_check(2), (true, vec![0, 1, 1]));
        assert_eq!(key_lemma_check(3), (true, vec![0, 0, 1, 1]));
        for n in 0..=5 {
            assert!(key_lemma_check(n).0);
        }
    }

    fn random_complex(rng: &mut ChaCha8Rng, top: usize, max_rank: usize) -> ChainComplex {
        loop {
            let ranks: Vec<usize> = (0..=top).map(|_| rng.gen_range(0..=max_rank)).collect();
            let mut d = vec![Matrix::zero(0, ranks[0])];
            for n in 1..=top {
                let k = kernel_basis(&d[n - 1]);
                let coeffs: Vec<Vec<i64>> =
                    (0..k.cols()).map(|_| (0..ranks[n]).map(|_| rng.gen_range(-2..=2)).collect()).collect();
                d.push(k.mul(&Matrix::from_rows(k.cols(), ranks[n], &coeffs)));
            }
            if let Ok(c) = ChainComplex::from_ranks(0, &ranks, d) {
                return c;
            }
        }
    }

    #[test]
    fn n_examples() {
        let n = dold_kan_n(&ChainComplex::unit(0), 3).unwrap();
        assert!((0..=3).all(|k| n.group.rank(k) == 1));
        // N(C)_n has rank Σ_k binom(n,k) rank C_k
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = random_complex(&mut rng, 3, 2);
        let n = dold_kan_n(&c, 3).unwrap();
        for lvl in 0..=3usize {
            let expect: usize = (0..=lvl).map(|k| crate::simplexcat::surjections(lvl, k).len() * c.rank(k as i64)).sum();
            assert_eq!(n.group.rank(lvl), expect);
        }
    }

    #[test]
    fn round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let c = random_complex(&mut rng, 3, 2);
            gamma_n_iso(&c, 3).unwrap();
            let a = dold_kan_n(&random_complex(&mut rng, 3, 2), 3).unwrap().group;
            n_gamma_iso(&a).unwrap();
        }
        n_gamma_iso(&linearize(&sphere(2, 3))).unwrap();
    }
}
