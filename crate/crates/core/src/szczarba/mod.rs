//! Szczarba operators on leveled binary trees, tree reductions and the global Szczarba sums.

mod morphism;

pub use morphism::{exp_to_ainf, GroupChain, SzczarbaMorphism};

use crate::awez::{higher_shih, TensorWord};
use crate::error::{invalid, Result};
use crate::simplexcat::{compose_unchecked, subsets, SimplexMap};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

/// A leveled binary tree `i = (i_0, …, i_{k-1})` with `i_j ≤ k-j-1`.
///
/// Row `r` holds one vertex; reading rows from `k-1` down to `0`, the vertex of row `r` splits
/// edge number `i_r` (counted from the left) of the edges crossing that level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeveledTree(Vec<usize>);

/// Child of a tree vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Child {
    Leaf(usize),
    Node(usize),
}

impl LeveledTree {
    pub fn new(i: Vec<usize>) -> Result<Self> {
        let k = i.len();
        if let Some(j) = (0..k).find(|&j| i[j] + j + 1 > k) {
            return invalid(format!("tree entry i_{j} = {} exceeds {}", i[j], k - j - 1));
        }
        Ok(LeveledTree(i))
    }

    /// All trees with `k` vertices; there are `k!` of them.
    pub fn all(k: usize) -> Vec<LeveledTree> {
        let mut out = vec![Vec::new()];
        for j in (0..k).rev() {
            out = out
                .into_iter()
                .flat_map(|tail: Vec<usize>| {
                    (0..k - j).map(move |x| {
                        let mut v = vec![x];
                        v.extend_from_slice(&tail);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(LeveledTree).collect()
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `(-1)^{Σ i_j}`.
    pub fn sign(&self) -> i64 {
        if self.0.iter().sum::<usize>() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `i^∨_j = k-1-j-i_j`.
    pub fn dual(&self) -> LeveledTree {
        let k = self.k();
        LeveledTree(self.0.iter().enumerate().map(|(j, &x)| k - 1 - j - x).collect())
    }

    /// Children `[left, right]` of the vertex in each row.
    pub fn children(&self) -> Vec<[Child; 2]> {
        let k = self.k();
        let mut ch = vec![[Child::Leaf(0); 2]; k];
        // frontier entries: (parent row, side); `None` is the root edge
        let mut frontier: Vec<Option<(usize, usize)>> = vec![None];
        for r in (0..k).rev() {
            let slot = frontier[self.0[r]];
            if let Some((p, side)) = slot {
                ch[p][side] = Child::Node(r);
            }
            frontier.splice(self.0[r]..=self.0[r], [Some((r, 0)), Some((r, 1))]);
        }
        for (j, slot) in frontier.into_iter().enumerate() {
            if let Some((p, side)) = slot {
                ch[p][side] = Child::Leaf(j);
            }
        }
        ch
    }

    /// For leaf `j`, the side (`0` left, `1` right) through which its path to the root enters
    /// the vertex of each row, or `None` if that vertex is not on the path.
    pub fn leaf_path(&self, j: usize) -> Vec<Option<usize>> {
        let ch = self.children();
        let mut parent: BTreeMap<Child, (usize, usize)> = BTreeMap::new();
        for (r, c) in ch.iter().enumerate() {
            parent.insert(c[0], (r, 0));
            parent.insert(c[1], (r, 1));
        }
        let mut out = vec![None; self.k()];
        let mut cur = Child::Leaf(j);
        while let Some(&(r, side)) = parent.get(&cur) {
            out[r] = Some(side);
            cur = Child::Node(r);
        }
        out
    }
}

impl PartialOrd for Child {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Child {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |c: &Child| match *c {
            Child::Leaf(j) => (0, j),
            Child::Node(r) => (1, r),
        };
        key(self).cmp(&key(other))
    }
}

fn check_leaf(j: usize, i: &LeveledTree) -> Result<()> {
    if j > i.k() {
        return invalid(format!("leaf {j} out of range for a tree with {} vertices", i.k()));
    }
    Ok(())
}

/// The Szczarba operator `Sz^j_i : [k] -> [j]`.
pub fn sz(j: usize, i: &LeveledTree) -> Result<SimplexMap> {
    check_leaf(j, i)?;
    Ok(sz_rec(j, &i.0))
}

fn sz_rec(j: usize, i: &[usize]) -> SimplexMap {
    if i.is_empty() {
        return SimplexMap::identity(0);
    }
    let (i0, rest) = (i[0], &i[1..]);
    let pt = SimplexMap::identity(0);
    if j < i0 + 1 {
        let a = sz_rec(j, rest).star(&pt);
        compose_unchecked(&SimplexMap::degeneracy(j, j), &a)
    } else if j == i0 + 1 {
        sz_rec(j - 1, rest).star(&pt)
    } else {
        let a = sz_rec(j - 1, rest).star(&pt);
        let b = compose_unchecked(&SimplexMap::degeneracy(j - 1, j - 1), &a);
        compose_unchecked(&SimplexMap::face(j, i0 + 1), &b)
    }
}

/// The same operator through the second recursion, which peels `s_{k-1} : [k] -> [k-1]`.
pub fn sz_alt(j: usize, i: &LeveledTree) -> Result<SimplexMap> {
    check_leaf(j, i)?;
    Ok(sz_alt_rec(j, &i.0))
}

fn sz_alt_rec(j: usize, i: &[usize]) -> SimplexMap {
    let k = i.len();
    if k == 0 {
        return SimplexMap::identity(0);
    }
    let (i0, rest) = (i[0], &i[1..]);
    let s = SimplexMap::degeneracy(k - 1, k - 1);
    if j < i0 + 1 {
        compose_unchecked(&sz_alt_rec(j, rest), &s)
    } else if j == i0 + 1 {
        sz_alt_rec(j - 1, rest).star(&SimplexMap::identity(0))
    } else {
        let a = compose_unchecked(&sz_alt_rec(j - 1, rest), &s);
        compose_unchecked(&SimplexMap::face(j, i0 + 1), &a)
    }
}

/// `Sz^j_i` followed by the initial-segment inclusion `[j] ⊂ [k]`.
fn sz_included(j: usize, i: &LeveledTree) -> SimplexMap {
    let f = sz_rec(j, &i.0);
    SimplexMap::new(i.k(), f.values().to_vec()).expect("initial segment")
}

/// A `b`-reduction: the reduced tree together with the surviving leaves `c_0 < … < c_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub b: Vec<usize>,
    pub tree: LeveledTree,
    pub leaves: Vec<usize>,
}

fn check_b(b: &[usize], ktilde: usize) -> Result<()> {
    if b.windows(2).any(|w| w[0] <= w[1]) {
        return invalid("b must be strictly decreasing");
    }
    if b.first().is_some_and(|&b0| b0 >= ktilde) {
        return invalid(format!("b_0 must be below {ktilde}"));
    }
    Ok(())
}

/// The `b`-reduction of `itilde`, or `None` when some deleted row has a vertex as left child.
pub fn b_reduction(itilde: &LeveledTree, b: &[usize]) -> Result<Option<Reduction>> {
    let kt = itilde.k();
    check_b(b, kt)?;
    let ch = itilde.children();
    let deleted: Vec<usize> = (0..kt).filter(|r| !b.contains(r)).collect();
    if deleted.iter().any(|&r| matches!(ch[r][0], Child::Node(_))) {
        return Ok(None);
    }
    // a deleted vertex is replaced by its right child
    let resolve = |mut c: Child| -> Child {
        while let Child::Node(r) = c {
            if b.contains(&r) {
                break;
            }
            c = ch[r][1];
        }
        c
    };
    let mut kept: Vec<usize> = b.to_vec();
    kept.sort_unstable();
    let rank = |r: usize| kept.iter().position(|&x| x == r).unwrap();
    let k = kept.len();
    let mut i = vec![0; k];
    let root = resolve(if kt == 0 { Child::Leaf(0) } else { Child::Node(kt - 1) });
    let mut frontier = vec![root];
    for &r in kept.iter().rev() {
        let pos = frontier.iter().position(|&c| c == Child::Node(r)).expect("kept vertex in frontier");
        i[rank(r)] = pos;
        frontier.splice(pos..=pos, [resolve(ch[r][0]), resolve(ch[r][1])]);
    }
    let leaves = frontier
        .into_iter()
        .map(|c| match c {
            Child::Leaf(j) => j,
            Child::Node(_) => unreachable!("all vertices expanded"),
        })
        .collect();
    Ok(Some(Reduction { b: b.to_vec(), tree: LeveledTree(i), leaves }))
}

/// All trees of length `ktilde` having `i` as their `b`-reduction, by exhaustive search.
pub fn extensions(i: &LeveledTree, b: &[usize], ktilde: usize) -> Result<Vec<LeveledTree>> {
    check_b(b, ktilde)?;
    if b.len() != i.k() {
        return invalid("b and i must have the same length");
    }
    let mut out = Vec::new();
    for t in LeveledTree::all(ktilde) {
        if let Some(red) = b_reduction(&t, b)? {
            if red.tree == *i {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// Number of `b`-extensions of any tree: each deleted row `r` can be placed in
/// `1 + #{b_j > r}` ways.
pub fn extension_count(b: &[usize], ktilde: usize) -> usize {
    (0..ktilde).filter(|r| !b.contains(r)).map(|r| 1 + b.iter().filter(|&&x| x > r).count()).product()
}

/// Formal sums of tuples of simplex maps of arbitrary length.
pub type MultiWord = BTreeMap<Vec<SimplexMap>, i64>;

fn multi_add(w: &mut MultiWord, t: Vec<SimplexMap>, c: i64) {
    if c == 0 {
        return;
    }
    match w.entry(t) {
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

/// Sets `c` of leaves such that every other leaf is the left child of its parent vertex.
fn admissible_leaf_sets(i: &LeveledTree, size: usize) -> Vec<Vec<usize>> {
    let k = i.k();
    let ch = i.children();
    let left_leaves: Vec<usize> = ch
        .iter()
        .filter_map(|c| match c[0] {
            Child::Leaf(j) => Some(j),
            Child::Node(_) => None,
        })
        .collect();
    if size > k + 1 {
        return Vec::new();
    }
    subsets(k + 1, size)
        .into_iter()
        .filter(|c| (0..=k).all(|j| c.contains(&j) || left_leaves.contains(&j)))
        .collect()
}

/// `K^n_k = Σ sgn(ĩ^∨) Sz^{c_0}_ĩ ⊗ … ⊗ Sz^{c_k}_ĩ` over trees `ĩ` of length `n-k-1` and
/// admissible leaf sets of size `k+1`; all maps land in `[n-k-1]`.
pub fn k_global(n: usize, k: usize) -> Result<TensorWord> {
    if n < k + 1 {
        return invalid(format!("K^n_k needs n > k, got n={n}, k={k}"));
    }
    let kt = n - k - 1;
    let mut terms = Vec::new();
    for t in LeveledTree::all(kt) {
        let sg = t.dual().sign();
        for c in admissible_leaf_sets(&t, k + 1) {
            terms.push((c.iter().map(|&j| sz_included(j, &t)).collect(), sg));
        }
    }
    TensorWord::from_terms(kt, vec![kt; k + 1], terms)
}

fn jointly_degenerate(t: &[SimplexMap], dom: usize) -> bool {
    !t.is_empty() && (0..dom).any(|e| t.iter().all(|f| f.is_degenerate_at(e)))
}

/// Checks `(1+ε)^{⊗(k+1)} K^{2k+1}_k ≡ Σ_n K^{n+k+1}_n` modulo jointly degenerate tuples and
/// constants, computed in `⊕_n ℤ[Hom([k],[k])]^{⊗n}`.
pub fn check_cancellation(k: usize) -> Result<bool> {
    let keep = |t: &[SimplexMap]| !t.is_empty() && !jointly_degenerate(t, k);
    let mut lhs = MultiWord::new();
    for (t, c) in k_global(2 * k + 1, k)?.terms() {
        for m in 0..=t.len() {
            for s in subsets(t.len(), m) {
                let sub: Vec<SimplexMap> = s.iter().map(|&x| t[x].clone()).collect();
                if keep(&sub) {
                    multi_add(&mut lhs, sub, c);
                }
            }
        }
    }
    let mut rhs = MultiWord::new();
    for n in 0..=k {
        for (t, c) in k_global(n + k + 1, n)?.terms() {
            if keep(t) {
                multi_add(&mut rhs, t.to_vec(), c);
            }
        }
    }
    Ok(lhs == rhs)
}

/// `q_j : [k+1] -> [1]`, sending `x ≤ j` to `0`.
fn q_map(k: usize, j: usize) -> SimplexMap {
    SimplexMap::new(1, (0..=k + 1).map(|x| usize::from(x > j)).collect()).expect("q map")
}

/// The predicted value of `𝒫ℋ^{2k+1}_{b,i}` modulo degenerates.
pub fn shih_szczarba_prediction(b: &[usize], i: &LeveledTree) -> TensorWord {
    let k = i.k();
    let n = 2 * k + 1;
    let mut w = TensorWord::zero(n, vec![k + 1; k + 1]);
    if b.iter().copied().eq((0..k).rev()) {
        let t: Vec<SimplexMap> = (0..=k)
            .map(|j| {
                let f = sz_rec(j, &i.0).star_prime_shift(&q_map(k, j));
                SimplexMap::new(k + 1, f.values().to_vec()).expect("initial segment")
            })
            .collect();
        w = TensorWord::from_terms(n, vec![k + 1; k + 1], [(t, 1)]).expect("shape");
    }
    w
}

/// Compares `𝒫ℋ^{2k+1}_{b,i}` with the Szczarba prediction for every admissible `b` and `i`.
/// Returns the first disagreeing `(b, i)`, if any.
pub fn shih_szczarba_mismatch(k: usize) -> Result<Option<(Vec<usize>, LeveledTree)>> {
    let n = 2 * k + 1;
    for b in subsets(n - 1, k) {
        let b: Vec<usize> = b.into_iter().rev().collect();
        for i in LeveledTree::all(k) {
            let lhs = higher_shih(n, &b, &i.0)?.p_projection().drop_jointly_degenerate();
            let rhs = shih_szczarba_prediction(&b, &i).drop_jointly_degenerate();
            if lhs != rhs {
                return Ok(Some((b, i)));
            }
        }
    }
    Ok(None)
}

pub fn compare_shih_szczarba(k: usize) -> Result<bool> {
    if k > 3 {
        return invalid("comparison limited to k ≤ 3");
    }
    Ok(shih_szczarba_mismatch(k)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> LeveledTree {
        LeveledTree::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_operators() {
        assert_eq!(sz(0, &t(&[])).unwrap(), SimplexMap::identity(0));
        assert_eq!(sz(0, &t(&[0])).unwrap(), SimplexMap::degeneracy(0, 0));
        assert_eq!(sz(1, &t(&[0])).unwrap(), SimplexMap::identity(1));
        assert!(sz(2, &t(&[0])).is_err());
        assert!(LeveledTree::new(vec![1]).is_err());
    }

    #[test]
    fn recursions_agree_and_are_active() {
        for k in 0..=4 {
            let trees = LeveledTree::all(k);
            assert_eq!(trees.len(), (1..=k).product::<usize>());
            for i in &trees {
                for j in 0..=k {
                    let a = sz(j, i).unwrap();
                    assert!(a.is_active() && a.dom() == k && a.cod() == j);
                    assert_eq!(a, sz_alt(j, i).unwrap(), "i = {i:?}, j = {j}");
                }
            }
        }
    }

    #[test]
    fn signs_and_duals() {
        assert_eq!(t(&[0, 0, 0]).sign(), 1);
        assert_eq!(t(&[2, 0, 0]).sign(), 1);
        assert_eq!(t(&[2, 0, 0]).dual(), t(&[0, 1, 0]));
        for k in 0..=5 {
            let s = if (k * (k.max(1) - 1) / 2) % 2 == 0 { 1 } else { -1 };
            for i in LeveledTree::all(k) {
                assert_eq!(i.dual().sign(), s * i.sign());
                assert_eq!(i.dual().dual(), i);
            }
        }
    }

    #[test]
    fn degeneracy_follows_right_children() {
        for k in 0..=4 {
            for i in LeveledTree::all(k) {
                for j in 0..=k {
                    let f = sz(j, &i).unwrap();
                    let path = i.leaf_path(j);
                    for e in 0..k {
                        assert_eq!(!f.is_degenerate_at(e), path[k - 1 - e] == Some(1), "i = {i:?}, j = {j}, e = {e}");
                    }
                }
            }
        }
    }

    #[test]
    fn reductions_of_the_example_tree() {
        let x = t(&[2, 0, 0]);
        let red = |b: &[usize]| b_reduction(&x, b).unwrap().map(|r| r.tree);
        assert_eq!(red(&[2]), Some(t(&[0])));
        assert_eq!(red(&[2, 1]), Some(t(&[0, 0])));
        assert_eq!(red(&[2, 0]), Some(t(&[1, 0])));
        assert_eq!(red(&[2, 1, 0]), Some(x.clone()));
        assert_eq!(red(&[1, 0]), None);
        assert_eq!(b_reduction(&x, &[2, 1]).unwrap().unwrap().leaves, vec![0, 1, 3]);
        assert!(b_reduction(&x, &[3]).is_err());
        assert!(b_reduction(&x, &[0, 1]).is_err());
    }

    #[test]
    fn full_reduction_is_identity() {
        for k in 0..=4 {
            let b: Vec<usize> = (0..k).rev().collect();
            for i in LeveledTree::all(k) {
                let r = b_reduction(&i, &b).unwrap().unwrap();
                assert_eq!(r.tree, i);
                assert_eq!(r.leaves, (0..=k).collect::<Vec<_>>());
                assert_eq!(extensions(&i, &b, k).unwrap(), vec![i.clone()]);
            }
        }
    }

    #[test]
    fn extension_counts() {
        for kt in 0..=5 {
            for k in 0..=kt {
                for b in subsets(kt, k) {
                    let b: Vec<usize> = b.into_iter().rev().collect();
                    for i in LeveledTree::all(k) {
                        let ext = extensions(&i, &b, kt).unwrap();
                        assert_eq!(ext.len(), extension_count(&b, kt), "b = {b:?}, i = {i:?}, kt = {kt}");
                    }
                }
            }
        }
    }

    #[test]
    fn admissible_sets_are_the_nondegenerate_ones() {
        for k in 0..=4 {
            for i in LeveledTree::all(k) {
                for m in 1..=k + 1 {
                    let adm = admissible_leaf_sets(&i, m);
                    for c in subsets(k + 1, m) {
                        let tuple: Vec<SimplexMap> = c.iter().map(|&j| sz_included(j, &i)).collect();
                        assert_eq!(adm.contains(&c), !jointly_degenerate(&tuple, k), "i = {i:?}, c = {c:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn global_sums() {
        assert_eq!(k_global(1, 0).unwrap().to_string(), "(0)");
        let k31 = k_global(3, 1).unwrap();
        let brute: usize = LeveledTree::all(1).iter().map(|i| admissible_leaf_sets(i, 2).len()).sum();
        assert_eq!(k31.len(), brute);
        assert!(k_global(1, 1).is_err());
    }

    #[test]
    fn cancellation_small() {
        for k in 0..=2 {
            assert!(check_cancellation(k).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn shih_szczarba_small() {
        assert!(compare_shih_szczarba(0).unwrap());
        let p = shih_szczarba_prediction(&[0], &t(&[0]));
        assert_eq!(p.to_string(), "(0,0,1,1)⊗(0,1,1,2)");
        assert_eq!(shih_szczarba_mismatch(1).unwrap(), None);
        assert_eq!(shih_szczarba_mismatch(2).unwrap(), None);
        assert!(compare_shih_szczarba(4).is_err());
    }
}
