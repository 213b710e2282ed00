use super::{letter, reduce, word_inv, FreeWord};
use crate::chain::snf::{invariant_factors, solve};
use crate::chain::{AbGroup, Matrix};
use crate::error::{invalid, Error, Result};
use crate::simplexcat::SimplexMap;
use crate::sset::{SSetPresentation, Simplex};
use num_traits::One;
use std::collections::{HashMap, HashSet, VecDeque};

/// A finitely presented monoid: words are sequences of generator indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidPresentation {
    pub gens: Vec<String>,
    pub relations: Vec<(Vec<usize>, Vec<usize>)>,
}

fn abelian_group(ngens: usize, rels: &[Vec<i64>]) -> AbGroup {
    let m = Matrix::from_rows(ngens, rels.len(), &transpose(ngens, rels));
    let f = invariant_factors(&m);
    let torsion = f.iter().filter(|x| !x.is_one()).cloned().collect();
    AbGroup { rank: ngens - f.len(), torsion }
}

fn transpose(ngens: usize, rels: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..ngens).map(|g| rels.iter().map(|r| r[g]).collect()).collect()
}

impl MonoidPresentation {
    pub fn new(gens: Vec<String>, relations: Vec<(Vec<usize>, Vec<usize>)>) -> Result<Self> {
        let n = gens.len();
        if relations.iter().any(|(u, v)| u.iter().chain(v).any(|&g| g >= n)) {
            return invalid("relation uses an unknown generator");
        }
        Ok(MonoidPresentation { gens, relations })
    }

    fn exponent_vector(&self, w: &[usize]) -> Vec<i64> {
        let mut v = vec![0; self.gens.len()];
        for &g in w {
            v[g] += 1;
        }
        v
    }

    fn relation_vectors(&self) -> Vec<Vec<i64>> {
        self.relations
            .iter()
            .map(|(u, v)| self.exponent_vector(u).iter().zip(self.exponent_vector(v)).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// The abelianization of the group completion.
    pub fn abelianization(&self) -> AbGroup {
        abelian_group(self.gens.len(), &self.relation_vectors())
    }

    /// Removes trivial relations and eliminates generators defined by a relation `g = w`
    /// with `g` not occurring in `w`.
    pub fn simplify(&self) -> MonoidPresentation {
        let mut gens = self.gens.clone();
        let mut rels: Vec<(Vec<usize>, Vec<usize>)> = self.relations.iter().filter(|(u, v)| u != v).cloned().collect();
        loop {
            let found = rels.iter().enumerate().find_map(|(k, (u, v))| {
                if u.len() == 1 && !v.contains(&u[0]) {
                    Some((k, u[0], v.clone()))
                } else if v.len() == 1 && !u.contains(&v[0]) {
                    Some((k, v[0], u.clone()))
                } else {
                    None
                }
            });
            let Some((k, g, w)) = found else { break };
            rels.remove(k);
            let subst = |x: &[usize]| -> Vec<usize> {
                x.iter()
                    .flat_map(|&h| if h == g { w.clone() } else { vec![h] })
                    .map(|h| if h > g { h - 1 } else { h })
                    .collect()
            };
            rels = rels.iter().map(|(u, v)| (subst(u), subst(v))).filter(|(u, v)| u != v).collect();
            gens.remove(g);
        }
        let mut seen = HashSet::new();
        rels.retain(|r| seen.insert(r.clone()));
        MonoidPresentation { gens, relations: rels }
    }

    /// `Some(r)` if simplification leaves a free monoid on `r` generators.
    pub fn free_rank(&self) -> Option<usize> {
        let s = self.simplify();
        s.relations.is_empty().then_some(s.gens.len())
    }

    /// Decides `u = v` by breadth-first rewriting with at most `fuel` visited words; when the
    /// search is inconclusive, differing images in the abelianized group completion prove
    /// inequality, and otherwise fuel is reported exhausted.
    pub fn equal(&self, u: &[usize], v: &[usize], fuel: usize) -> Result<bool> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(u.to_vec());
        queue.push_back(u.to_vec());
        let mut complete = true;
        while let Some(w) = queue.pop_front() {
            if w == v {
                return Ok(true);
            }
            for (a, b) in &self.relations {
                for (from, to) in [(a, b), (b, a)] {
                    for pos in 0..=w.len().saturating_sub(from.len()) {
                        if w.len() >= from.len() && w[pos..pos + from.len()] == from[..] {
                            let mut next = w[..pos].to_vec();
                            next.extend_from_slice(to);
                            next.extend_from_slice(&w[pos + from.len()..]);
                            if !seen.contains(&next) {
                                if seen.len() >= fuel {
                                    complete = false;
                                    continue;
                                }
                                seen.insert(next.clone());
                                queue.push_back(next);
                            }
                        }
                    }
                }
            }
        }
        if complete {
            return Ok(false);
        }
        let diff: Vec<i64> = self.exponent_vector(u).iter().zip(self.exponent_vector(v)).map(|(a, b)| a - b).collect();
        let rels = self.relation_vectors();
        let m = Matrix::from_rows(self.gens.len(), rels.len(), &transpose(self.gens.len(), &rels));
        let rhs = Matrix::from_rows(self.gens.len(), 1, &diff.iter().map(|&d| vec![d]).collect::<Vec<_>>());
        if rels.is_empty() || solve(&m, &rhs).is_none() {
            if diff.iter().any(|&d| d != 0) {
                return Ok(false);
            }
        }
        Err(Error::Fuel(format!("word problem undecided after {fuel} words")))
    }
}

/// A finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub gens: Vec<String>,
    pub relators: Vec<FreeWord>,
}

fn cyclic_reduce(w: &[i32]) -> FreeWord {
    let mut r = reduce(w);
    while r.len() >= 2 && r[0] == -r[r.len() - 1] {
        r.remove(0);
        r.pop();
    }
    r
}

impl GroupPresentation {
    pub fn abelianization(&self) -> AbGroup {
        let n = self.gens.len();
        let rels: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| {
                let mut v = vec![0; n];
                for &a in r {
                    v[a.unsigned_abs() as usize - 1] += a.signum() as i64;
                }
                v
            })
            .collect();
        abelian_group(n, &rels)
    }

    /// Drops trivial relators and eliminates generators occurring exactly once in a relator.
    pub fn simplify(&self) -> GroupPresentation {
        let mut gens = self.gens.clone();
        let mut rels: Vec<FreeWord> = self.relators.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
        loop {
            let found = rels.iter().enumerate().find_map(|(k, r)| {
                (1..=gens.len() as i32)
                    .find(|&g| r.iter().filter(|a| a.abs() == g).count() == 1)
                    .map(|g| (k, g, r.clone()))
            });
            let Some((k, g, r)) = found else { break };
            rels.remove(k);
            let pos = r.iter().position(|a| a.abs() == g).unwrap();
            let (a, b) = (&r[..pos], &r[pos + 1..]);
            // r = a g^e b = 1 gives g^e = a^{-1} b^{-1}
            let mut img = word_inv(a);
            img.extend(word_inv(b));
            if r[pos] < 0 {
                img = word_inv(&img);
            }
            let img = reduce(&img);
            let subst = |w: &[i32]| -> FreeWord {
                let mut out = Vec::new();
                for &x in w {
                    if x.abs() == g {
                        out.extend(if x > 0 { img.clone() } else { word_inv(&img) });
                    } else {
                        out.push(x);
                    }
                }
                out.into_iter().map(|x| if x.abs() > g { x - x.signum() } else { x }).collect()
            };
            rels = rels.iter().map(|w| cyclic_reduce(&subst(w))).filter(|w| !w.is_empty()).collect();
            gens.remove(g as usize - 1);
        }
        GroupPresentation { gens, relators: rels }
    }

    /// `Some(r)` if simplification leaves the free group on `r` generators.
    pub fn free_rank(&self) -> Option<usize> {
        let s = self.simplify();
        s.relators.is_empty().then_some(s.gens.len())
    }
}

/// Same generators, each relation `u = v` becoming the relator `u v^{-1}`.
pub fn group_completion(m: &MonoidPresentation) -> GroupPresentation {
    let word = |w: &[usize]| -> FreeWord { w.iter().map(|&g| letter(g)).collect() };
    let relators = m
        .relations
        .iter()
        .map(|(u, v)| {
            let mut r = word(u);
            r.extend(word_inv(&word(v)));
            reduce(&r)
        })
        .collect();
    GroupPresentation { gens: m.gens.clone(), relators }
}

/// Generated by the 1-simplices with `s_0 v = 1` for vertices `v` and `δ_1 a = (δ_0 a)(δ_2 a)`
/// for 2-simplices `a`. With several vertices the edges of a spanning tree are set to `1`.
pub fn fundamental_monoid(x: &SSetPresentation) -> Result<MonoidPresentation> {
    if x.dim() < 2 {
        return Err(Error::Truncation { need: 2, have: x.dim() });
    }
    let edges = x.all_simplices(1);
    let index: HashMap<Simplex, usize> = edges.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let gens: Vec<String> = edges.iter().map(|s| x.simplex_name(s)).collect();
    let mut relations = Vec::new();
    for v in x.all_simplices(0) {
        relations.push((vec![index[&x.apply(&v, &SimplexMap::degeneracy(0, 0))?]], Vec::new()));
    }
    for a in x.all_simplices(2) {
        let f = |i: usize| -> Result<usize> { Ok(index[&x.apply(&a, &SimplexMap::face(2, i))?]) };
        relations.push((vec![f(1)?], vec![f(0)?, f(2)?]));
    }
    // spanning tree by union-find over nondegenerate edges
    let nv = x.num_cells(0);
    let mut parent: Vec<usize> = (0..nv).collect();
    fn root(p: &mut Vec<usize>, mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for (i, e) in edges.iter().enumerate() {
        if e.is_degenerate() {
            continue;
        }
        let a = x.apply(e, &SimplexMap::face(1, 1))?.cell;
        let b = x.apply(e, &SimplexMap::face(1, 0))?.cell;
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            relations.push((vec![i], Vec::new()));
        }
    }
    let r0 = root(&mut parent, 0);
    if (0..nv).any(|v| root(&mut parent, v) != r0) {
        return invalid("fundamental monoid needs a connected simplicial set");
    }
    MonoidPresentation::new(gens, relations)
}

/// The geometric cobar construction levels `0..=kmax`: level `k` is generated by `X_{k+2}`,
/// with `s_{k+1} a = 1` for `a ∈ X_{k+1}` and `δ_{k+2} a = (δ_{k+1} a)(δ_{k+3} a)` for `a ∈ X_{k+3}`.
#[derive(Clone, Debug)]
pub struct GeometricCobar {
    pub levels: Vec<MonoidPresentation>,
    /// `faces[k][i][a]`: generator `δ_i a` of level `k - 1`, for `i ≤ k`.
    pub faces: Vec<Vec<Vec<usize>>>,
}

pub fn geometric_cobar(x: &SSetPresentation, kmax: usize) -> Result<GeometricCobar> {
    if !x.is_reduced() {
        return invalid("the geometric cobar construction needs a single-vertex simplicial set");
    }
    if x.dim() < kmax + 3 {
        return Err(Error::Truncation { need: kmax + 3, have: x.dim() });
    }
    let index = |n: usize| -> HashMap<Simplex, usize> { x.all_simplices(n).into_iter().enumerate().map(|(i, s)| (s, i)).collect() };
    let mut levels = Vec::new();
    let mut faces = Vec::new();
    for k in 0..=kmax {
        let gens = x.all_simplices(k + 2);
        let idx = index(k + 2);
        let mut relations = Vec::new();
        for a in x.all_simplices(k + 1) {
            relations.push((vec![idx[&x.apply(&a, &SimplexMap::degeneracy(k + 1, k + 1))?]], Vec::new()));
        }
        for a in x.all_simplices(k + 3) {
            let f = |i: usize| -> Result<usize> { Ok(idx[&x.apply(&a, &SimplexMap::face(k + 3, i))?]) };
            relations.push((vec![f(k + 2)?], vec![f(k + 1)?, f(k + 3)?]));
        }
        levels.push(MonoidPresentation::new(gens.iter().map(|s| x.simplex_name(s)).collect(), relations)?);
        let mut fk = Vec::new();
        if k > 0 {
            let lower = index(k + 1);
            for i in 0..=k {
                fk.push(gens.iter().map(|a| Ok(lower[&x.apply(a, &SimplexMap::face(k + 2, i))?])).collect::<Result<Vec<_>>>()?);
            }
        }
        faces.push(fk);
    }
    Ok(GeometricCobar { levels, faces })
}
