use super::act_by_generators;
use crate::error::{invalid, Error, Result};
use crate::simplexcat::SimplexMap;
use crate::sset::{nerve_act, present, BiSimplicial, FiniteMonoid, Named, SSetPresentation, Simplicial};

/// A simplicial monoid with finite levels `0..=top`.
#[derive(Clone, Debug)]
pub struct SimplicialMonoid {
    levels: Vec<FiniteMonoid>,
    /// `faces[k][i][x]`, level `k ≥ 1` to `k - 1`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[k][i][x]`, level `k` to `k + 1`, for `k < top`.
    degens: Vec<Vec<Vec<usize>>>,
}

impl SimplicialMonoid {
    /// Validates that structure maps are monoid homomorphisms satisfying the simplicial identities.
    pub fn new(levels: Vec<FiniteMonoid>, faces: Vec<Vec<Vec<usize>>>, degens: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let top = levels.len().checked_sub(1).ok_or_else(|| Error::Invalid("no levels".into()))?;
        if faces.len() != top + 1 || degens.len() != top + 1 {
            return invalid("one face and degeneracy table per level");
        }
        for k in 0..=top {
            let nf = if k == 0 { 0 } else { k + 1 };
            let nd = if k == top { 0 } else { k + 1 };
            if faces[k].len() != nf || degens[k].len() != nd {
                return invalid(format!("wrong number of structure maps at level {k}"));
            }
            let size = levels[k].size();
            let hom = |m: &Vec<usize>, t: &FiniteMonoid| {
                m.len() == size
                    && m.iter().all(|&y| y < t.size())
                    && m[0] == 0
                    && (0..size).all(|a| (0..size).all(|b| m[levels[k].mul(a, b)] == t.mul(m[a], m[b])))
            };
            if (k > 0 && !faces[k].iter().all(|m| hom(m, &levels[k - 1])))
                || (k < top && !degens[k].iter().all(|m| hom(m, &levels[k + 1])))
            {
                return invalid(format!("structure map at level {k} is not a monoid homomorphism"));
            }
        }
        let g = SimplicialMonoid { levels, faces, degens };
        g.check_identities()?;
        Ok(g)
    }

    /// The constant simplicial monoid.
    pub fn constant(m: &FiniteMonoid, top: usize) -> Self {
        let id: Vec<usize> = (0..m.size()).collect();
        SimplicialMonoid {
            levels: vec![m.clone(); top + 1],
            faces: (0..=top).map(|k| if k == 0 { Vec::new() } else { vec![id.clone(); k + 1] }).collect(),
            degens: (0..=top).map(|k| if k == top { Vec::new() } else { vec![id.clone(); k + 1] }).collect(),
        }
    }

    /// Level `n` is `M^{n+1}` with pointwise product; faces delete and degeneracies repeat an entry.
    pub fn pointwise_power(m: &FiniteMonoid, top: usize) -> Result<Self> {
        let q = m.size();
        let decode = |mut x: usize, len: usize| {
            let mut v = Vec::with_capacity(len);
            for _ in 0..len {
                v.push(x % q);
                x /= q;
            }
            v
        };
        let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &d| acc * q + d);
        let mut levels = Vec::new();
        let mut faces = Vec::new();
        let mut degens = Vec::new();
        for k in 0..=top {
            let size = q.pow(k as u32 + 1);
            let table = (0..size)
                .map(|a| {
                    let va = decode(a, k + 1);
                    (0..size)
                        .map(|b| {
                            let vb = decode(b, k + 1);
                            let prod: Vec<usize> = va.iter().zip(&vb).map(|(&x, &y)| m.mul(x, y)).collect();
                            encode(&prod)
                        })
                        .collect()
                })
                .collect();
            levels.push(FiniteMonoid::new(table)?);
            let mut fk = Vec::new();
            if k > 0 {
                for i in 0..=k {
                    fk.push(
                        (0..size)
                            .map(|x| {
                                let mut v = decode(x, k + 1);
                                v.remove(i);
                                encode(&v)
                            })
                            .collect(),
                    );
                }
            }
            faces.push(fk);
            let mut dk = Vec::new();
            if k < top {
                for i in 0..=k {
                    dk.push(
                        (0..size)
                            .map(|x| {
                                let mut v = decode(x, k + 1);
                                v.insert(i, v[i]);
                                encode(&v)
                            })
                            .collect(),
                    );
                }
            }
            degens.push(dk);
        }
        SimplicialMonoid::new(levels, faces, degens)
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &FiniteMonoid {
        &self.levels[k]
    }

    pub fn face(&self, x: usize, k: usize, i: usize) -> usize {
        self.faces[k][i][x]
    }

    pub fn degen(&self, x: usize, k: usize, i: usize) -> usize {
        self.degens[k][i][x]
    }

    pub fn act(&self, x: usize, f: &SimplexMap) -> usize {
        act_by_generators(x, f, |y, n, i| self.face(y, n, i), |y, n, i| self.degen(y, n, i))
    }

    fn check_identities(&self) -> Result<()> {
        let top = self.top();
        for k in 0..=top {
            for x in 0..self.levels[k].size() {
                for j in 1..=k {
                    for i in 0..j {
                        if k >= 2 && self.face(self.face(x, k, j), k - 1, i) != self.face(self.face(x, k, i), k - 1, j - 1) {
                            return Err(Error::Verification(format!("d_i d_j at level {k}")));
                        }
                    }
                }
                if k < top {
                    for j in 0..=k {
                        let s = self.degen(x, k, j);
                        for i in 0..=k + 1 {
                            let rhs = if i < j {
                                self.degen(self.face(x, k, i), k - 1, j - 1)
                            } else if i <= j + 1 {
                                x
                            } else {
                                self.degen(self.face(x, k, i - 1), k - 1, j)
                            };
                            if self.face(s, k + 1, i) != rhs {
                                return Err(Error::Verification(format!("d_i s_j at level {k}")));
                            }
                        }
                        if k + 1 < top {
                            for i in 0..=j {
                                if self.degen(s, k + 1, i) != self.degen(self.degen(x, k, i), k + 1, j + 1) {
                                    return Err(Error::Verification(format!("s_i s_j at level {k}")));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `W̄G` with `(W̄G)_n = G_{n-1} × ⋯ × G_0`; entry `p` of an element lies in level `n - 1 - p`.
pub struct ClassifyingSpace<'a>(pub &'a SimplicialMonoid);

impl ClassifyingSpace<'_> {
    /// `d_0` drops the first entry; for `0 < i < n` entries before position `i - 1` are faced,
    /// position `i - 1` becomes `g_{n-i-1} · d_0(g_{n-i})`; `d_n` faces all entries and drops `g_0`.
    pub fn face_of(&self, x: &[usize], n: usize, i: usize) -> Vec<usize> {
        let g = self.0;
        if i == 0 {
            return x[1..].to_vec();
        }
        let mut out = Vec::with_capacity(n - 1);
        for p in 0..i - 1 {
            out.push(g.face(x[p], n - 1 - p, i - 1 - p));
        }
        if i < n {
            let level = n - i;
            out.push(g.level(level - 1).mul(x[i], g.face(x[i - 1], level, 0)));
            out.extend_from_slice(&x[i + 1..]);
        }
        out
    }

    /// `s_i` degenerates the first `i` entries and inserts the unit at position `i`.
    pub fn degen_of(&self, x: &[usize], n: usize, i: usize) -> Vec<usize> {
        let g = self.0;
        let mut out = Vec::with_capacity(n + 1);
        for p in 0..i {
            out.push(g.degen(x[p], n - 1 - p, i - 1 - p));
        }
        out.push(0);
        out.extend_from_slice(&x[i..]);
        out
    }
}

impl Simplicial for ClassifyingSpace<'_> {
    type Elem = Vec<usize>;

    fn elements(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for p in 0..n {
            let size = self.0.level(n - 1 - p).size();
            out = out
                .into_iter()
                .flat_map(|v: Vec<usize>| {
                    (0..size).map(move |g| {
                        let mut w = v.clone();
                        w.push(g);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn act(&self, x: &Vec<usize>, f: &SimplexMap) -> Vec<usize> {
        act_by_generators(x.clone(), f, |y, n, i| self.face_of(&y, n, i), |y, n, i| self.degen_of(&y, n, i))
    }

    fn face(&self, x: &Vec<usize>, n: usize, i: usize) -> Vec<usize> {
        self.face_of(x, n, i)
    }

    fn degen(&self, x: &Vec<usize>, n: usize, i: usize) -> Vec<usize> {
        self.degen_of(x, n, i)
    }
}

impl Named for ClassifyingSpace<'_> {
    fn name(&self, x: &Vec<usize>, _n: usize) -> String {
        let parts: Vec<String> = x.iter().map(|g| g.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// `W̄G` as a presentation truncated at `nmax`; needs levels `0..nmax`.
pub fn classifying_space(g: &SimplicialMonoid, nmax: usize) -> Result<SSetPresentation> {
    if g.top() + 1 < nmax {
        return Err(Error::Truncation { need: nmax.saturating_sub(1), have: g.top() });
    }
    present(&ClassifyingSpace(g), nmax)
}

/// The bisimplicial nerve `(p, q) ↦ N(G_p)_q`.
pub struct MonoidNerve<'a>(pub &'a SimplicialMonoid);

impl BiSimplicial for MonoidNerve<'_> {
    type Elem = Vec<usize>;

    fn elements(&self, p: usize, q: usize) -> Vec<Vec<usize>> {
        let size = self.0.level(p).size();
        let mut out = vec![Vec::new()];
        for _ in 0..q {
            out = out
                .into_iter()
                .flat_map(|v: Vec<usize>| {
                    (0..size).map(move |g| {
                        let mut w = v.clone();
                        w.push(g);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn act(&self, x: &Vec<usize>, g: &SimplexMap, h: &SimplexMap) -> Vec<usize> {
        let level = self.0.level(g.cod());
        let y = nerve_act(|a, b| level.mul(a, b), x, h);
        y.into_iter().map(|e| self.0.act(e, g)).collect()
    }
}
