//! Finite, dimension-truncated simplicial sets.
//!
//! A [`SSetPresentation`] lists nondegenerate cells with their faces. Every simplex is stored in
//! Eilenberg-Zilber normal form: a surjection out of `[n]` together with a nondegenerate cell.
//! Other simplicial objects (products, nerves, decalage slices, codiagonals) implement the
//! [`Simplicial`] or [`BiSimplicial`] traits and are turned into presentations by [`present`].

use crate::error::{invalid, Error, Result};
use crate::simplexcat::{all_maps, compose_unchecked, subsets, surjection_from_collapse, surjections, SimplexMap};
use serde_json::{json, Value};
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

/// A simplex `X(deg)(cell)` with `deg : [n] ↠ [m]` surjective and `cell` nondegenerate of dim `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub deg: SimplexMap,
    pub cell: usize,
}

impl Simplex {
    pub fn nondegenerate(dim: usize, cell: usize) -> Self {
        Simplex { deg: SimplexMap::identity(dim), cell }
    }

    pub fn dim(&self) -> usize {
        self.deg.dom()
    }

    pub fn cell_dim(&self) -> usize {
        self.deg.cod()
    }

    pub fn is_degenerate(&self) -> bool {
        self.deg.dom() != self.deg.cod()
    }
}

#[derive(Clone, Debug)]
pub struct SSetPresentation {
    dim: usize,
    names: Vec<Vec<String>>,
    // faces[n][c][i] for n ≥ 1
    faces: Vec<Vec<Vec<Simplex>>>,
    index: Vec<HashMap<String, usize>>,
}

impl SSetPresentation {
    /// Builds a presentation and checks the simplicial identities on faces.
    pub fn new(dim: usize, names: Vec<Vec<String>>, faces: Vec<Vec<Vec<Simplex>>>) -> Result<Self> {
        let mut names = names;
        let mut faces = faces;
        if names.len() > dim + 1 {
            return invalid("cells above the truncation dimension");
        }
        names.resize(dim + 1, Vec::new());
        faces.resize(dim + 1, Vec::new());
        let mut index = Vec::new();
        for (n, ns) in names.iter().enumerate() {
            let mut h = HashMap::new();
            for (c, name) in ns.iter().enumerate() {
                if h.insert(name.clone(), c).is_some() {
                    return invalid(format!("duplicate cell name {name} in dimension {n}"));
                }
            }
            index.push(h);
        }
        for n in 0..=dim {
            let expected = if n == 0 { 0 } else { names[n].len() };
            if n == 0 {
                faces[0] = vec![Vec::new(); names[0].len()];
            }
            if faces[n].len() != names[n].len() && !(n == 0 && expected == 0) {
                return Err(Error::Dimension(format!("face table of dimension {n} has wrong length")));
            }
            if n == 0 {
                continue;
            }
            for (c, fs) in faces[n].iter().enumerate() {
                if fs.len() != n + 1 {
                    return invalid(format!("cell {} needs {} faces", names[n][c], n + 1));
                }
                for f in fs {
                    if f.dim() != n - 1 || !f.deg.is_surjective() || f.cell >= names[f.cell_dim()].len() {
                        return invalid(format!("malformed face of cell {}", names[n][c]));
                    }
                }
            }
        }
        let x = SSetPresentation { dim, names, faces, index };
        x.check_identities()?;
        Ok(x)
    }

    fn check_identities(&self) -> Result<()> {
        for n in 2..=self.dim {
            for c in 0..self.names[n].len() {
                let s = Simplex::nondegenerate(n, c);
                for j in 0..=n {
                    for i in 0..j {
                        let a = self.apply(&self.apply(&s, &SimplexMap::face(n, j))?, &SimplexMap::face(n - 1, i))?;
                        let b = self.apply(&self.apply(&s, &SimplexMap::face(n, i))?, &SimplexMap::face(n - 1, j - 1))?;
                        if a != b {
                            return Err(Error::Verification(format!(
                                "δ_{i}δ_{j} ≠ δ_{}δ_{i} on cell {}",
                                j - 1,
                                self.names[n][c]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_cells(&self, n: usize) -> usize {
        self.names.get(n).map_or(0, Vec::len)
    }

    pub fn cell_name(&self, n: usize, c: usize) -> &str {
        &self.names[n][c]
    }

    pub fn cell_index(&self, n: usize, name: &str) -> Option<usize> {
        self.index.get(n).and_then(|h| h.get(name).copied())
    }

    /// The `i`-th face of a nondegenerate cell.
    pub fn cell_face(&self, n: usize, c: usize, i: usize) -> &Simplex {
        &self.faces[n][c][i]
    }

    /// Number of vertices.
    pub fn is_reduced(&self) -> bool {
        self.num_cells(0) == 1
    }

    /// Printable name of a simplex: the cell name, prefixed by its degeneracy indices if degenerate.
    pub fn simplex_name(&self, s: &Simplex) -> String {
        let base = &self.names[s.cell_dim()][s.cell];
        if s.is_degenerate() {
            let idx: Vec<String> = s.deg.degeneracy_indices().iter().map(|i| i.to_string()).collect();
            format!("s{}{}", idx.join(""), base)
        } else {
            base.clone()
        }
    }

    /// `X(f)(s)` for `f : [k] -> [dim s]`.
    pub fn apply(&self, s: &Simplex, f: &SimplexMap) -> Result<Simplex> {
        if f.cod() != s.dim() {
            return Err(Error::Dimension(format!("apply: map into [{}] on a {}-simplex", f.cod(), s.dim())));
        }
        if f.dom() > self.dim {
            return Err(Error::Truncation { need: f.dom(), have: self.dim });
        }
        Ok(self.apply_unchecked(s, f))
    }

    fn apply_unchecked(&self, s: &Simplex, f: &SimplexMap) -> Simplex {
        let g = compose_unchecked(&s.deg, f);
        let (sigma, iota) = g.epi_mono_factor();
        let base = self.restrict_cell(s.cell_dim(), s.cell, &iota);
        Simplex { deg: compose_unchecked(&base.deg, &sigma), cell: base.cell }
    }

    // X(ι)(cell) for an injection ι into [m]
    fn restrict_cell(&self, m: usize, cell: usize, iota: &SimplexMap) -> Simplex {
        if iota.dom() == m {
            return Simplex::nondegenerate(m, cell);
        }
        let missed = iota.missed();
        let j = *missed.last().unwrap();
        // ι = δ_j ∘ ι'
        let rest: Vec<usize> = iota.values().iter().map(|&v| if v < j { v } else { v - 1 }).collect();
        let iota2 = SimplexMap::from_values_unchecked(m - 1, rest);
        let face = &self.faces[m][cell][j];
        self.apply_unchecked(face, &iota2)
    }

    /// All simplices of dimension `n`, degenerate ones included.
    pub fn all_simplices(&self, n: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for m in 0..=n.min(self.dim) {
            for deg in surjections(n, m) {
                for c in 0..self.num_cells(m) {
                    out.push(Simplex { deg: deg.clone(), cell: c });
                }
            }
        }
        out
    }

    /// Parses the JSON schema `{ "dim": D, "cells": {"0": [...]}, "faces": {"name": [{"deg": [...], "cell": name}]} }`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::Invalid("missing dim".into()))? as usize;
        let cells = v.get("cells").and_then(Value::as_object).ok_or_else(|| Error::Invalid("missing cells".into()))?;
        let mut names = vec![Vec::new(); dim + 1];
        for (k, list) in cells {
            let n: usize = k.parse().map_err(|_| Error::Invalid(format!("bad dimension key {k}")))?;
            if n > dim {
                return invalid(format!("cells in dimension {n} above dim {dim}"));
            }
            let arr = list.as_array().ok_or_else(|| Error::Invalid("cell list".into()))?;
            for x in arr {
                names[n].push(x.as_str().ok_or_else(|| Error::Invalid("cell name".into()))?.to_string());
            }
        }
        let index: Vec<HashMap<&str, usize>> =
            names.iter().map(|ns| ns.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()).collect();
        let face_obj = v.get("faces").and_then(Value::as_object);
        let mut faces: Vec<Vec<Vec<Simplex>>> = vec![Vec::new(); dim + 1];
        for n in 1..=dim {
            for name in &names[n] {
                let list = face_obj
                    .and_then(|o| o.get(name))
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Invalid(format!("missing faces of {name}")))?;
                let mut fs = Vec::new();
                for f in list {
                    let deg: Vec<usize> = f
                        .get("deg")
                        .and_then(Value::as_array)
                        .map(|a| a.iter().filter_map(|x| x.as_u64().map(|y| y as usize)).collect())
                        .unwrap_or_default();
                    let cname = f.get("cell").and_then(Value::as_str).ok_or_else(|| Error::Invalid("face cell".into()))?;
                    if deg.len() > n - 1 {
                        return invalid(format!("face of {name} has too many degeneracies"));
                    }
                    let m = n - 1 - deg.len();
                    let c = *index[m]
                        .get(cname)
                        .ok_or_else(|| Error::Invalid(format!("unknown cell {cname} in dimension {m}")))?;
                    let mut sorted = deg.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != deg.len() || sorted.iter().any(|&d| d >= n - 1) {
                        return invalid(format!("bad degeneracy indices {deg:?}"));
                    }
                    let sigma = crate::simplexcat::surjection_from_collapse(n - 1, &sorted);
                    fs.push(Simplex { deg: sigma, cell: c });
                }
                faces[n].push(fs);
            }
        }
        Self::new(dim, names, faces)
    }

    pub fn to_json(&self) -> Value {
        let mut cells = serde_json::Map::new();
        let mut faces = serde_json::Map::new();
        for n in 0..=self.dim {
            cells.insert(n.to_string(), json!(self.names[n]));
            if n == 0 {
                continue;
            }
            for (c, name) in self.names[n].iter().enumerate() {
                let fs: Vec<Value> = self.faces[n][c]
                    .iter()
                    .map(|s| json!({"deg": s.deg.degeneracy_indices(), "cell": self.names[s.cell_dim()][s.cell]}))
                    .collect();
                faces.insert(name.clone(), json!(fs));
            }
        }
        json!({"dim": self.dim, "cells": cells, "faces": faces})
    }
}

/// A simplicial set given by its simplices and the action of monotone maps.
pub trait Simplicial {
    type Elem: Clone + Eq + Hash + Debug;
    /// All `n`-simplices.
    fn elements(&self, n: usize) -> Vec<Self::Elem>;
    /// `X(f)(x)` for `f : [k] -> [n]`, `x ∈ X_n`.
    fn act(&self, x: &Self::Elem, f: &SimplexMap) -> Self::Elem;

    fn face(&self, x: &Self::Elem, n: usize, i: usize) -> Self::Elem {
        self.act(x, &SimplexMap::face(n, i))
    }

    fn degen(&self, x: &Self::Elem, n: usize, i: usize) -> Self::Elem {
        self.act(x, &SimplexMap::degeneracy(n, i))
    }

    /// Some `i` with `x = s_i d_i x`, if any.
    fn degenerate_index(&self, x: &Self::Elem, n: usize) -> Option<usize> {
        (0..n).find(|&i| {
            let m = compose_unchecked(&SimplexMap::face(n, i), &SimplexMap::degeneracy(n - 1, i));
            &self.act(x, &m) == x
        })
    }
}

impl Simplicial for SSetPresentation {
    type Elem = Simplex;

    fn elements(&self, n: usize) -> Vec<Simplex> {
        self.all_simplices(n)
    }

    fn act(&self, x: &Simplex, f: &SimplexMap) -> Simplex {
        self.apply(x, f).expect("action within truncation")
    }

    fn degenerate_index(&self, x: &Simplex, _n: usize) -> Option<usize> {
        x.deg.collapse_set().first().copied()
    }
}

/// Eilenberg-Zilber normal form of a simplex of any [`Simplicial`]: `x = X(σ)(z)` with `z` nondegenerate.
pub fn normal_form<S: Simplicial>(s: &S, x: &S::Elem, n: usize) -> (SimplexMap, S::Elem) {
    let mut y = x.clone();
    let mut dim = n;
    let mut sigma = SimplexMap::identity(n);
    while let Some(i) = s.degenerate_index(&y, dim) {
        y = s.face(&y, dim, i);
        sigma = compose_unchecked(&SimplexMap::degeneracy(dim - 1, i), &sigma);
        dim -= 1;
    }
    (sigma, y)
}

/// Names of nondegenerate simplices, used by [`present`].
pub trait Named: Simplicial {
    fn name(&self, x: &Self::Elem, n: usize) -> String;
}

/// Converts a finite simplicial set to a presentation truncated at `dim`.
pub fn present<S: Named>(s: &S, dim: usize) -> Result<SSetPresentation> {
    let mut names = Vec::new();
    let mut cells: Vec<Vec<S::Elem>> = Vec::new();
    let mut lookup: Vec<HashMap<S::Elem, usize>> = Vec::new();
    let mut faces: Vec<Vec<Vec<Simplex>>> = Vec::new();
    for n in 0..=dim {
        let nd: Vec<S::Elem> = s.elements(n).into_iter().filter(|x| n == 0 || s.degenerate_index(x, n).is_none()).collect();
        names.push(nd.iter().map(|x| s.name(x, n)).collect::<Vec<_>>());
        lookup.push(nd.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect());
        let mut fs = Vec::new();
        if n > 0 {
            for x in &nd {
                let mut row = Vec::new();
                for i in 0..=n {
                    let y = s.face(x, n, i);
                    let (sigma, z) = normal_form(s, &y, n - 1);
                    let m = sigma.cod();
                    let c = *lookup[m].get(&z).ok_or_else(|| Error::Invalid("face outside enumerated cells".into()))?;
                    row.push(Simplex { deg: sigma, cell: c });
                }
                fs.push(row);
            }
        }
        faces.push(fs);
        cells.push(nd);
    }
    // make names unique per dimension
    for ns in names.iter_mut() {
        let mut seen: HashMap<String, usize> = HashMap::new();
        for name in ns.iter_mut() {
            let k = seen.entry(name.clone()).or_insert(0);
            if *k > 0 {
                name.push_str(&format!("#{k}"));
            }
            *k += 1;
        }
    }
    SSetPresentation::new(dim, names, faces)
}

/// Cartesian product of two presentations.
pub struct Product<'a>(pub &'a SSetPresentation, pub &'a SSetPresentation);

impl Simplicial for Product<'_> {
    type Elem = (Simplex, Simplex);

    fn elements(&self, n: usize) -> Vec<Self::Elem> {
        let a = self.0.all_simplices(n);
        let b = self.1.all_simplices(n);
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                out.push((x.clone(), y.clone()));
            }
        }
        out
    }

    fn act(&self, x: &Self::Elem, f: &SimplexMap) -> Self::Elem {
        (self.0.act(&x.0, f), self.1.act(&x.1, f))
    }

    fn degenerate_index(&self, x: &Self::Elem, _n: usize) -> Option<usize> {
        let a = x.0.deg.collapse_set();
        let b = x.1.deg.collapse_set();
        a.into_iter().find(|i| b.contains(i))
    }
}

impl Named for Product<'_> {
    fn name(&self, x: &Self::Elem, _n: usize) -> String {
        format!("({},{})", self.0.simplex_name(&x.0), self.1.simplex_name(&x.1))
    }
}

/// `X × Y`; nondegenerate cells are the jointly nondegenerate pairs.
pub fn product(x: &SSetPresentation, y: &SSetPresentation) -> Result<SSetPresentation> {
    if x.dim() != y.dim() {
        return invalid(format!("truncation mismatch: {} vs {}", x.dim(), y.dim()));
    }
    present(&Product(x, y), x.dim())
}

/// The standard simplex `Δ^n` truncated at `dim`.
pub fn delta(n: usize, dim: usize) -> SSetPresentation {
    simplicial_complex(n, dim, |s| s.len() <= n + 1)
}

/// The boundary `∂Δ^n`.
pub fn boundary(n: usize, dim: usize) -> SSetPresentation {
    simplicial_complex(n, dim, |s| s.len() <= n)
}

fn vertex_name(s: &[usize], n: usize) -> String {
    let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    if n < 10 {
        parts.join("")
    } else {
        parts.join(",")
    }
}

fn simplicial_complex(n: usize, dim: usize, keep: impl Fn(&[usize]) -> bool) -> SSetPresentation {
    let mut names = Vec::new();
    let mut faces = Vec::new();
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
    for k in 0..=dim {
        let subs: Vec<Vec<usize>> =
            crate::simplexcat::subsets(n + 1, k + 1).into_iter().filter(|s| keep(s)).collect();
        names.push(subs.iter().map(|s| vertex_name(s, n)).collect());
        let mut fs = Vec::new();
        if k > 0 {
            for s in &subs {
                let row = (0..=k)
                    .map(|i| {
                        let mut t = s.clone();
                        t.remove(i);
                        Simplex::nondegenerate(k - 1, index[k - 1][&t])
                    })
                    .collect();
                fs.push(row);
            }
        }
        faces.push(fs);
        index.push(subs.into_iter().enumerate().map(|(i, s)| (s, i)).collect());
    }
    SSetPresentation::new(dim, names, faces).expect("simplicial complex")
}

/// `S^n = Δ^n/∂Δ^n`: one vertex `*` and one `n`-cell `σ`.
pub fn sphere(n: usize, dim: usize) -> SSetPresentation {
    assert!(n >= 1);
    let mut names = vec![vec!["*".to_string()]];
    let mut faces = vec![Vec::new()];
    for k in 1..=dim {
        if k == n {
            let collapse: Vec<usize> = (0..n - 1).collect();
            let f = Simplex { deg: crate::simplexcat::surjection_from_collapse(n - 1, &collapse), cell: 0 };
            names.push(vec![format!("s{n}")]);
            faces.push(vec![vec![f; n + 1]]);
        } else {
            names.push(Vec::new());
            faces.push(Vec::new());
        }
    }
    SSetPresentation::new(dim, names, faces).expect("sphere")
}

/// One-point union of reduced presentations.
pub fn wedge(x: &SSetPresentation, y: &SSetPresentation) -> Result<SSetPresentation> {
    if !x.is_reduced() || !y.is_reduced() || x.dim() != y.dim() {
        return invalid("wedge needs reduced presentations of equal truncation");
    }
    let mut names = vec![vec!["*".to_string()]];
    let mut faces = vec![Vec::new()];
    for n in 1..=x.dim() {
        let mut ns: Vec<String> = x.names[n].iter().map(|s| format!("a.{s}")).collect();
        ns.extend(y.names[n].iter().map(|s| format!("b.{s}")));
        let mut fs = x.faces[n].clone();
        for row in &y.faces[n] {
            let shifted = row
                .iter()
                .map(|s| {
                    let c = if s.cell_dim() == 0 { 0 } else { s.cell + x.num_cells(s.cell_dim()) };
                    Simplex { deg: s.deg.clone(), cell: c }
                })
                .collect();
            fs.push(shifted);
        }
        names.push(ns);
        faces.push(fs);
    }
    SSetPresentation::new(x.dim(), names, faces)
}

/// Standard spaces by name: `point`, `delta<n>`, `boundary<n>`, `S<n>` (also `sphere<n>`).
pub fn standard(name: &str, dim: usize) -> Result<SSetPresentation> {
    let lower = name.to_ascii_lowercase();
    let num = |prefix: &str| -> Option<usize> { lower.strip_prefix(prefix).and_then(|r| r.parse().ok()) };
    if lower == "point" || lower == "delta0" || name == "Δ0" {
        return Ok(delta(0, dim));
    }
    if let Some(n) = num("delta").or_else(|| name.strip_prefix("Δ").and_then(|r| r.parse().ok())) {
        return Ok(delta(n, dim));
    }
    if let Some(n) = num("boundary").or_else(|| name.strip_prefix("∂Δ").and_then(|r| r.parse().ok())) {
        if n == 0 {
            return invalid("∂Δ0 is empty");
        }
        return Ok(boundary(n, dim));
    }
    if let Some(n) = num("sphere").or_else(|| num("s")) {
        if n == 0 {
            return invalid("S0 is not supported");
        }
        return Ok(sphere(n, dim));
    }
    invalid(format!("unknown standard space {name}"))
}

/// A finite monoid given by a multiplication table with unit `0`.
#[derive(Clone, Debug)]
pub struct FiniteMonoid {
    pub table: Vec<Vec<usize>>,
}

impl FiniteMonoid {
    /// Validates closure, unit `0` and associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return invalid("multiplication table must be square with entries in range");
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return invalid("element 0 must be the unit");
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return invalid("multiplication is not associative");
                    }
                }
            }
        }
        Ok(FiniteMonoid { table })
    }

    pub fn cyclic(n: usize) -> Self {
        FiniteMonoid { table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect() }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
}

/// The nerve `N(M)_n = M^n`.
pub struct Nerve<'a>(pub &'a FiniteMonoid);

/// Action of `f : [k] -> [n]` on a nerve tuple `(g_1, …, g_n)`: entry `t` of the result is the
/// product of `g_{f(t-1)+1} ⋯ g_{f(t)}`.
pub fn nerve_act(mul: impl Fn(usize, usize) -> usize, x: &[usize], f: &SimplexMap) -> Vec<usize> {
    (1..=f.dom())
        .map(|t| {
            let mut acc = 0;
            for j in f.at(t - 1) + 1..=f.at(t) {
                acc = mul(acc, x[j - 1]);
            }
            acc
        })
        .collect()
}

impl Simplicial for Nerve<'_> {
    type Elem = Vec<usize>;

    fn elements(&self, n: usize) -> Vec<Vec<usize>> {
        let m = self.0.size();
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..m).map(move |g| {
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
        nerve_act(|a, b| self.0.mul(a, b), x, f)
    }

    fn degenerate_index(&self, x: &Vec<usize>, _n: usize) -> Option<usize> {
        x.iter().position(|&g| g == 0)
    }
}

impl Named for Nerve<'_> {
    fn name(&self, x: &Vec<usize>, _n: usize) -> String {
        let parts: Vec<String> = x.iter().map(|g| g.to_string()).collect();
        format!("[{}]", parts.join("|"))
    }
}

pub fn nerve(m: &FiniteMonoid, dim: usize) -> Result<SSetPresentation> {
    present(&Nerve(m), dim)
}

/// A bisimplicial set given by its elements and the action of pairs of monotone maps.
pub trait BiSimplicial {
    type Elem: Clone + Eq + Hash + Debug;
    fn elements(&self, p: usize, q: usize) -> Vec<Self::Elem>;
    /// `X(g, h)(x)` for `x ∈ X_{p,q}`, `g : [p'] -> [p]`, `h : [q'] -> [q]`.
    fn act(&self, x: &Self::Elem, g: &SimplexMap, h: &SimplexMap) -> Self::Elem;

    /// True if `x` is in the image of a degeneracy in the first direction.
    fn is_degenerate_h(&self, x: &Self::Elem, p: usize, q: usize) -> bool {
        let idq = SimplexMap::identity(q);
        (0..p).any(|i| {
            let m = compose_unchecked(&SimplexMap::face(p, i), &SimplexMap::degeneracy(p - 1, i));
            &self.act(x, &m, &idq) == x
        })
    }

    fn is_degenerate_v(&self, x: &Self::Elem, p: usize, q: usize) -> bool {
        let idp = SimplexMap::identity(p);
        (0..q).any(|i| {
            let m = compose_unchecked(&SimplexMap::face(q, i), &SimplexMap::degeneracy(q - 1, i));
            &self.act(x, &idp, &m) == x
        })
    }

    /// Elements of `X_{p,q}` nondegenerate in both directions.
    fn bi_nondegenerate(&self, p: usize, q: usize) -> Vec<Self::Elem> {
        self.elements(p, q)
            .into_iter()
            .filter(|x| !self.is_degenerate_h(x, p, q) && !self.is_degenerate_v(x, p, q))
            .collect()
    }

    /// Nondegenerate `n`-simplices of the diagonal.
    fn diagonal_nondegenerate(&self, n: usize) -> Vec<Self::Elem>
    where
        Self: Sized,
    {
        let d = Diagonal(self);
        self.elements(n, n).into_iter().filter(|x| d.degenerate_index(x, n).is_none()).collect()
    }
}

/// The diagonal `δ*B`.
pub struct Diagonal<'a, B: BiSimplicial>(pub &'a B);

impl<B: BiSimplicial> Simplicial for Diagonal<'_, B> {
    type Elem = B::Elem;

    fn elements(&self, n: usize) -> Vec<B::Elem> {
        self.0.elements(n, n)
    }

    fn act(&self, x: &B::Elem, f: &SimplexMap) -> B::Elem {
        self.0.act(x, f, f)
    }
}

/// The external product `X ⊠ Y`, `(X ⊠ Y)_{p,q} = X_p × Y_q`.
pub struct ExternalProduct<'a>(pub &'a SSetPresentation, pub &'a SSetPresentation);

impl BiSimplicial for ExternalProduct<'_> {
    type Elem = (Simplex, Simplex);

    fn elements(&self, p: usize, q: usize) -> Vec<Self::Elem> {
        let a = self.0.all_simplices(p);
        let b = self.1.all_simplices(q);
        let mut out = Vec::new();
        for x in &a {
            for y in &b {
                out.push((x.clone(), y.clone()));
            }
        }
        out
    }

    fn act(&self, x: &Self::Elem, g: &SimplexMap, h: &SimplexMap) -> Self::Elem {
        (self.0.act(&x.0, g), self.1.act(&x.1, h))
    }

    fn is_degenerate_h(&self, x: &Self::Elem, _p: usize, _q: usize) -> bool {
        x.0.is_degenerate()
    }

    fn is_degenerate_v(&self, x: &Self::Elem, _p: usize, _q: usize) -> bool {
        x.1.is_degenerate()
    }

    fn bi_nondegenerate(&self, p: usize, q: usize) -> Vec<Self::Elem> {
        let mut out = Vec::new();
        for a in 0..self.0.num_cells(p) {
            for b in 0..self.1.num_cells(q) {
                out.push((Simplex::nondegenerate(p, a), Simplex::nondegenerate(q, b)));
            }
        }
        out
    }

    /// Pairs `(s_σ a, s_τ b)` with disjoint collapse sets.
    fn diagonal_nondegenerate(&self, n: usize) -> Vec<Self::Elem> {
        let mut out = Vec::new();
        for p in 0..=n.min(self.0.dim()) {
            for q in (n - p)..=n.min(self.1.dim()) {
                for cs in subsets(n, n - p) {
                    let rest: Vec<usize> = (0..n).filter(|e| !cs.contains(e)).collect();
                    for sub in subsets(rest.len(), n - q) {
                        let ct: Vec<usize> = sub.iter().map(|&k| rest[k]).collect();
                        let sigma = surjection_from_collapse(n, &cs);
                        let tau = surjection_from_collapse(n, &ct);
                        for a in 0..self.0.num_cells(p) {
                            for b in 0..self.1.num_cells(q) {
                                out.push((
                                    Simplex { deg: sigma.clone(), cell: a },
                                    Simplex { deg: tau.clone(), cell: b },
                                ));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// The total decalage `dec*X`: `(dec*X)_{[n],[m]} = X_{[n]∗[m]}`.
#[derive(Clone, Debug)]
pub struct BiSSetSlice {
    pub base: SSetPresentation,
}

pub fn total_dec(x: &SSetPresentation) -> BiSSetSlice {
    BiSSetSlice { base: x.clone() }
}

impl BiSSetSlice {
    /// Simplices at `(n, m)`, i.e. `X_{n+m+1}`.
    pub fn slice_elements(&self, n: usize, m: usize) -> Result<Vec<Simplex>> {
        if n + m + 1 > self.base.dim() {
            return Err(Error::Truncation { need: n + m + 1, have: self.base.dim() });
        }
        Ok(self.base.all_simplices(n + m + 1))
    }

    /// Vertical face `δ_i` of the slice at fixed `n`: `δ_{n+1+i}` on `X_{n+m+1}`.
    pub fn face_v(&self, x: &Simplex, n: usize, i: usize) -> Simplex {
        let d = x.dim();
        self.base.act(x, &SimplexMap::face(d, n + 1 + i))
    }

    /// Horizontal face `δ_i`, `i ≤ n`.
    pub fn face_h(&self, x: &Simplex, i: usize) -> Simplex {
        self.base.act(x, &SimplexMap::face(x.dim(), i))
    }

    /// The extra degeneracy `s_can = s_n : X_{n+m} -> X_{n+m+1}` of slice `n`
    /// (with `X_n` as the augmentation at `m = -1`).
    pub fn s_can(&self, x: &Simplex, n: usize) -> Simplex {
        self.base.act(x, &SimplexMap::degeneracy(x.dim(), n))
    }

    /// Augmentation `X_{n+1} -> X_n` of slice `n`: the face `δ_{n+1}`.
    pub fn augmentation(&self, x: &Simplex, n: usize) -> Simplex {
        self.face_v(x, n, 0)
    }
}

impl BiSimplicial for BiSSetSlice {
    type Elem = Simplex;

    fn elements(&self, p: usize, q: usize) -> Vec<Simplex> {
        self.slice_elements(p, q).expect("within truncation")
    }

    fn act(&self, x: &Simplex, g: &SimplexMap, h: &SimplexMap) -> Simplex {
        self.base.act(x, &g.star(h))
    }
}

/// The Artin-Mazur codiagonal `dec_* B` as a simplicial set.
///
/// An `n`-simplex is a tuple `(x_0, …, x_n)`, `x_p ∈ B_{p,n-p}`, with
/// `(id, δ_0) x_p = (δ_{p+1}, id) x_{p+1}`.
pub struct ArtinMazur<'a, B: BiSimplicial>(pub &'a B);

impl<B: BiSimplicial> ArtinMazur<'_, B> {
    fn compatible(&self, a: &B::Elem, b: &B::Elem, p: usize, n: usize) -> bool {
        // a ∈ B_{p,n-p}, b ∈ B_{p+1,n-p-1}
        let q = n - p;
        let lhs = self.0.act(a, &SimplexMap::identity(p), &SimplexMap::face(q, 0));
        let rhs = self.0.act(b, &SimplexMap::face(p + 1, p + 1), &SimplexMap::identity(q - 1));
        lhs == rhs
    }
}

impl<B: BiSimplicial> Simplicial for ArtinMazur<'_, B> {
    type Elem = Vec<B::Elem>;

    fn elements(&self, n: usize) -> Vec<Vec<B::Elem>> {
        let mut partial: Vec<Vec<B::Elem>> = self.0.elements(0, n).into_iter().map(|x| vec![x]).collect();
        for p in 1..=n {
            let next = self.0.elements(p, n - p);
            let mut out = Vec::new();
            for t in &partial {
                for y in &next {
                    if self.compatible(t.last().unwrap(), y, p - 1, n) {
                        let mut t2 = t.clone();
                        t2.push(y.clone());
                        out.push(t2);
                    }
                }
            }
            partial = out;
        }
        partial
    }

    fn act(&self, x: &Vec<B::Elem>, f: &SimplexMap) -> Vec<B::Elem> {
        let (m, n) = (f.dom(), f.cod());
        (0..=m)
            .map(|p2| {
                let p = f.at(p2);
                let g = SimplexMap::from_values_unchecked(p, f.values()[..=p2].to_vec());
                let h = SimplexMap::from_values_unchecked(n - p, f.values()[p2..].iter().map(|v| v - p).collect());
                self.0.act(&x[p], &g, &h)
            })
            .collect()
    }
}

impl<B: BiSimplicial> Named for ArtinMazur<'_, B> {
    fn name(&self, x: &Vec<B::Elem>, _n: usize) -> String {
        format!("{x:?}")
    }
}

pub fn artin_mazur_total<B: BiSimplicial>(b: &B, dim: usize) -> Result<SSetPresentation> {
    present(&ArtinMazur(b), dim)
}

/// Every monotone map with domain and codomain at most `k`, used by exhaustive checks.
pub fn small_maps(k: usize) -> Vec<SimplexMap> {
    (0..=k).flat_map(|n| (0..=k).flat_map(move |m| all_maps(n, m))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_examples() {
        let s1 = sphere(1, 3);
        let e = Simplex::nondegenerate(1, 0);
        assert_eq!(s1.apply(&e, &SimplexMap::identity(1)).unwrap(), e);
        let se = s1.apply(&e, &SimplexMap::degeneracy(1, 0)).unwrap();
        assert_eq!(s1.apply(&se, &SimplexMap::face(2, 0)).unwrap(), e);
        let d2 = delta(2, 3);
        let top = Simplex::nondegenerate(2, 0);
        let f = crate::simplexcat::compose(&SimplexMap::face(2, 0), &SimplexMap::face(1, 0)).unwrap();
        let v = d2.apply(&top, &f).unwrap();
        assert_eq!((v.dim(), d2.cell_name(0, v.cell)), (0, "2"));
        assert!(d2.apply(&top, &SimplexMap::identity(1)).is_err());
    }

    #[test]
    fn apply_is_functorial() {
        let spaces = [delta(2, 4), sphere(2, 4), product(&delta(1, 4), &delta(1, 4)).unwrap(), boundary(3, 4)];
        let maps = small_maps(4);
        for x in &spaces {
            for n in 0..=3 {
                for s in x.all_simplices(n) {
                    for f in maps.iter().filter(|f| f.cod() == n) {
                        let sf = x.apply(&s, f).unwrap();
                        for g in maps.iter().filter(|g| g.cod() == f.dom()).take(20) {
                            let lhs = x.apply(&sf, g).unwrap();
                            let rhs = x.apply(&s, &crate::simplexcat::compose(f, g).unwrap()).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn standard_spaces() {
        let s2 = standard("S2", 3).unwrap();
        assert_eq!((s2.num_cells(0), s2.num_cells(1), s2.num_cells(2)), (1, 0, 1));
        let d2 = standard("delta2", 3).unwrap();
        assert_eq!((d2.num_cells(0), d2.num_cells(1), d2.num_cells(2), d2.num_cells(3)), (3, 3, 1, 0));
        let b2 = standard("boundary2", 2).unwrap();
        assert_eq!((b2.num_cells(0), b2.num_cells(1), b2.num_cells(2)), (3, 3, 0));
        assert!(standard("torus", 2).is_err());
    }

    #[test]
    fn products() {
        let d1 = delta(1, 3);
        let p = product(&d1, &d1).unwrap();
        assert_eq!(p.num_cells(2), 2);
        assert_eq!(p.num_cells(3), 0);
        let pt = delta(0, 3);
        let s2 = sphere(2, 3);
        let q = product(&pt, &s2).unwrap();
        for n in 0..=3 {
            assert_eq!(q.num_cells(n), s2.num_cells(n));
        }
        let d2 = delta(2, 3);
        let a = product(&d1, &d2).unwrap();
        let b = product(&d2, &d1).unwrap();
        for n in 0..=3 {
            assert_eq!(a.num_cells(n), b.num_cells(n));
            assert_eq!(a.all_simplices(n).len(), d1.all_simplices(n).len() * d2.all_simplices(n).len());
        }
    }

    #[test]
    fn s1_counts_and_slices() {
        let s1 = sphere(1, 4);
        for n in 0..=4 {
            assert_eq!(s1.all_simplices(n).len(), n + 1);
        }
        let dec = total_dec(&s1);
        assert_eq!(dec.slice_elements(0, 1).unwrap().len(), 3);
        assert!(dec.slice_elements(2, 2).is_err());
        let pt = total_dec(&delta(0, 3));
        assert_eq!(pt.slice_elements(1, 1).unwrap().len(), 1);
    }

    #[test]
    fn slice_colimit_is_level() {
        // coequalizer of δ_{n+1}, δ_{n+2} : X_{n+2} ⇉ X_{n+1} is X_n via the augmentation
        for x in [sphere(1, 4), sphere(2, 4), delta(2, 4), product(&delta(1, 4), &sphere(1, 4)).unwrap()] {
            let dec = total_dec(&x);
            for n in 0..=2 {
                let lvl1 = x.all_simplices(n + 1);
                let pos: HashMap<Simplex, usize> = lvl1.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
                let mut parent: Vec<usize> = (0..lvl1.len()).collect();
                fn find(p: &mut Vec<usize>, i: usize) -> usize {
                    if p[i] != i {
                        let r = find(p, p[i]);
                        p[i] = r;
                    }
                    p[i]
                }
                for y in x.all_simplices(n + 2) {
                    let a = pos[&dec.face_v(&y, n, 0)];
                    let b = pos[&dec.face_v(&y, n, 1)];
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
                let mut classes: HashMap<usize, Simplex> = HashMap::new();
                for (i, s) in lvl1.iter().enumerate() {
                    let r = find(&mut parent, i);
                    let img = dec.augmentation(s, n);
                    if let Some(prev) = classes.get(&r) {
                        assert_eq!(prev, &img);
                    }
                    classes.insert(r, img);
                }
                assert_eq!(classes.len(), x.all_simplices(n).len());
            }
        }
    }

    #[test]
    fn nerve_examples() {
        let triv = FiniteMonoid::cyclic(1);
        let n = nerve(&triv, 3).unwrap();
        assert_eq!((n.num_cells(0), n.num_cells(1), n.num_cells(2)), (1, 0, 0));
        let z2 = FiniteMonoid::cyclic(2);
        let n = nerve(&z2, 3).unwrap();
        assert_eq!(n.all_simplices(2).len(), 4);
        assert_eq!(n.num_cells(2), 1);
        let x = vec![1, 1];
        assert_eq!(Nerve(&z2).face(&x, 2, 1), vec![0]);
        assert!(FiniteMonoid::new(vec![vec![0, 1], vec![1, 1]]).is_ok());
        assert!(FiniteMonoid::new(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]]).is_err());
    }

    /// `pr₂*Y`: constant in the first variable.
    struct Pr2<'a>(&'a SSetPresentation);

    impl BiSimplicial for Pr2<'_> {
        type Elem = Simplex;
        fn elements(&self, _p: usize, q: usize) -> Vec<Simplex> {
            self.0.all_simplices(q)
        }
        fn act(&self, x: &Simplex, _g: &SimplexMap, h: &SimplexMap) -> Simplex {
            self.0.act(x, h)
        }
    }

    #[test]
    fn artin_mazur_examples() {
        let s2 = sphere(2, 3);
        let t = artin_mazur_total(&Pr2(&s2), 3).unwrap();
        for n in 0..=3 {
            assert_eq!(t.all_simplices(n).len(), s2.all_simplices(n).len());
            assert_eq!(t.num_cells(n), s2.num_cells(n));
        }
        // nerve of constant Z/2 as a bisimplicial set constant in the first variable
        struct ConstNerve(FiniteMonoid);
        impl BiSimplicial for ConstNerve {
            type Elem = Vec<usize>;
            fn elements(&self, _p: usize, q: usize) -> Vec<Vec<usize>> {
                Nerve(&self.0).elements(q)
            }
            fn act(&self, x: &Vec<usize>, _g: &SimplexMap, h: &SimplexMap) -> Vec<usize> {
                Nerve(&self.0).act(x, h)
            }
        }
        let b = ConstNerve(FiniteMonoid::cyclic(2));
        assert_eq!(ArtinMazur(&b).elements(1).len(), 2);
    }

    #[test]
    fn codiagonal_of_decalage_maps_back() {
        for x in [sphere(1, 4), sphere(2, 4), delta(1, 4)] {
            let dec = total_dec(&x);
            let am = ArtinMazur(&dec);
            for n in 0..=2usize {
                // r(x) = δ_{n+1} x_n is simplicial and splits the unit x ↦ (s_p x)_p
                for t in am.elements(n) {
                    let r = x.act(&t[n], &SimplexMap::face(n + 1, n + 1));
                    for f in small_maps(2).iter().filter(|f| f.cod() == n) {
                        let ft = am.act(&t, f);
                        let m = f.dom();
                        let rf = x.act(&ft[m], &SimplexMap::face(m + 1, m + 1));
                        assert_eq!(rf, x.act(&r, f));
                    }
                }
                for s in x.all_simplices(n) {
                    let unit: Vec<Simplex> = (0..=n).map(|p| x.act(&s, &SimplexMap::degeneracy(n, p))).collect();
                    assert!(am.elements(n).contains(&unit));
                    assert_eq!(x.act(&unit[n], &SimplexMap::face(n + 1, n + 1)), s);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        for x in [sphere(2, 3), delta(2, 3), product(&sphere(1, 3), &sphere(1, 3)).unwrap()] {
            let j = x.to_json();
            let y = SSetPresentation::from_json(&j).unwrap();
            assert_eq!(y.to_json(), j);
        }
        let bad = serde_json::json!({"dim": 1, "cells": {"0": ["a"], "1": ["e"]}, "faces": {"e": [{"deg": [], "cell": "b"}, {"deg": [], "cell": "a"}]}});
        assert!(SSetPresentation::from_json(&bad).is_err());
    }

    #[test]
    fn normal_form_idempotent() {
        let (a, b) = (sphere(1, 3), delta(1, 3));
        let prod = Product(&a, &b);
        for n in 0..=3 {
            for x in prod.elements(n) {
                let (s, z) = normal_form(&prod, &x, n);
                assert_eq!(prod.act(&z, &s), x);
                let (s2, z2) = normal_form(&prod, &z, s.cod());
                assert!(s2.is_identity());
                assert_eq!(z2, z);
            }
        }
    }
}
