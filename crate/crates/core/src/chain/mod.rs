//! Chain complexes and bicomplexes of free abelian groups, with exact homology.

mod complex;
pub mod matrix;
pub mod snf;

pub use complex::*;
pub use matrix::Matrix;
pub use snf::{smith_normal_form, Snf};

use crate::error::{invalid, Result};
use serde_json::{json, Value};

/// Parses `{ "degrees": {"0": [...], ...}, "d": {"1": [[...]]} }`.
pub fn complex_from_json(v: &Value) -> Result<ChainComplex> {
    let degs = v.get("degrees").and_then(Value::as_object).ok_or_else(|| crate::Error::Invalid("missing degrees".into()))?;
    let mut keys: Vec<i64> = Vec::new();
    for k in degs.keys() {
        keys.push(k.parse().map_err(|_| crate::Error::Invalid(format!("bad degree {k}")))?);
    }
    if keys.is_empty() {
        return Ok(ChainComplex::zero());
    }
    let lo = *keys.iter().min().unwrap();
    let hi = *keys.iter().max().unwrap();
    let mut basis = Vec::new();
    for n in lo..=hi {
        let labels = match degs.get(&n.to_string()) {
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| x.as_str().map(String::from).ok_or_else(|| crate::Error::Invalid("label".into())))
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return invalid("degree entry must be a list"),
            None => Vec::new(),
        };
        basis.push(labels);
    }
    let dmap = v.get("d").and_then(Value::as_object);
    let mut d = Vec::new();
    for n in lo..=hi {
        let cols = basis[(n - lo) as usize].len();
        let rows = if n == lo { 0 } else { basis[(n - lo - 1) as usize].len() };
        let m = match dmap.and_then(|m| m.get(&n.to_string())) {
            None => Matrix::zero(rows, cols),
            Some(Value::Array(rs)) => {
                let mut entries = Vec::new();
                for r in rs {
                    let row: Vec<i64> = r
                        .as_array()
                        .ok_or_else(|| crate::Error::Invalid("matrix row".into()))?
                        .iter()
                        .map(|x| x.as_i64().ok_or_else(|| crate::Error::Invalid("matrix entry".into())))
                        .collect::<Result<_>>()?;
                    if row.len() != cols {
                        return invalid(format!("row length {} ≠ {cols} in d_{n}", row.len()));
                    }
                    entries.push(row);
                }
                if entries.len() != rows {
                    return invalid(format!("d_{n} has {} rows, expected {rows}", entries.len()));
                }
                Matrix::from_rows(rows, cols, &entries)
            }
            Some(_) => return invalid("differential must be a matrix"),
        };
        d.push(m);
    }
    ChainComplex::new(lo, basis, d, false)
}

pub fn complex_to_json(c: &ChainComplex) -> Value {
    let mut degrees = serde_json::Map::new();
    let mut d = serde_json::Map::new();
    for n in c.degrees() {
        degrees.insert(n.to_string(), json!(c.basis(n)));
        if n > c.lo() {
            d.insert(n.to_string(), json!(c.d(n).to_i64_rows()));
        }
    }
    json!({ "degrees": degrees, "d": d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random complex in degrees `0..=top`; each `d_n` has columns in the kernel of `d_{n-1}`.
    pub(crate) fn random_complex(rng: &mut ChaCha8Rng, top: usize, max_rank: usize) -> ChainComplex {
        loop {
            let ranks: Vec<usize> = (0..=top).map(|_| rng.gen_range(0..=max_rank)).collect();
            let mut d = vec![Matrix::zero(0, ranks[0])];
            let mut ok = true;
            for n in 1..=top {
                // choose d_n with d_{n-1} d_n = 0: columns from the kernel of d_{n-1}
                let prev = &d[n - 1];
                let k = snf::kernel_basis(prev);
                let coeffs: Vec<Vec<i64>> =
                    (0..k.cols()).map(|_| (0..ranks[n]).map(|_| rng.gen_range(-2..=2)).collect()).collect();
                let cm = Matrix::from_rows(k.cols(), ranks[n], &coeffs);
                let m = k.mul(&cm);
                if m.rows() != ranks[n - 1] {
                    ok = false;
                    break;
                }
                d.push(m);
            }
            if ok {
                return ChainComplex::from_ranks(0, &ranks, d).unwrap();
            }
        }
    }

    #[test]
    fn homology_examples() {
        let pt = ChainComplex::unit(0);
        assert_eq!(pt.homology(0).unwrap(), AbGroup::free(1));
        let two = ChainComplex::from_ranks(0, &[1, 1], vec![Matrix::zero(0, 1), Matrix::from_rows(1, 1, &[vec![2]])]).unwrap();
        assert_eq!(two.homology(0).unwrap(), AbGroup::with_torsion(0, &[2]));
        assert_eq!(two.homology(1).unwrap(), AbGroup::zero());
        let bad = ChainComplex::from_ranks(
            0,
            &[1, 1, 1],
            vec![Matrix::zero(0, 1), Matrix::identity(1), Matrix::identity(1)],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn tensor_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_complex(&mut rng, 3, 3);
        let u = ChainComplex::unit(0);
        let t = tensor(&c, &u);
        assert_eq!(t.ranks(), c.ranks());
        for n in c.degrees() {
            assert_eq!(t.d(n), c.d(n));
        }
        let one = ChainComplex::unit(1);
        let t = tensor(&one, &one);
        assert_eq!((t.lo(), t.ranks()), (2, vec![1]));
        // associativity: identical matrices under the canonical bases
        let a = random_complex(&mut rng, 2, 2);
        let b = random_complex(&mut rng, 2, 2);
        let l = tensor(&tensor(&a, &b), &c);
        let r = tensor(&a, &tensor(&b, &c));
        assert_eq!(l.ranks(), r.ranks());
    }

    #[test]
    fn kunneth_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_complex(&mut rng, 2, 3);
            let b = random_complex(&mut rng, 2, 3);
            let ha: Vec<AbGroup> = a.degrees().map(|n| a.homology(n).unwrap()).collect();
            let hb: Vec<AbGroup> = b.degrees().map(|n| b.homology(n).unwrap()).collect();
            if ha.iter().chain(&hb).any(|h| !h.torsion.is_empty()) {
                continue;
            }
            let t = tensor(&a, &b);
            for n in t.degrees() {
                let expect: usize = (0..=n)
                    .map(|i| {
                        let x = ha.get(i as usize).map_or(0, |h| h.rank);
                        let y = hb.get((n - i) as usize).map_or(0, |h| h.rank);
                        x * y
                    })
                    .sum();
                assert_eq!(t.homology(n).unwrap().rank, expect);
            }
        }
    }

    #[test]
    fn hom_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = random_complex(&mut rng, 3, 3);
        let h = hom_complex(&ChainComplex::unit(0), &d);
        assert_eq!(h.ranks(), d.ranks());
        for n in d.degrees() {
            assert_eq!(h.d(n), d.d(n));
        }
        // 0-cycles are chain maps
        let c = random_complex(&mut rng, 2, 2);
        let h = hom_complex(&c, &d);
        let z = snf::kernel_basis(&h.d(0));
        for col in 0..z.cols() {
            let mut g = GradedMap::new(0);
            let v = z.select_cols(&[col]);
            let idx = hom_index(&c, &d, 0);
            for k in c.degrees() {
                let mut trips = Vec::new();
                for (pos, (kk, a, b)) in idx.iter().enumerate() {
                    if *kk == k {
                        let x = v.get(pos, 0);
                        trips.push((*b, *a, x));
                    }
                }
                g.comps.insert(k, Matrix::from_triplets(d.rank(k), c.rank(k), trips));
            }
            assert!(c.is_chain_map(&d, &g));
        }
    }

    fn hom_index(c: &ChainComplex, d: &ChainComplex, n: i64) -> Vec<(i64, usize, usize)> {
        let mut v = Vec::new();
        for k in c.lo()..=c.hi() {
            for a in 0..c.rank(k) {
                for b in 0..d.rank(k + n) {
                    v.push((k, a, b));
                }
            }
        }
        v
    }

    #[test]
    fn shifts_and_truncations() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = random_complex(&mut rng, 3, 2).truncate_ge1();
        let back = c.shift(1).shift(-1);
        assert_eq!(back.lo(), c.lo());
        assert_eq!(back.ranks(), c.ranks());
        let two = ChainComplex::from_ranks(0, &[1, 1], vec![Matrix::zero(0, 1), Matrix::zero(1, 1)]).unwrap();
        let t = two.truncate_ge1();
        assert_eq!((t.lo(), t.ranks()), (1, vec![1]));
        let p = c.connected_cover();
        assert_eq!(p.rank(0), 1);
        for n in 2..=c.hi() {
            assert_eq!(p.d(n), c.d(n));
        }
    }

    #[test]
    fn dec_examples() {
        let u = ChainComplex::unit(0);
        let b = dec_upper_star(&u);
        assert_eq!(b.rank(0, 0), 1);
        assert_eq!(b.rank(1, 0) + b.rank(0, 1), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let a = random_complex(&mut rng, 4, 2);
            let b = dec_upper_star(&a);
            for i in 0..=3 {
                assert_eq!(b.rank(i, 0), a.rank(i + 1) + a.rank(i));
            }
            // the counit tot(dec* A) -> A is a quasi-isomorphism
            let t = tot(&b);
            for n in 0..a.hi() {
                assert_eq!(t.homology(n).unwrap(), a.homology(n).unwrap());
            }
            let q = dec_question(&a);
            let r0 = q.row(0);
            for n in a.degrees() {
                assert_eq!(r0.rank(n), a.rank(n));
                assert_eq!(r0.d(n), a.d(n));
            }
            for n in 0..=2usize {
                let lvl = dec_question_level(&a, n);
                for m in 0..a.hi() - n as i64 {
                    assert_eq!(lvl.homology(m).unwrap(), a.homology(m).unwrap(), "level {n} degree {m}");
                }
            }
        }
        let q = dec_question(&u);
        for n in 0..3 {
            let lvl = dec_question_level(&u, n);
            assert_eq!(lvl.homology(0).unwrap(), AbGroup::free(1));
        }
        assert_eq!(q.rank(0, 0), 1);
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = random_complex(&mut rng, 3, 3);
        let j = complex_to_json(&c);
        let c2 = complex_from_json(&j).unwrap();
        assert_eq!(complex_to_json(&c2), j);
    }
}
