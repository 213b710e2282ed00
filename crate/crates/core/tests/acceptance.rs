//! Acceptance run: one PASS/FAIL line per criterion, each with its time budget.

use cobar_core::awez::{q_element, q_from_b, BiChains};
use cobar_core::barcobar::{
    adams_cobar, ainf_from_dg, cobar_dec_iso, em_bar, random_complex, stasheff_check, stasheff_failure, DgAlgebra,
    DgCoalgebra,
};
use cobar_core::chain::{dec_question, dec_upper_star, hom_complex, tensor, tot, AbGroup, BiComplex, ChainComplex, Matrix};
use cobar_core::doldkan::{dold_kan_n, gamma_n_iso, linearize, n_gamma_iso, normalized_chains};
use cobar_core::loopgroup::{
    chains, fundamental_monoid, group_completion, kan_loop_group, simplicial_chains, ClassifyingSpace, MonoidNerve,
    SimplicialMonoid,
};
use cobar_core::sset::{delta, sphere, wedge, Diagonal, ExternalProduct, FiniteMonoid};
use cobar_core::szczarba::{check_cancellation, shih_szczarba_mismatch, SzczarbaMorphism};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Fraction-free Gaussian elimination.
fn determinant(m: &Matrix) -> BigInt {
    let n = m.rows();
    let mut a = m.to_dense();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn unimodular(m: &Matrix) -> bool {
    m.rows() == m.cols() && determinant(m).abs().is_one()
}

/// Recomputes `d∘d` from the stored differentials.
fn d_squared_zero(c: &ChainComplex) -> bool {
    (c.lo() + 2..=c.hi()).all(|n| c.d(n - 1).mul(&c.d(n)).is_zero())
}

fn bicomplex_ok(b: &BiComplex) -> bool {
    let (im, jm) = (b.imax() as i64, b.jmax() as i64);
    (0..=im).all(|i| {
        (0..=jm).all(|j| {
            b.dl_at(i - 1, j).mul(&b.dl_at(i, j)).is_zero()
                && b.dr_at(i, j - 1).mul(&b.dr_at(i, j)).is_zero()
                && b.dl_at(i, j - 1).mul(&b.dr_at(i, j)) == b.dr_at(i - 1, j).mul(&b.dl_at(i, j))
        })
    })
}

fn homology_upto(c: &ChainComplex, top: usize) -> Result<Vec<AbGroup>, String> {
    (0..=top).map(|n| c.homology(n as i64).map_err(err)).collect()
}

fn criterion_1() -> Outcome {
    for p in 0..=4 {
        for q in 0..=4 {
            let (x, y) = (delta(p, p + q + 1), delta(q, p + q + 1));
            let e = ExternalProduct(&x, &y);
            let bc = BiChains::new(&e, p + q);
            for n in 0..=p + q {
                let prod = bc.aw(n).mul(&bc.ez(n));
                ensure(prod == Matrix::identity(bc.tot_rank(n)), || format!("Δ{p}⊗Δ{q} degree {n}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    for p in 0..=5 {
        for q in 0..=5 - p {
            let (x, y) = (delta(p, p + q + 2), delta(q, p + q + 2));
            let e = ExternalProduct(&x, &y);
            let bc = BiChains::new(&e, p + q + 1);
            let d = bc.diag_complex();
            for m in 0..=p + q {
                let mut lhs = d.d(m as i64 + 1).mul(&bc.shih(m + 1));
                if m >= 1 {
                    lhs = lhs.add(&bc.shih(m).mul(&d.d(m as i64)));
                }
                let rhs = bc.ez(m).mul(&bc.aw(m)).sub(&Matrix::identity(bc.diag_rank(m)));
                ensure(lhs == rhs, || format!("Δ{p}×Δ{q} degree {m}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in 0..50 {
        let c = random_complex(&mut rng, 4, 4);
        let maps = gamma_n_iso(&c, 4).map_err(|e| format!("complex #{t}: {e}"))?;
        let g = normalized_chains(&dold_kan_n(&c, 4).map_err(err)?.group).map_err(err)?.complex;
        for n in 0..=4 {
            ensure(unimodular(&maps[n]), || format!("complex #{t}: degree {n} not invertible"))?;
            if n > 0 {
                let lhs = c.d(n as i64).mul(&maps[n]);
                ensure(lhs == maps[n - 1].mul(&g.d(n as i64)), || format!("complex #{t}: not a chain map at {n}"))?;
            }
        }
    }
    let mut groups = Vec::new();
    for _ in 0..45 {
        groups.push(dold_kan_n(&random_complex(&mut rng, 4, 4), 4).map_err(err)?.group);
    }
    for x in [delta(1, 4), delta(2, 4), sphere(1, 4), sphere(2, 4), sphere(3, 4)] {
        groups.push(linearize(&x));
    }
    for (t, a) in groups.iter().enumerate() {
        let maps = n_gamma_iso(a).map_err(|e| format!("group #{t}: {e}"))?;
        for (n, m) in maps.iter().enumerate() {
            ensure(unimodular(m), || format!("group #{t}: level {n} not invertible"))?;
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut complexes: Vec<(String, ChainComplex)> = Vec::new();
    let mut bicomplexes: Vec<(String, BiComplex)> = Vec::new();
    let s2 = sphere(2, 6);
    for (name, c) in [
        ("C(S1)", DgCoalgebra::of_sset(&sphere(1, 5), 5)),
        ("C(S2)", DgCoalgebra::of_sset(&s2, 6)),
        ("C(S1∨S2)", DgCoalgebra::of_sset(&wedge(&sphere(1, 5), &sphere(2, 5)).map_err(err)?, 5)),
    ] {
        let maxlen = (c.rank(1) > 0).then_some(3);
        complexes.push((format!("cobar {name}"), adams_cobar(&c, 4, maxlen).map_err(err)?.complex));
    }
    for t in 0..10 {
        let c = DgCoalgebra::random_two_stage(&mut rng, 2, 2);
        complexes.push((format!("cobar random #{t}"), adams_cobar(&c, 3, Some(3)).map_err(err)?.complex));
    }
    let om = adams_cobar(&DgCoalgebra::of_sset(&s2, 6), 5, None).map_err(err)?;
    complexes.push(("bar of cobar C(S2)".into(), em_bar(&om.as_dg_algebra(), 4, None).map_err(err)?.complex));
    let poly = DgAlgebra::truncated_polynomial(6);
    complexes.push(("bar Z[x]".into(), em_bar(&poly, 4, Some(6)).map_err(err)?.complex));
    for t in 0..10 {
        let a = random_complex(&mut rng, 3, 4);
        let b = random_complex(&mut rng, 3, 4);
        complexes.push((format!("Hom #{t}"), hom_complex(&a, &b)));
        complexes.push((format!("tensor #{t}"), tensor(&a, &b)));
        let d = dec_upper_star(&a);
        complexes.push((format!("tot dec* #{t}"), tot(&d)));
        bicomplexes.push((format!("dec* #{t}"), d));
        let q = dec_question(&a);
        complexes.push((format!("tot dec? #{t}"), tot(&q)));
        bicomplexes.push((format!("dec? #{t}"), q));
    }
    for (p, q) in [(1, 1), (2, 1), (2, 2)] {
        let (x, y) = (delta(p, p + q + 1), delta(q, p + q + 1));
        let e = ExternalProduct(&x, &y);
        let bc = BiChains::new(&e, p + q);
        complexes.push((format!("tot N(Δ{p}⊠Δ{q})"), bc.tot_complex()));
        bicomplexes.push((format!("N(Δ{p}⊠Δ{q})"), bc.bicomplex()));
    }
    for (name, c) in &complexes {
        ensure(d_squared_zero(c), || format!("d∘d ≠ 0 on {name}"))?;
    }
    for (name, b) in &bicomplexes {
        ensure(bicomplex_ok(b), || format!("bicomplex identities fail on {name}"))?;
    }
    Ok(())
}

fn criterion_5() -> Result<Vec<AbGroup>, String> {
    let om = adams_cobar(&DgCoalgebra::of_sset(&sphere(2, 7), 7), 6, None).map_err(err)?;
    let h = homology_upto(&om.complex, 5)?;
    ensure(h.iter().all(|g| *g == AbGroup::free(1)), || format!("{h:?}"))?;
    Ok(h)
}

fn criterion_6(adams: &[AbGroup]) -> Outcome {
    let g = kan_loop_group(&sphere(2, 6), 3).map_err(err)?;
    let h = homology_upto(&chains(&g, 3, 3).map_err(err)?, 2)?;
    ensure(h.iter().all(|g| *g == AbGroup::free(1)), || format!("{h:?}"))?;
    ensure(adams.len() >= 3 && h[..] == adams[..3], || "differs from the cobar model".into())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut b = DgCoalgebra::random_two_stage(&mut rng, 2, 2);
    b.complex.set_truncated(false);
    let cases = [
        ("C(S1)", DgCoalgebra::of_sset(&sphere(1, 6), 6)),
        ("C(S2)", DgCoalgebra::of_sset(&sphere(2, 7), 7)),
        ("random two-stage", b),
    ];
    for (name, c) in cases {
        let iso = cobar_dec_iso(&c, 3, Some(4)).map_err(|e| format!("{name}: {e}"))?;
        for n in 0..=3 {
            let back = iso.phi[n].mul(&iso.psi[n]);
            ensure(back.is_identity(), || format!("{name}: φψ ≠ id in degree {n}"))?;
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    for q in [2usize, 3] {
        let g = SimplicialMonoid::constant(&FiniteMonoid::cyclic(q), 5);
        let a = simplicial_chains(&ClassifyingSpace(&g), 5).map_err(err)?;
        let b = simplicial_chains(&Diagonal(&MonoidNerve(&g)), 5).map_err(err)?;
        let (ha, hb) = (homology_upto(&a, 4)?, homology_upto(&b, 4)?);
        // group homology of a cyclic group: Z, then Z/q in odd and 0 in positive even degrees
        let expect: Vec<AbGroup> = (0..=4)
            .map(|n| match n {
                0 => AbGroup::free(1),
                n if n % 2 == 1 => AbGroup::with_torsion(0, &[q as i64]),
                _ => AbGroup::zero(),
            })
            .collect();
        ensure(ha == hb, || format!("Z/{q}: W̄ {ha:?} vs diagonal {hb:?}"))?;
        ensure(ha == expect, || format!("Z/{q}: {ha:?}"))?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let m = fundamental_monoid(&sphere(1, 3)).map_err(err)?;
    ensure(m.free_rank() == Some(1), || format!("monoid {m:?}"))?;
    let g = group_completion(&m);
    ensure(g.free_rank() == Some(1), || format!("group {g:?}"))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for t in 0..25 {
        let m = ainf_from_dg(&DgAlgebra::endomorphisms(&random_complex(&mut rng, 1, 3)));
        if let Some(w) = stasheff_failure(&m, 5) {
            return Err(format!("dg-algebra #{t} at {w:?}"));
        }
        let m = ainf_from_dg(&DgCoalgebra::random_two_stage(&mut rng, 2, 2));
        if let Some(w) = stasheff_failure(&m, 5) {
            return Err(format!("dg-coalgebra #{t} at {w:?}"));
        }
    }
    let c = DgCoalgebra::of_sset(&delta(2, 3), 3);
    let mut m = ainf_from_dg(&c);
    let (a, b, _) = c.coproduct(0, 1, 0)[0];
    ensure(m.flip(2, &[(1, 0)], &[(0, a), (1, b)]), || "no coefficient to mutate".into())?;
    ensure(!stasheff_check(&m, 5), || "mutated sign not detected".into())
}

fn criterion_11() -> Outcome {
    for k in 0..=2 {
        ensure(check_cancellation(k).map_err(err)?, || format!("cancellation k={k}"))?;
    }
    for k in 0..=1 {
        if let Some((b, i)) = shih_szczarba_mismatch(k).map_err(err)? {
            return Err(format!("Shih-Szczarba k={k}: b={b:?}, i={:?}", i.entries()));
        }
    }
    for n in 0..=5 {
        ensure(q_element(n) == q_from_b(n), || format!("Q^{n}"))?;
    }
    Ok(())
}

fn criterion_12() -> Outcome {
    for (name, x) in [("S1", sphere(1, 5)), ("S2", sphere(2, 5))] {
        let sz = SzczarbaMorphism::new(&x, 3).map_err(err)?;
        if let Some(g) = sz.chain_map_failure(3).map_err(err)? {
            return Err(format!("{name}: d∘Sz ≠ Sz∘d on {g:?}"));
        }
    }
    let sz = SzczarbaMorphism::new(&sphere(2, 5), 3).map_err(err)?;
    let (a, b, f) = sz.chain_matrices(3, 3).map_err(err)?;
    for n in 1..=3i64 {
        let (l, r) = (b.d(n).mul(&f[n as usize]), f[n as usize - 1].mul(&a.d(n)));
        ensure(l == r, || format!("S2 matrices: not a chain map in degree {n}"))?;
    }
    // H_0 and H_1: f_0 is an isomorphism Z -> Z and f_1 sends the generator to a homology generator
    let (ha, hb) = (homology_upto(&a, 1)?, homology_upto(&b, 1)?);
    ensure(ha == hb && ha == vec![AbGroup::free(1); 2], || format!("{ha:?} vs {hb:?}"))?;
    ensure(unimodular(&f[0]), || "H_0 map not invertible".into())?;
    ensure(sz.homology_iso(1, 3, 3).map_err(err)?, || "mapping cone not acyclic in degrees ≤ 2".into())
}

fn report(n: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let t = start.elapsed();
    let ok = out.is_ok() && t <= budget;
    let status = if ok { "PASS" } else { "FAIL" };
    let mut line = format!("{status} criterion {n:>2}: {name} ({:.2}s, budget {}s)", t.as_secs_f64(), budget.as_secs());
    if let Err(e) = out {
        line += &format!(" -- {e}");
    } else if t > budget {
        line += " -- over budget";
    }
    println!("{line}");
    ok
}

fn main() {
    let s = Duration::from_secs;
    let mut results = Vec::new();
    results.push(report(1, "AW∘EZ = id on Δp⊗Δq, p,q ≤ 4", s(10), criterion_1));
    results.push(report(2, "dH + Hd = EZ∘AW − id, p+q ≤ 5", s(30), criterion_2));
    results.push(report(3, "Dold-Kan round trips", s(30), criterion_3));
    results.push(report(4, "d∘d = 0 on bar, cobar, tot, dec*, Hom complexes", s(60), criterion_4));
    let mut adams = Vec::new();
    results.push(report(5, "H_k(Ω C(S²)) = Z, k ≤ 5", s(5), || criterion_5().map(|h| adams = h)));
    results.push(report(6, "H_k(Z[G S²]) = Z, k ≤ 2", s(120), || criterion_6(&adams)));
    results.push(report(7, "cobar decalage isomorphism", s(60), criterion_7));
    results.push(report(8, "H_n(W̄G) = H_n(δ*NG), n ≤ 4", s(60), criterion_8));
    results.push(report(9, "fundamental monoid of S¹", s(1), criterion_9));
    results.push(report(10, "Stasheff identities and mutation", s(30), criterion_10));
    results.push(report(11, "Szczarba cancellation, Shih-Szczarba, Q^n", s(60), criterion_11));
    results.push(report(12, "Szczarba chain map and H_0, H_1 of S²", s(120), criterion_12));
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
