//! Identity suites run by `cobarkit verify`.

use cobar_core::awez::BiChains;
use cobar_core::barcobar::{
    ainf_from_dg, cobar_dec_iso, random_complex, stasheff_check, stasheff_failure, DgAlgebra, DgCoalgebra,
};
use cobar_core::chain::AbGroup;
use cobar_core::doldkan::{dold_kan_n, gamma_n_iso, n_gamma_iso};
use cobar_core::loopgroup::{simplicial_chains, ClassifyingSpace, MonoidNerve, SimplicialMonoid};
use cobar_core::sset::{delta, sphere, Diagonal, ExternalProduct, FiniteMonoid};
use cobar_core::szczarba::{check_cancellation, shih_szczarba_mismatch};
use cobar_core::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const SUITES: [&str; 8] = ["ez-aw", "shih", "dold-kan", "stasheff", "szczarba-cancel", "shih-szczarba", "duskin", "dec-iso"];

/// Largest accepted `size` per suite.
pub fn max_size(suite: &str) -> usize {
    match suite {
        "ez-aw" => 8,
        "shih" => 6,
        "dold-kan" => 200,
        "stasheff" => 200,
        "szczarba-cancel" => 3,
        "shih-szczarba" => 3,
        "duskin" => 6,
        "dec-iso" => 4,
        _ => 0,
    }
}

/// Outcome of one identity.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: Option<String>) -> Self {
        Check { name: name.into(), pass, detail }
    }

    fn from_result(name: impl Into<String>, r: Result<()>) -> Self {
        match r {
            Ok(()) => Check::new(name, true, None),
            Err(e) => Check::new(name, false, Some(e.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub size: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} size {} seed {}\n", self.suite, self.size, self.seed);
        for c in &self.checks {
            out += &format!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
            if let Some(d) = &c.detail {
                out += &format!(": {d}");
            }
            out.push('\n');
        }
        out += &format!("{}\n", if self.passed() { "all passed" } else { "failures present" });
        out
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> =
            self.checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect();
        json!({"suite": self.suite, "size": self.size, "seed": self.seed, "passed": self.passed(), "checks": checks})
    }
}

pub fn run(suite: &str, size: usize, seed: u64) -> Result<Report> {
    if !SUITES.contains(&suite) {
        return Err(Error::Invalid(format!("unknown suite {suite}; expected one of {}", SUITES.join(", "))));
    }
    if size > max_size(suite) {
        return Err(Error::Invalid(format!("size {size} exceeds the limit {} for {suite}", max_size(suite))));
    }
    let checks = match suite {
        "ez-aw" => ez_aw(size),
        "shih" => shih(size),
        "dold-kan" => dold_kan(size, seed),
        "stasheff" => stasheff(size, seed),
        "szczarba-cancel" => (0..=size).map(|k| bool_check(format!("cancellation k={k}"), check_cancellation(k))).collect(),
        "shih-szczarba" => (0..=size).map(shih_szczarba).collect(),
        "duskin" => duskin(size),
        _ => dec_iso(size, seed),
    };
    Ok(Report { suite: suite.to_string(), size, seed, checks })
}

fn bool_check(name: String, r: Result<bool>) -> Check {
    match r {
        Ok(b) => Check::new(name, b, None),
        Err(e) => Check::new(name, false, Some(e.to_string())),
    }
}

fn ez_aw(size: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for p in 0..=size {
        for q in 0..=size - p {
            let (x, y) = (delta(p, p + q + 1), delta(q, p + q + 1));
            let e = ExternalProduct(&x, &y);
            let bc = BiChains::new(&e, p + q);
            let bad = (0..=p + q).find(|&n| !bc.aw(n).mul(&bc.ez(n)).is_identity());
            out.push(Check::new(format!("AW∘EZ = id on Δ{p}⊗Δ{q}"), bad.is_none(), bad.map(|n| format!("fails in degree {n}"))));
        }
    }
    out
}

fn shih(size: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for p in 0..=size {
        for q in 0..=size - p {
            let (x, y) = (delta(p, p + q + 2), delta(q, p + q + 2));
            let e = ExternalProduct(&x, &y);
            let bc = BiChains::new(&e, p + q + 1);
            out.push(Check::new(format!("dH + Hd = EZ∘AW − id on Δ{p}×Δ{q}"), bc.check_shih(1), None));
        }
    }
    out
}

fn dold_kan(size: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for t in 0..size {
        let c = random_complex(&mut rng, 3, 4);
        out.push(Check::from_result(format!("Γ∘N ≅ id, complex #{t}"), gamma_n_iso(&c, 3).map(|_| ())));
        let a = dold_kan_n(&random_complex(&mut rng, 3, 4), 3).map(|n| n.group);
        let r = a.and_then(|a| n_gamma_iso(&a).map(|_| ()));
        out.push(Check::from_result(format!("N∘Γ ≅ id, simplicial group #{t}"), r));
    }
    out
}

fn stasheff(size: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for t in 0..size {
        if t % 2 == 0 {
            let c = random_complex(&mut rng, 1, 3);
            let m = ainf_from_dg(&DgAlgebra::endomorphisms(&c));
            let fail = stasheff_failure(&m, 5);
            out.push(Check::new(format!("dg-algebra #{t} (End of a random complex)"), fail.is_none(), fail.map(|w| format!("{w:?}"))));
        } else {
            let c = DgCoalgebra::random_two_stage(&mut rng, 2, 2);
            let m = ainf_from_dg(&c);
            let fail = stasheff_failure(&m, 5);
            out.push(Check::new(format!("dg-coalgebra #{t} (random two-stage)"), fail.is_none(), fail.map(|w| format!("{w:?}"))));
        }
    }
    let c = DgCoalgebra::of_sset(&delta(2, 3), 3);
    let mut m = ainf_from_dg(&c);
    let (a, b, _) = c.coproduct(0, 1, 0)[0];
    let flipped = m.flip(2, &[(1, 0)], &[(0, a), (1, b)]);
    out.push(Check::new("mutated sign is detected", flipped && !stasheff_check(&m, 5), None));
    out
}

fn shih_szczarba(k: usize) -> Check {
    match shih_szczarba_mismatch(k) {
        Ok(None) => Check::new(format!("𝒫ℋ^{} ≡ Szczarba prediction", 2 * k + 1), true, None),
        Ok(Some((b, i))) => Check::new(
            format!("𝒫ℋ^{} ≡ Szczarba prediction", 2 * k + 1),
            false,
            Some(format!("b = {b:?}, i = {:?}", i.entries())),
        ),
        Err(e) => Check::new(format!("𝒫ℋ^{}", 2 * k + 1), false, Some(e.to_string())),
    }
}

fn duskin(size: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for q in [2usize, 3] {
        let g = SimplicialMonoid::constant(&FiniteMonoid::cyclic(q), size + 1);
        let r = (|| -> Result<Vec<(AbGroup, AbGroup)>> {
            let a = simplicial_chains(&ClassifyingSpace(&g), size + 1)?;
            let b = simplicial_chains(&Diagonal(&MonoidNerve(&g)), size + 1)?;
            (0..=size).map(|n| Ok((a.homology(n as i64)?, b.homology(n as i64)?))).collect()
        })();
        match r {
            Ok(hs) => {
                for (n, (a, b)) in hs.into_iter().enumerate() {
                    let detail = (a != b).then(|| format!("W̄: {a}, diagonal: {b}"));
                    out.push(Check::new(format!("H_{n}(W̄ Z/{q}) = H_{n}(δ*N Z/{q}) = {a}"), a == b, detail));
                }
            }
            Err(e) => out.push(Check::new(format!("W̄ Z/{q}"), false, Some(e.to_string()))),
        }
    }
    out
}

fn dec_iso(size: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = DgCoalgebra::random_two_stage(&mut rng, 2, 2);
    b.complex.set_truncated(false);
    let cases = [
        ("C(S¹)", DgCoalgebra::of_sset(&sphere(1, size + 3), size + 3)),
        ("C(S²)", DgCoalgebra::of_sset(&sphere(2, size + 4), size + 4)),
        ("random two-stage coalgebra", b),
    ];
    cases
        .into_iter()
        .map(|(name, c)| Check::from_result(format!("cobar ≅ T(A_1)/I for {name}"), cobar_dec_iso(&c, size, Some(size + 1)).map(|_| ())))
        .collect()
}
